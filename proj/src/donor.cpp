#include "spinbath/donor.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "spinbath/errors.hpp"

namespace spinbath {

namespace {

std::string format_half_integer(double v) {
  char buf[32];
  if (std::abs(v - std::round(v)) < 1e-9) {
    std::snprintf(buf, sizeof buf, "%d", static_cast<int>(std::round(v)));
  } else {
    std::snprintf(buf, sizeof buf, "%g", v);
  }
  return buf;
}

}  // namespace

std::string LevelLabel::str() const {
  return format_half_integer(f) + "," + format_half_integer(mf);
}

LevelLabel parse_level_label(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw ConfigError("level label must be 'F,mF': " + text);
  }
  try {
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw ConfigError("bad level label: " + text);
  }
}

const Level& LevelSet::find(const LevelLabel& label) const {
  for (const auto& lv : levels) {
    if (std::abs(lv.label.f - label.f) < 1e-9 &&
        std::abs(lv.label.mf - label.mf) < 1e-9) {
      return lv;
    }
  }
  throw ConfigError("unknown level label |" + label.str() + ">");
}

int basis_index(const DonorParams& params, double ms, double mi) {
  const int ni = static_cast<int>(2 * params.nuclear_spin + 1.5);
  const int ms_idx = static_cast<int>(std::lround(params.electron_spin - ms));
  const int mi_idx = static_cast<int>(std::lround(params.nuclear_spin - mi));
  return ms_idx * ni + mi_idx;
}

Eigen::MatrixXd build_hamiltonian(const DonorParams& params, double field) {
  const double S = params.electron_spin;
  const double I = params.nuclear_spin;
  const double we = params.gamma_e * field;
  const double wn = params.gamma_n * field;
  const double a0 = params.hyperfine_a0;
  const int dim = params.dimension();

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (double ms = S; ms >= -S - 1e-9; ms -= 1.0) {
    for (double mi = I; mi >= -I - 1e-9; mi -= 1.0) {
      const int i = basis_index(params, ms, mi);
      h(i, i) = we * ms - wn * mi + a0 * ms * mi;
      // S+ I- / 2 raises m_S, lowers m_I; the conjugate term fills (i, j).
      if (ms + 1.0 <= S + 1e-9 && mi - 1.0 >= -I - 1e-9) {
        const int j = basis_index(params, ms + 1.0, mi - 1.0);
        const double amp = 0.5 * a0 * std::sqrt(S * (S + 1) - ms * (ms + 1)) *
                           std::sqrt(I * (I + 1) - mi * (mi - 1));
        h(j, i) += amp;
        h(i, j) += amp;
      }
    }
  }
  return h;
}

LevelSet eigensystem(const DonorParams& params, double field) {
  const double S = params.electron_spin;
  if (std::abs(S - 0.5) > 1e-12) {
    throw ConfigError("eigensystem: electron spin must be 1/2");
  }
  const double I = params.nuclear_spin;
  const double we = params.gamma_e * field;
  const double wn = params.gamma_n * field;
  const double a0 = params.hyperfine_a0;
  const double f_hi = I + 0.5;
  const double f_lo = I - 0.5;
  const int dim = params.dimension();

  LevelSet set;
  set.field = field;
  set.levels.reserve(dim);

  auto add_stretched = [&](double ms, double mi, double f_tag) {
    Level lv;
    lv.label = {f_tag, ms + mi};
    lv.energy = we * ms - wn * mi + a0 * ms * mi;
    lv.sz = ms;
    lv.i0z = mi;
    lv.amplitudes = Eigen::VectorXd::Zero(dim);
    lv.amplitudes(basis_index(params, ms, mi)) = 1.0;
    set.levels.push_back(std::move(lv));
  };

  // m_F = +(I+1/2) is the pure |+1/2,+I> state; m_F = -(I+1/2) the pure
  // |-1/2,-I> one, filed under the lower branch.
  add_stretched(0.5, I, f_hi);
  add_stretched(-0.5, -I, f_lo);

  for (double mf = -f_lo; mf <= f_lo + 1e-9; mf += 1.0) {
    const double mi_up = mf - 0.5;  // partner of m_S = +1/2
    const double mi_dn = mf + 0.5;  // partner of m_S = -1/2
    const double d_up = 0.5 * we - wn * mi_up + 0.5 * a0 * mi_up;
    const double d_dn = -0.5 * we - wn * mi_dn - 0.5 * a0 * mi_dn;
    const double c = 0.5 * a0 * std::sqrt((I + 0.5) * (I + 0.5) - mf * mf);

    const double center = 0.5 * (d_up + d_dn);
    const double delta = 0.5 * (d_up - d_dn);
    const double r = std::hypot(delta, c);
    if (r <= 1e-12 * (std::abs(d_up) + std::abs(d_dn) + std::abs(c))) {
      throw NumericalBreakdown("degenerate crossing in m_F block " +
                               format_half_integer(mf));
    }
    const double half = 0.5 * std::atan2(c, delta);
    const double ch = std::cos(half);
    const double sh = std::sin(half);
    const int i_up = basis_index(params, 0.5, mi_up);
    const int i_dn = basis_index(params, -0.5, mi_dn);

    Level upper;
    upper.label = {f_hi, mf};
    upper.energy = center + r;
    upper.sz = 0.5 * (ch * ch - sh * sh);
    upper.i0z = mf - upper.sz;
    upper.amplitudes = Eigen::VectorXd::Zero(dim);
    upper.amplitudes(i_up) = ch;
    upper.amplitudes(i_dn) = sh;

    Level lower;
    lower.label = {f_lo, mf};
    lower.energy = center - r;
    lower.sz = -upper.sz;
    lower.i0z = mf - lower.sz;
    lower.amplitudes = Eigen::VectorXd::Zero(dim);
    lower.amplitudes(i_up) = -sh;
    lower.amplitudes(i_dn) = ch;

    set.levels.push_back(std::move(upper));
    set.levels.push_back(std::move(lower));
  }
  return set;
}

TransitionPair transition(const DonorParams& params, double field,
                          const LevelLabel& plus, const LevelLabel& minus) {
  const LevelSet set = eigensystem(params, field);
  const Level* p = &set.find(plus);
  const Level* m = &set.find(minus);
  TransitionPair tr;
  tr.plus_label = plus;
  tr.minus_label = minus;
  if (p->energy < m->energy) {
    std::swap(p, m);
    std::swap(tr.plus_label, tr.minus_label);
  }
  tr.p_plus = p->sz;
  tr.p_minus = m->sz;
  tr.p_e = std::abs(tr.p_plus - tr.p_minus);
  tr.s = std::abs(tr.p_plus) + std::abs(tr.p_minus);
  tr.frequency = p->energy - m->energy;
  return tr;
}

namespace {

// Bisection with a secant refinement step; deterministic, relative 1e-9.
double find_root(const std::function<double(double)>& fn, double lo,
                 double hi, const char* what) {
  double flo = fn(lo);
  double fhi = fn(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo > 0) == (fhi > 0)) {
    throw ConfigError(std::string(what) + ": no sign change in range");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-9 * std::abs(hi); ++it) {
    double mid = 0.5 * (lo + hi);
    // secant candidate, accepted only when it stays well inside the bracket
    const double denom = fhi - flo;
    if (denom != 0) {
      const double sec = lo - flo * (hi - lo) / denom;
      if (sec > lo + 0.01 * (hi - lo) && sec < hi - 0.01 * (hi - lo)) {
        mid = sec;
      }
    }
    const double fmid = fn(mid);
    if (fmid == 0) return mid;
    if ((fmid > 0) == (flo > 0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ClockTransition find_clock_transition(const DonorParams& params,
                                      const LevelLabel& plus,
                                      const LevelLabel& minus, double b_lo,
                                      double b_hi) {
  auto levels_at = [&](double b) {
    const LevelSet set = eigensystem(params, b);
    return std::pair<Level, Level>{set.find(plus), set.find(minus)};
  };
  auto dfdb = [&](double b) {
    const auto [p, m] = levels_at(b);
    return params.gamma_e * (p.sz - m.sz) - params.gamma_n * (p.i0z - m.i0z);
  };
  auto pe_diff = [&](double b) {
    const auto [p, m] = levels_at(b);
    return p.sz - m.sz;
  };

  ClockTransition ct;
  ct.field = find_root(dfdb, b_lo, b_hi, "find_clock_transition df/dB");
  ct.field_pe_zero = find_root(pe_diff, b_lo, b_hi, "find_clock_transition P+-P-");
  ct.difference = ct.field - ct.field_pe_zero;
  return ct;
}

}  // namespace spinbath
