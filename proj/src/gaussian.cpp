#include <algorithm>
#include <cmath>

#include "spinbath/errors.hpp"
#include "spinbath/noise_model.hpp"
#include "spinbath/quadrature.hpp"

namespace spinbath {

namespace {

double chi_time(const std::function<double(double)>& corr,
                const PulseSequence& seq, double t_total) {
  if (t_total == 0.0) return 0.0;
  const OverlapKernel g(seq);
  const auto& breaks = g.breakpoints();

  // chi = int int C(t1 - t2) f f = 2 T^2 int_0^1 C(uT) g(u) du; g is linear
  // between breakpoints, C is smooth, so per-interval GL converges fast.
  double chi = 0;
  bool ok = true;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double b = breaks[i + 1];
    if (b - a < 1e-15) continue;
    chi += quad::adaptive(
        [&](double u) { return corr(u * t_total) * g(u); }, a, b, 1e-11,
        1e-14, 14, &ok);
  }
  if (!ok) {
    throw NumericalBreakdown("time-domain quadrature did not converge");
  }
  return 2.0 * t_total * t_total * chi;
}

// Interpolates the spectrum inside one grid cell: power law through the
// endpoints when both are positive, otherwise linear.
struct CellInterp {
  double wa, wb, sa, sb;
  bool loglog;
  double q;

  CellInterp(double wa_, double wb_, double sa_, double sb_)
      : wa(wa_), wb(wb_), sa(sa_), sb(sb_) {
    loglog = wa > 0 && sa > 0 && sb > 0;
    q = loglog ? std::log(sb / sa) / std::log(wb / wa) : 0.0;
  }

  double operator()(double w) const {
    if (loglog) return sa * std::pow(w / wa, q);
    return sa + (sb - sa) * (w - wa) / (wb - wa);
  }
};

// integral over one omega range of S(w) F(wT) / w^2, resolving the fastest
// filter oscillation
template <typename SFn>
double cell_integral(const SFn& s, const FilterCosineSeries& filter,
                     double t_total, double wa, double wb) {
  const double phase = (wb - wa) * t_total;  // max delta is 1
  const int pieces = std::max(1, static_cast<int>(std::ceil(phase / 1.2)));
  double acc = 0;
  for (int p = 0; p < pieces; ++p) {
    const double a = wa + (wb - wa) * p / pieces;
    const double b = wa + (wb - wa) * (p + 1) / pieces;
    acc += quad::gl8(
        [&](double w) {
          const double x = w * t_total;
          return s(w) * filter.eval_over_x2(x) * t_total * t_total;
        },
        a, b);
  }
  return acc;
}

// int_X^inf w^-q cos(b w) dw, two-term asymptotic (valid for b X >> 1)
double tail_cos_integral(double b, double q, double x) {
  const double bx = b * x;
  return -std::sin(bx) * std::pow(x, -q) / b +
         q * std::cos(bx) * std::pow(x, -q - 1.0) / (b * b);
}

double chi_freq(const NoiseSpectrum& spec, const PulseSequence& seq,
                double t_total) {
  if (t_total == 0.0) return 0.0;
  if (spec.omegas.size() != spec.values.size()) {
    throw ConfigError("spectrum grid/value size mismatch");
  }
  const FilterCosineSeries filter(seq);

  double chi = spec.static_weight * t_total * t_total * filter.eval_over_x2(0.0);
  if (spec.omegas.empty()) return chi;

  // resolution check at the first filter band (x ~ pi N for CPMG): the grid
  // must sample the spectrum finely enough there that interpolation cannot
  // misrepresent it. A wide cell is only fatal when S varies strongly
  // across it.
  const double x_peak =
      filter.min_delta() > 0 ? constants::pi / filter.min_delta() : 0.0;
  for (std::size_t i = 0; i + 1 < spec.omegas.size(); ++i) {
    const double xa = spec.omegas[i] * t_total;
    const double xb = spec.omegas[i + 1] * t_total;
    if (x_peak > 0 && xa <= x_peak && x_peak <= xb &&
        (xb - xa) > constants::pi) {
      const double sa = spec.values[i];
      const double sb = spec.values[i + 1];
      const double hi = std::max(sa, sb);
      const double lo = std::min(sa, sb);
      if (lo <= 0 || hi > 4.0 * lo) {
        throw ConfigError("spectrum grid too coarse for the filter peak");
      }
    }
  }

  // below the grid: flat extension of the first sample down to omega = 0
  if (spec.omegas.front() > 0) {
    const double s0 = spec.values.front();
    chi += cell_integral([&](double) { return s0; }, filter, t_total, 0.0,
                         spec.omegas.front()) /
           constants::pi;
  }

  // Oscillatory skip: F(x) = c0 + sum c_m cos(d_m x). Far past the filter
  // band the cos terms are bounded by sum |c_m| / x^2 in the integrand; once
  // that bound is negligible against the accumulated integral the cell
  // collapses to the analytic c0 part.
  double cmax_osc = 0;
  for (std::size_t m = 1; m < filter.coeffs().size(); ++m) {
    cmax_osc += std::abs(filter.coeffs()[m]);
  }
  const double c0 = filter.coeffs()[0];

  for (std::size_t i = 0; i + 1 < spec.omegas.size(); ++i) {
    const double wa = spec.omegas[i];
    const double wb = spec.omegas[i + 1];
    const CellInterp interp(wa, wb, spec.values[i], spec.values[i + 1]);
    const double xa = wa * t_total;
    const double s_hi = std::max(spec.values[i], spec.values[i + 1]);
    const double osc_bound =
        xa > 0 ? s_hi * cmax_osc * (wb - wa) / (wa * wa) : 1e300;
    if (osc_bound < 1e-11 * std::abs(chi)) {
      // analytic integral of S(w) c0 / w^2 with the cell's own model:
      // (sa/wa) (r^{q-1} - 1)/(q-1), r = wb/wa, kept in ratio form since q
      // can be huge for near-underflow cells
      double mean_part;
      if (interp.loglog) {
        const double logr = std::log(wb / wa);
        const double e = (interp.q - 1.0) * logr;
        mean_part = interp.sa / wa *
                    (std::abs(e) < 1e-12 ? logr : std::expm1(e) / (interp.q - 1.0));
      } else {
        mean_part = quad::gl8([&](double w) { return interp(w) / (w * w); },
                              wa, wb);
      }
      chi += c0 * mean_part / constants::pi;
      continue;
    }
    chi += cell_integral(interp, filter, t_total, wa, wb) / constants::pi;
  }

  if (spec.tail == NoiseSpectrum::Tail::power_law && spec.values.back() > 0) {
    const double omega_n = spec.omegas.back();
    const double s_n = spec.values.back();
    const double p = spec.tail_exponent;
    auto tail_s = [&](double w) { return s_n * std::pow(w / omega_n, -p); };

    // numeric continuation until the asymptotic expansion is safe
    const double dmin = filter.min_delta() > 0 ? filter.min_delta() : 1.0;
    const double omega_eff =
        std::max(omega_n, 30.0 / (t_total * dmin));
    if (omega_eff > omega_n) {
      // march in oscillation-resolved strides
      double w = omega_n;
      while (w < omega_eff) {
        const double wnext = std::min(omega_eff, w * 1.5 + 2.0 / t_total);
        chi += cell_integral(tail_s, filter, t_total, w, wnext) / constants::pi;
        w = wnext;
      }
    }
    // asymptotic remainder: F = c0 + sum c_m cos(d_m x)
    const auto& deltas = filter.deltas();
    const auto& coeffs = filter.coeffs();
    const double q = 2.0 + p;
    const double scale = s_n * std::pow(omega_n, p) * t_total * t_total;
    double rem = coeffs[0] * std::pow(omega_eff, 1.0 - q) / (q - 1.0);
    for (std::size_t m = 1; m < deltas.size(); ++m) {
      rem += coeffs[m] * tail_cos_integral(deltas[m] * t_total, q, omega_eff);
    }
    chi += scale * rem / (constants::pi * t_total * t_total);
  }
  return chi;
}

}  // namespace

double gaussian_coherence_time(const std::function<double(double)>& corr,
                               const PulseSequence& seq, double pe,
                               double t_total) {
  const double chi = chi_time(corr, seq, t_total);
  return std::exp(-0.5 * pe * pe * chi);
}

double gaussian_coherence_time(const CorrelationCurve& curve,
                               const StretchedExpFit& fit,
                               const PulseSequence& seq, double pe,
                               double t_total) {
  if (curve.times.empty()) {
    return gaussian_coherence_time([&](double u) { return fit.eval(u); }, seq,
                                   pe, t_total);
  }
  // Catmull-Rom through the samples, fit model beyond the window
  const auto& ts = curve.times;
  const auto& vs = curve.values;
  auto corr = [&](double u) -> double {
    if (u >= ts.back()) return fit.eval(u);
    const auto it = std::upper_bound(ts.begin(), ts.end(), u);
    std::size_t k = it == ts.begin() ? 0 : (it - ts.begin() - 1);
    if (k + 1 >= ts.size()) k = ts.size() - 2;
    const double h = ts[k + 1] - ts[k];
    const double x = (u - ts[k]) / h;
    const double y0 = vs[k];
    const double y1 = vs[k + 1];
    // centered slopes, one-sided at the ends
    const double s0 = k == 0
                          ? (vs[1] - vs[0]) / h
                          : (vs[k + 1] - vs[k - 1]) / (ts[k + 1] - ts[k - 1]);
    const double s1 = k + 2 >= ts.size()
                          ? (vs[k + 1] - vs[k]) / h
                          : (vs[k + 2] - vs[k]) / (ts[k + 2] - ts[k]);
    const double x2 = x * x;
    const double x3 = x2 * x;
    return (2 * x3 - 3 * x2 + 1) * y0 + (x3 - 2 * x2 + x) * h * s0 +
           (-2 * x3 + 3 * x2) * y1 + (x3 - x2) * h * s1;
  };
  return gaussian_coherence_time(corr, seq, pe, t_total);
}

double gaussian_coherence_freq(const NoiseSpectrum& spectrum,
                               const PulseSequence& seq, double pe,
                               double t_total) {
  const double chi = chi_freq(spectrum, seq, t_total);
  return std::exp(-0.5 * pe * pe * chi);
}

double gaussian_coherence_terms(const CosineTermBank& terms,
                                const FilterCosineSeries& filter, double pe,
                                double t_total) {
  double chi = 0;
  const double t2 = t_total * t_total;
  for (std::size_t m = 0; m < terms.amps.size(); ++m) {
    chi += terms.amps[m] * t2 * filter.eval_over_x2(terms.omegas[m] * t_total);
  }
  return std::exp(-0.5 * pe * pe * chi);
}

}  // namespace spinbath
