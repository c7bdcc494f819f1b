#include "spinbath/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>

#include "spinbath/errors.hpp"

namespace spinbath {

namespace {

void validate_fractions(const std::vector<double>& fr) {
  double prev = 0.0;
  for (double f : fr) {
    if (!(f > prev && f < 1.0)) {
      throw ConfigError("pulse fractions must be strictly increasing in (0,1)");
    }
    prev = f;
  }
}

// Jump weights g_j at times 0 = f_0 < f_1 < ... < f_{N+1} = 1 such that
// sum_k (-1)^k (e^{i x f_{k+1}} - e^{i x f_k}) = sum_j g_j e^{i x f_j}.
// Boundaries carry weight -1 and (-1)^N, interior pulses 2(-1)^{j-1}.
struct JumpExpansion {
  std::vector<double> times;
  std::vector<double> weights;
};

JumpExpansion jump_expansion(const PulseSequence& seq) {
  const int n = seq.pulse_count();
  JumpExpansion j;
  j.times.reserve(n + 2);
  j.weights.reserve(n + 2);
  j.times.push_back(0.0);
  j.weights.push_back(-1.0);
  for (int k = 1; k <= n; ++k) {
    j.times.push_back(seq.fractions[k - 1]);
    j.weights.push_back(k % 2 == 1 ? 2.0 : -2.0);
  }
  j.times.push_back(1.0);
  j.weights.push_back(n % 2 == 0 ? 1.0 : -1.0);
  return j;
}

}  // namespace

PulseSequence PulseSequence::ramsey() { return {Family::ramsey, {}}; }

PulseSequence PulseSequence::hahn() { return {Family::hahn, {0.5}}; }

PulseSequence PulseSequence::cpmg(int n) {
  if (n < 1) throw ConfigError("cpmg requires N >= 1 (use ramsey for N = 0)");
  PulseSequence seq{Family::cpmg, {}};
  seq.fractions.reserve(n);
  for (int k = 1; k <= n; ++k) {
    seq.fractions.push_back((2.0 * k - 1.0) / (2.0 * n));
  }
  return seq;
}

PulseSequence PulseSequence::custom(std::vector<double> fractions) {
  validate_fractions(fractions);
  return {Family::custom, std::move(fractions)};
}

PulseSequence PulseSequence::parse(const std::string& text) {
  if (text == "ramsey") return ramsey();
  if (text == "hahn") return hahn();
  if (text.rfind("cpmg:", 0) == 0) {
    try {
      return cpmg(std::stoi(text.substr(5)));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("bad cpmg pulse count: " + text);
    }
  }
  if (text.rfind("custom:", 0) == 0) {
    std::vector<double> fr;
    std::string rest = text.substr(7);
    std::size_t pos = 0;
    try {
      while (pos < rest.size()) {
        std::size_t used = 0;
        fr.push_back(std::stod(rest.substr(pos), &used));
        pos += used;
        if (pos < rest.size() && rest[pos] == ',') ++pos;
      }
    } catch (const std::exception&) {
      throw ConfigError("bad custom sequence: " + text);
    }
    return custom(std::move(fr));
  }
  throw ConfigError("unknown sequence spec: " + text);
}

std::string PulseSequence::str() const {
  switch (family) {
    case Family::ramsey:
      return "ramsey";
    case Family::hahn:
      return "hahn";
    case Family::cpmg:
      return "cpmg:" + std::to_string(pulse_count());
    case Family::custom: {
      std::string s = "custom:";
      for (std::size_t i = 0; i < fractions.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(fractions[i]);
      }
      return s;
    }
  }
  return "?";
}

int modulation(const PulseSequence& seq, double t_total, double t) {
  if (t < 0 || t > t_total) {
    throw ConfigError("modulation: t outside [0, t_total]");
  }
  int sign = 1;
  for (double f : seq.fractions) {
    if (t >= f * t_total) sign = -sign;
    else break;
  }
  return sign;
}

double filter_function(const PulseSequence& seq, double x) {
  if (std::abs(x) < 0.05) {
    // closed sum cancels to O(x^2); use the series form instead
    const FilterCosineSeries series(seq);
    return series.eval(x);
  }
  const auto j = jump_expansion(seq);
  std::complex<double> sum = 0;
  for (std::size_t i = 0; i < j.times.size(); ++i) {
    sum += j.weights[i] * std::polar(1.0, x * j.times[i]);
  }
  return std::norm(sum);
}

FilterCosineSeries::FilterCosineSeries(const PulseSequence& seq) {
  const auto j = jump_expansion(seq);
  const std::size_t n = j.times.size();

  // group the double sum by time difference; pulse grids make most
  // differences coincide, so CPMG-N collapses to ~2N terms
  std::map<long long, std::pair<double, double>> groups;
  constexpr double quantum = 1e-12;
  double c0 = 0;
  for (std::size_t a = 0; a < n; ++a) {
    c0 += j.weights[a] * j.weights[a];
    for (std::size_t b = a + 1; b < n; ++b) {
      const double d = j.times[b] - j.times[a];
      const double c = 2.0 * j.weights[a] * j.weights[b];
      auto& slot = groups[static_cast<long long>(std::llround(d / quantum))];
      slot.first += c;
      slot.second = d;
    }
  }
  deltas_.push_back(0.0);
  coeffs_.push_back(c0);
  for (const auto& [key, slot] : groups) {
    if (slot.first == 0.0) continue;
    deltas_.push_back(slot.second);
    coeffs_.push_back(slot.first);
  }
  // F(0) = 0 exactly: fold any rounding residue into the static coefficient
  double total = 0;
  for (double c : coeffs_) total += c;
  coeffs_[0] -= total;

  min_delta_ = 0;
  for (std::size_t m = 1; m < deltas_.size(); ++m) {
    if (min_delta_ == 0 || deltas_[m] < min_delta_) min_delta_ = deltas_[m];
    const double d2 = deltas_[m] * deltas_[m];
    m2_ += coeffs_[m] * d2;
    m4_ += coeffs_[m] * d2 * d2;
    m6_ += coeffs_[m] * d2 * d2 * d2;
    m8_ += coeffs_[m] * d2 * d2 * d2 * d2;
  }
  // F(x)/x^2 -> -m2/2 = |int f|^2 as x -> 0
  mean_modulation_ = std::sqrt(std::max(0.0, -0.5 * m2_));
}

double FilterCosineSeries::eval(double x) const {
  if (std::abs(x) < 0.05) return eval_over_x2(x) * x * x;
  double f = 0;
  for (std::size_t m = 0; m < deltas_.size(); ++m) {
    f += coeffs_[m] * std::cos(deltas_[m] * x);
  }
  return std::max(0.0, f);
}

double FilterCosineSeries::eval_over_x2(double x) const {
  const double ax = std::abs(x);
  if (ax < 0.05) {
    const double x2 = x * x;
    // cos expansion: sum c_m [1 - (d x)^2/2 + (d x)^4/24 - ...], sum c_m = 0
    return -0.5 * m2_ + x2 * (m4_ / 24.0 - x2 * (m6_ / 720.0 - x2 * m8_ / 40320.0));
  }
  return eval(x) / (x * x);
}

OverlapKernel::OverlapKernel(const PulseSequence& seq) {
  edges_.push_back(0.0);
  for (double f : seq.fractions) edges_.push_back(f);
  edges_.push_back(1.0);

  for (std::size_t a = 0; a < edges_.size(); ++a) {
    for (std::size_t b = a; b < edges_.size(); ++b) {
      breakpoints_.push_back(edges_[b] - edges_[a]);
    }
  }
  std::sort(breakpoints_.begin(), breakpoints_.end());
  breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end(),
                                 [](double u, double v) {
                                   return std::abs(u - v) < 1e-13;
                                 }),
                     breakpoints_.end());
}

double OverlapKernel::operator()(double u) const {
  if (u < -1e-12 || u > 1 + 1e-12) {
    throw ConfigError("overlap kernel argument outside [0,1]");
  }
  u = std::clamp(u, 0.0, 1.0);
  const double vmax = 1.0 - u;

  // f(v) f(v+u) is piecewise constant in v; cut at every point where either
  // factor flips and read the sign at interval midpoints.
  std::vector<double> cuts;
  cuts.push_back(0.0);
  for (std::size_t i = 1; i + 1 < edges_.size(); ++i) {  // pulse times only
    const double p = edges_[i];
    if (p > 0 && p < vmax) cuts.push_back(p);
    if (p - u > 0 && p - u < vmax) cuts.push_back(p - u);
  }
  cuts.push_back(vmax);
  std::sort(cuts.begin(), cuts.end());

  auto sign_at = [this](double t) {
    int flips = 0;
    for (std::size_t i = 1; i + 1 < edges_.size(); ++i) {
      if (edges_[i] <= t) ++flips;
    }
    return flips % 2 == 0 ? 1 : -1;
  };

  double acc = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    if (len <= 0) continue;
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    acc += sign_at(mid) * sign_at(mid + u) * len;
  }
  return acc;
}

}  // namespace spinbath
