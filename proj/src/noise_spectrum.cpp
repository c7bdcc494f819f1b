#include <algorithm>
#include <cmath>

#include "spinbath/errors.hpp"
#include "spinbath/noise_model.hpp"
#include "spinbath/quadrature.hpp"

namespace spinbath {

namespace {

// Hermite interpolant of the relative correlation C(t) - C(inf) over the
// sampled window.
class SampledCorrelation {
 public:
  SampledCorrelation(const CorrelationCurve& curve, double c_inf)
      : ts_(curve.times), c_inf_(c_inf) {
    vs_.resize(curve.values.size());
    for (std::size_t k = 0; k < vs_.size(); ++k) {
      vs_[k] = curve.values[k] - c_inf_;
    }
  }

  double operator()(double u) const {
    const auto it = std::upper_bound(ts_.begin(), ts_.end(), u);
    std::size_t k = it == ts_.begin() ? 0 : (it - ts_.begin() - 1);
    if (k + 1 >= ts_.size()) k = ts_.size() - 2;
    const double h = ts_[k + 1] - ts_[k];
    const double x = (u - ts_[k]) / h;
    const double s0 = k == 0 ? (vs_[1] - vs_[0]) / h
                             : (vs_[k + 1] - vs_[k - 1]) /
                                   (ts_[k + 1] - ts_[k - 1]);
    const double s1 = k + 2 >= ts_.size()
                          ? (vs_[k + 1] - vs_[k]) / h
                          : (vs_[k + 2] - vs_[k]) / (ts_[k + 2] - ts_[k]);
    const double x2 = x * x;
    const double x3 = x2 * x;
    return (2 * x3 - 3 * x2 + 1) * vs_[k] + (x3 - 2 * x2 + x) * h * s0 +
           (-2 * x3 + 3 * x2) * vs_[k + 1] + (x3 - x2) * h * s1;
  }

 private:
  const std::vector<double>& ts_;
  std::vector<double> vs_;
  double c_inf_;
};

// oscillation-aware integral of fn(t) cos(omega t) over [a, b]
template <typename Fn>
double cos_integral(const Fn& fn, double omega, double a, double b) {
  const double phase = (b - a) * std::abs(omega);
  const int pieces = std::max(1, static_cast<int>(std::ceil(phase / 1.2)));
  double acc = 0;
  for (int p = 0; p < pieces; ++p) {
    const double lo = a + (b - a) * p / pieces;
    const double hi = a + (b - a) * (p + 1) / pieces;
    acc += quad::gl8([&](double t) { return fn(t) * std::cos(omega * t); },
                     lo, hi);
  }
  return acc;
}

}  // namespace

std::vector<double> default_spectrum_grid(const CorrelationCurve& curve,
                                          std::size_t points) {
  if (curve.times.size() < 2) {
    throw ConfigError("spectrum grid needs a sampled curve");
  }
  const double t_max = curve.times.back();
  double dt_min = t_max;
  for (std::size_t k = 1; k < curve.times.size(); ++k) {
    dt_min = std::min(dt_min, curve.times[k] - curve.times[k - 1]);
  }
  const double w_lo = 0.1 / t_max;
  const double w_hi = 3.0 / dt_min;
  std::vector<double> grid;
  grid.push_back(0.0);
  for (std::size_t k = 0; k < points; ++k) {
    grid.push_back(w_lo * std::pow(w_hi / w_lo,
                                   static_cast<double>(k) /
                                       static_cast<double>(points - 1)));
  }
  return grid;
}

NoiseSpectrum spectrum(const CorrelationCurve& curve,
                       const StretchedExpFit& extrapolation,
                       const std::vector<double>& omegas,
                       bool* nonnegative_ok) {
  if (curve.times.size() < 2) {
    throw ConfigError("spectrum: curve must be sampled");
  }
  const double c_inf = extrapolation.c_infinity();
  const SampledCorrelation sampled(curve, c_inf);
  const double t_max = curve.times.back();

  // fit-model tail until the stretched exponential is numerically gone
  const double d2 = extrapolation.delta * extrapolation.delta;
  double t_end = t_max;
  if (d2 > 0 && extrapolation.identifiable) {
    t_end = std::max(
        t_max, extrapolation.tau *
                   std::pow(36.0, 1.0 / extrapolation.n_stretch));
  }
  auto tail = [&](double t) {
    return d2 * std::exp(-std::pow(t / extrapolation.tau,
                                   extrapolation.n_stretch));
  };

  NoiseSpectrum out;
  out.omegas = omegas;
  out.values.resize(omegas.size());
  out.static_weight = c_inf;
  out.tail = NoiseSpectrum::Tail::power_law;
  out.tail_exponent = 1.0 + extrapolation.n_stretch;

  for (std::size_t i = 0; i < omegas.size(); ++i) {
    const double w = omegas[i];
    double integral = cos_integral(sampled, w, 0.0, t_max);
    if (t_end > t_max) integral += cos_integral(tail, w, t_max, t_end);
    out.values[i] = 2.0 * integral;
  }

  if (nonnegative_ok) {
    double peak = 0;
    for (double v : out.values) peak = std::max(peak, std::abs(v));
    *nonnegative_ok = true;
    for (double v : out.values) {
      if (v < -1e-9 * peak) {
        *nonnegative_ok = false;
        break;
      }
    }
  }
  return out;
}

}  // namespace spinbath
