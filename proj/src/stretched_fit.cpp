#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "spinbath/errors.hpp"
#include "spinbath/noise_model.hpp"

namespace spinbath {

double StretchedExpFit::eval(double t) const {
  if (delta == 0.0) return c0;
  return c0 + delta * delta * (std::exp(-std::pow(std::abs(t) / tau, n_stretch)) - 1.0);
}

namespace {

constexpr double kNMin = 0.3;
constexpr double kNMax = 6.0;

struct Params {
  double delta2, tau, n;
};

// unconstrained coordinates: (log delta^2, log tau, logit of n range)
Params decode(const std::array<double, 3>& u) {
  Params p;
  p.delta2 = std::exp(u[0]);
  p.tau = std::exp(u[1]);
  p.n = kNMin + (kNMax - kNMin) / (1.0 + std::exp(-u[2]));
  return p;
}

std::array<double, 3> encode(const Params& p) {
  const double frac =
      std::clamp((p.n - kNMin) / (kNMax - kNMin), 1e-6, 1.0 - 1e-6);
  return {std::log(p.delta2), std::log(p.tau), std::log(frac / (1.0 - frac))};
}

double sum_sq(const CorrelationCurve& curve, const Params& p) {
  double s = 0;
  const double c0 = curve.c0();
  for (std::size_t k = 0; k < curve.times.size(); ++k) {
    const double model =
        c0 + p.delta2 * (std::exp(-std::pow(curve.times[k] / p.tau, p.n)) - 1.0);
    const double r = curve.values[k] - model;
    s += r * r;
  }
  return s;
}

// Nelder-Mead with fixed coefficients; deterministic given the start point.
std::pair<std::array<double, 3>, double> simplex_minimize(
    const CorrelationCurve& curve, std::array<double, 3> start, int max_iter,
    bool* converged) {
  constexpr int n = 3;
  std::array<std::array<double, 3>, 4> pts;
  std::array<double, 4> val;
  pts[0] = start;
  for (int i = 1; i <= n; ++i) {
    pts[i] = start;
    pts[i][i - 1] += 0.35;
  }
  for (int i = 0; i <= n; ++i) val[i] = sum_sq(curve, decode(pts[i]));

  auto order = [&] {
    for (int i = 0; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        if (val[j] < val[i]) {
          std::swap(val[i], val[j]);
          std::swap(pts[i], pts[j]);
        }
      }
    }
  };

  for (int it = 0; it < max_iter; ++it) {
    order();
    if (std::abs(val[n] - val[0]) <=
        1e-14 * (std::abs(val[0]) + std::abs(val[n])) + 1e-300) {
      if (converged) *converged = true;
      return {pts[0], val[0]};
    }
    std::array<double, 3> centroid{0, 0, 0};
    for (int i = 0; i < n; ++i) {
      for (int d = 0; d < 3; ++d) centroid[d] += pts[i][d] / n;
    }
    auto blend = [&](double coef) {
      std::array<double, 3> x;
      for (int d = 0; d < 3; ++d) {
        x[d] = centroid[d] + coef * (pts[n][d] - centroid[d]);
      }
      return x;
    };
    const auto refl = blend(-1.0);
    const double frefl = sum_sq(curve, decode(refl));
    if (frefl < val[0]) {
      const auto expd = blend(-2.0);
      const double fexpd = sum_sq(curve, decode(expd));
      if (fexpd < frefl) {
        pts[n] = expd;
        val[n] = fexpd;
      } else {
        pts[n] = refl;
        val[n] = frefl;
      }
    } else if (frefl < val[n - 1]) {
      pts[n] = refl;
      val[n] = frefl;
    } else {
      const auto contr = blend(0.5);
      const double fcontr = sum_sq(curve, decode(contr));
      if (fcontr < val[n]) {
        pts[n] = contr;
        val[n] = fcontr;
      } else {
        for (int i = 1; i <= n; ++i) {
          for (int d = 0; d < 3; ++d) {
            pts[i][d] = pts[0][d] + 0.5 * (pts[i][d] - pts[0][d]);
          }
          val[i] = sum_sq(curve, decode(pts[i]));
        }
      }
    }
  }
  order();
  if (converged) *converged = false;
  return {pts[0], val[0]};
}

}  // namespace

StretchedExpFit fit_stretched_exponential(const CorrelationCurve& curve) {
  if (curve.times.size() < 4) {
    throw ConfigError("stretched-exponential fit needs at least 4 samples");
  }
  StretchedExpFit fit;
  fit.c0 = curve.c0();

  const double gap = fit.c0 - curve.values.back();
  double max_gap = 0;
  for (double v : curve.values) max_gap = std::max(max_gap, fit.c0 - v);
  if (max_gap <= 1e-12 * std::abs(fit.c0) || max_gap <= 0) {
    // constant curve: Delta = 0, tau/n carry no information
    fit.delta = 0;
    fit.tau = curve.times.back();
    fit.n_stretch = 1;
    fit.identifiable = false;
    fit.residual_rms = 0;
    return fit;
  }

  // deterministic initialization
  Params init;
  init.delta2 = std::max(gap, 0.05 * max_gap);
  init.tau = curve.times.back();
  for (std::size_t k = 0; k < curve.times.size(); ++k) {
    if (fit.c0 - curve.values[k] >= (1.0 - std::exp(-1.0)) * init.delta2) {
      init.tau = std::max(curve.times[k], curve.times[1]);
      break;
    }
  }
  init.n = 1.0;

  std::array<double, 3> best{};
  double best_val = std::numeric_limits<double>::infinity();
  bool best_conv = false;
  for (double n0 : {0.5, 1.0, 2.0}) {
    Params p = init;
    p.n = n0;
    bool conv = false;
    const auto [u, v] = simplex_minimize(curve, encode(p), 2500, &conv);
    if (v < best_val) {
      best_val = v;
      best = u;
      best_conv = conv;
    }
  }
  // polish the winner
  {
    bool conv = false;
    const auto [u, v] = simplex_minimize(curve, best, 2500, &conv);
    if (v <= best_val) {
      best_val = v;
      best = u;
      best_conv = conv;
    }
  }

  const Params p = decode(best);
  fit.delta = std::sqrt(p.delta2);
  fit.tau = p.tau;
  fit.n_stretch = p.n;
  fit.converged = best_conv;
  fit.residual_rms =
      std::sqrt(best_val / static_cast<double>(curve.times.size()));
  fit.covers_decay =
      (curve.values.back() - fit.c_infinity()) <= 0.5 * p.delta2;
  return fit;
}

}  // namespace spinbath
