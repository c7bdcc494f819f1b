#include "spinbath/spectroscopy.hpp"

#include <algorithm>
#include <cmath>

#include "spinbath/constants.hpp"
#include "spinbath/errors.hpp"

namespace spinbath {

NoiseSpectrum extract_spectrum(const CoherenceCurve& curves, int n_pulses,
                               double pe, const ExtractOptions& options) {
  if (n_pulses < 1) throw ConfigError("extract_spectrum: N must be >= 1");
  if (pe <= 0) throw ConfigError("extract_spectrum: P_e must be > 0");
  if (curves.times.size() < 2) {
    throw ConfigError("extract_spectrum: need at least 2 time points");
  }

  std::vector<std::pair<double, double>> points;  // (omega0, S)
  double prev_t = 0;
  for (std::size_t k = 0; k < curves.times.size(); ++k) {
    const double t = curves.times[k];
    if (t <= prev_t) {
      throw ConfigError("extract_spectrum: t grid must be strictly increasing");
    }
    prev_t = t;
    const double l = std::abs(curves.values[k]);
    if (l <= 0 || l > 1 + 1e-9) {
      throw ConfigError("extract_spectrum: |L| must lie in (0, 1]");
    }
    const double omega0 = constants::pi * n_pulses / t;
    const double s =
        l >= 1 - 1e-9 ? 0.0 : -2.0 * std::log(l) / (t * pe * pe);
    points.emplace_back(omega0, s);
  }
  std::sort(points.begin(), points.end());

  NoiseSpectrum spec;
  spec.tail = options.tail;
  spec.tail_exponent = options.tail_exponent;
  for (const auto& [w, s] : points) {
    spec.omegas.push_back(w);
    spec.values.push_back(s);
  }

  // refine the tail exponent from the top decade of extracted points
  if (options.tail == NoiseSpectrum::Tail::power_law && spec.omegas.size() >= 3) {
    const double w_hi = spec.omegas.back();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t k = 0; k < spec.omegas.size(); ++k) {
      if (spec.omegas[k] < 0.1 * w_hi || spec.values[k] <= 0) continue;
      const double x = std::log(spec.omegas[k]);
      const double y = std::log(spec.values[k]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++m;
    }
    if (m >= 3) {
      const double denom = m * sxx - sx * sx;
      if (std::abs(denom) > 1e-30) {
        const double slope = (m * sxy - sx * sy) / denom;
        spec.tail_exponent = std::clamp(-slope, 0.5, 6.0);
      }
    }
  }
  return spec;
}

Prediction predict_decoherence(const NoiseSpectrum& spectrum,
                               const PulseSequence& seq, double pe,
                               const std::vector<double>& t_grid) {
  Prediction pred;
  pred.curve.times = t_grid;
  pred.curve.values.resize(t_grid.size());
  pred.curve.metadata = "predicted:" + seq.str();

  NoiseSpectrum grid_only = spectrum;
  grid_only.tail = NoiseSpectrum::Tail::zero;
  grid_only.static_weight = 0;

  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    const double l = gaussian_coherence_freq(spectrum, seq, pe, t_grid[k]);
    pred.curve.values[k] = l;
    if (t_grid[k] == 0.0) continue;
    // coverage: fraction of the total filter weight captured by the grid
    const double chi_full = -2.0 * std::log(std::max(l, 1e-300)) / (pe * pe);
    if (chi_full > 1e-30) {
      const double l_grid =
          gaussian_coherence_freq(grid_only, seq, pe, t_grid[k]);
      const double chi_grid =
          -2.0 * std::log(std::max(l_grid, 1e-300)) / (pe * pe);
      if (chi_grid < 0.9 * chi_full) pred.flagged = true;
    }
  }
  return pred;
}

}  // namespace spinbath
