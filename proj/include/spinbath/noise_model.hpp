#pragma once

#include <functional>

#include "spinbath/bath.hpp"
#include "spinbath/curves.hpp"
#include "spinbath/donor.hpp"
#include "spinbath/sequence.hpp"

namespace spinbath {

// Amplitude convention for the analytic pairwise flip-flop correlation:
//   paper          2 Z^2 D^2 / (Z^2 + D^2)
//   oracle_derived (A_i - A_j)^2 D^2 / (8 (Z^2 + D^2))
// with Z = (|P+|+|P-|)/4 (A_i - A_j) and frequency 2 sqrt(Z^2 + D^2). The two
// differ by the factor (|P+|+|P-|)^2; the second matches the dense pair
// dynamics and is the default.
enum class PairAmplitudeMode { paper, oracle_derived };

struct PairTermInfo {
  int i = 0, j = 0;
  double z = 0;          // rad/s
  double d = 0;          // rad/s
  double omega = 0;      // 2 sqrt(Z^2 + D^2)
  double amp_paper = 0;
  double amp_oracle = 0;
};

// C(t) = C(0) + sum_pairs amp [cos(omega t) - 1] as a cosine-term bank
// (statics at omega = 0 included so that total() == C(0) == sum A_i^2/4).
CosineTermBank pair_flipflop_terms(const BathConfiguration& bath,
                                   const TransitionPair& transition,
                                   double pair_cutoff, double dipolar_floor,
                                   PairAmplitudeMode mode,
                                   std::vector<PairTermInfo>* info = nullptr);

double pair_flipflop_correlation(const BathConfiguration& bath,
                                 const TransitionPair& transition,
                                 double pair_cutoff, double dipolar_floor,
                                 PairAmplitudeMode mode, double t);

// ---------------------------------------------------------------------------

// Fit of C(t) = C0 + Delta^2 [exp(-(|t|/tau)^n) - 1].
struct StretchedExpFit {
  double delta = 0;     // rad/s
  double tau = 0;       // s
  double n_stretch = 1;
  double c0 = 0;        // rad^2/s^2
  double residual_rms = 0;
  bool converged = true;
  bool identifiable = true;   // false when the curve is constant
  bool covers_decay = true;   // curve reached half of the fitted gap

  double c_infinity() const { return c0 - delta * delta; }
  double eval(double t) const;
};

// Deterministic least squares: simplex restarts from n0 in {0.5, 1, 2} with
// Delta0^2 = C0 - C(t_max) and tau0 at the 1/e crossing; n bounded to
// [0.3, 6].
StretchedExpFit fit_stretched_exponential(const CorrelationCurve& curve);

// ---------------------------------------------------------------------------

// Cosine transform S(omega) = 2 int_0^inf [C(t) - C(inf)] cos(omega t) dt on
// the given grid; the sampled window uses the curve, beyond it the fit. The
// static offset C(inf) goes to NoiseSpectrum::static_weight, never onto the
// grid. *nonnegative_ok is cleared if S dips below -1e-9 of its peak.
NoiseSpectrum spectrum(const CorrelationCurve& curve,
                       const StretchedExpFit& extrapolation,
                       const std::vector<double>& omegas,
                       bool* nonnegative_ok = nullptr);

// Reasonable default grid for the curve's time span (log-spaced).
std::vector<double> default_spectrum_grid(const CorrelationCurve& curve,
                                          std::size_t points = 240);

// ---------------------------------------------------------------------------
// Gaussian decoherence -ln L = (P_e^2 / 2) chi under a pulse sequence.

// Time domain: chi = int int C(t1-t2) f(t1) f(t2) via the overlap kernel,
// with C(u) supplied for u in [0, t_total].
double gaussian_coherence_time(const std::function<double(double)>& corr,
                               const PulseSequence& seq, double pe,
                               double t_total);

// Sampled curve with fit extrapolation beyond the last sample.
double gaussian_coherence_time(const CorrelationCurve& curve,
                               const StretchedExpFit& fit,
                               const PulseSequence& seq, double pe,
                               double t_total);

// Frequency domain: chi = (1/pi) int_0^inf S(omega) F(omega t)/omega^2
// d omega plus the static delta term. Throws when the grid cannot resolve
// the filter peak.
double gaussian_coherence_freq(const NoiseSpectrum& spectrum,
                               const PulseSequence& seq, double pe,
                               double t_total);

// Exact evaluation for a cosine-term correlation (delta-comb spectrum):
// chi = t^2 sum_m amp_m F(omega_m t) / (omega_m t)^2.
double gaussian_coherence_terms(const CosineTermBank& terms,
                                const FilterCosineSeries& filter, double pe,
                                double t_total);

}  // namespace spinbath
