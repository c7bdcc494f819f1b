#pragma once

#include "spinbath/curves.hpp"
#include "spinbath/noise_model.hpp"
#include "spinbath/sequence.hpp"

namespace spinbath {

// Delta-filter noise spectroscopy: a CPMG-N experiment of total time t probes
// omega_0 = pi N / t, and S(omega_0) = -2 ln|L(t)| / (t P_e^2). Only the
// first filter harmonic is used for extraction (prediction keeps them all).
struct ExtractOptions {
  NoiseSpectrum::Tail tail = NoiseSpectrum::Tail::power_law;
  // tail exponent fitted from the top decade when possible; this is the
  // fallback
  double tail_exponent = 2.0;
};

NoiseSpectrum extract_spectrum(const CoherenceCurve& curves, int n_pulses,
                               double pe,
                               const ExtractOptions& options = {});

struct Prediction {
  CoherenceCurve curve;
  bool flagged = false;  // filter band poorly covered by the spectrum
};

// L(t) under another sequence from an extracted spectrum (full Eq.-(5)
// frequency-domain evaluation with interpolation and the configured tail).
Prediction predict_decoherence(const NoiseSpectrum& spectrum,
                               const PulseSequence& seq, double pe,
                               const std::vector<double>& t_grid);

}  // namespace spinbath
