#pragma once

#include <complex>
#include <string>
#include <vector>

namespace spinbath {

// L(t): central-spin coherence under a pulse sequence. values[0] == 1 and
// |values[k]| <= 1 + 1e-9 are asserted where curves are produced.
struct CoherenceCurve {
  std::vector<double> times;  // s, strictly increasing, starts at 0
  std::vector<std::complex<double>> values;
  std::string metadata;  // transition / sequence / seed tag for outputs
};

// C(t): two-point Overhauser-field correlation, rad^2/s^2. Only t >= 0 is
// stored; C is even in t by construction.
struct CorrelationCurve {
  std::vector<double> times;
  std::vector<double> values;

  double c0() const { return values.empty() ? 0.0 : values.front(); }
};

// One-sided noise spectrum C(omega) >= 0 on an ascending grid (rad/s ->
// rad^2/s). The even extension is implied. A static (delta at omega = 0)
// component is carried separately so echo filters see exactly zero from it.
struct NoiseSpectrum {
  enum class Tail { zero, power_law };

  std::vector<double> omegas;
  std::vector<double> values;
  double static_weight = 0;  // rad^2/s^2
  Tail tail = Tail::zero;
  double tail_exponent = 2.0;  // S ~ values.back() * (omega/omegas.back())^-p
};

// C(t) as a finite sum of cosines, sum_m amp_m cos(omega_m t): the exact form
// produced by cluster correlation traces. omega = 0 entries are static.
struct CosineTermBank {
  std::vector<double> omegas;  // >= 0, rad/s
  std::vector<double> amps;    // rad^2/s^2

  void add(double omega, double amp) {
    omegas.push_back(omega);
    amps.push_back(amp);
  }
  double total() const {  // C(0)
    double s = 0;
    for (double a : amps) s += a;
    return s;
  }
};

}  // namespace spinbath
