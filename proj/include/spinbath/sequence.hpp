#pragma once

#include <string>
#include <vector>

namespace spinbath {

// Ideal, instantaneous pi pulses at normalized times in (0,1). XY-family
// sequences are aliases of CPMG here (identical for ideal pulses).
struct PulseSequence {
  enum class Family { ramsey, hahn, cpmg, custom };

  Family family = Family::ramsey;
  std::vector<double> fractions;  // strictly increasing pulse times / t_total

  int pulse_count() const { return static_cast<int>(fractions.size()); }

  static PulseSequence ramsey();
  static PulseSequence hahn();
  static PulseSequence cpmg(int n);  // fractions (2k-1)/(2N), k = 1..N
  static PulseSequence custom(std::vector<double> fractions);

  // "ramsey" | "hahn" | "cpmg:N" | "custom:f1,f2,..."
  static PulseSequence parse(const std::string& text);
  std::string str() const;
};

// Modulation function f(t): +1 on [0, t_1), sign flip at each pulse.
// Throws if t is outside [0, t_total].
int modulation(const PulseSequence& seq, double t_total, double t);

// Filter function F(x), x = omega * t_total, from the closed sum
// |sum_k (-1)^k (e^{i x f_{k+1}} - e^{i x f_k})|^2 with f_0 = 0, f_{N+1} = 1.
double filter_function(const PulseSequence& seq, double x);

// F(x) regrouped as sum_m c_m cos(d_m x) with d_0 = 0 and sum_m c_m = 0.
// Gives a cancellation-free F(x)/x^2 at small x (Taylor in the moments) and
// per-term asymptotics for frequency-integral tails.
class FilterCosineSeries {
 public:
  explicit FilterCosineSeries(const PulseSequence& seq);

  double eval(double x) const;         // F(x)
  double eval_over_x2(double x) const; // F(x)/x^2, finite at x = 0

  const std::vector<double>& deltas() const { return deltas_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  // |integral of f over [0,1]|; nonzero only for unbalanced sequences
  double mean_modulation() const { return mean_modulation_; }
  // smallest nonzero delta (0 if the series is static only)
  double min_delta() const { return min_delta_; }

 private:
  std::vector<double> deltas_;
  std::vector<double> coeffs_;
  double m2_ = 0, m4_ = 0, m6_ = 0, m8_ = 0;  // sum c_m d_m^k
  double mean_modulation_ = 0;
  double min_delta_ = 0;
};

// Autocorrelation kernel of the modulation function,
//   g(u) = integral over [0, 1-u] of f(v) f(v+u) dv,   u in [0, 1],
// evaluated exactly by walking the sign segments. g is piecewise linear with
// kinks at differences of pulse times; breakpoints() returns them sorted.
class OverlapKernel {
 public:
  explicit OverlapKernel(const PulseSequence& seq);

  double operator()(double u) const;
  const std::vector<double>& breakpoints() const { return breakpoints_; }

 private:
  std::vector<double> edges_;  // 0, pulses..., 1
  std::vector<double> breakpoints_;
};

}  // namespace spinbath
