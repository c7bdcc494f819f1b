#include <cmath>

#include "spinbath/noise_model.hpp"

namespace spinbath {

CosineTermBank pair_flipflop_terms(const BathConfiguration& bath,
                                   const TransitionPair& transition,
                                   double pair_cutoff, double dipolar_floor,
                                   PairAmplitudeMode mode,
                                   std::vector<PairTermInfo>* info) {
  CosineTermBank bank;
  const int n = static_cast<int>(bath.size());
  for (int i = 0; i < n; ++i) {
    bank.add(0.0, 0.25 * bath.hyperfine[i] * bath.hyperfine[i]);
  }

  const double s = transition.s;
  const double cut2 = pair_cutoff * pair_cutoff;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((bath.positions[i] - bath.positions[j]).squaredNorm() > cut2) continue;
      const double d =
          dipolar_coupling(bath.positions[i], bath.positions[j], bath.orientation);
      if (std::abs(d) < dipolar_floor || d == 0.0) continue;
      const double da = bath.hyperfine[i] - bath.hyperfine[j];
      const double z = 0.25 * s * da;
      const double nu2 = z * z + d * d;
      const double omega = 2.0 * std::sqrt(nu2);
      const double amp_paper = 2.0 * z * z * d * d / nu2;
      const double amp_oracle = 0.125 * da * da * d * d / nu2;
      if (info) info->push_back({i, j, z, d, omega, amp_paper, amp_oracle});
      const double amp =
          mode == PairAmplitudeMode::paper ? amp_paper : amp_oracle;
      if (amp == 0.0) continue;
      bank.add(omega, amp);
      bank.add(0.0, -amp);
    }
  }
  return bank;
}

double pair_flipflop_correlation(const BathConfiguration& bath,
                                 const TransitionPair& transition,
                                 double pair_cutoff, double dipolar_floor,
                                 PairAmplitudeMode mode, double t) {
  const CosineTermBank bank = pair_flipflop_terms(bath, transition, pair_cutoff,
                                                  dipolar_floor, mode, nullptr);
  double c = 0;
  for (std::size_t m = 0; m < bank.amps.size(); ++m) {
    c += bank.amps[m] * std::cos(bank.omegas[m] * t);
  }
  return c;
}

}  // namespace spinbath
