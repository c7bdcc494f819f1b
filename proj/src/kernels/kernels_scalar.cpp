#include <cmath>

#include "spinbath/kernels.hpp"

// Reference kernels. Direct evaluation, no recurrences: these define the
// semantics the vector variants are tested against.
namespace spinbath::kernels::detail {

void accumulate_cosines_scalar(std::span<const double> amps,
                               std::span<const double> omegas, double t0,
                               double dt, std::span<double> out) {
  for (std::size_t p = 0; p < amps.size(); ++p) {
    const double a = amps[p];
    const double w = omegas[p];
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] += a * std::cos(w * (t0 + static_cast<double>(k) * dt));
    }
  }
}

void multiply_curves_scalar(std::span<std::complex<double>> acc,
                            std::span<const std::complex<double>> factor) {
  for (std::size_t k = 0; k < acc.size(); ++k) acc[k] *= factor[k];
}

void accumulate_scaled_scalar(std::span<const std::complex<double>> x,
                              double w, std::span<std::complex<double>> y) {
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += w * x[k];
}

}  // namespace spinbath::kernels::detail
