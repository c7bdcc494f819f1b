#pragma once

#include <complex>
#include <cstddef>
#include <span>

// Arithmetic inner loops of the simulator. Each kernel has a scalar reference
// implementation and an AVX2 variant; the active one is chosen at runtime from
// CPU capabilities and the two are equivalence-tested against each other.
namespace spinbath::kernels {

enum class Backend { scalar, avx2 };

// Backend selected at startup (avx2 where the CPU supports it).
Backend active_backend();
const char* backend_name(Backend b);

// Override for tests/benchmarks; returns the previously active backend.
// Requesting avx2 on a machine without it falls back to scalar.
Backend set_backend(Backend b);

// out[k] += sum_p amps[p] * cos(omegas[p] * (t0 + k*dt))
// The pair-cluster correlation curves and filter cosine series all reduce to
// this uniform-grid accumulation.
void accumulate_cosines(std::span<const double> amps,
                        std::span<const double> omegas, double t0, double dt,
                        std::span<double> out);

// acc[k] *= factor[k] (complex, elementwise). Cluster-correlation products.
void multiply_curves(std::span<std::complex<double>> acc,
                     std::span<const std::complex<double>> factor);

// y[k] += w * x[k] (complex). Ensemble-mean accumulation.
void accumulate_scaled(std::span<const std::complex<double>> x, double w,
                       std::span<std::complex<double>> y);

namespace detail {
void accumulate_cosines_scalar(std::span<const double> amps,
                               std::span<const double> omegas, double t0,
                               double dt, std::span<double> out);
void multiply_curves_scalar(std::span<std::complex<double>> acc,
                            std::span<const std::complex<double>> factor);
void accumulate_scaled_scalar(std::span<const std::complex<double>> x,
                              double w, std::span<std::complex<double>> y);

#if defined(__x86_64__) || defined(_M_X64)
#define SPINBATH_HAVE_AVX2_TU 1
void accumulate_cosines_avx2(std::span<const double> amps,
                             std::span<const double> omegas, double t0,
                             double dt, std::span<double> out);
void multiply_curves_avx2(std::span<std::complex<double>> acc,
                          std::span<const std::complex<double>> factor);
void accumulate_scaled_avx2(std::span<const std::complex<double>> x, double w,
                            std::span<std::complex<double>> y);
#endif
}  // namespace detail

}  // namespace spinbath::kernels
