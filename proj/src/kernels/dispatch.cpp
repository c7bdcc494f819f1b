#include "spinbath/kernels.hpp"

namespace spinbath::kernels {

namespace {

bool avx2_available() {
#if defined(SPINBATH_HAVE_AVX2_TU)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend& current() {
  static Backend b = avx2_available() ? Backend::avx2 : Backend::scalar;
  return b;
}

}  // namespace

Backend active_backend() { return current(); }

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

Backend set_backend(Backend b) {
  Backend prev = current();
  if (b == Backend::avx2 && !avx2_available()) b = Backend::scalar;
  current() = b;
  return prev;
}

void accumulate_cosines(std::span<const double> amps,
                        std::span<const double> omegas, double t0, double dt,
                        std::span<double> out) {
#if defined(SPINBATH_HAVE_AVX2_TU)
  if (current() == Backend::avx2) {
    detail::accumulate_cosines_avx2(amps, omegas, t0, dt, out);
    return;
  }
#endif
  detail::accumulate_cosines_scalar(amps, omegas, t0, dt, out);
}

void multiply_curves(std::span<std::complex<double>> acc,
                     std::span<const std::complex<double>> factor) {
#if defined(SPINBATH_HAVE_AVX2_TU)
  if (current() == Backend::avx2) {
    detail::multiply_curves_avx2(acc, factor);
    return;
  }
#endif
  detail::multiply_curves_scalar(acc, factor);
}

void accumulate_scaled(std::span<const std::complex<double>> x, double w,
                       std::span<std::complex<double>> y) {
#if defined(SPINBATH_HAVE_AVX2_TU)
  if (current() == Backend::avx2) {
    detail::accumulate_scaled_avx2(x, w, y);
    return;
  }
#endif
  detail::accumulate_scaled_scalar(x, w, y);
}

}  // namespace spinbath::kernels
