#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "spinbath/kernels.hpp"

using namespace spinbath;

namespace {

struct BackendGuard {
  kernels::Backend prev;
  explicit BackendGuard(kernels::Backend b) : prev(kernels::set_backend(b)) {}
  ~BackendGuard() { kernels::set_backend(prev); }
};

}  // namespace

TEST_CASE("cosine accumulation: scalar and simd agree") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uamp(-2.0, 2.0);
  std::uniform_real_distribution<double> uw(0.0, 5e5);

  for (int npairs : {1, 3, 4, 37, 256}) {
    std::vector<double> amps(npairs), omegas(npairs);
    for (int p = 0; p < npairs; ++p) {
      amps[p] = uamp(rng);
      omegas[p] = uw(rng);
    }
    const std::size_t npts = 513;
    const double t0 = 0.0, dt = 2.4e-5;

    std::vector<double> ref(npts, 0.0), vec(npts, 0.0);
    {
      BackendGuard guard(kernels::Backend::scalar);
      kernels::accumulate_cosines(amps, omegas, t0, dt, ref);
    }
    {
      BackendGuard guard(kernels::Backend::avx2);
      kernels::accumulate_cosines(amps, omegas, t0, dt, vec);
    }
    double scale = 0;
    for (double a : amps) scale += std::abs(a);
    for (std::size_t k = 0; k < npts; ++k) {
      CHECK(std::abs(vec[k] - ref[k]) <= 1e-11 * scale);
    }
  }
}

TEST_CASE("complex curve product: scalar and simd agree") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{5},
                        std::size_t{64}, std::size_t{255}}) {
    std::vector<std::complex<double>> a(n), b(n);
    for (auto& z : a) z = {u(rng), u(rng)};
    for (auto& z : b) z = {u(rng), u(rng)};
    auto a1 = a;
    auto a2 = a;
    {
      BackendGuard guard(kernels::Backend::scalar);
      kernels::multiply_curves(a1, b);
    }
    {
      BackendGuard guard(kernels::Backend::avx2);
      kernels::multiply_curves(a2, b);
    }
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(std::abs(a1[k] - a2[k]) <= 1e-14);
    }
  }
}

TEST_CASE("scaled accumulation: scalar and simd agree") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t n = 101;
  std::vector<std::complex<double>> x(n), y1(n, {0.5, -0.25}), y2(n, {0.5, -0.25});
  for (auto& z : x) z = {u(rng), u(rng)};
  {
    BackendGuard guard(kernels::Backend::scalar);
    kernels::accumulate_scaled(x, 0.37, y1);
  }
  {
    BackendGuard guard(kernels::Backend::avx2);
    kernels::accumulate_scaled(x, 0.37, y2);
  }
  for (std::size_t k = 0; k < n; ++k) {
    CHECK(std::abs(y1[k] - y2[k]) <= 1e-15);
  }
}

TEST_CASE("cosine accumulation matches direct evaluation") {
  const std::vector<double> amps{1.5, -0.5, 0.25};
  const std::vector<double> omegas{0.0, 1000.0, 77777.0};
  std::vector<double> out(64, 0.0);
  kernels::accumulate_cosines(amps, omegas, 1e-5, 3e-6, out);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double t = 1e-5 + 3e-6 * static_cast<double>(k);
    double want = 0;
    for (std::size_t p = 0; p < amps.size(); ++p) {
      want += amps[p] * std::cos(omegas[p] * t);
    }
    CHECK(out[k] == doctest::Approx(want).epsilon(1e-12));
  }
}
