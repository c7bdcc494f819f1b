#include <doctest.h>

#include <cmath>

#include "spinbath/constants.hpp"
#include "spinbath/errors.hpp"
#include "spinbath/spectroscopy.hpp"

using namespace spinbath;
namespace cn = spinbath::constants;

namespace {

NoiseSpectrum lorentzian(double delta2, double tau, int npts = 2000) {
  NoiseSpectrum spec;
  spec.tail = NoiseSpectrum::Tail::power_law;
  spec.tail_exponent = 2.0;
  const double w_lo = 1e-4 / tau, w_hi = 3e4 / tau;
  spec.omegas.push_back(0.0);
  spec.values.push_back(2 * delta2 * tau);
  for (int k = 0; k < npts; ++k) {
    const double w = w_lo * std::pow(w_hi / w_lo, double(k) / (npts - 1));
    spec.omegas.push_back(w);
    spec.values.push_back(2 * delta2 * tau / (1 + w * w * tau * tau));
  }
  return spec;
}

CoherenceCurve forward_cpmg(const NoiseSpectrum& truth, int n, double pe,
                            double t_lo, double t_hi, int points) {
  CoherenceCurve curve;
  for (int k = 0; k < points; ++k) {
    const double t = t_lo * std::pow(t_hi / t_lo, double(k) / (points - 1));
    curve.times.push_back(t);
    curve.values.push_back(
        gaussian_coherence_freq(truth, PulseSequence::cpmg(n), pe, t));
  }
  return curve;
}

}  // namespace

TEST_CASE("white-noise extraction returns the flat level") {
  const double s0 = 4e4, pe = 0.07;
  CoherenceCurve curve;
  for (int k = 1; k <= 20; ++k) {
    const double t = 1e-4 * k;
    curve.times.push_back(t);
    curve.values.push_back(std::exp(-0.5 * pe * pe * s0 * t));
  }
  const NoiseSpectrum spec = extract_spectrum(curve, 64, pe);
  REQUIRE(spec.omegas.size() == curve.times.size());
  for (double v : spec.values) {
    CHECK(v == doctest::Approx(s0).epsilon(1e-12));
  }
  // omega mapping: t doubled -> omega halved
  CHECK(spec.omegas.front() == doctest::Approx(cn::pi * 64 / curve.times.back()));
  CHECK(spec.omegas.back() == doctest::Approx(cn::pi * 64 / curve.times.front()));
}

TEST_CASE("extraction input validation") {
  CoherenceCurve bad;
  bad.times = {1e-3, 2e-3};
  bad.values = {0.5, 1.5};
  CHECK_THROWS_AS(extract_spectrum(bad, 10, 0.1), ConfigError);
  bad.values = {0.5, 0.0};  // L = 0 is outside (0, 1]
  CHECK_THROWS_AS(extract_spectrum(bad, 10, 0.1), ConfigError);
  CoherenceCurve dup;
  dup.times = {1e-3, 1e-3};
  dup.values = {0.5, 0.5};
  CHECK_THROWS_AS(extract_spectrum(dup, 10, 0.1), ConfigError);
  // L within roundoff of 1 maps to S = 0
  CoherenceCurve flat;
  flat.times = {1e-3, 2e-3, 3e-3};
  flat.values = {1.0, 1.0 - 1e-12, 1.0};
  const auto spec = extract_spectrum(flat, 10, 0.1);
  for (double v : spec.values) CHECK(v == 0.0);
}

TEST_CASE("lorentzian round trip: extract within 10%, predict within 10%") {
  const double delta2 = 2e8, tau = 1.5e-3, pe = 0.05;
  const NoiseSpectrum truth = lorentzian(delta2, tau);

  // pick the window so L stays in a usable range
  const CoherenceCurve probe = forward_cpmg(truth, 100, pe, 3e-4, 2e-1, 24);
  CoherenceCurve usable;
  for (std::size_t k = 0; k < probe.times.size(); ++k) {
    const double l = std::abs(probe.values[k]);
    if (l > 0.05 && l < 0.999) {
      usable.times.push_back(probe.times[k]);
      usable.values.push_back(probe.values[k]);
    }
  }
  REQUIRE(usable.times.size() >= 8);
  const NoiseSpectrum extracted = extract_spectrum(usable, 100, pe);

  // truth on the probed band
  for (std::size_t k = 0; k < extracted.omegas.size(); ++k) {
    const double w = extracted.omegas[k];
    const double want = 2 * delta2 * tau / (1 + w * w * tau * tau);
    CHECK(extracted.values[k] == doctest::Approx(want).epsilon(0.10));
  }

  // predict cpmg-32 and compare 1/e times against the true-spectrum forward model
  std::vector<double> tgrid;
  for (int k = 0; k < 160; ++k) tgrid.push_back(1e-4 + k * 1.2e-3 / 159);
  const Prediction pred =
      predict_decoherence(extracted, PulseSequence::cpmg(32), pe, tgrid);
  auto efold = [&](const CoherenceCurve& c) {
    for (std::size_t k = 1; k < c.times.size(); ++k) {
      const double a = std::abs(c.values[k - 1]), b = std::abs(c.values[k]);
      if (a >= std::exp(-1.0) && b < std::exp(-1.0)) {
        return c.times[k - 1] + (a - std::exp(-1.0)) / (a - b) *
                                    (c.times[k] - c.times[k - 1]);
      }
    }
    return c.times.back();
  };
  CoherenceCurve truth32;
  truth32.times = tgrid;
  for (double t : tgrid) {
    truth32.values.push_back(
        gaussian_coherence_freq(truth, PulseSequence::cpmg(32), pe, t));
  }
  CHECK(efold(pred.curve) == doctest::Approx(efold(truth32)).epsilon(0.10));
}

TEST_CASE("self-consistency error shrinks with pulse number") {
  const double delta2 = 2e8, tau = 1.5e-3, pe = 0.05;
  const NoiseSpectrum truth = lorentzian(delta2, tau);
  auto self_error = [&](int n) {
    const CoherenceCurve probe = forward_cpmg(truth, n, pe, 3e-4, 3e-1, 30);
    CoherenceCurve usable;
    for (std::size_t k = 0; k < probe.times.size(); ++k) {
      const double l = std::abs(probe.values[k]);
      if (l > 0.1 && l < 0.995) {
        usable.times.push_back(probe.times[k]);
        usable.values.push_back(probe.values[k]);
      }
    }
    const NoiseSpectrum extracted = extract_spectrum(usable, n, pe);
    const Prediction pred = predict_decoherence(
        extracted, PulseSequence::cpmg(n), pe, usable.times);
    double err = 0;
    for (std::size_t k = 0; k < usable.times.size(); ++k) {
      const double a = std::log(std::abs(usable.values[k]));
      const double b = std::log(std::abs(pred.curve.values[k]));
      if (a < -1e-4) err = std::max(err, std::abs(b - a) / std::abs(a));
    }
    return err;
  };
  CHECK(self_error(100) < self_error(16));
}

TEST_CASE("prediction outside the spectrum support is flagged") {
  // support only around 1e4 rad/s, probe with a sequence band near 1e6
  NoiseSpectrum narrow;
  narrow.tail = NoiseSpectrum::Tail::zero;
  for (int k = 0; k <= 50; ++k) {
    narrow.omegas.push_back(5e3 + 200.0 * k);
    narrow.values.push_back(1e5);
  }
  narrow.static_weight = 1e8;  // most weight far below the filter band
  const Prediction pred = predict_decoherence(
      narrow, PulseSequence::ramsey(), 0.05, {1e-5, 3e-5});
  CHECK(pred.flagged);
}
