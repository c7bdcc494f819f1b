#include <doctest.h>

#include <cmath>

#include "spinbath/noise_model.hpp"
#include "oracles.hpp"

using namespace spinbath;
namespace cn = spinbath::constants;

namespace {

BathConfiguration two_spin_bath(double a1_khz, double a2_khz) {
  BathConfiguration bath;
  bath.positions = {Eigen::Vector3d(1.0e-9, 0.2e-9, 0.1e-9),
                    Eigen::Vector3d(1.2e-9, 0.5e-9, 0.3e-9)};
  bath.hyperfine = {cn::two_pi * 1e3 * a1_khz, cn::two_pi * 1e3 * a2_khz};
  bath.orientation = FieldOrientation::from_spec("110");
  return bath;
}

TransitionPair make_transition(double p_plus, double p_minus) {
  TransitionPair tr;
  tr.p_plus = p_plus;
  tr.p_minus = p_minus;
  tr.p_e = std::abs(p_plus - p_minus);
  tr.s = std::abs(p_plus) + std::abs(p_minus);
  return tr;
}

}  // namespace

TEST_CASE("equal couplings: paper amplitude vanishes with Z") {
  auto bath = two_spin_bath(120, 120);
  const auto tr = make_transition(0.0695, 0.0340);
  std::vector<PairTermInfo> info;
  pair_flipflop_terms(bath, tr, 1e-9, 0.0, PairAmplitudeMode::paper, &info);
  REQUIRE(info.size() == 1);
  CHECK(info[0].z == 0.0);
  CHECK(info[0].amp_paper == 0.0);
  // the oracle-derived amplitude also vanishes: equal couplings mean the
  // flip-flop does not modulate the Overhauser field
  CHECK(info[0].amp_oracle == 0.0);
}

TEST_CASE("zero dipolar coupling contributes nothing") {
  // bond along [111] with B || [001] sits at the magic angle
  BathConfiguration bath;
  const double quarter = cn::si_lattice_a0 / 4;
  bath.positions = {Eigen::Vector3d(1e-9, 0, 0),
                    Eigen::Vector3d(1e-9 + quarter, quarter, quarter)};
  bath.hyperfine = {cn::two_pi * 1.2e5, cn::two_pi * 0.8e5};
  bath.orientation = FieldOrientation::from_spec("001");
  const auto tr = make_transition(0.0695, 0.0340);
  // tiny dipolar floor screens out the floating-point residue of 3cos^2-1
  const auto bank =
      pair_flipflop_terms(bath, tr, 1e-9, 1e-6, PairAmplitudeMode::oracle_derived);
  // only the two static singleton terms survive
  CHECK(bank.amps.size() == 2);
}

TEST_CASE("pair frequencies and oracle-derived amplitudes match the dense oracle") {
  for (double s_pair : {0.105, 0.9264}) {
    const auto tr = make_transition(0.5 * (s_pair + 0.03), 0.5 * (s_pair - 0.03));
    for (double a2 : {60.0, 115.0, 119.5}) {
      auto bath = two_spin_bath(120, a2);
      std::vector<PairTermInfo> info;
      pair_flipflop_terms(bath, tr, 1e-9, 0.0, PairAmplitudeMode::oracle_derived,
                          &info);
      REQUIRE(info.size() == 1);
      const double w_oracle = oracles::pair_oracle_frequency(bath, 0, 1, tr);
      CHECK(info[0].omega == doctest::Approx(w_oracle).epsilon(1e-10));
      const double amp_oracle = oracles::pair_oracle_amplitude(bath, 0, 1, tr);
      CHECK(info[0].amp_oracle == doctest::Approx(amp_oracle).epsilon(1e-10));
      // paper amplitude carries the extra back-action factor s^2
      CHECK(info[0].amp_paper ==
            doctest::Approx(info[0].amp_oracle * s_pair * s_pair).epsilon(1e-10));
    }
  }
}

TEST_CASE("stretched-exponential fit recovers its own model") {
  CorrelationCurve curve;
  const double c0 = 3.7e8, delta2 = 2.9e8, tau = 4.2e-3, n = 1.4;
  for (int k = 0; k <= 200; ++k) {
    const double t = 20e-3 * k / 200;
    curve.times.push_back(t);
    curve.values.push_back(c0 + delta2 * (std::exp(-std::pow(t / tau, n)) - 1));
  }
  const StretchedExpFit fit = fit_stretched_exponential(curve);
  CHECK(fit.identifiable);
  CHECK(fit.delta * fit.delta == doctest::Approx(delta2).epsilon(1e-6));
  CHECK(fit.tau == doctest::Approx(tau).epsilon(1e-6));
  CHECK(fit.n_stretch == doctest::Approx(n).epsilon(1e-6));
  CHECK(fit.covers_decay);
  CHECK(fit.residual_rms < 1e-6 * delta2);
}

TEST_CASE("constant curve is flagged unidentifiable") {
  CorrelationCurve curve;
  for (int k = 0; k <= 50; ++k) {
    curve.times.push_back(k * 1e-4);
    curve.values.push_back(5e7);
  }
  const StretchedExpFit fit = fit_stretched_exponential(curve);
  CHECK(fit.delta == 0.0);
  CHECK(!fit.identifiable);
}

TEST_CASE("spectrum of an exponential correlation is a lorentzian") {
  CorrelationCurve curve;
  const double delta2 = 1.8e8, tau = 2e-3, c_inf = 4e8;
  for (int k = 0; k <= 4000; ++k) {
    const double t = 40e-3 * k / 4000;  // 20 tau window
    curve.times.push_back(t);
    curve.values.push_back(c_inf + delta2 * std::exp(-t / tau));
  }
  StretchedExpFit fit;
  fit.c0 = c_inf + delta2;
  fit.delta = std::sqrt(delta2);
  fit.tau = tau;
  fit.n_stretch = 1.0;

  std::vector<double> omegas;
  for (double wt : {0.0, 0.3, 1.0, 3.0, 10.0, 30.0}) {
    omegas.push_back(wt / tau);
  }
  bool nonneg = true;
  const NoiseSpectrum spec = spectrum(curve, fit, omegas, &nonneg);
  CHECK(nonneg);
  CHECK(spec.static_weight == doctest::Approx(c_inf).epsilon(1e-12));
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    const double want = 2 * delta2 * tau / (1 + omegas[i] * omegas[i] * tau * tau);
    CHECK(spec.values[i] == doctest::Approx(want).epsilon(1e-4));
  }
}

TEST_CASE("static noise gives a pure delta spectrum") {
  CorrelationCurve curve;
  for (int k = 0; k <= 100; ++k) {
    curve.times.push_back(k * 1e-4);
    curve.values.push_back(2.5e8);
  }
  const StretchedExpFit fit = fit_stretched_exponential(curve);
  const NoiseSpectrum spec = spectrum(curve, fit, {0.0, 1e2, 1e3, 1e4});
  CHECK(spec.static_weight == doctest::Approx(2.5e8).epsilon(1e-12));
  for (double v : spec.values) CHECK(std::abs(v) < 1e-9 * 2.5e8 * 1e-4);
}

TEST_CASE("parseval: spectrum integral plus static weight recovers C(0)") {
  // exact lorentzian on a dense grid with its power-law tail
  const double delta2 = 1.8e8, tau = 2e-3, c_inf = 0.7e8;
  NoiseSpectrum spec;
  spec.static_weight = c_inf;
  spec.tail = NoiseSpectrum::Tail::power_law;
  spec.tail_exponent = 2.0;
  const int npts = 4000;
  for (int k = 0; k < npts; ++k) {
    const double w = 1e-3 / tau * std::pow(3e5, double(k) / (npts - 1));
    spec.omegas.push_back(w);
    spec.values.push_back(2 * delta2 * tau / (1 + w * w * tau * tau));
  }
  // integrate with the same log-log cell model used by the evaluators
  double integral = spec.omegas.front() * spec.values.front();
  for (int k = 0; k + 1 < npts; ++k) {
    const double wa = spec.omegas[k], wb = spec.omegas[k + 1];
    const double sa = spec.values[k], sb = spec.values[k + 1];
    const double q = std::log(sb / sa) / std::log(wb / wa);
    integral += sa * wa / (q + 1) * (std::pow(wb / wa, q + 1) - 1.0);
  }
  // tail: S ~ S_N (w/W)^-2
  integral += spec.values.back() * spec.omegas.back();
  const double c0_check = integral / cn::pi + spec.static_weight;
  CHECK(c0_check == doctest::Approx(delta2 + c_inf).epsilon(1e-6));
}
