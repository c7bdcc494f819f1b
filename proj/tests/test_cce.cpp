#include <doctest.h>

#include <cmath>
#include <complex>

#include "spinbath/cce.hpp"
#include "spinbath/errors.hpp"
#include "spinbath/noise_model.hpp"
#include "oracles.hpp"

using namespace spinbath;
namespace cn = spinbath::constants;

namespace {

// hand-built bath: positions in nm, couplings in kHz (converted)
BathConfiguration make_bath(std::vector<Eigen::Vector3d> pos_nm,
                            std::vector<double> a_khz,
                            const std::string& orient = "110") {
  BathConfiguration bath;
  bath.seed = 99;
  for (auto& p : pos_nm) bath.positions.push_back(p * 1e-9);
  for (double a : a_khz) bath.hyperfine.push_back(cn::two_pi * 1e3 * a);
  bath.orientation = FieldOrientation::from_spec(orient);
  return bath;
}

TransitionPair make_transition(double p_plus, double p_minus) {
  TransitionPair tr;
  tr.p_plus = p_plus;
  tr.p_minus = p_minus;
  tr.p_e = std::abs(p_plus - p_minus);
  tr.s = std::abs(p_plus) + std::abs(p_minus);
  tr.frequency = cn::two_pi * 7e9;
  return tr;
}

CCEOptions options_with_grid(double t_max, int points, int order = 2) {
  CCEOptions opt;
  opt.max_order = order;
  opt.pair_cutoff = 1.0e-9;
  opt.time_grid.resize(points);
  for (int k = 0; k < points; ++k) opt.time_grid[k] = t_max * k / (points - 1);
  return opt;
}

// two spins ~0.4 nm apart near each other plus far-away pairs
BathConfiguration close_pair_bath() {
  return make_bath({{1.0, 0.2, 0.1}, {1.2, 0.5, 0.3}}, {180.0, 95.0});
}

}  // namespace

TEST_CASE("cluster enumeration follows the connectivity graph") {
  // three mutually close spins
  auto bath = make_bath({{1, 0, 0}, {1.3, 0, 0}, {1.15, 0.25, 0}},
                        {100, 90, 80});
  CCEOptions opt = options_with_grid(1e-3, 3, 2);
  auto clusters = enumerate_clusters(bath, opt);
  REQUIRE(clusters.size() == 6);  // 3 singletons + 3 pairs
  CHECK(clusters[0].indices == std::vector<int>{0});
  CHECK(clusters[3].indices == std::vector<int>{0, 1});

  opt.max_order = 3;
  clusters = enumerate_clusters(bath, opt);
  REQUIRE(clusters.size() == 7);
  CHECK(clusters[6].indices == std::vector<int>{0, 1, 2});

  // far apart: no pairs
  auto sparse = make_bath({{1, 0, 0}, {4, 0, 0}}, {10, 10});
  clusters = enumerate_clusters(sparse, opt);
  CHECK(clusters.size() == 2);
}

TEST_CASE("singleton under an echo has |L| = 1 exactly") {
  auto bath = make_bath({{0.8, 0.4, -0.2}}, {250});
  const auto tr = make_transition(0.35, 0.15);
  const auto opt = options_with_grid(5e-3, 5, 1);
  const CceContext ctx = make_cce_context(bath, tr, opt);
  for (double t : {1e-4, 2e-3, 5e-3}) {
    const auto l = cluster_coherence(ctx, {{0}}, PulseSequence::hahn(), t);
    CHECK(std::abs(std::abs(l) - 1.0) < 1e-14);
  }
  // ramsey singleton dephases but stays real: cos(P_e A t / 2)
  const double a = bath.hyperfine[0];
  const double t = 3e-4;
  const auto l = cluster_coherence(ctx, {{0}}, PulseSequence::ramsey(), t);
  CHECK(l.real() == doctest::Approx(std::cos(0.5 * tr.p_e * a * t)).epsilon(1e-10));
}

TEST_CASE("isolated pair matches the dense oracle") {
  auto bath = close_pair_bath();
  const auto tr = make_transition(0.0695, 0.0340);
  CCEOptions opt = options_with_grid(20e-3, 9, 2);
  opt.mean_field = false;
  const CceContext ctx = make_cce_context(bath, tr, opt);
  for (const auto& seq :
       {PulseSequence::hahn(), PulseSequence::ramsey(), PulseSequence::cpmg(4)}) {
    for (double t : {1e-3, 8e-3, 20e-3}) {
      const auto mine = cluster_coherence(ctx, {{0, 1}}, seq, t);
      const auto oracle = oracles::brute_force_coherence(bath, tr, seq, t);
      CHECK(std::abs(mine - oracle) < 1e-12);
    }
  }
}

TEST_CASE("exact clock transition freezes the coherence") {
  auto bath = close_pair_bath();
  const auto tr = make_transition(0.0525, 0.0525);  // P+ = P-
  const auto opt = options_with_grid(50e-3, 11, 2);
  const CceContext ctx = make_cce_context(bath, tr, opt);
  const auto curve = cce_coherence(ctx, PulseSequence::cpmg(4), 1);
  for (const auto& v : curve.values) {
    CHECK(std::abs(v - 1.0) < 1e-12);
  }
}

TEST_CASE("cce-2 on isolated pairs equals the full-space brute force") {
  // two tight pairs, 1 mm apart: exactly factorizable
  auto bath = make_bath({{1.0, 0, 0},
                         {1.25, 0.2, 0},
                         {1e6, 1e6, 0},
                         {1e6 + 0.3, 1e6 + 0.15, 0.05}},
                        {120, 75, 140, 60});
  const auto tr = make_transition(0.0695, 0.0340);
  CCEOptions opt = options_with_grid(15e-3, 7, 2);
  const CceContext ctx = make_cce_context(bath, tr, opt);
  const auto curve = cce_coherence(ctx, PulseSequence::hahn(), 1);
  for (std::size_t k = 0; k < curve.times.size(); ++k) {
    const auto oracle = oracles::brute_force_coherence(
        bath, tr, PulseSequence::hahn(), curve.times[k]);
    CHECK(std::abs(curve.values[k] - oracle) < 1e-10);
  }
  CHECK(curve.values[0] == std::complex<double>(1.0, 0.0));
}

TEST_CASE("correlation: singleton constant, pair trace identity") {
  auto bath = close_pair_bath();
  const auto tr = make_transition(0.0525, 0.0525);
  const auto opt = options_with_grid(10e-3, 5, 2);
  const CceContext ctx = make_cce_context(bath, tr, opt);

  const double a0 = bath.hyperfine[0];
  for (double t : {0.0, 1e-3, 7e-3}) {
    CHECK(cluster_correlation(ctx, {{0}}, t) ==
          doctest::Approx(a0 * a0 / 4).epsilon(1e-12));
  }
  // raw pair value at t = 0 is (A_i^2 + A_j^2)/4; connected part vanishes
  const double a1 = bath.hyperfine[1];
  const double connected0 = cluster_correlation(ctx, {{0, 1}}, 0.0);
  CHECK(std::abs(connected0) < 1e-12 * (a0 * a0 + a1 * a1) / 4);

  // against the dense correlation oracle
  BathConfiguration pair = bath;
  for (double t : {0.5e-3, 2e-3}) {
    const double mine = cluster_correlation(ctx, {{0}}, t) +
                        cluster_correlation(ctx, {{1}}, t) +
                        cluster_correlation(ctx, {{0, 1}}, t);
    const double oracle = oracles::brute_force_correlation(pair, tr, t);
    CHECK(mine == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("correlation curve: C(0) identity and dipolar-off constancy") {
  auto bath = make_bath({{0.9, 0, 0},
                         {1.1, 0.3, 0.1},
                         {-0.8, 0.5, 0.4},
                         {-1.0, 0.7, 0.55}},
                        {200, 130, 90, 60});
  const auto tr = make_transition(0.0695, 0.0340);
  CCEOptions opt = options_with_grid(10e-3, 21, 2);
  const CceContext ctx = make_cce_context(bath, tr, opt);
  const auto curve = cce_correlation(ctx, 1);

  double want_c0 = 0;
  for (double a : bath.hyperfine) want_c0 += a * a / 4;
  CHECK(curve.c0() == doctest::Approx(want_c0).epsilon(1e-12));
  for (double v : curve.values) CHECK(std::abs(v) <= curve.c0() * (1 + 1e-12));

  // dipolar floor above every |D|: no pair clusters, C(t) stays at C(0)
  CCEOptions frozen = opt;
  frozen.dipolar_floor = 1e9;
  const CceContext ctx2 = make_cce_context(bath, tr, frozen);
  const auto flat = cce_correlation(ctx2, 1);
  for (double v : flat.values) {
    CHECK(v == doctest::Approx(want_c0).epsilon(1e-12));
  }
}

TEST_CASE("pair-dominated bath: cce-2 equals the analytic pair sum") {
  auto bath = make_bath({{1.0, 0, 0},
                         {1.25, 0.2, 0},
                         {1e5, 1e5, 0},
                         {1e5 + 0.3, 1e5 + 0.15, 0.05}},
                        {120, 75, 140, 60});
  const auto tr = make_transition(0.0695, 0.0340);
  CCEOptions opt = options_with_grid(10e-3, 17, 2);
  opt.mean_field = false;
  const CceContext ctx = make_cce_context(bath, tr, opt);
  const auto curve = cce_correlation(ctx, 1);
  const auto bank =
      pair_flipflop_terms(bath, tr, opt.pair_cutoff, opt.dipolar_floor,
                          PairAmplitudeMode::oracle_derived);
  for (std::size_t k = 0; k < curve.times.size(); ++k) {
    double want = 0;
    for (std::size_t m = 0; m < bank.amps.size(); ++m) {
      want += bank.amps[m] * std::cos(bank.omegas[m] * curve.times[k]);
    }
    CHECK(curve.values[k] == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("uniform bath zeeman shift changes nothing") {
  auto bath = make_bath({{1.0, 0, 0}, {1.25, 0.2, 0}, {0.4, -0.9, 0.3}},
                        {150, 85, 40});
  const auto tr = make_transition(0.0695, 0.0340);
  std::vector<std::complex<double>> ref_l;
  std::vector<double> ref_c;
  for (double zeeman : {0.0, cn::two_pi * 4.2e6, -cn::two_pi * 1.1e7}) {
    CCEOptions opt = options_with_grid(8e-3, 9, 2);
    opt.bath_zeeman = zeeman;
    const CceContext ctx = make_cce_context(bath, tr, opt);
    const auto curve = cce_coherence(ctx, PulseSequence::cpmg(2), 1);
    const auto corr = cce_correlation(ctx, 1);
    if (zeeman == 0.0) {
      ref_l = curve.values;
      ref_c = corr.values;
    } else {
      for (std::size_t k = 0; k < ref_l.size(); ++k) {
        CHECK(std::abs(curve.values[k] - ref_l[k]) < 1e-10);
        CHECK(std::abs(corr.values[k] - ref_c[k]) <= 1e-10 * std::abs(ref_c[0]));
      }
    }
  }
}

TEST_CASE("weaker back-action suppresses the pair decoherence envelope") {
  // pointwise |L(t)| oscillates through nodes, so monotonicity in the
  // coupling scale holds for the envelope: max over a window of 1 - |L|
  auto bath = close_pair_bath();
  const double s = 0.5;
  const auto opt = options_with_grid(20e-3, 65, 2);
  for (const auto& seq : {PulseSequence::hahn(), PulseSequence::cpmg(4)}) {
    double prev = -1;
    for (double lam : {1.0, 0.7, 0.4, 0.1}) {
      const double pe = 0.3 * lam;
      const auto tr = make_transition(0.5 * (s + pe), 0.5 * (s - pe));
      const CceContext ctx = make_cce_context(bath, tr, opt);
      double depth = 0;
      for (double t : opt.time_grid) {
        if (t == 0) continue;
        depth = std::max(
            depth, 1.0 - std::abs(cluster_coherence(ctx, {{0, 1}}, seq, t)));
      }
      if (prev >= 0) CHECK(depth <= prev + 1e-12);
      prev = depth;
    }
  }
}

TEST_CASE("deterministic across thread counts") {
  auto bath = make_bath({{1.0, 0, 0},
                         {1.25, 0.2, 0},
                         {0.4, -0.9, 0.3},
                         {0.55, -0.7, 0.35},
                         {-1.2, 0.1, 0.8}},
                        {150, 85, 60, 45, 30});
  const auto tr = make_transition(0.0528, 0.0520);
  const auto opt = options_with_grid(20e-3, 33, 2);
  const CceContext ctx = make_cce_context(bath, tr, opt);
  const auto one = cce_coherence(ctx, PulseSequence::cpmg(4), 1);
  const auto two = cce_coherence(ctx, PulseSequence::cpmg(4), 2);
  for (std::size_t k = 0; k < one.values.size(); ++k) {
    CHECK(one.values[k] == two.values[k]);
  }
}

TEST_CASE("cluster size above 3 is rejected") {
  auto bath = make_bath({{1, 0, 0}, {1.2, 0, 0}, {1.4, 0, 0}, {1.6, 0, 0}},
                        {10, 10, 10, 10});
  const auto tr = make_transition(0.3, 0.1);
  const auto opt = options_with_grid(1e-3, 3, 2);
  const CceContext ctx = make_cce_context(bath, tr, opt);
  CHECK_THROWS_AS(cluster_coherence(ctx, {{0, 1, 2, 3}}, PulseSequence::hahn(), 1e-4),
                  ConfigError);
}
