#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spinbath/config_file.hpp"
#include "spinbath/errors.hpp"
#include "spinbath/experiment.hpp"

using namespace spinbath;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.lattice.cutoff_radius = 2.2e-9;  // ~100 sites, a handful of spins
  c.cce.pair_cutoff = 0.8e-9;
  c.sequences = {"hahn"};
  c.t_max = 2e-3;
  c.time_points = 17;
  c.n_configurations = 3;
  c.root_seed = 7;
  c.threads = 2;
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("coherence_time interpolation and lower bound") {
  CoherenceCurve curve;
  const double tau = 1.3e-3;
  for (int k = 0; k <= 100; ++k) {
    curve.times.push_back(4e-3 * k / 100);
    curve.values.push_back(std::exp(-curve.times.back() / tau));
  }
  const auto r = coherence_time(curve);
  CHECK(!r.lower_bound);
  CHECK(r.t2 == doctest::Approx(tau).epsilon(1e-3));

  CoherenceCurve flat;
  for (int k = 0; k <= 10; ++k) {
    flat.times.push_back(1e-3 * k / 10);
    flat.values.push_back(0.9);
  }
  const auto rb = coherence_time(flat);
  CHECK(rb.lower_bound);
  CHECK(rb.t2 == flat.times.back());
}

TEST_CASE("experiment is deterministic and byte-stable") {
  const ExperimentConfig c = small_config();
  const ExperimentOutput a = run_experiment(c);
  ExperimentConfig c1 = c;
  c1.threads = 1;
  const ExperimentOutput b = run_experiment(c1);
  REQUIRE(a.results.size() == b.results.size());
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    for (std::size_t k = 0; k < a.results[i].mean.values.size(); ++k) {
      CHECK(a.results[i].mean.values[k] == b.results[i].mean.values[k]);
    }
  }

  const std::string dir1 = "exp_out_1";
  const std::string dir2 = "exp_out_2";
  export_results(a, c, dir1);
  export_results(b, c1, dir2);
  // thread count is not part of the contract hash; outputs must match
  for (const auto& entry : std::filesystem::directory_iterator(dir1)) {
    const std::string name = entry.path().filename().string();
    CHECK(slurp(dir1 + "/" + name) == slurp(dir2 + "/" + name));
  }
  std::filesystem::remove_all(dir1);
  std::filesystem::remove_all(dir2);
}

TEST_CASE("exact clock transition keeps both models at unity") {
  ExperimentConfig c = small_config();
  c.model = ModelKind::both;
  const ClockTransition ct = find_clock_transition(
      c.donor, c.plus, c.minus, c.ct_window_lo, c.ct_window_hi);
  c.fields_are_offsets = false;
  c.fields = {ct.field_pe_zero};  // P+ - P- = 0 here
  c.n_configurations = 1;
  const ExperimentOutput out = run_experiment(c);
  REQUIRE(out.results.size() == 2);
  for (const auto& res : out.results) {
    for (const auto& v : res.mean.values) {
      CHECK(std::abs(v - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("config parsing, hashing, schema") {
  const std::string text = R"(
# sample config
[donor]
a0_ghz = 1.4754

[transition]
plus = 5,-1
minus = 4,-2
fields_mt = 0.15, 9
fields_are_offsets = true

[bath]
orientation = 110
cutoff_nm = 2.0

[run]
sequences = hahn, cpmg:4
t_max_s = 0.002
time_points = 9
n_configurations = 2
seed = 3
)";
  const ExperimentConfig c = ExperimentConfig::from_file(ConfigFile::parse_string(text));
  CHECK(c.fields.size() == 2);
  CHECK(c.fields[0] == doctest::Approx(0.15e-3));
  CHECK(c.sequences.size() == 2);
  CHECK(c.lattice.cutoff_radius == doctest::Approx(2e-9));

  ExperimentConfig c2 = c;
  CHECK(c.hash() == c2.hash());
  c2.root_seed = 4;
  CHECK(c.hash() != c2.hash());
  ExperimentConfig c3 = c;
  c3.t_max *= 1.0000001;
  CHECK(c.hash() != c3.hash());

  CHECK_THROWS_AS(
      ExperimentConfig::from_file(ConfigFile::parse_string("[model]\nkind = fancy")),
      ConfigError);
  CHECK_THROWS_AS(ConfigFile::parse_string("novalue"), ConfigError);
}

TEST_CASE("export schema: curve columns and summary json") {
  ExperimentConfig c = small_config();
  c.model = ModelKind::quantum;
  c.n_configurations = 1;
  c.time_points = 5;
  const ExperimentOutput out = run_experiment(c);
  const std::string dir = "exp_out_schema";
  export_results(out, c, dir);

  bool found_curve = false;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.find(".csv") == std::string::npos) continue;
    found_curve = true;
    const std::string body = slurp(entry.path().string());
    CHECK(body.find("t_s,abs_L,re_L,im_L") != std::string::npos);
    CHECK(body.find("config=") != std::string::npos);
  }
  CHECK(found_curve);
  const std::string js = slurp(dir + "/summary.json");
  CHECK(js.find("\"t2_1e_s\"") != std::string::npos);
  CHECK(js.find("\"config_hash\"") != std::string::npos);
  CHECK(js.find("\"sequence\"") != std::string::npos);
  std::filesystem::remove_all(dir);
}
