#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinbath/cce.hpp"
#include "spinbath/config_file.hpp"
#include "spinbath/curves.hpp"
#include "spinbath/donor.hpp"
#include "spinbath/noise_model.hpp"

namespace spinbath {

enum class ModelKind { quantum, gaussian, both };
enum class GaussianSource { cce, pairs };

// One ensemble study: a transition at one or more fields, a set of pulse
// sequences, averaged over seeded bath placements.
struct ExperimentConfig {
  DonorParams donor;
  LevelLabel plus{5, -1};
  LevelLabel minus{4, -2};

  bool fields_are_offsets = true;  // fields are offsets from the located CT
  double ct_window_lo = 0.05;      // tesla
  double ct_window_hi = 0.12;
  std::vector<double> fields{0.0};  // tesla

  std::string orientation_spec = "110";
  LatticeSpec lattice;
  IsotropicEnvelope hyperfine;
  std::string hyperfine_table;  // when set, overrides the envelope

  CCEOptions cce;  // bath_zeeman and time_grid are filled per run

  ModelKind model = ModelKind::both;
  GaussianSource gaussian_source = GaussianSource::cce;
  PairAmplitudeMode amplitude_mode = PairAmplitudeMode::oracle_derived;

  std::vector<std::string> sequences{"hahn"};
  double t_max = 0.05;    // s
  int time_points = 201;
  int n_configurations = 20;
  std::uint64_t root_seed = 1;
  int threads = 0;  // 0 = hardware concurrency

  static ExperimentConfig from_file(const ConfigFile& file);
  std::string canonical() const;  // stable serialization
  std::uint64_t hash() const;     // FNV-1a of canonical()
};

struct CoherenceTimeResult {
  double t2 = 0;             // s
  bool lower_bound = false;  // curve never crossed the threshold
};

// First crossing of |L| = threshold, linearly interpolated; t_max with the
// lower_bound flag when there is no crossing.
CoherenceTimeResult coherence_time(const CoherenceCurve& curve,
                                   double threshold = 0.36787944117144233);

struct EnsembleResult {
  double field = 0;  // tesla
  std::string model;
  std::string sequence;
  TransitionPair transition;
  std::vector<CoherenceCurve> configurations;
  CoherenceCurve mean;
  std::vector<double> abs_variance;  // across configurations, per time point
  CoherenceTimeResult t2;
  double stretch_exponent = 0;  // of the mean |L| decay (0 if undetermined)
};

struct ExperimentOutput {
  double ct_field = 0;  // tesla; the located CT when offsets are used
  std::vector<EnsembleResult> results;
};

// Deterministic for a fixed root seed and any thread count: configuration k
// draws its bath from child_seed(root, configuration, k) and results are
// reduced in index order.
ExperimentOutput run_experiment(const ExperimentConfig& config);

// Writes per-(field, model, sequence) mean curves (CSV: t_s, abs_L, re_L,
// im_L), optional per-configuration curves, and summary.json with T2 per
// entry. Every file carries the schema tag and config hash in a comment.
void export_results(const ExperimentOutput& output,
                    const ExperimentConfig& config, const std::string& dir,
                    bool per_config_curves = false);

// Deterministic bath for configuration k of a run.
BathConfiguration configuration_bath(const ExperimentConfig& config,
                                     std::uint64_t index);

}  // namespace spinbath
