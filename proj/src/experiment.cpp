#include "spinbath/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "spinbath/csv.hpp"
#include "spinbath/errors.hpp"
#include "spinbath/kernels.hpp"
#include "spinbath/parallel.hpp"
#include "spinbath/rng.hpp"

namespace spinbath {

namespace {

const char* model_name(ModelKind m) {
  switch (m) {
    case ModelKind::quantum:
      return "quantum";
    case ModelKind::gaussian:
      return "gaussian";
    default:
      return "both";
  }
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += (c == ':' || c == ',' || c == ' ') ? '_' : c;
  return out;
}

double fit_stretch_exponent(const CoherenceCurve& mean) {
  // slope of ln(-ln|L|) vs ln t over the usable decay window
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t k = 0; k < mean.times.size(); ++k) {
    const double l = std::abs(mean.values[k]);
    if (mean.times[k] <= 0 || l >= 0.95 || l <= 0.05) continue;
    const double x = std::log(mean.times[k]);
    const double y = std::log(-std::log(l));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 3) return 0.0;
  const double denom = m * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) return 0.0;
  return (m * sxy - sx * sy) / denom;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const ConfigFile& f) {
  ExperimentConfig c;
  c.donor.hyperfine_a0 =
      constants::two_pi * 1e9 * f.get_double("donor.a0_ghz", 1.4754);
  c.donor.gamma_e = constants::two_pi * 1e9 *
                    f.get_double("donor.gamma_e_ghz_per_t", 27.997);
  c.donor.gamma_n = constants::two_pi * 1e6 *
                    f.get_double("donor.gamma_n_mhz_per_t", 6.963);
  c.donor.nuclear_spin = f.get_double("donor.nuclear_spin", 4.5);

  c.plus = parse_level_label(f.get_string("transition.plus", "5,-1"));
  c.minus = parse_level_label(f.get_string("transition.minus", "4,-2"));
  c.fields_are_offsets = f.get_bool("transition.fields_are_offsets", true);
  if (f.has("transition.fields_mt")) {
    c.fields.clear();
    for (const auto& s : f.get_list("transition.fields_mt")) {
      c.fields.push_back(std::stod(s) * 1e-3);
    }
  }
  c.ct_window_lo = f.get_double("transition.ct_window_lo_mt", 50.0) * 1e-3;
  c.ct_window_hi = f.get_double("transition.ct_window_hi_mt", 120.0) * 1e-3;

  c.orientation_spec = f.get_string("bath.orientation", "110");
  c.lattice.cutoff_radius = f.get_double("bath.cutoff_nm", 4.5) * 1e-9;
  c.lattice.abundance =
      f.get_double("bath.abundance", constants::si29_abundance);
  c.hyperfine.a_max = constants::two_pi * 1e6 *
                      f.get_double("bath.a_max_mhz",
                                   constants::default_hyperfine_amax /
                                       (constants::two_pi * 1e6));
  c.hyperfine.r_bohr =
      f.get_double("bath.r_bohr_nm",
                   constants::default_hyperfine_rbohr * 1e9) *
      1e-9;
  c.hyperfine_table = f.get_string("bath.hyperfine_table", "");
  if (!c.hyperfine_table.empty() &&
      !std::filesystem::exists(c.hyperfine_table)) {
    throw ConfigError("hyperfine table not found: " + c.hyperfine_table);
  }

  c.cce.max_order = static_cast<int>(f.get_int("cce.order", 2));
  c.cce.pair_cutoff = f.get_double("cce.pair_cutoff_nm", 0.8) * 1e-9;
  c.cce.dipolar_floor =
      constants::two_pi * f.get_double("cce.dipolar_floor_hz", 0.0);
  c.cce.mean_field = f.get_bool("cce.mean_field", true);

  const std::string kind = f.get_string("model.kind", "both");
  if (kind == "quantum") c.model = ModelKind::quantum;
  else if (kind == "gaussian") c.model = ModelKind::gaussian;
  else if (kind == "both") c.model = ModelKind::both;
  else throw ConfigError("model.kind must be quantum|gaussian|both");

  const std::string src = f.get_string("model.gaussian_source", "cce");
  if (src == "cce") c.gaussian_source = GaussianSource::cce;
  else if (src == "pairs") c.gaussian_source = GaussianSource::pairs;
  else throw ConfigError("model.gaussian_source must be cce|pairs");

  const std::string amp = f.get_string("model.amplitude_mode", "oracle");
  if (amp == "paper") c.amplitude_mode = PairAmplitudeMode::paper;
  else if (amp == "oracle") c.amplitude_mode = PairAmplitudeMode::oracle_derived;
  else throw ConfigError("model.amplitude_mode must be paper|oracle");

  if (f.has("run.sequences")) c.sequences = f.get_list("run.sequences");
  for (const auto& s : c.sequences) PulseSequence::parse(s);  // validate now
  c.t_max = f.get_double("run.t_max_s", 0.05);
  c.time_points = static_cast<int>(f.get_int("run.time_points", 201));
  c.n_configurations = static_cast<int>(f.get_int("run.n_configurations", 20));
  if (c.n_configurations < 1) throw ConfigError("n_configurations must be >= 1");
  c.root_seed = static_cast<std::uint64_t>(f.get_int("run.seed", 1));
  c.threads = static_cast<int>(f.get_int("run.threads", 0));
  return c;
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os.precision(17);
  os << "donor.a0=" << donor.hyperfine_a0 << "\n"
     << "donor.gamma_e=" << donor.gamma_e << "\n"
     << "donor.gamma_n=" << donor.gamma_n << "\n"
     << "donor.nuclear_spin=" << donor.nuclear_spin << "\n"
     << "transition.plus=" << plus.str() << "\n"
     << "transition.minus=" << minus.str() << "\n"
     << "transition.offsets=" << fields_are_offsets << "\n"
     << "transition.ct_window=" << ct_window_lo << ":" << ct_window_hi << "\n";
  os << "transition.fields=";
  for (double b : fields) os << b << ";";
  os << "\n";
  os << "bath.orientation=" << orientation_spec << "\n"
     << "bath.a0_lattice=" << lattice.a0 << "\n"
     << "bath.cutoff=" << lattice.cutoff_radius << "\n"
     << "bath.abundance=" << lattice.abundance << "\n"
     << "bath.a_max=" << hyperfine.a_max << "\n"
     << "bath.r_bohr=" << hyperfine.r_bohr << "\n"
     << "bath.table=" << hyperfine_table << "\n"
     << "cce.order=" << cce.max_order << "\n"
     << "cce.pair_cutoff=" << cce.pair_cutoff << "\n"
     << "cce.floor=" << cce.dipolar_floor << "\n"
     << "cce.mean_field=" << cce.mean_field << "\n"
     << "model.kind=" << model_name(model) << "\n"
     << "model.source=" << (gaussian_source == GaussianSource::cce ? "cce" : "pairs")
     << "\n"
     << "model.amplitude="
     << (amplitude_mode == PairAmplitudeMode::paper ? "paper" : "oracle") << "\n";
  os << "run.sequences=";
  for (const auto& s : sequences) os << s << ";";
  os << "\n";
  os << "run.t_max=" << t_max << "\n"
     << "run.points=" << time_points << "\n"
     << "run.configs=" << n_configurations << "\n"
     << "run.seed=" << root_seed << "\n";
  return os.str();
}

std::uint64_t ExperimentConfig::hash() const {
  // FNV-1a, 64-bit
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

CoherenceTimeResult coherence_time(const CoherenceCurve& curve,
                                   double threshold) {
  CoherenceTimeResult r;
  for (std::size_t k = 1; k < curve.times.size(); ++k) {
    const double a = std::abs(curve.values[k - 1]);
    const double b = std::abs(curve.values[k]);
    if (a >= threshold && b < threshold) {
      const double w = (a - threshold) / (a - b);
      r.t2 = curve.times[k - 1] + w * (curve.times[k] - curve.times[k - 1]);
      return r;
    }
  }
  r.t2 = curve.times.empty() ? 0.0 : curve.times.back();
  r.lower_bound = true;
  return r;
}

BathConfiguration configuration_bath(const ExperimentConfig& config,
                                     std::uint64_t index) {
  const FieldOrientation orient =
      FieldOrientation::from_spec(config.orientation_spec);
  HyperfineModel model;
  if (!config.hyperfine_table.empty()) {
    model = HyperfineTable::load(config.hyperfine_table);
  } else {
    model = config.hyperfine;
  }
  const std::uint64_t seed =
      child_seed(config.root_seed, SeedPurpose::configuration, index);
  return generate_bath(config.lattice, seed, orient, model);
}

ExperimentOutput run_experiment(const ExperimentConfig& config) {
  ExperimentOutput out;

  double base = 0;
  if (config.fields_are_offsets) {
    const ClockTransition ct =
        find_clock_transition(config.donor, config.plus, config.minus,
                              config.ct_window_lo, config.ct_window_hi);
    out.ct_field = ct.field;
    base = ct.field;
  }

  std::vector<double> grid(config.time_points);
  for (int k = 0; k < config.time_points; ++k) {
    grid[k] = config.t_max * k / (config.time_points - 1);
  }

  int threads = config.threads;
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  const int outer = std::min(threads, config.n_configurations);
  const int inner = config.n_configurations >= threads ? 1 : threads;

  std::vector<PulseSequence> seqs;
  for (const auto& s : config.sequences) seqs.push_back(PulseSequence::parse(s));

  std::vector<ModelKind> models;
  if (config.model == ModelKind::both) {
    models = {ModelKind::quantum, ModelKind::gaussian};
  } else {
    models = {config.model};
  }

  for (double field_entry : config.fields) {
    const double field = config.fields_are_offsets ? base + field_entry
                                                   : field_entry;
    const TransitionPair tr =
        transition(config.donor, field, config.plus, config.minus);

    CCEOptions options = config.cce;
    options.time_grid = grid;
    options.bath_zeeman = constants::gamma_si29 * field;

    // per configuration, per model, per sequence
    const std::size_t nseq = seqs.size();
    std::vector<std::vector<std::vector<CoherenceCurve>>> curves(
        models.size(),
        std::vector<std::vector<CoherenceCurve>>(
            nseq, std::vector<CoherenceCurve>(config.n_configurations)));

    parallel_for(config.n_configurations, outer, [&](std::size_t k) {
      const BathConfiguration bath = configuration_bath(config, k);
      const CceContext ctx = make_cce_context(bath, tr, options);
      for (std::size_t mi = 0; mi < models.size(); ++mi) {
        for (std::size_t si = 0; si < nseq; ++si) {
          CoherenceCurve curve;
          if (models[mi] == ModelKind::quantum) {
            curve = cce_coherence(ctx, seqs[si], inner);
          } else {
            CosineTermBank terms;
            if (config.gaussian_source == GaussianSource::cce) {
              terms = correlation_terms(ctx, inner);
            } else {
              terms = pair_flipflop_terms(bath, tr, options.pair_cutoff,
                                          options.dipolar_floor,
                                          config.amplitude_mode);
            }
            const FilterCosineSeries filter(seqs[si]);
            curve.times = grid;
            curve.values.resize(grid.size());
            for (std::size_t g = 0; g < grid.size(); ++g) {
              curve.values[g] =
                  gaussian_coherence_terms(terms, filter, tr.p_e, grid[g]);
            }
          }
          curve.metadata = std::string(model_name(models[mi])) + " " +
                           seqs[si].str() + " seed=" + std::to_string(k);
          curves[mi][si][k] = std::move(curve);
        }
      }
    });

    for (std::size_t mi = 0; mi < models.size(); ++mi) {
      for (std::size_t si = 0; si < nseq; ++si) {
        EnsembleResult res;
        res.field = field;
        res.model = model_name(models[mi]);
        res.sequence = seqs[si].str();
        res.transition = tr;
        res.configurations = std::move(curves[mi][si]);

        res.mean.times = grid;
        res.mean.values.assign(grid.size(), 0.0);
        const double w = 1.0 / config.n_configurations;
        for (const auto& c : res.configurations) {
          kernels::accumulate_scaled(c.values, w, res.mean.values);
        }
        res.abs_variance.assign(grid.size(), 0.0);
        for (const auto& c : res.configurations) {
          for (std::size_t g = 0; g < grid.size(); ++g) {
            const double d =
                std::abs(c.values[g]) - std::abs(res.mean.values[g]);
            res.abs_variance[g] += d * d * w;
          }
        }
        res.t2 = coherence_time(res.mean);
        res.stretch_exponent = fit_stretch_exponent(res.mean);
        out.results.push_back(std::move(res));
      }
    }
  }
  return out;
}

void export_results(const ExperimentOutput& output,
                    const ExperimentConfig& config, const std::string& dir,
                    bool per_config_curves) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir);

  char hash_tag[32];
  std::snprintf(hash_tag, sizeof hash_tag, "%016llx",
                static_cast<unsigned long long>(config.hash()));

  auto write_curve = [&](const std::string& path, const CoherenceCurve& c) {
    csv::Writer w(path);
    w.comment(std::string("spinbath-ct curve v1 config=") + hash_tag);
    w.header({"t_s", "abs_L", "re_L", "im_L"});
    for (std::size_t k = 0; k < c.times.size(); ++k) {
      w.row({c.times[k], std::abs(c.values[k]), c.values[k].real(),
             c.values[k].imag()});
    }
  };

  nlohmann::ordered_json summary;
  summary["schema"] = "spinbath-ct/summary/v1";
  summary["config_hash"] = hash_tag;
  summary["ct_field_mT"] = output.ct_field * 1e3;
  summary["results"] = nlohmann::ordered_json::array();

  for (const auto& res : output.results) {
    char field_tag[32];
    std::snprintf(field_tag, sizeof field_tag, "%.6gmT", res.field * 1e3);
    const std::string stem = std::string(field_tag) + "_" + res.model + "_" +
                             sanitize(res.sequence);
    write_curve(dir + "/" + stem + ".csv", res.mean);
    if (per_config_curves) {
      for (std::size_t k = 0; k < res.configurations.size(); ++k) {
        write_curve(dir + "/" + stem + "_cfg" + std::to_string(k) + ".csv",
                    res.configurations[k]);
      }
    }
    nlohmann::ordered_json entry;
    entry["field_mT"] = res.field * 1e3;
    entry["model"] = res.model;
    entry["sequence"] = res.sequence;
    entry["p_plus"] = res.transition.p_plus;
    entry["p_minus"] = res.transition.p_minus;
    entry["p_e"] = res.transition.p_e;
    entry["t2_1e_s"] = res.t2.t2;
    entry["t2_lower_bound"] = res.t2.lower_bound;
    entry["stretch_exponent"] = res.stretch_exponent;
    entry["n_configurations"] = res.configurations.size();
    entry["curve_file"] = stem + ".csv";
    summary["results"].push_back(entry);
  }

  std::ofstream js(dir + "/summary.json");
  if (!js) throw IoError("cannot write summary.json");
  js << summary.dump(2) << "\n";
}

}  // namespace spinbath
