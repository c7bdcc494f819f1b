// spinbath-ct: central-spin decoherence simulator for a donor spin in a
// diamond-lattice nuclear bath. Quantum cluster-expansion and semiclassical
// Gaussian noise models, plus dynamical-decoupling noise spectroscopy.

#include <CLI11.hpp>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "spinbath/cce.hpp"
#include "spinbath/csv.hpp"
#include "spinbath/errors.hpp"
#include "spinbath/experiment.hpp"
#include "spinbath/kernels.hpp"
#include "spinbath/noise_model.hpp"
#include "spinbath/presets.hpp"
#include "spinbath/spectroscopy.hpp"

using namespace spinbath;

namespace {

struct DonorFlags {
  double a0_ghz = 1.4754;
  double gamma_e = 27.997;  // GHz/T
  double gamma_n = 6.963;   // MHz/T

  void attach(CLI::App* cmd) {
    cmd->add_option("--a0-ghz", a0_ghz, "donor hyperfine A0 / 2pi (GHz)");
    cmd->add_option("--gamma-e-ghz", gamma_e, "electron gamma / 2pi (GHz/T)");
    cmd->add_option("--gamma-n-mhz", gamma_n, "host nuclear gamma / 2pi (MHz/T)");
  }
  DonorParams params() const {
    DonorParams p;
    p.hyperfine_a0 = constants::two_pi * 1e9 * a0_ghz;
    p.gamma_e = constants::two_pi * 1e9 * gamma_e;
    p.gamma_n = constants::two_pi * 1e6 * gamma_n;
    return p;
  }
};

std::pair<LevelLabel, LevelLabel> parse_pair(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("--pair must be 'F,mF:F,mF'");
  }
  return {parse_level_label(text.substr(0, colon)),
          parse_level_label(text.substr(colon + 1))};
}

CorrelationCurve load_correlation(const std::string& path) {
  CorrelationCurve curve;
  for (const auto& row : csv::read_rows(path, 2)) {
    curve.times.push_back(row[0]);
    curve.values.push_back(row[1]);
  }
  if (curve.times.size() < 2) throw IoError(path + ": no samples");
  return curve;
}

void write_spectrum(const std::string& path, const NoiseSpectrum& spec) {
  csv::Writer w(path);
  w.comment("spinbath-ct spectrum v1");
  w.comment("static_weight_rad2_s2 = " + std::to_string(spec.static_weight));
  w.comment("tail_exponent = " + std::to_string(spec.tail_exponent));
  w.header({"omega_rad_s", "S"});
  for (std::size_t i = 0; i < spec.omegas.size(); ++i) {
    w.row({spec.omegas[i], spec.values[i]});
  }
}

NoiseSpectrum load_spectrum(const std::string& path) {
  NoiseSpectrum spec;
  for (const auto& row : csv::read_rows(path, 2)) {
    spec.omegas.push_back(row[0]);
    spec.values.push_back(row[1]);
  }
  if (spec.omegas.empty()) throw IoError(path + ": empty spectrum");
  spec.tail = NoiseSpectrum::Tail::power_law;
  return spec;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"central-spin decoherence in a nuclear spin bath"};
  app.require_subcommand(1);

  // ---- levels ------------------------------------------------------------
  auto* levels_cmd = app.add_subcommand("levels", "donor eigenlevels at a field");
  DonorFlags levels_donor;
  levels_donor.attach(levels_cmd);
  double levels_field_mt = 79.9;
  std::string levels_out;
  levels_cmd->add_option("--field", levels_field_mt, "field (mT)")->required();
  levels_cmd->add_option("--out", levels_out, "output CSV (default stdout)");

  // ---- find-ct -----------------------------------------------------------
  auto* ct_cmd = app.add_subcommand("find-ct", "locate a clock transition");
  DonorFlags ct_donor;
  ct_donor.attach(ct_cmd);
  std::string ct_pair = "5,-1:4,-2";
  std::string ct_range = "50:120";
  ct_cmd->add_option("--pair", ct_pair, "levels as F,mF:F,mF");
  ct_cmd->add_option("--range", ct_range, "search window mT, lo:hi");

  // ---- bath --------------------------------------------------------------
  auto* bath_cmd = app.add_subcommand("bath", "sample a bath configuration");
  std::uint64_t bath_seed = 1;
  double bath_cutoff_nm = 4.5, bath_abundance = constants::si29_abundance;
  double bath_amax_mhz = 6.0, bath_rbohr_nm = 1.1;
  std::string bath_orient = "110", bath_out = "bath.csv", bath_table;
  bath_cmd->add_option("--seed", bath_seed, "placement seed");
  bath_cmd->add_option("--cutoff", bath_cutoff_nm, "cutoff radius (nm)");
  bath_cmd->add_option("--abundance", bath_abundance, "occupation probability");
  bath_cmd->add_option("--orient", bath_orient, "001|110|111|theta:<deg>|x,y,z");
  bath_cmd->add_option("--a-max-mhz", bath_amax_mhz, "hyperfine envelope peak");
  bath_cmd->add_option("--r-bohr-nm", bath_rbohr_nm, "hyperfine envelope radius");
  bath_cmd->add_option("--table", bath_table, "hyperfine table CSV (overrides envelope)");
  bath_cmd->add_option("--out", bath_out, "output CSV");

  // ---- coherence / correlation ------------------------------------------
  struct SimFlags {
    DonorFlags donor;
    std::string pair = "5,-1:4,-2";
    double field_mt = -1;     // absolute; < 0 means use CT + offset
    double offset_mt = 0;     // from CT
    std::uint64_t seed = 1;
    int configs = 1;
    double cutoff_nm = 4.5, abundance = constants::si29_abundance;
    double amax_mhz = 6.0, rbohr_nm = 1.1;
    std::string orient = "110";
    int order = 2;
    double pair_cutoff_nm = 0.8;
    bool no_mean_field = false;
    double tmax_s = 0.05;
    int points = 201;
    int threads = 0;

    void attach(CLI::App* cmd) {
      donor.attach(cmd);
      cmd->add_option("--pair", pair, "levels as F,mF:F,mF");
      cmd->add_option("--field", field_mt, "absolute field (mT)");
      cmd->add_option("--offset", offset_mt, "offset from the CT (mT)");
      cmd->add_option("--seed", seed, "root seed");
      cmd->add_option("--configs", configs, "bath configurations");
      cmd->add_option("--cutoff", cutoff_nm, "bath cutoff (nm)");
      cmd->add_option("--abundance", abundance, "site occupation");
      cmd->add_option("--orient", orient, "field orientation");
      cmd->add_option("--a-max-mhz", amax_mhz, "hyperfine envelope peak");
      cmd->add_option("--r-bohr-nm", rbohr_nm, "hyperfine envelope radius");
      cmd->add_option("--order", order, "CCE order (1-3)");
      cmd->add_option("--pair-cutoff", pair_cutoff_nm, "pair cutoff (nm)");
      cmd->add_flag("--no-mean-field", no_mean_field, "disable frozen-spin detunings");
      cmd->add_option("--tmax", tmax_s, "max evolution time (s)");
      cmd->add_option("--points", points, "time grid points");
      cmd->add_option("--threads", threads, "worker threads (0 = auto)");
    }

    ExperimentConfig config() const {
      ExperimentConfig c;
      c.donor = donor.params();
      const auto [p, m] = parse_pair(pair);
      c.plus = p;
      c.minus = m;
      if (field_mt >= 0) {
        c.fields_are_offsets = false;
        c.fields = {field_mt * 1e-3};
      } else {
        c.fields_are_offsets = true;
        c.fields = {offset_mt * 1e-3};
      }
      c.orientation_spec = orient;
      c.lattice.cutoff_radius = cutoff_nm * 1e-9;
      c.lattice.abundance = abundance;
      c.hyperfine.a_max = constants::two_pi * 1e6 * amax_mhz;
      c.hyperfine.r_bohr = rbohr_nm * 1e-9;
      c.cce.max_order = order;
      c.cce.pair_cutoff = pair_cutoff_nm * 1e-9;
      c.cce.mean_field = !no_mean_field;
      c.t_max = tmax_s;
      c.time_points = points;
      c.n_configurations = configs;
      c.root_seed = seed;
      c.threads = threads;
      return c;
    }
  };

  auto* coh_cmd = app.add_subcommand("coherence", "L(t) under a pulse sequence");
  SimFlags coh_flags;
  coh_flags.attach(coh_cmd);
  std::string coh_model = "quantum", coh_seq = "hahn", coh_domain = "freq";
  std::string coh_out = "coherence";
  coh_cmd->add_option("--model", coh_model, "quantum|gaussian|both");
  coh_cmd->add_option("--seq", coh_seq, "ramsey|hahn|cpmg:N|custom:f1,f2,...");
  coh_cmd->add_option("--domain", coh_domain, "gaussian evaluation: time|freq");
  coh_cmd->add_option("--out", coh_out, "output directory");

  auto* corr_cmd = app.add_subcommand("correlation", "bath correlation C(t)");
  SimFlags corr_flags;
  corr_flags.attach(corr_cmd);
  std::string corr_out;
  corr_cmd->add_option("--out", corr_out, "output CSV (default stdout)");

  // ---- fit-correlation / spectrum -----------------------------------------
  auto* fit_cmd = app.add_subcommand("fit-correlation",
                                     "stretched-exponential fit of C(t)");
  std::string fit_in;
  fit_cmd->add_option("input", fit_in, "correlation CSV (t_s, C)")->required();

  auto* spec_cmd = app.add_subcommand("spectrum",
                                      "noise spectrum from a correlation CSV");
  std::string spec_in, spec_out = "spectrum.csv";
  spec_cmd->add_option("input", spec_in, "correlation CSV (t_s, C)")->required();
  spec_cmd->add_option("-o,--out", spec_out, "output CSV");

  // ---- spectroscopy -------------------------------------------------------
  auto* sp_cmd = app.add_subcommand("spectroscopy", "DD noise spectroscopy");
  sp_cmd->require_subcommand(1);
  auto* sp_extract = sp_cmd->add_subcommand("extract", "spectrum from CPMG-N curves");
  std::string spx_in, spx_out = "extracted.csv";
  int spx_n = 100;
  double spx_pe = 0.1;
  sp_extract->add_option("input", spx_in, "coherence CSV (t_s, abs_L[, re, im])")
      ->required();
  sp_extract->add_option("--n", spx_n, "CPMG pulse count");
  sp_extract->add_option("--pe", spx_pe, "P_e scaling factor")->required();
  sp_extract->add_option("-o,--out", spx_out, "output CSV");

  auto* sp_predict = sp_cmd->add_subcommand("predict", "L(t) from a spectrum");
  std::string spp_in, spp_seq = "cpmg:32", spp_out = "predicted.csv";
  double spp_pe = 0.1, spp_tmax = 0.01;
  int spp_points = 101;
  sp_predict->add_option("input", spp_in, "spectrum CSV")->required();
  sp_predict->add_option("--seq", spp_seq, "pulse sequence");
  sp_predict->add_option("--pe", spp_pe, "P_e scaling factor")->required();
  sp_predict->add_option("--tmax", spp_tmax, "max total time (s)");
  sp_predict->add_option("--points", spp_points, "time grid points");
  sp_predict->add_option("-o,--out", spp_out, "output CSV");

  // ---- run ----------------------------------------------------------------
  auto* run_cmd = app.add_subcommand("run", "ensemble experiment from a config");
  std::string run_config, run_preset, run_out = "out";
  std::uint64_t run_seed = 0;
  bool run_per_config = false;
  int run_threads = 0;
  run_cmd->add_option("--config", run_config, "experiment config file");
  run_cmd->add_option("--preset", run_preset, "fig1|fig2|fig3");
  run_cmd->add_option("--seed", run_seed, "override root seed (0 = keep)");
  run_cmd->add_option("--out", run_out, "output directory");
  run_cmd->add_option("--threads", run_threads, "worker threads (0 = auto)");
  run_cmd->add_flag("--per-config", run_per_config, "emit per-configuration curves");

  CLI11_PARSE(app, argc, argv);

  if (levels_cmd->parsed()) {
    const DonorParams donor = levels_donor.params();
    const LevelSet set = eigensystem(donor, levels_field_mt * 1e-3);
    csv::Writer w(levels_out.empty() ? "/dev/stdout" : levels_out);
    w.comment("spinbath-ct levels v1");
    w.header({"B_mT", "F", "mF", "energy_GHz", "P"});
    for (const auto& lv : set.levels) {
      w.row({levels_field_mt, lv.label.f, lv.label.mf,
             lv.energy / (constants::two_pi * 1e9), lv.sz});
    }
    return 0;
  }

  if (ct_cmd->parsed()) {
    const auto [p, m] = parse_pair(ct_pair);
    const auto colon = ct_range.find(':');
    if (colon == std::string::npos) throw ConfigError("--range must be lo:hi");
    const double lo = std::stod(ct_range.substr(0, colon)) * 1e-3;
    const double hi = std::stod(ct_range.substr(colon + 1)) * 1e-3;
    const ClockTransition ct =
        find_clock_transition(ct_donor.params(), p, m, lo, hi);
    std::printf("ct_field_mT,%.9f\n", ct.field * 1e3);
    std::printf("pe_zero_field_mT,%.9f\n", ct.field_pe_zero * 1e3);
    std::printf("difference_mT,%.9f\n", ct.difference * 1e3);
    return 0;
  }

  if (bath_cmd->parsed()) {
    LatticeSpec spec;
    spec.cutoff_radius = bath_cutoff_nm * 1e-9;
    spec.abundance = bath_abundance;
    HyperfineModel model;
    if (!bath_table.empty()) {
      model = HyperfineTable::load(bath_table);
    } else {
      model = IsotropicEnvelope{constants::two_pi * 1e6 * bath_amax_mhz,
                                bath_rbohr_nm * 1e-9};
    }
    const BathConfiguration bath = generate_bath(
        spec, bath_seed, FieldOrientation::from_spec(bath_orient), model);
    csv::Writer w(bath_out);
    w.comment("spinbath-ct bath v1 seed=" + std::to_string(bath_seed));
    w.header({"x_nm", "y_nm", "z_nm", "A_kHz"});
    for (std::size_t i = 0; i < bath.size(); ++i) {
      w.row({bath.positions[i].x() * 1e9, bath.positions[i].y() * 1e9,
             bath.positions[i].z() * 1e9,
             bath.hyperfine[i] / (constants::two_pi * 1e3)});
    }
    std::fprintf(stderr, "%zu occupied sites -> %s\n", bath.size(),
                 bath_out.c_str());
    return 0;
  }

  if (coh_cmd->parsed()) {
    ExperimentConfig c = coh_flags.config();
    if (coh_model == "quantum") c.model = ModelKind::quantum;
    else if (coh_model == "gaussian") c.model = ModelKind::gaussian;
    else if (coh_model == "both") c.model = ModelKind::both;
    else throw ConfigError("--model must be quantum|gaussian|both");
    c.sequences = {coh_seq};
    if (coh_domain != "time" && coh_domain != "freq") {
      throw ConfigError("--domain must be time|freq");
    }
    // the gaussian ensemble path evaluates Eq-(5) through the exact cosine
    // comb; --domain time reroutes through the double-integral quadrature
    const ExperimentOutput out = run_experiment(c);
    export_results(out, c, coh_out, run_per_config);
    if (c.model != ModelKind::quantum && coh_domain == "time") {
      // cross-evaluate the gaussian mean through the time-domain route
      const BathConfiguration bath = configuration_bath(c, 0);
      const double field = c.fields_are_offsets
                               ? out.ct_field + c.fields[0]
                               : c.fields[0];
      const TransitionPair tr = transition(c.donor, field, c.plus, c.minus);
      CCEOptions opts = c.cce;
      opts.bath_zeeman = constants::gamma_si29 * field;
      std::vector<double> grid(c.time_points);
      for (int k = 0; k < c.time_points; ++k) {
        grid[k] = c.t_max * k / (c.time_points - 1);
      }
      opts.time_grid = grid;
      const CceContext ctx = make_cce_context(bath, tr, opts);
      const CorrelationCurve corr = cce_correlation(ctx, 1);
      const StretchedExpFit fit = fit_stretched_exponential(corr);
      const PulseSequence seq = PulseSequence::parse(coh_seq);
      csv::Writer w(coh_out + "/gaussian_time_domain_cfg0.csv");
      w.comment("spinbath-ct curve v1 (time-domain quadrature, config 0)");
      w.header({"t_s", "abs_L", "re_L", "im_L"});
      for (double t : grid) {
        const double l = gaussian_coherence_time(corr, fit, seq, tr.p_e, t);
        w.row({t, l, l, 0.0});
      }
    }
    std::fprintf(stderr, "wrote %s/summary.json\n", coh_out.c_str());
    return 0;
  }

  if (corr_cmd->parsed()) {
    ExperimentConfig c = corr_flags.config();
    const double base =
        c.fields_are_offsets
            ? find_clock_transition(c.donor, c.plus, c.minus, c.ct_window_lo,
                                    c.ct_window_hi)
                  .field
            : 0.0;
    const double field = base + c.fields[0];
    const TransitionPair tr = transition(c.donor, field, c.plus, c.minus);
    CCEOptions opts = c.cce;
    opts.bath_zeeman = constants::gamma_si29 * field;
    std::vector<double> grid(c.time_points);
    for (int k = 0; k < c.time_points; ++k) {
      grid[k] = c.t_max * k / (c.time_points - 1);
    }
    opts.time_grid = grid;

    std::vector<double> mean(grid.size(), 0.0);
    for (int k = 0; k < c.n_configurations; ++k) {
      const BathConfiguration bath = configuration_bath(c, k);
      const CceContext ctx = make_cce_context(bath, tr, opts);
      const CorrelationCurve curve = cce_correlation(ctx, c.threads > 0 ? c.threads : 2);
      for (std::size_t g = 0; g < grid.size(); ++g) {
        mean[g] += curve.values[g] / c.n_configurations;
      }
    }
    csv::Writer w(corr_out.empty() ? "/dev/stdout" : corr_out);
    w.comment("spinbath-ct correlation v1");
    w.header({"t_s", "C_rad2_per_s2"});
    for (std::size_t g = 0; g < grid.size(); ++g) w.row({grid[g], mean[g]});
    return 0;
  }

  if (fit_cmd->parsed()) {
    const CorrelationCurve curve = load_correlation(fit_in);
    const StretchedExpFit fit = fit_stretched_exponential(curve);
    std::printf("c0,%.9e\n", fit.c0);
    std::printf("delta_rad_s,%.9e\n", fit.delta);
    std::printf("tau_s,%.9e\n", fit.tau);
    std::printf("n_stretch,%.9f\n", fit.n_stretch);
    std::printf("residual_rms,%.9e\n", fit.residual_rms);
    std::printf("converged,%d\n", fit.converged ? 1 : 0);
    std::printf("identifiable,%d\n", fit.identifiable ? 1 : 0);
    std::printf("covers_decay,%d\n", fit.covers_decay ? 1 : 0);
    return 0;
  }

  if (spec_cmd->parsed()) {
    const CorrelationCurve curve = load_correlation(spec_in);
    const StretchedExpFit fit = fit_stretched_exponential(curve);
    bool nonneg = true;
    const NoiseSpectrum spec =
        spectrum(curve, fit, default_spectrum_grid(curve), &nonneg);
    write_spectrum(spec_out, spec);
    if (!nonneg) {
      std::fprintf(stderr, "warning: spectrum has negative values beyond tolerance\n");
    }
    return 0;
  }

  if (sp_extract->parsed()) {
    CoherenceCurve curve;
    for (const auto& row : csv::read_rows(spx_in)) {
      if (row.size() < 2) throw IoError(spx_in + ": need t_s, abs_L columns");
      curve.times.push_back(row[0]);
      curve.values.push_back(row[1]);
    }
    const NoiseSpectrum spec = extract_spectrum(curve, spx_n, spx_pe);
    write_spectrum(spx_out, spec);
    return 0;
  }

  if (sp_predict->parsed()) {
    const NoiseSpectrum spec = load_spectrum(spp_in);
    std::vector<double> grid(spp_points);
    for (int k = 0; k < spp_points; ++k) {
      grid[k] = spp_tmax * (k + 1) / spp_points;
    }
    const Prediction pred = predict_decoherence(
        spec, PulseSequence::parse(spp_seq), spp_pe, grid);
    csv::Writer w(spp_out);
    w.comment("spinbath-ct curve v1 (predicted)");
    if (pred.flagged) w.comment("flagged: filter band poorly covered");
    w.header({"t_s", "abs_L", "re_L", "im_L"});
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double l = std::abs(pred.curve.values[k]);
      w.row({grid[k], l, pred.curve.values[k].real(), pred.curve.values[k].imag()});
    }
    if (pred.flagged) {
      std::fprintf(stderr, "warning: prediction flagged (coverage < 90%%)\n");
    }
    return 0;
  }

  if (run_cmd->parsed()) {
    if (!run_preset.empty()) {
      run_scenario_preset(run_preset, run_seed == 0 ? 1 : run_seed, run_out,
                          run_threads);
      return 0;
    }
    if (run_config.empty()) {
      throw ConfigError("run: provide --config or --preset");
    }
    ExperimentConfig c =
        ExperimentConfig::from_file(ConfigFile::parse_file(run_config));
    if (run_seed != 0) c.root_seed = run_seed;
    if (run_threads != 0) c.threads = run_threads;
    const ExperimentOutput out = run_experiment(c);
    export_results(out, c, run_out, run_per_config);
    std::fprintf(stderr, "wrote %s/summary.json\n", run_out.c_str());
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const NumericalBreakdown& e) {
    std::fprintf(stderr, "numerical breakdown: %s\n", e.what());
    return 3;
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
