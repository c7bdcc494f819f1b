#include "spinbath/presets.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <thread>

#include "spinbath/cce.hpp"
#include "spinbath/csv.hpp"
#include "spinbath/errors.hpp"
#include "spinbath/experiment.hpp"
#include "spinbath/parallel.hpp"
#include "spinbath/spectroscopy.hpp"

namespace spinbath {

namespace {

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  return hw > 0 ? hw : 1;
}

std::vector<double> uniform_grid(double t_max, int points) {
  std::vector<double> g(points);
  for (int k = 0; k < points; ++k) g[k] = t_max * k / (points - 1);
  return g;
}

// Mean CCE correlation over an ensemble of bath placements.
CorrelationCurve ensemble_correlation(const ExperimentConfig& cfg,
                                      double field, int threads) {
  const TransitionPair tr = transition(cfg.donor, field, cfg.plus, cfg.minus);
  CCEOptions opts = cfg.cce;
  opts.bath_zeeman = constants::gamma_si29 * field;
  opts.time_grid = uniform_grid(cfg.t_max, cfg.time_points);

  std::vector<CorrelationCurve> curves(cfg.n_configurations);
  parallel_for(cfg.n_configurations, threads, [&](std::size_t k) {
    const BathConfiguration bath = configuration_bath(cfg, k);
    const CceContext ctx = make_cce_context(bath, tr, opts);
    curves[k] = cce_correlation(ctx, 1);
  });

  CorrelationCurve mean;
  mean.times = opts.time_grid;
  mean.values.assign(mean.times.size(), 0.0);
  for (const auto& c : curves) {
    for (std::size_t g = 0; g < mean.values.size(); ++g) {
      mean.values[g] += c.values[g] / cfg.n_configurations;
    }
  }
  return mean;
}

void preset_fig1(std::uint64_t seed, const std::string& dir, int threads) {
  ExperimentConfig cfg;
  cfg.root_seed = seed;
  cfg.orientation_spec = "110";
  cfg.t_max = 0.04;
  cfg.time_points = 161;
  cfg.n_configurations = 1;

  const ClockTransition ct = find_clock_transition(
      cfg.donor, cfg.plus, cfg.minus, cfg.ct_window_lo, cfg.ct_window_hi);

  // (a) CCE order convergence, one configuration
  {
    csv::Writer w(dir + "/fig1a_orders.csv");
    w.comment("relative correlation C(t) - C(0) at the CT, single configuration");
    w.header({"t_s", "C1_rel", "C2_rel", "C3_rel"});
    std::vector<CorrelationCurve> by_order(3);
    for (int order = 1; order <= 3; ++order) {
      ExperimentConfig c1 = cfg;
      c1.cce.max_order = order;
      by_order[order - 1] = ensemble_correlation(c1, ct.field, threads);
    }
    for (std::size_t g = 0; g < by_order[0].times.size(); ++g) {
      w.row({by_order[0].times[g],
             by_order[0].values[g] - by_order[0].c0(),
             by_order[1].values[g] - by_order[1].c0(),
             by_order[2].values[g] - by_order[2].c0()});
    }
  }

  // (b, c) orientation sweep, ensemble averages and fits
  {
    const std::vector<double> thetas{0, 15, 30, 45, 54.7356, 70, 90};
    ExperimentConfig c2 = cfg;
    c2.n_configurations = 20;

    csv::Writer fits(dir + "/fig1c_fits.csv");
    fits.comment("stretched-exponential fits of the averaged correlation");
    fits.header({"theta_deg", "delta2_rad2_s2", "tau_s", "n", "residual_rms"});

    csv::Writer curves(dir + "/fig1b_curves.csv");
    curves.comment("averaged C(t) - C(0) per orientation angle");
    std::vector<std::string> names{"t_s"};
    for (double th : thetas) names.push_back("theta" + std::to_string(int(th)));
    curves.header(names);

    std::vector<CorrelationCurve> mean_curves;
    for (double th : thetas) {
      ExperimentConfig c3 = c2;
      c3.orientation_spec = "theta:" + std::to_string(th);
      mean_curves.push_back(ensemble_correlation(c3, ct.field, threads));
      const StretchedExpFit fit = fit_stretched_exponential(mean_curves.back());
      fits.row({th, fit.delta * fit.delta, fit.tau, fit.n_stretch,
                fit.residual_rms});
    }
    for (std::size_t g = 0; g < mean_curves[0].times.size(); ++g) {
      std::vector<double> row{mean_curves[0].times[g]};
      for (const auto& c : mean_curves) row.push_back(c.values[g] - c.c0());
      curves.row(row);
    }
  }
}

void preset_fig2(std::uint64_t seed, const std::string& dir, int threads) {
  struct Stage {
    const char* tag;
    bool offsets;
    double field;  // tesla (offset or absolute)
    LevelLabel plus, minus;
    double t_max;
  };
  const std::vector<Stage> stages{
      {"near_ct", true, 0.15e-3, {5, -1}, {4, -2}, 0.12},
      {"off_9mt", true, 9e-3, {5, -1}, {4, -2}, 0.02},
      {"off_35mt", true, 35e-3, {5, -1}, {4, -2}, 0.008},
      {"high_field", false, 468.65e-3, {5, -4}, {4, -5}, 0.004},
  };

  csv::Writer t2csv(dir + "/fig2e_t2.csv");
  t2csv.comment("1/e coherence times per field, model, sequence");
  t2csv.header({"field_mT", "pulses", "t2_quantum_s", "t2_gaussian_s",
                "q_lower_bound", "g_lower_bound"});

  for (const auto& st : stages) {
    ExperimentConfig cfg;
    cfg.root_seed = seed;
    cfg.plus = st.plus;
    cfg.minus = st.minus;
    cfg.fields_are_offsets = st.offsets;
    cfg.fields = {st.field};
    cfg.model = ModelKind::both;
    cfg.sequences = {"hahn", "cpmg:4", "cpmg:16"};
    cfg.t_max = st.t_max;
    cfg.time_points = 121;
    cfg.n_configurations = 20;
    cfg.threads = threads;

    const ExperimentOutput out = run_experiment(cfg);
    export_results(out, cfg, dir + "/" + st.tag);

    for (const auto& s : cfg.sequences) {
      const EnsembleResult* q = nullptr;
      const EnsembleResult* g = nullptr;
      for (const auto& r : out.results) {
        if (r.sequence != s) continue;
        (r.model == "quantum" ? q : g) = &r;
      }
      if (!q || !g) continue;
      const int pulses = PulseSequence::parse(s).pulse_count();
      t2csv.row({q->field * 1e3, double(pulses), q->t2.t2, g->t2.t2,
                 double(q->t2.lower_bound), double(g->t2.lower_bound)});
    }
  }
}

// Quantum coherence of one configuration on a log-spaced total-time grid.
CoherenceCurve quantum_curve_on_grid(const ExperimentConfig& cfg, double field,
                                     const PulseSequence& seq,
                                     const std::vector<double>& tgrid,
                                     int threads) {
  const TransitionPair tr = transition(cfg.donor, field, cfg.plus, cfg.minus);
  CCEOptions opts = cfg.cce;
  opts.bath_zeeman = constants::gamma_si29 * field;
  opts.time_grid = tgrid;
  const BathConfiguration bath = configuration_bath(cfg, 0);
  const CceContext ctx = make_cce_context(bath, tr, opts);
  return cce_coherence(ctx, seq, threads);
}

std::vector<double> log_grid_with_zero(double lo, double hi, int points) {
  std::vector<double> g{0.0};
  for (int k = 0; k < points; ++k) {
    g.push_back(lo * std::pow(hi / lo, double(k) / (points - 1)));
  }
  return g;
}

void preset_fig3(std::uint64_t seed, const std::string& dir, int threads) {
  ExperimentConfig cfg;
  cfg.root_seed = seed;
  cfg.n_configurations = 1;

  const ClockTransition ct = find_clock_transition(
      cfg.donor, cfg.plus, cfg.minus, cfg.ct_window_lo, cfg.ct_window_hi);

  struct Stage {
    const char* tag;
    double field;
    double t_lo, t_hi;
    std::vector<int> predict_n;
  };
  const std::vector<Stage> stages{
      {"near_ct", ct.field + 1e-3, 2e-3, 0.35, {32, 100}},
      {"far_ct", ct.field + 100e-3, 2e-4, 0.02, {16, 50, 100, 200}},
  };

  for (const auto& st : stages) {
    const TransitionPair tr =
        transition(cfg.donor, st.field, cfg.plus, cfg.minus);
    const std::vector<double> tgrid = log_grid_with_zero(st.t_lo, st.t_hi, 18);

    const CoherenceCurve probe = quantum_curve_on_grid(
        cfg, st.field, PulseSequence::cpmg(100), tgrid, threads);

    CoherenceCurve for_extraction;
    for (std::size_t k = 1; k < probe.times.size(); ++k) {
      const double l = std::abs(probe.values[k]);
      if (l <= 0.02) break;
      for_extraction.times.push_back(probe.times[k]);
      for_extraction.values.push_back(l);
    }
    const NoiseSpectrum extracted =
        extract_spectrum(for_extraction, 100, tr.p_e);

    {
      csv::Writer w(dir + "/" + std::string(st.tag) + "_extracted.csv");
      w.comment("CPMG-100 extracted spectrum");
      w.header({"omega_rad_s", "S"});
      for (std::size_t i = 0; i < extracted.omegas.size(); ++i) {
        w.row({extracted.omegas[i], extracted.values[i]});
      }
    }

    csv::Writer cmp(dir + "/" + std::string(st.tag) + "_prediction.csv");
    cmp.comment("quantum vs spectroscopy-predicted decoherence");
    cmp.header({"pulses", "t_s", "abs_L_quantum", "abs_L_predicted"});
    for (int n : st.predict_n) {
      const CoherenceCurve q = quantum_curve_on_grid(
          cfg, st.field, PulseSequence::cpmg(n), tgrid, threads);
      std::vector<double> pts(tgrid.begin() + 1, tgrid.end());
      const Prediction pred =
          predict_decoherence(extracted, PulseSequence::cpmg(n), tr.p_e, pts);
      for (std::size_t k = 0; k < pts.size(); ++k) {
        cmp.row({double(n), pts[k], std::abs(q.values[k + 1]),
                 std::abs(pred.curve.values[k])});
      }
    }
  }
}

}  // namespace

void run_scenario_preset(const std::string& name, std::uint64_t seed,
                         const std::string& out_dir, int threads) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir);
  const int nt = resolve_threads(threads);
  if (name == "fig1") return preset_fig1(seed, out_dir, nt);
  if (name == "fig2") return preset_fig2(seed, out_dir, nt);
  if (name == "fig3") return preset_fig3(seed, out_dir, nt);
  throw ConfigError("unknown preset: " + name + " (expected fig1|fig2|fig3)");
}

}  // namespace spinbath
