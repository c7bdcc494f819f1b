#include "spinbath/cce.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>

#include "spinbath/errors.hpp"
#include "spinbath/kernels.hpp"
#include "spinbath/parallel.hpp"
#include "spinbath/rng.hpp"

namespace spinbath {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using cplx = std::complex<double>;

// Basis of a k-spin cluster: bit l of the index is 0 for m_l = +1/2 and 1 for
// m_l = -1/2, spin 0 least significant.
double spin_m(int basis, int l) { return (basis >> l) & 1 ? -0.5 : 0.5; }

struct ClusterOperators {
  int dim = 0;
  VectorXd beta;    // diagonal of beta^z_C = sum_l A_l I_l^z
  MatrixXd h_bath;  // intra-cluster dipolar + Zeeman + frozen-spin detunings
};

ClusterOperators build_operators(const CceContext& ctx, const Cluster& cluster) {
  const auto& bath = *ctx.bath;
  const int k = static_cast<int>(cluster.indices.size());
  if (k < 1 || k > 3) {
    throw ConfigError("cluster size must be 1..3 for dense propagation");
  }
  ClusterOperators ops;
  ops.dim = 1 << k;
  ops.beta = VectorXd::Zero(ops.dim);
  ops.h_bath = MatrixXd::Zero(ops.dim, ops.dim);

  // per-spin longitudinal fields: uniform Zeeman plus mean-field detuning
  std::vector<double> local(k, -ctx.options.bath_zeeman);
  if (!ctx.frozen_spins.empty()) {
    for (int l = 0; l < k; ++l) {
      double h = ctx.detuning_full[cluster.indices[l]];
      for (int m = 0; m < k; ++m) {
        if (m == l) continue;
        const double d = dipolar_coupling(bath.positions[cluster.indices[l]],
                                          bath.positions[cluster.indices[m]],
                                          bath.orientation);
        h -= 4.0 * d * ctx.frozen_spins[cluster.indices[m]];
      }
      local[l] += h;
    }
  }

  std::vector<double> dintra(k * k, 0.0);
  for (int l = 0; l < k; ++l) {
    for (int m = l + 1; m < k; ++m) {
      const double d = dipolar_coupling(bath.positions[cluster.indices[l]],
                                        bath.positions[cluster.indices[m]],
                                        bath.orientation);
      dintra[l * k + m] = d;
    }
  }

  for (int b = 0; b < ops.dim; ++b) {
    double beta = 0, diag = 0;
    for (int l = 0; l < k; ++l) {
      const double m = spin_m(b, l);
      beta += bath.hyperfine[cluster.indices[l]] * m;
      diag += local[l] * m;
    }
    for (int l = 0; l < k; ++l) {
      for (int m = l + 1; m < k; ++m) {
        diag += 4.0 * dintra[l * k + m] * spin_m(b, l) * spin_m(b, m);
      }
    }
    ops.beta(b) = beta;
    ops.h_bath(b, b) = diag;
    // flip-flop D (I+_l I-_m + I-_l I+_m): couples down/up -> up/down
    for (int l = 0; l < k; ++l) {
      for (int m = l + 1; m < k; ++m) {
        if (((b >> l) & 1) == 1 && ((b >> m) & 1) == 0) {
          const int b2 = b ^ (1 << l) ^ (1 << m);
          ops.h_bath(b2, b) += dintra[l * k + m];
          ops.h_bath(b, b2) += dintra[l * k + m];
        }
      }
    }
  }
  return ops;
}

struct BranchSystem {
  MatrixXd vecs;
  VectorXd vals;
};

BranchSystem diagonalize(const MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(h);
  return {solver.eigenvectors(), solver.eigenvalues()};
}

MatrixXcd segment_propagator(const BranchSystem& sys, double dt) {
  const int d = static_cast<int>(sys.vals.size());
  Eigen::VectorXcd phases(d);
  for (int i = 0; i < d; ++i) {
    phases(i) = std::polar(1.0, -sys.vals(i) * dt);
  }
  return sys.vecs * phases.asDiagonal() * sys.vecs.transpose();
}

// Conditional propagators along the two branch histories. branch 0 follows
// H(+) first, branch 1 follows H(-); each pi pulse swaps them.
std::pair<MatrixXcd, MatrixXcd> branch_propagators(const BranchSystem& plus,
                                                   const BranchSystem& minus,
                                                   const PulseSequence& seq,
                                                   double t_total) {
  const int d = static_cast<int>(plus.vals.size());
  MatrixXcd up = MatrixXcd::Identity(d, d);
  MatrixXcd um = MatrixXcd::Identity(d, d);
  double prev = 0.0;
  int flip = 0;
  auto apply = [&](double from, double to) {
    const double dt = (to - from) * t_total;
    if (dt == 0.0) return;
    const MatrixXcd pp = segment_propagator(flip % 2 == 0 ? plus : minus, dt);
    const MatrixXcd pm = segment_propagator(flip % 2 == 0 ? minus : plus, dt);
    up = pp * up;
    um = pm * um;
  };
  for (double f : seq.fractions) {
    apply(prev, f);
    prev = f;
    ++flip;
  }
  apply(prev, 1.0);
  return {std::move(up), std::move(um)};
}

cplx trace_overlap(const MatrixXcd& um, const MatrixXcd& up) {
  // Tr[U_-^dag U_+] / dim
  return (um.conjugate().cwiseProduct(up)).sum() /
         static_cast<double>(up.rows());
}

std::vector<cplx> cluster_curve(const CceContext& ctx, const Cluster& cluster,
                                const PulseSequence& seq,
                                const std::vector<double>& grid) {
  const ClusterOperators ops = build_operators(ctx, cluster);
  const MatrixXd beta_mat = ops.beta.asDiagonal();
  const BranchSystem plus =
      diagonalize(ctx.transition.p_plus * beta_mat + ops.h_bath);
  const BranchSystem minus =
      diagonalize(ctx.transition.p_minus * beta_mat + ops.h_bath);

  std::vector<cplx> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (grid[k] == 0.0) {
      out[k] = 1.0;
      continue;
    }
    const auto [up, um] = branch_propagators(plus, minus, seq, grid[k]);
    out[k] = trace_overlap(um, up);
    if (std::abs(out[k]) > 1.0 + 1e-9) {
      throw NumericalBreakdown("cluster coherence escaped the unit disk");
    }
  }
  return out;
}

CosineTermBank raw_correlation_bank(const CceContext& ctx,
                                    const Cluster& cluster) {
  const ClusterOperators ops = build_operators(ctx, cluster);
  const double s = ctx.transition.s;
  const MatrixXd he = 0.5 * s * MatrixXd(ops.beta.asDiagonal()) + ops.h_bath;
  const BranchSystem sys = diagonalize(he);
  const MatrixXd b =
      sys.vecs.transpose() * ops.beta.asDiagonal() * sys.vecs;

  CosineTermBank bank;
  const double norm = 1.0 / ops.dim;
  for (int a = 0; a < ops.dim; ++a) {
    for (int c = a; c < ops.dim; ++c) {
      const double amp = (a == c ? 1.0 : 2.0) * b(a, c) * b(a, c) * norm;
      if (amp == 0.0) continue;
      bank.add(std::abs(sys.vals(a) - sys.vals(c)), amp);
    }
  }
  return bank;
}

void append_negated(CosineTermBank& dst, const CosineTermBank& src) {
  for (std::size_t i = 0; i < src.amps.size(); ++i) {
    dst.add(src.omegas[i], -src.amps[i]);
  }
}

// Connected part: raw bank minus the connected banks of all enumerated
// proper sub-clusters (singletons always; pairs only where edges exist).
CosineTermBank connected_correlation_bank(const CceContext& ctx,
                                          const Cluster& cluster) {
  CosineTermBank bank = raw_correlation_bank(ctx, cluster);
  const auto& idx = cluster.indices;
  if (idx.size() >= 2) {
    for (int i : idx) append_negated(bank, connected_correlation_bank(ctx, {{i}}));
  }
  if (idx.size() == 3) {
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        if (ctx.graph.connected(idx[a], idx[b])) {
          append_negated(bank,
                         connected_correlation_bank(ctx, {{idx[a], idx[b]}}));
        }
      }
    }
  }
  return bank;
}

bool uniform_grid(const std::vector<double>& grid, double* t0, double* dt) {
  if (grid.size() < 2) return false;
  const double step = grid[1] - grid[0];
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double expect = grid[0] + step * static_cast<double>(k);
    if (std::abs(grid[k] - expect) > 1e-9 * std::max(step, grid.back())) {
      return false;
    }
  }
  *t0 = grid[0];
  *dt = step;
  return true;
}

}  // namespace

CceContext make_cce_context(const BathConfiguration& bath,
                            const TransitionPair& transition,
                            const CCEOptions& options) {
  options.validate();
  CceContext ctx;
  ctx.bath = &bath;
  ctx.transition = transition;
  ctx.options = options;
  ctx.graph = build_pair_graph(bath, options.pair_cutoff, options.dipolar_floor);
  ctx.clusters = enumerate_clusters(bath, options);

  if (options.mean_field) {
    RandomStream rng(child_seed(bath.seed, SeedPurpose::mean_field_states, 0));
    ctx.frozen_spins.resize(bath.size());
    for (auto& m : ctx.frozen_spins) m = rng.spin_half();

    ctx.detuning_full.assign(bath.size(), 0.0);
    for (std::size_t i = 0; i < bath.size(); ++i) {
      for (std::size_t k = 0; k < bath.size(); ++k) {
        if (k == i) continue;
        const double d = dipolar_coupling(bath.positions[i], bath.positions[k],
                                          bath.orientation);
        ctx.detuning_full[i] += 4.0 * d * ctx.frozen_spins[k];
      }
    }
  }
  return ctx;
}

std::complex<double> cluster_coherence(const CceContext& ctx,
                                       const Cluster& cluster,
                                       const PulseSequence& seq,
                                       double t_total) {
  return cluster_curve(ctx, cluster, seq, {t_total})[0];
}

CoherenceCurve cce_coherence(const CceContext& ctx, const PulseSequence& seq,
                             int threads) {
  const auto& grid = ctx.options.time_grid;
  const std::size_t nc = ctx.clusters.size();
  std::vector<std::vector<cplx>> raw(nc);
  parallel_for(nc, threads, [&](std::size_t i) {
    raw[i] = cluster_curve(ctx, ctx.clusters[i], seq, grid);
  });

  // clusters are sorted by size, so sub-cluster terms are ready when needed
  std::map<std::vector<int>, std::size_t> slot;
  for (std::size_t i = 0; i < nc; ++i) slot[ctx.clusters[i].indices] = i;

  std::vector<std::vector<cplx>> tilde(nc);
  for (std::size_t i = 0; i < nc; ++i) {
    std::vector<cplx> cur = std::move(raw[i]);
    const auto& idx = ctx.clusters[i].indices;
    if (idx.size() >= 2) {
      std::vector<std::vector<int>> subs;
      for (int a : idx) subs.push_back({a});
      if (idx.size() == 3) {
        for (int a = 0; a < 3; ++a) {
          for (int b = a + 1; b < 3; ++b) {
            subs.push_back({idx[a], idx[b]});
          }
        }
      }
      for (const auto& sub : subs) {
        const auto it = slot.find(sub);
        if (it == slot.end()) continue;  // non-edge pair: treated as 1
        const auto& div = tilde[it->second];
        for (std::size_t k = 0; k < cur.size(); ++k) {
          if (std::abs(div[k]) < 1e-12) {
            throw NumericalBreakdown(
                "CCE division underflow (strongly correlated bath); "
                "sub-cluster term below 1e-12");
          }
          cur[k] /= div[k];
        }
      }
    }
    tilde[i] = std::move(cur);
  }

  CoherenceCurve curve;
  curve.times = grid;
  curve.values.assign(grid.size(), cplx(1.0, 0.0));
  for (std::size_t i = 0; i < nc; ++i) {
    kernels::multiply_curves(curve.values, tilde[i]);
  }
  return curve;
}

double cluster_correlation(const CceContext& ctx, const Cluster& cluster,
                           double t) {
  const CosineTermBank bank = connected_correlation_bank(ctx, cluster);
  double c = 0;
  for (std::size_t m = 0; m < bank.amps.size(); ++m) {
    c += bank.amps[m] * std::cos(bank.omegas[m] * t);
  }
  return c;
}

CosineTermBank correlation_terms(const CceContext& ctx, int threads) {
  const std::size_t nc = ctx.clusters.size();

  // memoized connected banks, assembled in canonical order
  std::map<std::vector<int>, std::size_t> slot;
  for (std::size_t i = 0; i < nc; ++i) slot[ctx.clusters[i].indices] = i;

  std::vector<CosineTermBank> raw(nc);
  parallel_for(nc, threads, [&](std::size_t i) {
    raw[i] = raw_correlation_bank(ctx, ctx.clusters[i]);
  });

  std::vector<CosineTermBank> connected(nc);
  for (std::size_t i = 0; i < nc; ++i) {
    CosineTermBank bank = std::move(raw[i]);
    const auto& idx = ctx.clusters[i].indices;
    if (idx.size() >= 2) {
      std::vector<std::vector<int>> subs;
      for (int a : idx) subs.push_back({a});
      if (idx.size() == 3) {
        for (int a = 0; a < 3; ++a) {
          for (int b = a + 1; b < 3; ++b) subs.push_back({idx[a], idx[b]});
        }
      }
      for (const auto& sub : subs) {
        const auto it = slot.find(sub);
        if (it != slot.end()) append_negated(bank, connected[it->second]);
      }
    }
    connected[i] = std::move(bank);
  }

  CosineTermBank total;
  for (const auto& bank : connected) {
    for (std::size_t m = 0; m < bank.amps.size(); ++m) {
      total.add(bank.omegas[m], bank.amps[m]);
    }
  }
  return total;
}

std::vector<double> evaluate_terms(const CosineTermBank& terms, double t0,
                                   double dt, std::size_t count) {
  std::vector<double> out(count, 0.0);
  kernels::accumulate_cosines(terms.amps, terms.omegas, t0, dt, out);
  return out;
}

CorrelationCurve cce_correlation(const CceContext& ctx, int threads) {
  const CosineTermBank terms = correlation_terms(ctx, threads);
  CorrelationCurve curve;
  curve.times = ctx.options.time_grid;
  double t0 = 0, dt = 0;
  if (uniform_grid(curve.times, &t0, &dt)) {
    curve.values = evaluate_terms(terms, t0, dt, curve.times.size());
  } else {
    curve.values.assign(curve.times.size(), 0.0);
    for (std::size_t k = 0; k < curve.times.size(); ++k) {
      for (std::size_t m = 0; m < terms.amps.size(); ++m) {
        curve.values[k] += terms.amps[m] * std::cos(terms.omegas[m] * curve.times[k]);
      }
    }
  }
  return curve;
}

CoherenceCurve cce_coherence(const BathConfiguration& bath,
                             const TransitionPair& transition,
                             const PulseSequence& seq,
                             const CCEOptions& options) {
  const CceContext ctx = make_cce_context(bath, transition, options);
  return cce_coherence(ctx, seq, 1);
}

CorrelationCurve cce_correlation(const BathConfiguration& bath,
                                 const TransitionPair& transition,
                                 const CCEOptions& options) {
  const CceContext ctx = make_cce_context(bath, transition, options);
  return cce_correlation(ctx, 1);
}

}  // namespace spinbath
