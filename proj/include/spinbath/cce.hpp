#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "spinbath/cluster.hpp"
#include "spinbath/curves.hpp"
#include "spinbath/donor.hpp"
#include "spinbath/sequence.hpp"

namespace spinbath {

// Everything fixed across cluster evaluations for one (bath, transition,
// options) triple: the cluster list, the frozen mean-field state and its
// accumulated detunings. Pure data; safe to share across threads.
struct CceContext {
  const BathConfiguration* bath = nullptr;
  TransitionPair transition;
  CCEOptions options;
  std::vector<Cluster> clusters;
  PairGraph graph;
  std::vector<double> frozen_spins;    // +-1/2 per spin; empty if mean_field off
  std::vector<double> detuning_full;   // h_i = sum_{k != i} 4 D_ik m_k, rad/s
};

CceContext make_cce_context(const BathConfiguration& bath,
                            const TransitionPair& transition,
                            const CCEOptions& options);

// L_C = Tr[rho_C U_-^dag(t) U_+(t)], rho_C maximally mixed. The branch
// propagators alternate exp(-i H^(+-) dt) and exp(-i H^(-+) dt) across the
// pulse times; H^(+-) = P_{+-} beta^z_C + H_bath|_C.
std::complex<double> cluster_coherence(const CceContext& ctx,
                                       const Cluster& cluster,
                                       const PulseSequence& seq,
                                       double t_total);

// Full CCE product L(t) = prod_C Ltilde_C(t) over the context's time grid.
// Throws NumericalBreakdown when a sub-cluster term falls below 1e-12 in
// magnitude (strongly correlated bath).
CoherenceCurve cce_coherence(const CceContext& ctx, const PulseSequence& seq,
                             int threads = 1);

// Connected correlation of one cluster at time t (rad^2/s^2), evaluated
// under H_e = (|P+|+|P-|)/2 beta^z_C + H_bath|_C.
double cluster_correlation(const CceContext& ctx, const Cluster& cluster,
                           double t);

// Exact cosine-sum representation of C(t) = sum_m amp_m cos(omega_m t)
// accumulated over all connected cluster contributions.
CosineTermBank correlation_terms(const CceContext& ctx, int threads = 1);

// C(t) sampled on the context time grid.
CorrelationCurve cce_correlation(const CceContext& ctx, int threads = 1);

// Evaluates a term bank on a uniform grid t = t0 + k dt.
std::vector<double> evaluate_terms(const CosineTermBank& terms, double t0,
                                   double dt, std::size_t count);

// One-shot wrappers.
CoherenceCurve cce_coherence(const BathConfiguration& bath,
                             const TransitionPair& transition,
                             const PulseSequence& seq,
                             const CCEOptions& options);
CorrelationCurve cce_correlation(const BathConfiguration& bath,
                                 const TransitionPair& transition,
                                 const CCEOptions& options);

}  // namespace spinbath
