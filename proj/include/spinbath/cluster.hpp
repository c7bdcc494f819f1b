#pragma once

#include <vector>

#include "spinbath/bath.hpp"

namespace spinbath {

// Sorted, distinct bath-spin indices; size <= CCEOptions::max_order.
struct Cluster {
  std::vector<int> indices;

  bool operator==(const Cluster&) const = default;
};

struct CCEOptions {
  int max_order = 2;            // 1..3
  double pair_cutoff = 0.8e-9;  // m, connectivity distance
  double dipolar_floor = 0.0;   // rad/s, ignore |D| below this
  bool mean_field = true;       // freeze out-of-cluster spins as detunings
  double bath_zeeman = 0.0;     // omega_n^Si = gamma_Si * B, rad/s
  std::vector<double> time_grid;  // s, starts at 0, strictly increasing

  void validate() const;
};

// Connectivity graph: an edge where the site distance is <= pair_cutoff and
// |D_ij| >= dipolar_floor.
struct PairGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;          // i < j
  std::vector<std::vector<int>> adjacency;

  bool connected(int i, int j) const;
};

PairGraph build_pair_graph(const BathConfiguration& bath, double pair_cutoff,
                           double dipolar_floor);

// All connected subsets of size <= max_order in canonical order: sorted by
// (size, lexicographic indices). Includes every singleton; size-2 clusters
// are exactly the graph edges.
std::vector<Cluster> enumerate_clusters(const BathConfiguration& bath,
                                        const CCEOptions& options);

}  // namespace spinbath
