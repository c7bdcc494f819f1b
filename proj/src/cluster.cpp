#include "spinbath/cluster.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "spinbath/errors.hpp"

namespace spinbath {

void CCEOptions::validate() const {
  if (max_order < 1 || max_order > 3) {
    throw ConfigError("cce max_order must be 1, 2 or 3");
  }
  if (pair_cutoff <= 0) throw ConfigError("pair_cutoff must be > 0");
  if (dipolar_floor < 0) throw ConfigError("dipolar_floor must be >= 0");
  if (time_grid.empty() || time_grid.front() != 0.0) {
    throw ConfigError("time grid must start at 0");
  }
  for (std::size_t k = 1; k < time_grid.size(); ++k) {
    if (!(time_grid[k] > time_grid[k - 1])) {
      throw ConfigError("time grid must be strictly increasing");
    }
  }
}

bool PairGraph::connected(int i, int j) const {
  const auto& adj = adjacency[i];
  return std::find(adj.begin(), adj.end(), j) != adj.end();
}

PairGraph build_pair_graph(const BathConfiguration& bath, double pair_cutoff,
                           double dipolar_floor) {
  PairGraph graph;
  graph.n = static_cast<int>(bath.size());
  graph.adjacency.resize(bath.size());
  const double cut2 = pair_cutoff * pair_cutoff;
  for (int i = 0; i < graph.n; ++i) {
    for (int j = i + 1; j < graph.n; ++j) {
      if ((bath.positions[i] - bath.positions[j]).squaredNorm() > cut2) continue;
      const double d =
          dipolar_coupling(bath.positions[i], bath.positions[j], bath.orientation);
      if (std::abs(d) < dipolar_floor) continue;
      graph.edges.emplace_back(i, j);
      graph.adjacency[i].push_back(j);
      graph.adjacency[j].push_back(i);
    }
  }
  return graph;
}

std::vector<Cluster> enumerate_clusters(const BathConfiguration& bath,
                                        const CCEOptions& options) {
  if (bath.size() == 0) throw ConfigError("enumerate_clusters: empty bath");
  const PairGraph graph =
      build_pair_graph(bath, options.pair_cutoff, options.dipolar_floor);

  std::vector<Cluster> clusters;
  for (int i = 0; i < graph.n; ++i) clusters.push_back({{i}});

  if (options.max_order >= 2) {
    for (const auto& [i, j] : graph.edges) clusters.push_back({{i, j}});
  }

  if (options.max_order >= 3) {
    // every connected triple has a vertex adjacent to the other two
    std::set<std::array<int, 3>> triples;
    for (int center = 0; center < graph.n; ++center) {
      const auto& adj = graph.adjacency[center];
      for (std::size_t a = 0; a < adj.size(); ++a) {
        for (std::size_t b = a + 1; b < adj.size(); ++b) {
          std::array<int, 3> t{center, adj[a], adj[b]};
          std::sort(t.begin(), t.end());
          triples.insert(t);
        }
      }
    }
    for (const auto& t : triples) clusters.push_back({{t[0], t[1], t[2]}});
  }

  std::sort(clusters.begin(), clusters.end(),
            [](const Cluster& u, const Cluster& v) {
              if (u.indices.size() != v.indices.size()) {
                return u.indices.size() < v.indices.size();
              }
              return u.indices < v.indices;
            });
  return clusters;
}

}  // namespace spinbath
