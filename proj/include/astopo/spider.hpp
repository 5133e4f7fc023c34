#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "astopo/graph.hpp"

namespace astopo {

/// Outcome of checking the three structural properties of a Spider graph:
/// a provider-free peer clique, customer-provider trees hanging from it,
/// and extra peer edges only between nodes with disjoint customer cones.
struct SpiderReport {
  std::vector<NodeId> clique_nodes;  // nodes without providers
  bool is_peer_clique = false;
  bool forest_ok = false;
  /// Nodes u having two peer neighbours v, w with t(v) and t(w) intersecting.
  /// Pairs with u, v and w all inside the clique are exempt.
  std::size_t cone_disjointness_violations = 0;
  /// True when some node's pair list exceeded the cap and was sampled.
  bool sampled = false;
  bool is_spider = false;
};

struct SpiderOptions {
  std::size_t max_pairs_per_node = 10'000;
  std::uint64_t seed = 0;
};

SpiderReport verify_spider(const LabeledAsGraph& g, const SpiderOptions& opts = {});

/// Largest mutually peering set among provider-free nodes (exact search;
/// ties broken towards the lexicographically smallest member list).
std::vector<NodeId> top_clique(const LabeledAsGraph& g);

/// Fraction of nodes reached by walking provider->customer edges down from
/// the top clique. Throws Error on an empty graph.
double spider_coverage(const LabeledAsGraph& g);

}  // namespace astopo
