// Independent oracles shared by the unit tests and the acceptance runner.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "astopo/graph.hpp"
#include "astopo/spider.hpp"
#include "astopo/valley_free.hpp"

namespace astopo::testing {

// Hop direction seen from the walker.
enum class Hop : std::uint8_t { up, peer, down };

inline bool hop_between(const LabeledAsGraph& g, NodeId a, NodeId b, Hop& h) {
  switch (g.relation(a, b)) {
    case Relation::customer_of: h = Hop::up; return true;
    case Relation::provider_of: h = Hop::down; return true;
    case Relation::peer: h = Hop::peer; return true;
    default: return false;
  }
}

// Uphill, at most one peer hop, then downhill.
inline bool valley_free(const std::vector<Hop>& hops) {
  int phase = 0;  // 0 up, 1 after peer, 2 down
  for (Hop h : hops) {
    if (h == Hop::up) {
      if (phase != 0) return false;
    } else if (h == Hop::peer) {
      if (phase != 0) return false;
      phase = 1;
    } else {
      phase = 2;
    }
  }
  return true;
}

// Classifies every simple path from u to v.
inline VfDistance brute_force_distance(const LabeledAsGraph& g, NodeId u, NodeId v) {
  bool any = false, free_start = false;
  std::vector<bool> on_path(g.node_count(), false);
  std::vector<Hop> hops;
  std::function<void(NodeId)> walk = [&](NodeId x) {
    if (x == v) {
      if (valley_free(hops)) {
        any = true;
        if (hops.front() != Hop::up) free_start = true;
      }
      return;
    }
    for (NodeId y = 0; y < g.node_count(); ++y) {
      Hop h;
      if (on_path[y] || !hop_between(g, x, y, h)) continue;
      on_path[y] = true;
      hops.push_back(h);
      walk(y);
      hops.pop_back();
      on_path[y] = false;
    }
  };
  on_path[u] = true;
  walk(u);
  if (!any) return VfDistance::unreachable;
  return free_start ? VfDistance::zero : VfDistance::one;
}

// Each unordered pair independently: none / peer / lo customer of hi / hi customer of lo.
inline LabeledAsGraph random_labeled_graph(std::size_t n, std::mt19937_64& rng, double edge_prob) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<PeerPair> peers;
  std::vector<CustomerProvider> cps;
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      if (coin(rng) >= edge_prob) continue;
      const double t = coin(rng);
      if (t < 1.0 / 3) peers.push_back({a, b});
      else if (t < 2.0 / 3) cps.push_back({a, b});
      else cps.push_back({b, a});
    }
  }
  return LabeledAsGraph(n, std::move(peers), std::move(cps));
}

// Graph from a base-4 code over the pairs (0,1), (0,2), ..., (n-2,n-1).
inline LabeledAsGraph graph_from_code(std::size_t n, std::uint64_t code) {
  std::vector<PeerPair> peers;
  std::vector<CustomerProvider> cps;
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      const auto d = code % 4;
      code /= 4;
      if (d == 1) peers.push_back({a, b});
      else if (d == 2) cps.push_back({a, b});
      else if (d == 3) cps.push_back({b, a});
    }
  }
  return LabeledAsGraph(n, std::move(peers), std::move(cps));
}

inline std::uint64_t graph_count(std::size_t n) {
  std::uint64_t c = 1;
  for (std::size_t i = 0; i < n * (n - 1) / 2; ++i) c *= 4;
  return c;
}

// Everyone reaches everyone (finite total cost).
inline bool all_reachable(const LabeledAsGraph& g) {
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (auto d : valley_free_distances(g, u)) {
      if (d == VfDistance::unreachable) return false;
    }
  }
  return true;
}

// Some subset of the edges, on all nodes and with labels kept, is a Spider graph.
inline bool has_spanning_spider(const LabeledAsGraph& g) {
  const auto& pe = g.peer_edges();
  const auto& ce = g.cp_edges();
  const std::size_t m = pe.size() + ce.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<PeerPair> peers;
    std::vector<CustomerProvider> cps;
    for (std::size_t i = 0; i < m; ++i) {
      if (!(mask >> i & 1)) continue;
      if (i < pe.size()) peers.push_back(pe[i]);
      else cps.push_back(ce[i - pe.size()]);
    }
    if (verify_spider(LabeledAsGraph(g.node_count(), peers, cps)).is_spider) return true;
  }
  return false;
}

}  // namespace astopo::testing
