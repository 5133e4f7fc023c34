#include "astopo/spider.hpp"

#include <algorithm>
#include <random>

#include "astopo/cone.hpp"

namespace astopo {
namespace {

bool all_pairs_peered(const LabeledAsGraph& g, const std::vector<NodeId>& nodes) {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if (g.relation(nodes[i], nodes[j]) != Relation::peer) return false;
    }
  }
  return true;
}

bool single_provider_chains_reach(const LabeledAsGraph& g, const std::vector<bool>& in_clique) {
  const std::size_t n = g.node_count();
  // 0 unknown, 1 on current chain, 2 known good
  std::vector<std::uint8_t> state(n, 0);
  for (NodeId u = 0; u < n; ++u) {
    if (!in_clique[u] && g.providers(u).size() != 1) return false;
  }
  std::vector<NodeId> chain;
  for (NodeId start = 0; start < n; ++start) {
    NodeId x = start;
    chain.clear();
    while (!in_clique[x] && state[x] == 0) {
      state[x] = 1;
      chain.push_back(x);
      x = g.providers(x)[0];
    }
    if (!in_clique[x] && state[x] == 1) return false;  // provider loop
    for (NodeId y : chain) state[y] = 2;
  }
  return true;
}

class CliqueSearch {
 public:
  CliqueSearch(const LabeledAsGraph& g, std::vector<NodeId> candidates)
      : g_(g), candidates_(std::move(candidates)) {}

  std::vector<NodeId> run() {
    std::vector<NodeId> r;
    expand(r, candidates_, {});
    return best_;
  }

 private:
  std::vector<NodeId> peers_within(NodeId v, const std::vector<NodeId>& set) const {
    std::vector<NodeId> out;
    const auto nb = g_.peers(v);
    std::set_intersection(set.begin(), set.end(), nb.begin(), nb.end(), std::back_inserter(out));
    return out;
  }

  // Bron-Kerbosch with pivoting; sets are kept sorted.
  void expand(std::vector<NodeId>& r, std::vector<NodeId> p, std::vector<NodeId> x) {
    if (p.empty() && x.empty()) {
      std::vector<NodeId> clique = r;
      std::sort(clique.begin(), clique.end());
      if (clique.size() > best_.size() || (clique.size() == best_.size() && clique < best_)) {
        best_ = std::move(clique);
      }
      return;
    }
    if (r.size() + p.size() < best_.size()) return;
    NodeId pivot = p.empty() ? x.front() : p.front();
    std::size_t pivot_degree = 0;
    for (const auto* set : {&p, &x}) {
      for (NodeId u : *set) {
        const std::size_t d = peers_within(u, p).size();
        if (d > pivot_degree) {
          pivot_degree = d;
          pivot = u;
        }
      }
    }
    std::vector<NodeId> branch;
    const auto pivot_nb = g_.peers(pivot);
    std::set_difference(p.begin(), p.end(), pivot_nb.begin(), pivot_nb.end(),
                        std::back_inserter(branch));
    for (NodeId v : branch) {
      r.push_back(v);
      expand(r, peers_within(v, p), peers_within(v, x));
      r.pop_back();
      p.erase(std::lower_bound(p.begin(), p.end(), v));
      x.insert(std::lower_bound(x.begin(), x.end(), v), v);
    }
  }

  const LabeledAsGraph& g_;
  std::vector<NodeId> candidates_;
  std::vector<NodeId> best_;
};

}  // namespace

std::vector<NodeId> top_clique(const LabeledAsGraph& g) {
  std::vector<NodeId> provider_free;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (g.providers(u).empty()) provider_free.push_back(u);
  }
  return CliqueSearch(g, std::move(provider_free)).run();
}

SpiderReport verify_spider(const LabeledAsGraph& g, const SpiderOptions& opts) {
  SpiderReport report;
  const std::size_t n = g.node_count();
  std::vector<bool> in_clique(n, false);
  for (NodeId u = 0; u < n; ++u) {
    if (g.providers(u).empty()) {
      report.clique_nodes.push_back(u);
      in_clique[u] = true;
    }
  }
  report.is_peer_clique = !report.clique_nodes.empty() && all_pairs_peered(g, report.clique_nodes);
  report.forest_ok = single_provider_chains_reach(g, in_clique);

  ConeIndex cones(g);
  for (NodeId u = 0; u < n; ++u) {
    const auto nb = g.peers(u);
    const std::size_t k = nb.size();
    if (k < 2) continue;
    auto exempt = [&](NodeId v, NodeId w) { return in_clique[u] && in_clique[v] && in_clique[w]; };
    bool violated = false;
    const std::size_t pairs = k * (k - 1) / 2;
    if (pairs <= opts.max_pairs_per_node) {
      for (std::size_t i = 0; i < k && !violated; ++i) {
        for (std::size_t j = i + 1; j < k && !violated; ++j) {
          if (!exempt(nb[i], nb[j]) && cones.intersects(nb[i], nb[j])) violated = true;
        }
      }
    } else {
      report.sampled = true;
      std::mt19937_64 rng(opts.seed ^ (0x9E3779B97F4A7C15ull * (u + 1ull)));
      std::uniform_int_distribution<std::size_t> pick(0, k - 1);
      for (std::size_t s = 0; s < opts.max_pairs_per_node && !violated; ++s) {
        const std::size_t i = pick(rng);
        std::size_t j = pick(rng);
        while (j == i) j = pick(rng);
        if (!exempt(nb[i], nb[j]) && cones.intersects(nb[i], nb[j])) violated = true;
      }
    }
    if (violated) ++report.cone_disjointness_violations;
  }

  report.is_spider =
      report.is_peer_clique && report.forest_ok && report.cone_disjointness_violations == 0;
  return report;
}

double spider_coverage(const LabeledAsGraph& g) {
  const std::size_t n = g.node_count();
  if (n == 0) throw Error("spider_coverage: empty graph");
  std::vector<bool> reached(n, false);
  std::vector<NodeId> stack = top_clique(g);
  for (NodeId u : stack) reached[u] = true;
  std::size_t count = stack.size();
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (NodeId c : g.customers(u)) {
      if (!reached[c]) {
        reached[c] = true;
        ++count;
        stack.push_back(c);
      }
    }
  }
  return static_cast<double>(count) / static_cast<double>(n);
}

}  // namespace astopo
