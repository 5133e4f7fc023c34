#include "astopo/graph.hpp"

#include <algorithm>
#include <tuple>
#include <utility>

namespace astopo {
namespace {

std::string pair_text(NodeId a, NodeId b) {
  return "(" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

Adjacency make_adjacency(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& arcs) {
  Adjacency adj;
  adj.offsets.assign(n + 1, 0);
  for (const auto& [from, to] : arcs) ++adj.offsets[from + 1];
  for (std::size_t i = 0; i < n; ++i) adj.offsets[i + 1] += adj.offsets[i];
  adj.targets.resize(arcs.size());
  std::vector<std::size_t> fill(adj.offsets.begin(), adj.offsets.end() - 1);
  for (const auto& [from, to] : arcs) adj.targets[fill[from]++] = to;
  for (std::size_t u = 0; u < n; ++u) {
    std::sort(adj.targets.begin() + static_cast<std::ptrdiff_t>(adj.offsets[u]),
              adj.targets.begin() + static_cast<std::ptrdiff_t>(adj.offsets[u + 1]));
  }
  return adj;
}

bool contains(std::span<const NodeId> sorted, NodeId v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

}  // namespace

LabeledAsGraph::LabeledAsGraph(std::size_t node_count, std::vector<PeerPair> peer_edges,
                               std::vector<CustomerProvider> cp_edges)
    : node_count_(node_count), peer_edges_(std::move(peer_edges)), cp_edges_(std::move(cp_edges)) {
  auto check_ids = [&](NodeId a, NodeId b) {
    if (a >= node_count_ || b >= node_count_) {
      throw Error("edge " + pair_text(a, b) + " references a node outside 0.." +
                  std::to_string(node_count_ == 0 ? 0 : node_count_ - 1));
    }
    if (a == b) throw Error("self-loop at node " + std::to_string(a));
  };

  for (auto& e : peer_edges_) {
    check_ids(e.a, e.b);
    if (e.a > e.b) std::swap(e.a, e.b);
  }
  for (const auto& e : cp_edges_) check_ids(e.customer, e.provider);

  // Every pair, keyed by its unordered endpoints, must appear exactly once.
  struct Keyed {
    NodeId lo, hi;
    int role;  // 0 peer, 1 customer->provider
    NodeId customer;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(peer_edges_.size() + cp_edges_.size());
  for (const auto& e : peer_edges_) keyed.push_back({e.a, e.b, 0, 0});
  for (const auto& e : cp_edges_) {
    keyed.push_back({std::min(e.customer, e.provider), std::max(e.customer, e.provider), 1,
                     e.customer});
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& x, const Keyed& y) {
    return std::tie(x.lo, x.hi, x.role, x.customer) < std::tie(y.lo, y.hi, y.role, y.customer);
  });
  for (std::size_t i = 1; i < keyed.size(); ++i) {
    const auto& p = keyed[i - 1];
    const auto& q = keyed[i];
    if (p.lo != q.lo || p.hi != q.hi) continue;
    if (p.role == q.role && p.customer == q.customer) {
      throw Error("duplicate edge " + pair_text(p.lo, p.hi));
    }
    throw Error("conflicting edge roles for pair " + pair_text(p.lo, p.hi));
  }

  std::sort(peer_edges_.begin(), peer_edges_.end());
  std::sort(cp_edges_.begin(), cp_edges_.end());

  std::vector<std::pair<NodeId, NodeId>> peer_arcs, up_arcs, down_arcs, all_arcs;
  peer_arcs.reserve(2 * peer_edges_.size());
  for (const auto& e : peer_edges_) {
    peer_arcs.emplace_back(e.a, e.b);
    peer_arcs.emplace_back(e.b, e.a);
  }
  up_arcs.reserve(cp_edges_.size());
  down_arcs.reserve(cp_edges_.size());
  for (const auto& e : cp_edges_) {
    up_arcs.emplace_back(e.customer, e.provider);
    down_arcs.emplace_back(e.provider, e.customer);
  }
  all_arcs = peer_arcs;
  all_arcs.insert(all_arcs.end(), up_arcs.begin(), up_arcs.end());
  all_arcs.insert(all_arcs.end(), down_arcs.begin(), down_arcs.end());

  peers_ = make_adjacency(node_count_, peer_arcs);
  providers_ = make_adjacency(node_count_, up_arcs);
  customers_ = make_adjacency(node_count_, down_arcs);
  neighbors_ = make_adjacency(node_count_, all_arcs);
}

Relation LabeledAsGraph::relation(NodeId u, NodeId v) const {
  if (contains(peers(u), v)) return Relation::peer;
  if (contains(providers(u), v)) return Relation::customer_of;
  if (contains(customers(u), v)) return Relation::provider_of;
  return Relation::none;
}

LabeledAsGraph build_graph(std::span<const PeerPair> peer_pairs,
                           std::span<const CustomerProvider> cp_pairs) {
  std::size_t n = 0;
  for (const auto& e : peer_pairs) n = std::max<std::size_t>(n, std::max(e.a, e.b) + 1ull);
  for (const auto& e : cp_pairs) n = std::max<std::size_t>(n, std::max(e.customer, e.provider) + 1ull);
  return build_graph(n, peer_pairs, cp_pairs);
}

LabeledAsGraph build_graph(std::size_t node_count, std::span<const PeerPair> peer_pairs,
                           std::span<const CustomerProvider> cp_pairs) {
  return LabeledAsGraph(node_count, {peer_pairs.begin(), peer_pairs.end()},
                        {cp_pairs.begin(), cp_pairs.end()});
}

std::string to_string(Relation r) {
  switch (r) {
    case Relation::none: return "none";
    case Relation::peer: return "peer";
    case Relation::customer_of: return "customer_of";
    case Relation::provider_of: return "provider_of";
  }
  return "unknown";
}

}  // namespace astopo
