#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace astopo {

using NodeId = std::uint32_t;

/// Raised for invalid input data: malformed files, conflicting edges,
/// violated preconditions on user-supplied graphs or parameters.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PeerPair {
  NodeId a;
  NodeId b;
  friend bool operator==(const PeerPair&, const PeerPair&) = default;
  friend auto operator<=>(const PeerPair&, const PeerPair&) = default;
};

/// Customer-provider edges are always stored as (customer, provider).
struct CustomerProvider {
  NodeId customer;
  NodeId provider;
  friend bool operator==(const CustomerProvider&, const CustomerProvider&) = default;
  friend auto operator<=>(const CustomerProvider&, const CustomerProvider&) = default;
};

/// Relationship of `u` towards `v` as seen from `u`.
enum class Relation : std::uint8_t { none, peer, customer_of, provider_of };

/// Compressed adjacency: neighbors of node u are targets[offsets[u] .. offsets[u+1]).
struct Adjacency {
  std::vector<std::size_t> offsets;
  std::vector<NodeId> targets;

  std::span<const NodeId> operator[](NodeId u) const {
    return {targets.data() + offsets[u], offsets[u + 1] - offsets[u]};
  }
  std::size_t node_count() const { return offsets.empty() ? 0 : offsets.size() - 1; }
};

/// AS graph with peer (undirected) and customer-provider (directed) edges.
/// Immutable after construction; every accessor is a pure read.
class LabeledAsGraph {
 public:
  LabeledAsGraph() = default;

  /// Throws Error on self-loops, ids >= node_count, duplicate pairs and
  /// pairs appearing in more than one role.
  LabeledAsGraph(std::size_t node_count, std::vector<PeerPair> peer_edges,
                 std::vector<CustomerProvider> cp_edges);

  std::size_t node_count() const { return node_count_; }
  std::size_t peer_edge_count() const { return peer_edges_.size(); }
  std::size_t cp_edge_count() const { return cp_edges_.size(); }
  std::size_t edge_count() const { return peer_edges_.size() + cp_edges_.size(); }

  /// Normalized edge lists: peers with a < b, both lists sorted.
  const std::vector<PeerPair>& peer_edges() const { return peer_edges_; }
  const std::vector<CustomerProvider>& cp_edges() const { return cp_edges_; }

  std::span<const NodeId> peers(NodeId u) const { return peers_[u]; }
  std::span<const NodeId> providers(NodeId u) const { return providers_[u]; }
  std::span<const NodeId> customers(NodeId u) const { return customers_[u]; }
  /// All neighbors regardless of label, sorted.
  std::span<const NodeId> neighbors(NodeId u) const { return neighbors_[u]; }
  std::size_t degree(NodeId u) const { return neighbors_[u].size(); }

  const Adjacency& undirected() const { return neighbors_; }

  Relation relation(NodeId u, NodeId v) const;
  bool adjacent(NodeId u, NodeId v) const { return relation(u, v) != Relation::none; }

  friend bool operator==(const LabeledAsGraph& x, const LabeledAsGraph& y) {
    return x.node_count_ == y.node_count_ && x.peer_edges_ == y.peer_edges_ &&
           x.cp_edges_ == y.cp_edges_;
  }

 private:
  std::size_t node_count_ = 0;
  std::vector<PeerPair> peer_edges_;
  std::vector<CustomerProvider> cp_edges_;
  Adjacency peers_;
  Adjacency providers_;
  Adjacency customers_;
  Adjacency neighbors_;
};

/// Node count is one past the largest id mentioned.
LabeledAsGraph build_graph(std::span<const PeerPair> peer_pairs,
                           std::span<const CustomerProvider> cp_pairs);

LabeledAsGraph build_graph(std::size_t node_count, std::span<const PeerPair> peer_pairs,
                           std::span<const CustomerProvider> cp_pairs);

std::string to_string(Relation r);

}  // namespace astopo
