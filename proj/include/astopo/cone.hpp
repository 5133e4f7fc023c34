#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "astopo/graph.hpp"

namespace astopo {

/// Customer cone t(u): u plus every node reachable by provider->customer steps.
/// On a customer-provider forest this is the subtree of u; on a measured
/// graph it is the descendant set of u in the customer-provider DAG.
/// Returned sorted.
std::vector<NodeId> customer_cone(const LabeledAsGraph& g, NodeId u);

/// True iff the customer->provider subgraph contains a directed cycle.
bool has_provider_cycle(const LabeledAsGraph& g);

/// |t(u)| for every node (OpenMP over source nodes).
std::vector<std::size_t> cone_sizes(const LabeledAsGraph& g);
/// Serial reference for cone_sizes.
std::vector<std::size_t> cone_sizes_serial(const LabeledAsGraph& g);

/// Sizes of all cones plus lazily materialized member lists, used where
/// many cone intersections are needed (spider checks, overlap sampling).
/// `cone()` mutates the cache and is not thread-safe; call `materialize()`
/// up front before sharing the index across threads.
class ConeIndex {
 public:
  explicit ConeIndex(const LabeledAsGraph& g);

  std::size_t size(NodeId u) const { return sizes_[u]; }
  const std::vector<std::size_t>& sizes() const { return sizes_; }

  std::span<const NodeId> cone(NodeId u);
  /// Read-only access; requires that u was materialized.
  std::span<const NodeId> cone(NodeId u) const;
  void materialize(std::span<const NodeId> nodes);

  std::size_t intersection_size(NodeId a, NodeId b);
  bool intersects(NodeId a, NodeId b);

 private:
  const LabeledAsGraph* g_;
  std::vector<std::size_t> sizes_;
  std::vector<std::optional<std::vector<NodeId>>> cache_;
};

std::size_t sorted_intersection_size(std::span<const NodeId> a, std::span<const NodeId> b);

}  // namespace astopo
