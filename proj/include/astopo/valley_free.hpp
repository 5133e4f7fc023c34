#pragma once

#include <cstdint>
#include <vector>

#include "astopo/graph.hpp"

namespace astopo {

/// Communication price between two ASes under valley-free routing with
/// customer/peer routes preferred over provider routes.
///   zero        a valley-free route exists whose first hop goes to a peer or a customer
///   one         valley-free routes exist, but all of them start towards a provider
///   unreachable no valley-free route exists
enum class VfDistance : std::uint8_t { zero, one, unreachable };

/// Throws Error when u == v.
VfDistance valley_free_distance(const LabeledAsGraph& g, NodeId u, NodeId v);

/// Distances from `source` to every node; the entry for `source` itself is zero.
/// Two breadth-first searches over the (node, phase) product graph, O(3(V+E)).
std::vector<VfDistance> valley_free_distances(const LabeledAsGraph& g, NodeId source);

const char* to_string(VfDistance d);

}  // namespace astopo
