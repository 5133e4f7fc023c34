#include "astopo/cone.hpp"

#include <algorithm>
#include <cstdint>

namespace astopo {
namespace {

// Descendants of u via provider->customer steps, using caller-owned scratch.
std::size_t visit_cone(const LabeledAsGraph& g, NodeId u, std::vector<std::uint32_t>& mark,
                       std::uint32_t stamp, std::vector<NodeId>& stack,
                       std::vector<NodeId>* members) {
  std::size_t count = 0;
  stack.clear();
  stack.push_back(u);
  mark[u] = stamp;
  while (!stack.empty()) {
    const NodeId x = stack.back();
    stack.pop_back();
    ++count;
    if (members) members->push_back(x);
    for (NodeId c : g.customers(x)) {
      if (mark[c] != stamp) {
        mark[c] = stamp;
        stack.push_back(c);
      }
    }
  }
  return count;
}

}  // namespace

std::vector<NodeId> customer_cone(const LabeledAsGraph& g, NodeId u) {
  if (u >= g.node_count()) throw Error("customer_cone: node id out of range");
  std::vector<std::uint32_t> mark(g.node_count(), 0);
  std::vector<NodeId> stack;
  std::vector<NodeId> members;
  visit_cone(g, u, mark, 1, stack, &members);
  std::sort(members.begin(), members.end());
  return members;
}

bool has_provider_cycle(const LabeledAsGraph& g) {
  // Kahn's algorithm on customer->provider arcs.
  const std::size_t n = g.node_count();
  std::vector<std::size_t> pending(n);
  std::vector<NodeId> ready;
  for (NodeId u = 0; u < n; ++u) {
    pending[u] = g.customers(u).size();
    if (pending[u] == 0) ready.push_back(u);
  }
  std::size_t removed = 0;
  while (!ready.empty()) {
    const NodeId u = ready.back();
    ready.pop_back();
    ++removed;
    for (NodeId p : g.providers(u)) {
      if (--pending[p] == 0) ready.push_back(p);
    }
  }
  return removed != n;
}

std::vector<std::size_t> cone_sizes_serial(const LabeledAsGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> sizes(n);
  std::vector<std::uint32_t> mark(n, 0);
  std::vector<NodeId> stack;
  for (NodeId u = 0; u < n; ++u) sizes[u] = visit_cone(g, u, mark, u + 1, stack, nullptr);
  return sizes;
}

std::vector<std::size_t> cone_sizes(const LabeledAsGraph& g) {
  const std::int64_t n = static_cast<std::int64_t>(g.node_count());
  std::vector<std::size_t> sizes(g.node_count());
#pragma omp parallel
  {
    std::vector<std::uint32_t> mark(g.node_count(), 0);
    std::vector<NodeId> stack;
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t u = 0; u < n; ++u) {
      const auto id = static_cast<NodeId>(u);
      sizes[id] = visit_cone(g, id, mark, id + 1, stack, nullptr);
    }
  }
  return sizes;
}

ConeIndex::ConeIndex(const LabeledAsGraph& g)
    : g_(&g), sizes_(cone_sizes(g)), cache_(g.node_count()) {}

std::span<const NodeId> ConeIndex::cone(NodeId u) {
  auto& slot = cache_[u];
  if (!slot) slot = customer_cone(*g_, u);
  return *slot;
}

std::span<const NodeId> ConeIndex::cone(NodeId u) const {
  const auto& slot = cache_[u];
  if (!slot) throw Error("ConeIndex: cone of node " + std::to_string(u) + " not materialized");
  return *slot;
}

void ConeIndex::materialize(std::span<const NodeId> nodes) {
  std::vector<NodeId> todo;
  for (NodeId u : nodes) {
    if (!cache_[u]) todo.push_back(u);
  }
  std::sort(todo.begin(), todo.end());
  todo.erase(std::unique(todo.begin(), todo.end()), todo.end());
  const std::int64_t m = static_cast<std::int64_t>(todo.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < m; ++i) {
    cache_[todo[static_cast<std::size_t>(i)]] = customer_cone(*g_, todo[static_cast<std::size_t>(i)]);
  }
}

std::size_t sorted_intersection_size(std::span<const NodeId> a, std::span<const NodeId> b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

std::size_t ConeIndex::intersection_size(NodeId a, NodeId b) {
  const auto ca = cone(a);
  const auto cb = cone(b);
  return sorted_intersection_size(ca, cb);
}

bool ConeIndex::intersects(NodeId a, NodeId b) {
  const auto ca = cone(a);
  const auto cb = cone(b);
  auto i = ca.begin();
  auto j = cb.begin();
  while (i != ca.end() && j != cb.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      return true;
    }
  }
  return false;
}

}  // namespace astopo
