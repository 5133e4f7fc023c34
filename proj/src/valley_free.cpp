#include "astopo/valley_free.hpp"

#include <array>
#include <deque>
#include <string>

namespace astopo {
namespace {

// Phase of a valley-free walk: climbing customer->provider edges, having
// just crossed the single allowed peer edge, or descending.
enum Phase : std::uint8_t { kUp = 0, kPeer = 1, kDown = 2 };

struct State {
  NodeId node;
  Phase phase;
};

class PhaseSearch {
 public:
  explicit PhaseSearch(const LabeledAsGraph& g)
      : g_(g), seen_(3 * g.node_count(), false), reached_(g.node_count(), false) {}

  void seed(NodeId node, Phase phase) { push({node, phase}); }

  // Reached nodes in any phase.
  const std::vector<bool>& run() {
    while (!queue_.empty()) {
      const State s = queue_.front();
      queue_.pop_front();
      if (s.phase == kUp) {
        for (NodeId p : g_.providers(s.node)) push({p, kUp});
        for (NodeId q : g_.peers(s.node)) push({q, kPeer});
      }
      for (NodeId c : g_.customers(s.node)) push({c, kDown});
    }
    return reached_;
  }

 private:
  void push(State s) {
    const std::size_t key = 3 * static_cast<std::size_t>(s.node) + s.phase;
    if (seen_[key]) return;
    seen_[key] = true;
    reached_[s.node] = true;
    queue_.push_back(s);
  }

  const LabeledAsGraph& g_;
  std::vector<bool> seen_;
  std::vector<bool> reached_;
  std::deque<State> queue_;
};

}  // namespace

std::vector<VfDistance> valley_free_distances(const LabeledAsGraph& g, NodeId source) {
  // Routes whose first hop is a peer or a customer.
  PhaseSearch free_routes(g);
  for (NodeId q : g.peers(source)) free_routes.seed(q, kPeer);
  for (NodeId c : g.customers(source)) free_routes.seed(c, kDown);
  const std::vector<bool> zero = free_routes.run();

  // Any valley-free route: start climbing from the source itself.
  PhaseSearch any_route(g);
  any_route.seed(source, kUp);
  const std::vector<bool>& any = any_route.run();

  std::vector<VfDistance> d(g.node_count(), VfDistance::unreachable);
  for (std::size_t v = 0; v < d.size(); ++v) {
    if (zero[v]) {
      d[v] = VfDistance::zero;
    } else if (any[v]) {
      d[v] = VfDistance::one;
    }
  }
  d[source] = VfDistance::zero;
  return d;
}

VfDistance valley_free_distance(const LabeledAsGraph& g, NodeId u, NodeId v) {
  if (u == v) throw Error("valley_free_distance: endpoints coincide (" + std::to_string(u) + ")");
  if (u >= g.node_count() || v >= g.node_count()) {
    throw Error("valley_free_distance: node id out of range");
  }
  return valley_free_distances(g, u)[v];
}

const char* to_string(VfDistance d) {
  switch (d) {
    case VfDistance::zero: return "0";
    case VfDistance::one: return "1";
    case VfDistance::unreachable: return "inf";
  }
  return "?";
}

}  // namespace astopo
