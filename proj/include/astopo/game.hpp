#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "astopo/graph.hpp"

namespace astopo {

/// What player u proposes towards v: nothing, to buy transit from v
/// (provider offer), or to peer with v.
enum class Action : std::uint8_t { none = 0, provider = 1, peer = 2 };

/// One action per ordered pair (u, v), u != v.
class StrategyProfile {
 public:
  explicit StrategyProfile(std::size_t n = 0) : n_(n), actions_(n * n, Action::none) {}

  std::size_t player_count() const { return n_; }
  Action at(NodeId u, NodeId v) const { return actions_[u * n_ + v]; }
  void set(NodeId u, NodeId v, Action a) {
    if (u == v) throw Error("StrategyProfile: diagonal entry (" + std::to_string(u) + ")");
    actions_[u * n_ + v] = a;
  }

  friend bool operator==(const StrategyProfile&, const StrategyProfile&) = default;

 private:
  std::size_t n_;
  std::vector<Action> actions_;
};

struct GameParams {
  double phi_p = 0.0;  // provider-edge maintenance cost, paid by the customer
  double phi_r = 0.0;  // peer-edge maintenance cost, paid by both ends
};

/// Customer-provider edge u->v iff u offers provider and v offers nothing;
/// peer edge iff both offer peer or provider.
LabeledAsGraph induce_graph(const StrategyProfile& s);

/// Communication cost (mean valley-free distance, normalized by N) plus
/// maintenance. +infinity if some node is unreachable.
double cost(const LabeledAsGraph& g, NodeId u, const GameParams& params);
std::vector<double> cost_vector(const LabeledAsGraph& g, const GameParams& params);

enum class StabilityClause : std::uint8_t { none, nash, deletion, addition, provider_loop };

struct StabilityResult {
  bool stable = true;
  StabilityClause violated = StabilityClause::none;
  std::string reason;
};

struct StabilityOptions {
  /// Also test unilateral customer-provider additions in the addition clause.
  bool include_cp_additions = false;
  /// Slack used for weak cost comparisons.
  double tolerance = 1e-12;
};

/// Pairwise stable Nash equilibrium check: (a) no profitable unilateral
/// row replacement, (b) no endpoint gains from deleting an edge, (c) no
/// absent peer edge both endpoints strictly want, (d) no provider loop.
/// Reports the first violated clause in that order.
StabilityResult is_pairwise_stable(const StrategyProfile& s, const GameParams& params,
                                   const StabilityOptions& opts = {});

/// Clear-cut peer edge test for the peer edge {u, v}. Throws Error if {u, v}
/// is not a peer edge of g.
bool is_cpe(const LabeledAsGraph& g, NodeId u, NodeId v, const GameParams& params);

struct Equilibrium {
  StrategyProfile profile;
  LabeledAsGraph graph;
};

constexpr std::size_t kMaxEnumerationPlayers = 4;

/// All pairwise stable profiles for n players (2 <= n <= 4), one
/// representative profile per induced graph, ordered by that profile's
/// index in the base-3 enumeration. OpenMP over profile blocks.
std::vector<Equilibrium> enumerate_equilibria(std::size_t n, const GameParams& params,
                                              const StabilityOptions& opts = {});
/// Serial reference: calls is_pairwise_stable on every profile.
std::vector<Equilibrium> enumerate_equilibria_serial(std::size_t n, const GameParams& params,
                                                     const StabilityOptions& opts = {});

/// Upper bound on the largest customer cone among clique members in any
/// equilibrium: N (phi_p - phi_r (k - 1) + 1). May exceed N.
double cone_size_bound(std::size_t n, std::size_t clique_size, const GameParams& params);

/// Upper bound on the clique size in any equilibrium, independent of N.
/// Throws Error when phi_r == 0.
double clique_size_bound(const GameParams& params);

const char* to_string(StabilityClause c);

}  // namespace astopo
