#include "astopo/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "astopo/cone.hpp"
#include "astopo/valley_free.hpp"

namespace astopo {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_params(const GameParams& p) {
  if (!(p.phi_p >= 0.0) || !(p.phi_r >= 0.0)) {
    throw Error("game parameters must be nonnegative (phi_p=" + std::to_string(p.phi_p) +
                ", phi_r=" + std::to_string(p.phi_r) + ")");
  }
}

bool weakly_le(double a, double b, double tol) { return a <= b + tol; }

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

// Graph with the {u, v} edge replaced by `role` (Relation::none removes it).
LabeledAsGraph with_pair(const LabeledAsGraph& g, NodeId u, NodeId v, Relation role) {
  std::vector<PeerPair> peers;
  std::vector<CustomerProvider> cps;
  const NodeId lo = std::min(u, v);
  const NodeId hi = std::max(u, v);
  for (const auto& e : g.peer_edges()) {
    if (e.a != lo || e.b != hi) peers.push_back(e);
  }
  for (const auto& e : g.cp_edges()) {
    if (std::min(e.customer, e.provider) != lo || std::max(e.customer, e.provider) != hi) {
      cps.push_back(e);
    }
  }
  if (role == Relation::peer) peers.push_back({u, v});
  if (role == Relation::customer_of) cps.push_back({u, v});
  if (role == Relation::provider_of) cps.push_back({v, u});
  return LabeledAsGraph(g.node_count(), std::move(peers), std::move(cps));
}

std::string node_pair(NodeId u, NodeId v) {
  return "(" + std::to_string(u) + ", " + std::to_string(v) + ")";
}

// ---------------------------------------------------------------------------
// Compact encoding for exhaustive enumeration. Unordered pair p = (i, j),
// i < j, carries a base-4 digit: 0 none, 1 peer, 2 i customer of j,
// 3 j customer of i. Profiles are base-3 numbers over ordered pairs.

struct PairIndex {
  explicit PairIndex(std::size_t n) : n(n), index(n * n, 0) {
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = i + 1; j < n; ++j) {
        index[i * n + j] = index[j * n + i] = pairs.size();
        pairs.emplace_back(i, j);
      }
    }
    pow4.assign(pairs.size() + 1, 1);
    for (std::size_t p = 1; p <= pairs.size(); ++p) pow4[p] = pow4[p - 1] * 4;
  }
  std::size_t n;
  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::vector<std::size_t> index;
  std::vector<std::size_t> pow4;
};

std::uint8_t pair_state(Action ij, Action ji) {
  const bool offer_ij = ij != Action::none;
  const bool offer_ji = ji != Action::none;
  if (offer_ij && offer_ji) return 1;
  if (ij == Action::provider && ji == Action::none) return 2;
  if (ji == Action::provider && ij == Action::none) return 3;
  return 0;
}

LabeledAsGraph decode_graph(const PairIndex& idx, std::size_t code) {
  std::vector<PeerPair> peers;
  std::vector<CustomerProvider> cps;
  for (std::size_t p = 0; p < idx.pairs.size(); ++p) {
    const auto [i, j] = idx.pairs[p];
    switch ((code / idx.pow4[p]) % 4) {
      case 1: peers.push_back({i, j}); break;
      case 2: cps.push_back({i, j}); break;
      case 3: cps.push_back({j, i}); break;
      default: break;
    }
  }
  return LabeledAsGraph(idx.n, std::move(peers), std::move(cps));
}

// Cost-relevant summary of every labeled graph on n nodes.
struct GraphTable {
  GraphTable(const PairIndex& idx, const GameParams& params) : n(idx.n) {
    const std::size_t count = idx.pow4[idx.pairs.size()];
    costs.resize(count * n);
    cyclic.resize(count);
    const auto total = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < total; ++c) {
      const auto code = static_cast<std::size_t>(c);
      const LabeledAsGraph g = decode_graph(idx, code);
      cyclic[code] = has_provider_cycle(g);
      const std::vector<double> cv = cost_vector(g, params);
      std::copy(cv.begin(), cv.end(), costs.begin() + static_cast<std::ptrdiff_t>(code * n));
    }
  }
  double cost(std::size_t code, NodeId u) const { return costs[code * n + u]; }

  std::size_t n;
  std::vector<double> costs;
  std::vector<std::uint8_t> cyclic;
};

class FastChecker {
 public:
  FastChecker(const PairIndex& idx, const GraphTable& table, const StabilityOptions& opts)
      : idx_(idx), table_(table), opts_(opts), rows_(ipow(3, idx.n - 1)) {}

  // Decodes profile index into actions[u*n+v] and returns the graph code.
  std::size_t decode(std::size_t profile, std::vector<Action>& actions) const {
    const std::size_t n = idx_.n;
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = 0; v < n; ++v) {
        if (u == v) continue;
        actions[u * n + v] = static_cast<Action>(profile % 3);
        profile /= 3;
      }
    }
    return graph_code(actions);
  }

  std::size_t graph_code(const std::vector<Action>& a) const {
    const std::size_t n = idx_.n;
    std::size_t code = 0;
    for (std::size_t p = 0; p < idx_.pairs.size(); ++p) {
      const auto [i, j] = idx_.pairs[p];
      code += pair_state(a[i * n + j], a[j * n + i]) * idx_.pow4[p];
    }
    return code;
  }

  bool stable(std::vector<Action>& a, std::size_t code) const {
    const std::size_t n = idx_.n;
    const double tol = opts_.tolerance;
    if (table_.cyclic[code]) return false;

    for (std::size_t p = 0; p < idx_.pairs.size(); ++p) {
      const auto [i, j] = idx_.pairs[p];
      const std::size_t digit = (code / idx_.pow4[p]) % 4;
      const std::size_t base = code - digit * idx_.pow4[p];
      if (digit != 0) {
        if (!weakly_le(table_.cost(code, i), table_.cost(base, i), tol) ||
            !weakly_le(table_.cost(code, j), table_.cost(base, j), tol)) {
          return false;
        }
      } else {
        for (std::size_t added = 1; added <= (opts_.include_cp_additions ? 3u : 1u); ++added) {
          const std::size_t alt = base + added * idx_.pow4[p];
          if (!weakly_le(table_.cost(code, i), table_.cost(alt, i), tol) &&
              !weakly_le(table_.cost(code, j), table_.cost(alt, j), tol)) {
            return false;
          }
        }
      }
    }

    for (NodeId u = 0; u < n; ++u) {
      const double current = table_.cost(code, u);
      std::vector<Action> saved(a.begin() + u * n, a.begin() + (u + 1) * n);
      bool improved = false;
      for (std::size_t row = 0; row < rows_ && !improved; ++row) {
        std::size_t r = row;
        for (NodeId v = 0; v < n; ++v) {
          if (v == u) continue;
          a[u * n + v] = static_cast<Action>(r % 3);
          r /= 3;
        }
        if (table_.cost(graph_code(a), u) < current - tol) improved = true;
      }
      std::copy(saved.begin(), saved.end(), a.begin() + u * n);
      if (improved) return false;
    }
    return true;
  }

 private:
  const PairIndex& idx_;
  const GraphTable& table_;
  const StabilityOptions& opts_;
  std::size_t rows_;
};

void check_enumeration_size(std::size_t n) {
  if (n < 2 || n > kMaxEnumerationPlayers) {
    throw Error("enumerate_equilibria: n must be in 2.." + std::to_string(kMaxEnumerationPlayers) +
                " (got " + std::to_string(n) + "); larger games exceed the enumeration budget");
  }
}

}  // namespace

LabeledAsGraph induce_graph(const StrategyProfile& s) {
  const std::size_t n = s.player_count();
  std::vector<PeerPair> peers;
  std::vector<CustomerProvider> cps;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      switch (pair_state(s.at(u, v), s.at(v, u))) {
        case 1: peers.push_back({u, v}); break;
        case 2: cps.push_back({u, v}); break;
        case 3: cps.push_back({v, u}); break;
        default: break;
      }
    }
  }
  return LabeledAsGraph(n, std::move(peers), std::move(cps));
}

double cost(const LabeledAsGraph& g, NodeId u, const GameParams& params) {
  check_params(params);
  const std::size_t n = g.node_count();
  if (n < 2) throw Error("cost: the game needs at least two players");
  const auto d = valley_free_distances(g, u);
  double comm = 0.0;
  for (NodeId v = 0; v < n; ++v) {
    if (v == u) continue;
    if (d[v] == VfDistance::unreachable) return kInf;
    if (d[v] == VfDistance::one) comm += 1.0;
  }
  return comm / static_cast<double>(n) +
         params.phi_p * static_cast<double>(g.providers(u).size()) +
         params.phi_r * static_cast<double>(g.peers(u).size());
}

std::vector<double> cost_vector(const LabeledAsGraph& g, const GameParams& params) {
  std::vector<double> c(g.node_count());
  for (NodeId u = 0; u < g.node_count(); ++u) c[u] = cost(g, u, params);
  return c;
}

StabilityResult is_pairwise_stable(const StrategyProfile& s, const GameParams& params,
                                   const StabilityOptions& opts) {
  check_params(params);
  const std::size_t n = s.player_count();
  const double tol = opts.tolerance;
  const LabeledAsGraph g = induce_graph(s);
  const std::vector<double> base = cost_vector(g, params);

  auto fail = [](StabilityClause c, std::string why) {
    return StabilityResult{false, c, std::move(why)};
  };

  // (a) unilateral replacement of a whole action row
  const std::size_t rows = ipow(3, n - 1);
  for (NodeId u = 0; u < n; ++u) {
    StrategyProfile alt = s;
    for (std::size_t row = 0; row < rows; ++row) {
      std::size_t r = row;
      for (NodeId v = 0; v < n; ++v) {
        if (v == u) continue;
        alt.set(u, v, static_cast<Action>(r % 3));
        r /= 3;
      }
      const double c = cost(induce_graph(alt), u, params);
      if (c < base[u] - tol) {
        return fail(StabilityClause::nash, "player " + std::to_string(u) +
                                               " lowers its cost from " + std::to_string(base[u]) +
                                               " to " + std::to_string(c));
      }
    }
  }

  // (b) deleting an existing edge helps neither endpoint
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (!g.adjacent(u, v)) continue;
      const auto c = cost_vector(with_pair(g, u, v, Relation::none), params);
      if (!weakly_le(base[u], c[u], tol) || !weakly_le(base[v], c[v], tol)) {
        return fail(StabilityClause::deletion, "deleting edge " + node_pair(u, v) +
                                                   " lowers an endpoint's cost");
      }
    }
  }

  // (c) adding an absent edge: at least one endpoint weakly prefers not to
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (g.adjacent(u, v)) continue;
      std::vector<Relation> roles{Relation::peer};
      if (opts.include_cp_additions) {
        roles.push_back(Relation::customer_of);
        roles.push_back(Relation::provider_of);
      }
      for (Relation role : roles) {
        const auto c = cost_vector(with_pair(g, u, v, role), params);
        if (!weakly_le(base[u], c[u], tol) && !weakly_le(base[v], c[v], tol)) {
          return fail(StabilityClause::addition, "adding " + to_string(role) + " edge " +
                                                     node_pair(u, v) + " lowers both costs");
        }
      }
    }
  }

  // (d)
  if (has_provider_cycle(g)) return fail(StabilityClause::provider_loop, "provider loop present");

  return {};
}

bool is_cpe(const LabeledAsGraph& g, NodeId u, NodeId v, const GameParams& params) {
  check_params(params);
  if (u >= g.node_count() || v >= g.node_count() || g.relation(u, v) != Relation::peer) {
    throw Error("is_cpe: " + node_pair(u, v) + " is not a peer edge");
  }
  const double n = static_cast<double>(g.node_count());
  const auto tu = customer_cone(g, u);
  const auto tv = customer_cone(g, v);
  const double smaller = static_cast<double>(std::min(tu.size(), tv.size()));
  if (!(params.phi_r < smaller / n)) return false;

  // No other peer of `a` whose cone already contains `b`.
  auto covered = [&](NodeId a, NodeId b) {
    for (NodeId w : g.peers(a)) {
      if (w == b) continue;
      const auto tw = customer_cone(g, w);
      if (std::binary_search(tw.begin(), tw.end(), b)) return true;
    }
    return false;
  };
  return !covered(u, v) && !covered(v, u);
}

std::vector<Equilibrium> enumerate_equilibria(std::size_t n, const GameParams& params,
                                              const StabilityOptions& opts) {
  check_enumeration_size(n);
  check_params(params);
  const PairIndex idx(n);
  const GraphTable table(idx, params);
  const FastChecker checker(idx, table, opts);
  const std::size_t total = ipow(3, n * (n - 1));

  // Per-thread hits, merged in profile order afterwards.
  std::vector<std::pair<std::size_t, std::size_t>> hits;  // (profile, graph code)
#pragma omp parallel
  {
    std::vector<std::pair<std::size_t, std::size_t>> local;
    std::vector<Action> actions(n * n, Action::none);
#pragma omp for schedule(dynamic, 4096) nowait
    for (std::int64_t p = 0; p < static_cast<std::int64_t>(total); ++p) {
      const auto profile = static_cast<std::size_t>(p);
      const std::size_t code = checker.decode(profile, actions);
      if (checker.stable(actions, code)) local.emplace_back(profile, code);
    }
#pragma omp critical
    hits.insert(hits.end(), local.begin(), local.end());
  }
  std::sort(hits.begin(), hits.end());

  std::vector<Equilibrium> out;
  std::vector<bool> seen(idx.pow4[idx.pairs.size()], false);
  std::vector<Action> actions(n * n, Action::none);
  for (const auto& [profile, code] : hits) {
    if (seen[code]) continue;
    seen[code] = true;
    checker.decode(profile, actions);
    StrategyProfile s(n);
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = 0; v < n; ++v) {
        if (u != v) s.set(u, v, actions[u * n + v]);
      }
    }
    out.push_back({s, decode_graph(idx, code)});
  }
  return out;
}

std::vector<Equilibrium> enumerate_equilibria_serial(std::size_t n, const GameParams& params,
                                                     const StabilityOptions& opts) {
  check_enumeration_size(n);
  const std::size_t total = ipow(3, n * (n - 1));
  std::vector<Equilibrium> out;
  for (std::size_t profile = 0; profile < total; ++profile) {
    StrategyProfile s(n);
    std::size_t rest = profile;
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = 0; v < n; ++v) {
        if (u == v) continue;
        s.set(u, v, static_cast<Action>(rest % 3));
        rest /= 3;
      }
    }
    if (!is_pairwise_stable(s, params, opts).stable) continue;
    LabeledAsGraph g = induce_graph(s);
    const bool duplicate =
        std::any_of(out.begin(), out.end(), [&](const Equilibrium& e) { return e.graph == g; });
    if (!duplicate) out.push_back({std::move(s), std::move(g)});
  }
  return out;
}

double cone_size_bound(std::size_t n, std::size_t clique_size, const GameParams& params) {
  check_params(params);
  if (clique_size < 1) throw Error("cone_size_bound: clique size must be at least 1");
  return static_cast<double>(n) *
         (params.phi_p - params.phi_r * static_cast<double>(clique_size - 1) + 1.0);
}

double clique_size_bound(const GameParams& params) {
  check_params(params);
  if (params.phi_r == 0.0) throw Error("clique_size_bound: undefined for phi_r = 0");
  const double b = params.phi_p + params.phi_r + 1.0;
  return (b + std::sqrt(b * b - 4.0 * params.phi_r)) / (2.0 * params.phi_r);
}

const char* to_string(StabilityClause c) {
  switch (c) {
    case StabilityClause::none: return "none";
    case StabilityClause::nash: return "nash";
    case StabilityClause::deletion: return "deletion";
    case StabilityClause::addition: return "addition";
    case StabilityClause::provider_loop: return "provider_loop";
  }
  return "?";
}

}  // namespace astopo
