#include "astopo/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>

#include "astopo/cone.hpp"
#include "astopo/spider.hpp"

namespace astopo {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// BFS from `source`, reusing `dist` (must be all -1 on entry; restored on exit).
void bfs(const Adjacency& adj, NodeId source, std::vector<std::int32_t>& dist,
         std::vector<NodeId>& queue, DistanceSummary& acc, NodeId* farthest = nullptr) {
  queue.clear();
  queue.push_back(source);
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    for (NodeId v : adj[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  const NodeId last = queue.back();
  const auto ecc = static_cast<std::size_t>(dist[last]);
  acc.pair_count += queue.size() - 1;
  for (NodeId v : queue) acc.distance_sum += static_cast<std::uint64_t>(dist[v]);
  acc.eccentricity_max = std::max(acc.eccentricity_max, ecc);
  if (farthest) *farthest = last;
  for (NodeId v : queue) dist[v] = -1;
}

double clustering_of(const Adjacency& adj, NodeId u, std::vector<std::uint8_t>& mark,
                     std::uint64_t& triangles) {
  const auto nb = adj[u];
  const std::size_t k = nb.size();
  triangles = 0;
  if (k < 2) return 0.0;
  for (NodeId v : nb) mark[v] = 1;
  for (NodeId v : nb) {
    for (NodeId w : adj[v]) triangles += mark[w];
  }
  for (NodeId v : nb) mark[v] = 0;
  triangles /= 2;
  return 2.0 * static_cast<double>(triangles) / (static_cast<double>(k) * static_cast<double>(k - 1));
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

// P(X > x) for a CCDF curve: the value of the last bin ending at or below x.
double ccdf_at(const BinnedCurve& c, double x) {
  double v = 1.0;
  for (const auto& b : c.bins) {
    if (b.high <= x) v = b.value;
    else break;
  }
  return v;
}

}  // namespace

DistanceSummary distance_summary(const Adjacency& adj, const std::vector<NodeId>& sources) {
  const std::size_t n = adj.node_count();
  std::uint64_t pairs = 0, sum = 0;
  std::size_t ecc = 0;
  const auto count = static_cast<std::int64_t>(sources.size());
#pragma omp parallel reduction(+ : pairs, sum) reduction(max : ecc)
  {
    std::vector<std::int32_t> dist(n, -1);
    std::vector<NodeId> queue;
    queue.reserve(n);
    DistanceSummary local;
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < count; ++i) {
      bfs(adj, sources[static_cast<std::size_t>(i)], dist, queue, local);
    }
    pairs += local.pair_count;
    sum += local.distance_sum;
    ecc = std::max(ecc, local.eccentricity_max);
  }
  return {pairs, sum, ecc};
}

DistanceSummary distance_summary_serial(const Adjacency& adj, const std::vector<NodeId>& sources) {
  std::vector<std::int32_t> dist(adj.node_count(), -1);
  std::vector<NodeId> queue;
  DistanceSummary acc;
  for (NodeId s : sources) bfs(adj, s, dist, queue, acc);
  return acc;
}

std::size_t double_sweep_diameter(const Adjacency& adj, NodeId start, int rounds) {
  std::vector<std::int32_t> dist(adj.node_count(), -1);
  std::vector<NodeId> queue;
  std::size_t best = 0;
  NodeId from = start;
  for (int i = 0; i < rounds; ++i) {
    DistanceSummary acc;
    NodeId far = from;
    bfs(adj, from, dist, queue, acc, &far);
    if (i > 0 && acc.eccentricity_max <= best) break;
    best = std::max(best, acc.eccentricity_max);
    from = far;
  }
  return best;
}

std::vector<double> local_clustering(const Adjacency& adj) {
  const std::size_t n = adj.node_count();
  std::vector<double> out(n, 0.0);
#pragma omp parallel
  {
    std::vector<std::uint8_t> mark(n, 0);
    std::uint64_t tri = 0;
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t u = 0; u < static_cast<std::int64_t>(n); ++u) {
      out[static_cast<std::size_t>(u)] = clustering_of(adj, static_cast<NodeId>(u), mark, tri);
    }
  }
  return out;
}

std::vector<double> local_clustering_serial(const Adjacency& adj) {
  const std::size_t n = adj.node_count();
  std::vector<double> out(n, 0.0);
  std::vector<std::uint8_t> mark(n, 0);
  std::uint64_t tri = 0;
  for (NodeId u = 0; u < n; ++u) out[u] = clustering_of(adj, u, mark, tri);
  return out;
}

std::size_t largest_component_size(const Adjacency& adj) {
  const std::size_t n = adj.node_count();
  std::vector<bool> seen(n, false);
  std::vector<NodeId> stack;
  std::size_t best = 0;
  for (NodeId s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::size_t size = 0;
    seen[s] = true;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      ++size;
      for (NodeId v : adj[u]) {
        if (!seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
    best = std::max(best, size);
  }
  return best;
}

MetricsReport basic_metrics(const LabeledAsGraph& g, const MetricsOptions& opts) {
  MetricsReport r;
  const Adjacency& adj = g.undirected();
  const std::size_t n = g.node_count();
  r.nodes = n;
  r.edges = g.edge_count();
  if (n == 0) {
    r.method_notes = "empty graph";
    return r;
  }
  r.avg_degree = 2.0 * static_cast<double>(r.edges) / static_cast<double>(n);

  const auto cc = local_clustering(adj);
  double sum_all = 0.0, sum_deg2 = 0.0, tri3 = 0.0, triples = 0.0;
  std::size_t deg2 = 0;
  for (NodeId u = 0; u < n; ++u) {
    const double k = static_cast<double>(adj[u].size());
    sum_all += cc[u];
    if (adj[u].size() >= 2) {
      sum_deg2 += cc[u];
      ++deg2;
      const double t = k * (k - 1) / 2.0;
      triples += t;
      tri3 += cc[u] * t;
    }
  }
  r.avg_local_clustering = deg2 ? sum_deg2 / static_cast<double>(deg2) : 0.0;
  r.avg_local_clustering_all = sum_all / static_cast<double>(n);
  r.global_transitivity = triples > 0 ? tri3 / triples : 0.0;

  r.largest_component_size = largest_component_size(adj);
  r.tier1_count = top_clique(g).size();

  std::vector<NodeId> sources(n);
  std::iota(sources.begin(), sources.end(), NodeId{0});
  r.distances_exact = n <= opts.exact_threshold && !opts.double_sweep;
  if (!r.distances_exact) {
    // Partial Fisher-Yates: the first k entries become the sample.
    std::mt19937_64 rng(opts.seed);
    const std::size_t k = std::min(opts.sample_sources, n);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
      std::swap(sources[i], sources[j]);
    }
    sources.resize(k);
    std::sort(sources.begin(), sources.end());
  }
  const auto ds = distance_summary(adj, sources);
  r.avg_distance =
      ds.pair_count ? static_cast<double>(ds.distance_sum) / static_cast<double>(ds.pair_count) : 0.0;
  if (opts.double_sweep) {
    std::size_t d = 0;
    for (NodeId s = 0; s < std::min<std::size_t>(n, 4); ++s) d = std::max(d, double_sweep_diameter(adj, s));
    r.diameter = std::max(d, ds.eccentricity_max);
    r.diameter_exact = false;
  } else {
    r.diameter = ds.eccentricity_max;
    r.diameter_exact = r.distances_exact;
  }

  std::string notes = r.distances_exact ? "distances: exact BFS from all " + std::to_string(n) + " sources"
                            : "distances: BFS from " + std::to_string(sources.size()) +
                                  " sampled sources (seed " + std::to_string(opts.seed) + ")";
  notes += r.diameter_exact ? "; diameter exact"
                            : (opts.double_sweep ? "; diameter: double-sweep lower bound"
                                                 : "; diameter: max eccentricity over sampled sources");
  notes += "; clustering: average local over degree>=2 nodes (all-node mean with zeros also reported)";
  notes += "; tier-1: largest peer clique among provider-free nodes";
  r.method_notes = notes;
  return r;
}

BinnedCurve integer_ccdf(std::vector<std::size_t> values) {
  BinnedCurve c;
  c.scheme = "exact: one bin per distinct value; value = P(X > x)";
  if (values.empty()) return c;
  std::sort(values.begin(), values.end());
  const double total = static_cast<double>(values.size());
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    const auto x = static_cast<double>(values[i]);
    c.bins.push_back({x, x, static_cast<double>(values.size() - j) / total, j - i});
    i = j;
  }
  return c;
}

BinnedCurve degree_ccdf(const LabeledAsGraph& g) {
  std::vector<std::size_t> deg(g.node_count());
  for (NodeId u = 0; u < g.node_count(); ++u) deg[u] = g.degree(u);
  return integer_ccdf(std::move(deg));
}

BinnedCurve cone_ccdf(const LabeledAsGraph& g) { return integer_ccdf(cone_sizes(g)); }

BinnedCurve peering_likelihood(const LabeledAsGraph& g, const std::vector<std::size_t>& cones) {
  const std::size_t n = g.node_count();
  if (cones.size() != n) throw Error("peering_likelihood: cone size vector does not match graph");
  auto bin_of = [](std::size_t m) {
    return static_cast<std::size_t>(std::bit_width(std::max<std::size_t>(m, 1)) - 1);
  };
  std::vector<std::uint64_t> pairs(65, 0), hits(65, 0);
  std::vector<std::size_t> sorted = cones;
  std::sort(sorted.begin(), sorted.end());
  // The node at sorted position i is the min of the pairs it forms with every later position.
  for (std::size_t i = 0; i < n; ++i) pairs[bin_of(sorted[i])] += n - 1 - i;
  for (const auto& e : g.peer_edges()) ++hits[bin_of(std::min(cones[e.a], cones[e.b]))];

  BinnedCurve c;
  c.scheme = "base-2 bins [2^j, 2^(j+1)) on min cone size; value = peer pairs / node pairs";
  for (std::size_t b = 0; b < pairs.size(); ++b) {
    if (pairs[b] == 0) continue;
    const double lo = std::ldexp(1.0, static_cast<int>(b));
    c.bins.push_back({lo, 2.0 * lo - 1.0,
                      static_cast<double>(hits[b]) / static_cast<double>(pairs[b]), pairs[b]});
  }
  return c;
}

BinnedCurve peering_likelihood(const LabeledAsGraph& g) {
  return peering_likelihood(g, cone_sizes(g));
}

OverlapResult overlap_ccdf(const LabeledAsGraph& g, std::size_t samples, std::uint64_t seed) {
  const std::size_t n = g.node_count();
  const Adjacency& adj = g.undirected();
  std::vector<NodeId> anchors;  // nodes with >= 2 peers
  for (NodeId u = 0; u < n; ++u) {
    if (g.peers(u).size() >= 2) anchors.push_back(u);
  }
  if (anchors.empty()) throw Error("overlap_ccdf: no node has two or more peer neighbors");

  ConeIndex cones(g);
  {
    std::vector<bool> need(n, false);
    for (NodeId c : anchors) {
      for (NodeId p : g.peers(c)) need[p] = true;
    }
    std::vector<NodeId> list;
    for (NodeId u = 0; u < n; ++u) {
      if (need[u]) list.push_back(u);
    }
    cones.materialize(list);
  }
  const ConeIndex& cview = cones;

  // Degree-weighted draw = uniform draw of an adjacency slot; the owner of
  // slot j is the neighbor stored there.
  const std::size_t slots = adj.targets.size();
  constexpr int kRetryBudget = 100000;

  OverlapResult res;
  res.samples = samples;
  res.values.assign(samples, 0.0);
  bool exhausted = false;
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(samples); ++i) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(i))));
    NodeId c = 0;
    int tries = 0;
    for (; tries < kRetryBudget; ++tries) {
      c = adj.targets[rng() % slots];
      if (g.peers(c).size() >= 2) break;
    }
    if (tries == kRetryBudget) {
#pragma omp atomic write
      exhausted = true;
      continue;
    }
    const auto nb = g.peers(c);
    const std::size_t k = nb.size();
    const std::size_t a = rng() % k;
    std::size_t b = rng() % (k - 1);
    if (b >= a) ++b;
    const auto ta = cview.cone(nb[a]);
    const auto tb = cview.cone(nb[b]);
    const double inter = static_cast<double>(sorted_intersection_size(ta, tb));
    res.values[static_cast<std::size_t>(i)] =
        inter / static_cast<double>(std::min(ta.size(), tb.size()));
  }
  if (exhausted) throw Error("overlap_ccdf: retry budget exhausted drawing a node with two peers");

  // Bins: {0}, then (2^-(J), 2^-(J-1)], ..., (1/2, 1]; anything in (0, 2^-J] joins the lowest.
  constexpr int J = 16;
  std::vector<std::uint64_t> counts(J + 1, 0);
  for (double x : res.values) {
    if (x <= 0.0) {
      ++counts[0];
      continue;
    }
    int e = 0;
    std::frexp(x, &e);  // x in [2^(e-1), 2^e)
    int j = (x == std::ldexp(1.0, e - 1)) ? 1 - e : -e;  // x in (2^-(j+1), 2^-j]
    j = std::clamp(j, 0, J - 1);
    ++counts[static_cast<std::size_t>(J - j)];
  }
  const double total = static_cast<double>(samples);
  res.zero_fraction = samples ? static_cast<double>(counts[0]) / total : 0.0;
  res.curve.scheme = "bins {0} and (2^-(j+1), 2^-j] for j < 16; value = P(x > bin_high)";
  std::uint64_t seen = 0;
  for (int b = 0; b <= J; ++b) {
    seen += counts[static_cast<std::size_t>(b)];
    const double hi = b == 0 ? 0.0 : std::ldexp(1.0, b - J);
    const double lo = b == 0 ? 0.0 : (b == 1 ? 0.0 : std::ldexp(1.0, b - J - 1));
    const double v = samples ? static_cast<double>(samples - seen) / total : 0.0;
    res.curve.bins.push_back({lo, hi, v, counts[static_cast<std::size_t>(b)]});
  }
  return res;
}

std::pair<double, double> middle_decades(const BinnedCurve& c, double decades) {
  double lo = 0.0, hi = 0.0;
  for (const auto& b : c.bins) {
    if (b.low > 0.0 && lo == 0.0) lo = b.low;
    if (b.value > 0.0) hi = b.high;
  }
  if (lo <= 0.0 || hi <= lo) throw Error("middle_decades: curve has no positive support");
  const double centre = std::sqrt(lo * hi);
  const double half = std::pow(10.0, decades / 2.0);
  return {std::max(lo, centre / half), std::min(hi, centre * half)};
}

double loglog_slope(const BinnedCurve& c, double x_lo, double x_hi, std::size_t per_decade) {
  if (!(x_lo > 0.0) || !(x_hi > x_lo)) throw Error("loglog_slope: invalid range");
  const double l0 = std::log10(x_lo), l1 = std::log10(x_hi);
  const auto steps = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::ceil((l1 - l0) * static_cast<double>(per_decade))));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t i = 0; i <= steps; ++i) {
    const double lx = l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(steps);
    const double v = ccdf_at(c, std::pow(10.0, lx));
    if (v <= 0.0) continue;
    const double ly = std::log10(v);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 3) throw Error("loglog_slope: fewer than 3 usable points");
  const double dm = static_cast<double>(m);
  return (dm * sxy - sx * sy) / (dm * sxx - sx * sx);
}

void write_csv(const BinnedCurve& curve, std::ostream& out) {
  out << "bin_low,bin_high,value,count\n";
  for (const auto& b : curve.bins) {
    out << format_double(b.low) << ',' << format_double(b.high) << ',' << format_double(b.value)
        << ',' << b.count << '\n';
  }
}

}  // namespace astopo
