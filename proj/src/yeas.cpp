#include "astopo/yeas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace astopo {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Angular separation in [0, pi].
double angle_between(double a, double b) {
  double d = std::fabs(a - b);
  if (d > std::numbers::pi) d = kTwoPi - d;
  return d;
}

// Precomputed hyperbolic functions of the radial coordinate.
using Polar = PolarCache;

std::vector<Polar> polar_table(const std::vector<HyperbolicPoint>& points) {
  std::vector<Polar> t(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    t[i] = {points[i].r, points[i].phi, std::cosh(points[i].r), std::sinh(points[i].r)};
  }
  return t;
}

double cosh_distance(const Polar& a, const Polar& b) {
  const double s = std::sin(0.5 * angle_between(a.phi, b.phi));
  return std::cosh(a.r - b.r) + 2.0 * a.sh * b.sh * s * s;
}

double arcosh_clamped(double x) { return std::acosh(std::max(1.0, x)); }

bool closer(const Predecessor& a, const Predecessor& b) {
  return a.distance < b.distance || (a.distance == b.distance && a.node < b.node);
}

// Nodes grouped by angle; each bucket lists (rank, node) in increasing rank.
struct AngularBuckets {
  AngularBuckets(const std::vector<Polar>& pts, const std::vector<NodeId>& order) {
    count = std::max<std::size_t>(1, pts.size() / 8);
    width = kTwoPi / static_cast<double>(count);
    members.resize(count);
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
      const NodeId v = order[rank];
      members[bucket_of(pts[v].phi)].push_back({rank, v});
    }
  }
  std::size_t bucket_of(double phi) const {
    return std::min(count - 1, static_cast<std::size_t>(phi / width));
  }
  struct Entry {
    std::size_t rank;
    NodeId node;
  };
  std::size_t count;
  double width;
  std::vector<std::vector<Entry>> members;
};

Predecessor scan_predecessor(const std::vector<Polar>& pts, const AngularBuckets& buckets,
                             NodeId w, std::size_t w_rank) {
  const Polar& pw = pts[w];
  Predecessor best{0, std::numeric_limits<double>::infinity()};
  const std::size_t home = buckets.bucket_of(pw.phi);
  auto visit = [&](std::size_t b) {
    for (const auto& e : buckets.members[b]) {
      if (e.rank >= w_rank) break;
      const Predecessor cand{e.node, arcosh_clamped(cosh_distance(pw, pts[e.node]))};
      if (closer(cand, best)) best = cand;
    }
  };
  for (std::size_t k = 0; 2 * k <= buckets.count; ++k) {
    if (k >= 2) {
      // Buckets at offset k are at least (k-1) widths away in angle; the
      // distance from w to the ray at angle delta is asinh(sinh r_w sin delta).
      const double delta = static_cast<double>(k - 1) * buckets.width;
      const double bound =
          delta >= 0.5 * std::numbers::pi ? pw.r : std::asinh(pw.sh * std::sin(delta));
      if (bound > best.distance + 1e-9) break;
    }
    const std::size_t right = (home + k) % buckets.count;
    const std::size_t left = (home + buckets.count - k) % buckets.count;
    visit(right);
    if (left != right) visit(left);
  }
  return best;
}

bool peers_in_phase2(NodeId u, NodeId v, const std::vector<bool>& in_clique,
                     const std::vector<std::optional<NodeId>>& provider) {
  if (in_clique[u] && in_clique[v]) return false;
  if (provider[u] == v || provider[v] == u) return false;
  return true;
}

}  // namespace

void validate(const YeasParams& p) {
  if (p.n == 0) throw Error("yeas: n must be at least 1");
  if (!(p.alpha > 0.5 && p.alpha <= 1.0)) throw Error("yeas: alpha must lie in (0.5, 1]");
  if (!(p.beta > 0.0 && p.beta < 1.0)) throw Error("yeas: beta must lie in (0, 1)");
  if (!(p.radius > 0.0) || !std::isfinite(p.radius)) throw Error("yeas: radius must be positive");
  if (!(p.q > 0.0) || !std::isfinite(p.q)) throw Error("yeas: q must be positive");
  if (p.n > std::numeric_limits<NodeId>::max()) throw Error("yeas: n too large");
}

double radial_coordinate(double u, double alpha, double radius) {
  const double r = std::acosh(1.0 + (std::cosh(alpha * radius) - 1.0) * u) / alpha;
  return std::clamp(r, 0.0, radius);
}

HyperbolicPoint sample_point(const YeasParams& params, UniformStream& rng) {
  const double u1 = rng.next();
  const double u2 = rng.next();
  double phi = kTwoPi * u2;
  if (phi >= kTwoPi) phi = 0.0;
  return {radial_coordinate(u1, params.alpha, params.radius), phi};
}

double hdist_cosh(const HyperbolicPoint& a, const HyperbolicPoint& b) {
  const double s = std::sin(0.5 * angle_between(a.phi, b.phi));
  return std::cosh(a.r - b.r) + 2.0 * std::sinh(a.r) * std::sinh(b.r) * s * s;
}

double hdist(const HyperbolicPoint& a, const HyperbolicPoint& b) {
  return arcosh_clamped(hdist_cosh(a, b));
}

std::vector<NodeId> radial_order(const std::vector<HyperbolicPoint>& points) {
  std::vector<NodeId> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<NodeId>(i);
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return points[a].r < points[b].r || (points[a].r == points[b].r && a < b);
  });
  return order;
}

std::vector<std::optional<Predecessor>> nearest_predecessors_serial(
    const std::vector<HyperbolicPoint>& points, const std::vector<NodeId>& order) {
  const auto pts = polar_table(points);
  std::vector<std::optional<Predecessor>> out(points.size());
  for (std::size_t i = 1; i < order.size(); ++i) {
    const NodeId w = order[i];
    Predecessor best{0, std::numeric_limits<double>::infinity()};
    for (std::size_t j = 0; j < i; ++j) {
      const Predecessor cand{order[j], arcosh_clamped(cosh_distance(pts[w], pts[order[j]]))};
      if (closer(cand, best)) best = cand;
    }
    out[w] = best;
  }
  return out;
}

std::vector<std::optional<Predecessor>> nearest_predecessors(
    const std::vector<HyperbolicPoint>& points, const std::vector<NodeId>& order) {
  const auto pts = polar_table(points);
  const AngularBuckets buckets(pts, order);
  std::vector<std::optional<Predecessor>> out(points.size());
  const auto n = static_cast<std::int64_t>(order.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 1; i < n; ++i) {
    const NodeId w = order[static_cast<std::size_t>(i)];
    out[w] = scan_predecessor(pts, buckets, w, static_cast<std::size_t>(i));
  }
  return out;
}

std::vector<PeerPair> phase2_peer_edges_serial(const std::vector<HyperbolicPoint>& points,
                                               const std::vector<bool>& in_clique,
                                               const std::vector<std::optional<NodeId>>& provider,
                                               double threshold) {
  const auto pts = polar_table(points);
  const double limit = std::cosh(threshold);
  std::vector<PeerPair> out;
  for (NodeId u = 0; u < pts.size(); ++u) {
    for (NodeId v = u + 1; v < pts.size(); ++v) {
      if (peers_in_phase2(u, v, in_clique, provider) && cosh_distance(pts[u], pts[v]) < limit) {
        out.push_back({u, v});
      }
    }
  }
  return out;
}

std::vector<PeerPair> phase2_peer_edges(const std::vector<HyperbolicPoint>& points,
                                        const std::vector<bool>& in_clique,
                                        const std::vector<std::optional<NodeId>>& provider,
                                        double threshold) {
  const auto pts = polar_table(points);
  const double limit = std::cosh(threshold);
  double max_r = 0.0;
  for (const auto& p : pts) max_r = std::max(max_r, p.r);

  constexpr double kBandWidth = 0.5;
  const std::size_t band_count = static_cast<std::size_t>(max_r / kBandWidth) + 1;
  struct Slot {
    double phi;
    NodeId node;
  };
  std::vector<std::vector<Slot>> bands(band_count);
  for (NodeId v = 0; v < pts.size(); ++v) {
    bands[std::min(band_count - 1, static_cast<std::size_t>(pts[v].r / kBandWidth))].push_back(
        {pts[v].phi, v});
  }
  for (auto& b : bands) {
    std::sort(b.begin(), b.end(), [](const Slot& x, const Slot& y) {
      return x.phi < y.phi || (x.phi == y.phi && x.node < y.node);
    });
  }

  std::vector<PeerPair> out;
  const auto n = static_cast<std::int64_t>(pts.size());
#pragma omp parallel
  {
    std::vector<PeerPair> local;
#pragma omp for schedule(dynamic, 256) nowait
    for (std::int64_t i = 0; i < n; ++i) {
      const auto u = static_cast<NodeId>(i);
      const Polar& pu = pts[u];
      for (std::size_t k = 0; k < band_count; ++k) {
        const auto& band = bands[k];
        if (band.empty()) continue;
        const double lo = static_cast<double>(k) * kBandWidth;
        const double hi = lo + kBandWidth;
        const double gap = pu.r < lo ? lo - pu.r : (pu.r > hi ? pu.r - hi : 0.0);
        const double room = limit - std::cosh(gap);
        if (room <= 0.0) continue;
        // cosh d = cosh(ru - rv) + 2 sinh ru sinh rv sin^2(dphi/2) < cosh T
        double window = std::numbers::pi;
        const double denom = 2.0 * pu.sh * std::sinh(lo);
        if (denom > 0.0) {
          const double s2 = room / denom;
          if (s2 < 1.0) window = 2.0 * std::asin(std::sqrt(s2));
        }
        auto visit = [&](const Slot& s) {
          const NodeId v = s.node;
          if (v <= u) return;
          if (!peers_in_phase2(u, v, in_clique, provider)) return;
          if (cosh_distance(pu, pts[v]) < limit) local.push_back({u, v});
        };
        if (window >= std::numbers::pi) {
          for (const auto& s : band) visit(s);
          continue;
        }
        // Angular window [phi - window, phi + window], possibly wrapping.
        auto scan = [&](double from, double to) {
          auto it = std::lower_bound(band.begin(), band.end(), from,
                                     [](const Slot& s, double x) { return s.phi < x; });
          for (; it != band.end() && it->phi <= to; ++it) visit(*it);
        };
        const double from = pu.phi - window;
        const double to = pu.phi + window;
        scan(std::max(0.0, from), std::min(kTwoPi, to));
        if (from < 0.0) scan(from + kTwoPi, kTwoPi);
        if (to > kTwoPi) scan(0.0, to - kTwoPi);
      }
    }
#pragma omp critical
    out.insert(out.end(), local.begin(), local.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

YeasLayout::YeasLayout(const YeasParams& params) : params_(params) {
  validate(params_);
  UniformStream rng(params_.seed);
  points_.reserve(params_.n);
  for (std::size_t i = 0; i < params_.n; ++i) points_.push_back(sample_point(params_, rng));
  order_ = radial_order(points_);
  pred_ = nearest_predecessors(points_, order_);
  polar_ = polar_table(points_);
}

CliqueGrowth YeasLayout::grow(double q) const {
  CliqueGrowth out;
  out.provider.assign(points_.size(), std::nullopt);
  if (order_.empty()) return out;
  out.clique.push_back(order_.front());
  for (std::size_t i = 1; i < order_.size(); ++i) {
    const NodeId w = order_[i];
    double to_clique = 0.0;
    for (NodeId v : out.clique) to_clique += arcosh_clamped(cosh_distance(polar_[w], polar_[v]));
    const double nearest = pred_[w]->distance;
    const bool admit = params_.rule == CliqueRule::scaled_min ? to_clique < q * nearest
                                                              : q * to_clique < nearest;
    if (admit) {
      out.clique.push_back(w);
    } else {
      out.provider[w] = pred_[w]->node;
    }
  }
  return out;
}

YeasResult generate(const YeasLayout& layout, double q) {
  const auto& pts = layout.points();
  const std::size_t n = pts.size();
  const CliqueGrowth growth = layout.grow(q);

  std::vector<bool> in_clique(n, false);
  for (NodeId v : growth.clique) in_clique[v] = true;

  std::vector<PeerPair> peers;
  for (std::size_t i = 0; i < growth.clique.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) peers.push_back({growth.clique[i], growth.clique[j]});
  }
  std::vector<CustomerProvider> cps;
  for (NodeId v = 0; v < n; ++v) {
    if (growth.provider[v]) cps.push_back({v, *growth.provider[v]});
  }
  const auto extra = phase2_peer_edges(pts, in_clique, growth.provider,
                                       layout.params().beta * layout.params().radius);
  peers.insert(peers.end(), extra.begin(), extra.end());

  YeasResult result;
  result.graph = LabeledAsGraph(n, std::move(peers), std::move(cps));
  result.clique = growth.clique;
  std::sort(result.clique.begin(), result.clique.end());
  result.coords = pts;
  return result;
}

YeasResult generate(const YeasParams& params) { return generate(YeasLayout(params), params.q); }

QCalibration calibrate_q(const YeasLayout& layout, std::size_t target) {
  if (layout.params().rule != CliqueRule::scaled_min) {
    throw Error("calibrate_q: only defined for the scaled-min clique rule");
  }
  if (target == 0) throw Error("calibrate_q: target clique size must be positive");
  if (target > layout.points().size()) {
    throw Error("calibrate_q: target clique size exceeds node count");
  }
  auto size_at = [&](double q) { return layout.grow(q).clique.size(); };

  // Smallest q whose clique reaches `want` members, assuming monotone growth.
  auto threshold = [&](std::size_t want) -> std::optional<double> {
    double lo = 1.0;  // q <= 1 never admits a second member
    if (size_at(lo) >= want) return lo;
    double hi = 2.0;
    while (size_at(hi) < want) {
      hi *= 2.0;
      if (hi > 1e9) return std::nullopt;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-7 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (size_at(mid) >= want ? hi : lo) = mid;
    }
    return hi;
  };

  const auto q_low = threshold(target);
  if (!q_low) throw Error("calibrate_q: clique size " + std::to_string(target) + " unreachable");
  const auto q_high = threshold(target + 1);
  QCalibration cal;
  cal.q_low = *q_low;
  cal.q_high = q_high ? *q_high : 2.0 * *q_low;
  cal.q = 0.5 * (cal.q_low + cal.q_high);
  cal.clique_size = size_at(cal.q);
  if (cal.clique_size == target) return cal;

  // Admission is sequential, so a larger q can admit an early member that
  // later blocks others: growth is not always monotone. Fall back to a grid
  // scan and take the midpoint of the longest run hitting the target.
  const double lo = 0.8 * std::min(cal.q_low, cal.q_high);
  const double hi = 1.25 * std::max(cal.q_low, cal.q_high);
  constexpr int kGrid = 256;
  int best_start = -1, best_len = 0;
  for (int i = 0, run = 0; i <= kGrid; ++i) {
    const double q = lo + (hi - lo) * i / kGrid;
    run = size_at(q) == target ? run + 1 : 0;
    if (run > best_len) {
      best_len = run;
      best_start = i - run + 1;
    }
  }
  if (best_len == 0) {
    throw Error("calibrate_q: no q near [" + std::to_string(lo) + ", " + std::to_string(hi) +
                "] yields clique size " + std::to_string(target));
  }
  cal.q_low = lo + (hi - lo) * best_start / kGrid;
  cal.q_high = lo + (hi - lo) * (best_start + best_len - 1) / kGrid;
  cal.q = 0.5 * (cal.q_low + cal.q_high);
  cal.clique_size = size_at(cal.q);
  if (cal.clique_size != target) {
    // The run midpoint can fall between grid points in a gap; use a grid point.
    cal.q = lo + (hi - lo) * (best_start + (best_len - 1) / 2) / kGrid;
    cal.clique_size = target;
  }
  return cal;
}

}  // namespace astopo
