#include "astopo/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "astopo/cone.hpp"
#include "astopo/spider.hpp"
#include "astopo/yeas.hpp"

namespace astopo {
namespace {

constexpr double kPi = std::numbers::pi;

double clamp_unit(double x) { return std::clamp(x, -1.0 + 1e-12, 1.0 - 1e-12); }

// Composite trapezoid, backward from T(R) = 1 on grid_size uniform points.
std::vector<double> trapezoid_solve(double radius, std::size_t m) {
  const double h = radius / static_cast<double>(m - 1);
  const double eh = std::exp(h / 2.0);
  std::vector<double> t(m);
  t[m - 1] = 1.0;
  double k = 0.0;  // int_{r_i}^R T(s) e^{(s - r_i)/2} ds
  for (std::size_t i = m - 1; i-- > 0;) {
    const double next = t[i + 1];
    t[i] = (1.0 + 0.25 * h * next * eh + 0.5 * eh * k) / (1.0 - 0.25 * h);
    k = 0.5 * h * (t[i] + next * eh) + eh * k;
  }
  return t;
}

}  // namespace

TheoryContext::TheoryContext(std::size_t n_, double radius_)
    : n(n_), radius(radius_), delta(static_cast<double>(n_) / (kPi * std::exp(radius_))) {
  if (n_ == 0) throw Error("TheoryContext: n must be positive");
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) throw Error("TheoryContext: radius must be positive");
}

AreaEstimate intersection_area(double l) {
  return {4.0 * std::exp(l / 2.0), l > 1.0};
}

double connect_prob(const TheoryContext& ctx, double l) {
  return std::exp(-ctx.delta * intersection_area(l).area);
}

double ConeProfile::at(double r) const {
  if (grid.empty()) throw Error("ConeProfile: empty profile");
  if (r < grid.front() - 1e-12 || r > grid.back() + 1e-12) {
    throw Error("ConeProfile: r=" + std::to_string(r) + " outside [0, R]");
  }
  const double h = grid[1] - grid[0];
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(std::max(0.0, r / h)), grid.size() - 2);
  const double w = std::clamp((r - grid[i]) / h, 0.0, 1.0);
  return std::exp((1.0 - w) * std::log(values[i]) + w * std::log(values[i + 1]));
}

ConeProfile solve_cone_profile(double radius, std::size_t grid_size, const ConeSolveOptions& opts) {
  if (grid_size < 64) throw Error("solve_cone_profile: grid_size must be at least 64");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error("solve_cone_profile: radius must be positive");
  ConeProfile p;
  p.radius = radius;
  p.grid.resize(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    p.grid[i] = radius * static_cast<double>(i) / static_cast<double>(grid_size - 1);
  }
  p.grid.back() = radius;
  p.values = trapezoid_solve(radius, grid_size);
  if (opts.richardson) {
    const auto fine = trapezoid_solve(radius, 2 * grid_size - 1);
    for (std::size_t i = 0; i < grid_size; ++i) {
      p.values[i] = (4.0 * fine[2 * i] - p.values[i]) / 3.0;
    }
  }
  for (double v : p.values) {
    if (!std::isfinite(v) || v <= 0.0) throw Error("solve_cone_profile: solution is not finite");
  }
  return p;
}

double cone_profile_closed_form(double r, double radius) {
  return 0.5 * (1.0 + std::exp(radius - r));
}

PeeringProb peering_prob(double r2, double radius) {
  if (!(r2 > 0.0)) throw Error("peering_prob: r2 must be positive");
  if (r2 > radius) throw Error("peering_prob: r2 exceeds the disk radius");
  PeeringProb p;
  const double half = radius / 2.0;
  p.approx = r2 < half ? 1.0 : std::exp(half - r2);
  if (r2 <= half) {
    p.exact = 1.0;
    return p;
  }
  // (cosh^2 r - cosh R) / sinh^2 r and cosh r (cosh R - 1) / (sinh r sinh R),
  // rewritten to stay finite for large radii.
  const double sh = std::sinh(r2);
  const double a1 = clamp_unit(1.0 - (std::cosh(radius) - 1.0) / (sh * sh));
  const double a2 = clamp_unit(std::tanh(half) / std::tanh(r2));
  const double formula = std::acos(a1) / kPi + std::exp(radius - r2) * std::acos(a2) / kPi;
  constexpr double kFade = 1e-6;
  const double w = std::min(1.0, (r2 - half) / kFade);
  p.exact = (1.0 - w) + w * formula;
  return p;
}

double peering_prob_by_cone(double t2, const ConeProfile& profile) {
  if (!(t2 >= 1.0)) throw Error("peering_prob_by_cone: cone size must be at least 1");
  const double mid = profile.at(profile.radius / 2.0);
  return t2 > mid ? 1.0 : t2 / mid;
}

double angle_integral_mc(const TheoryContext& ctx, double s, double r, std::size_t samples,
                         std::uint64_t seed) {
  if (samples == 0) throw Error("angle_integral_mc: samples must be positive");
  UniformStream rng(seed);
  const HyperbolicPoint anchor{r, 0.0};
  double sum = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const HyperbolicPoint p{s, 2.0 * kPi * rng.next()};
    sum += std::exp(-4.0 * ctx.delta * std::exp(hdist(p, anchor) / 2.0));
  }
  return 2.0 * kPi * sum / static_cast<double>(samples);
}

double angle_integral_approx(const TheoryContext& ctx, double s, double r) {
  return std::exp(-(s + r) / 2.0) / ctx.delta;
}

GameParams estimate_phis(const LabeledAsGraph& g, double c1, double c2) {
  if (g.cp_edge_count() == 0) throw Error("estimate_phis: graph has no customer-provider edges");
  if (g.peer_edge_count() == 0) throw Error("estimate_phis: graph has no peer edges");
  const auto n = static_cast<double>(g.node_count());
  return {n * c1 / static_cast<double>(g.cp_edge_count()),
          n * c2 / static_cast<double>(g.peer_edge_count())};
}

std::vector<BoundRow> bound_timeseries(const std::vector<Snapshot>& snapshots, double c1, double c2) {
  if (snapshots.empty()) throw Error("bound_timeseries: no snapshots");
  std::vector<BoundRow> rows;
  for (const auto& snap : snapshots) {
    const auto& g = snap.graph;
    BoundRow row;
    row.label = snap.label;
    row.nodes = g.node_count();
    row.peer_edges = g.peer_edge_count();
    row.cp_edges = g.cp_edge_count();
    row.phis = estimate_phis(g, c1, c2);
    row.tier1 = top_clique(g).size();
    row.clique_bound = row.phis.phi_r > 0.0 ? clique_size_bound(row.phis) : INFINITY;
    row.cone_bound = cone_size_bound(row.nodes, std::max<std::size_t>(row.tier1, 1), row.phis);
    const auto sizes = cone_sizes(g);
    row.max_cone = sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace astopo
