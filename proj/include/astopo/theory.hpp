#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "astopo/game.hpp"
#include "astopo/graph.hpp"

namespace astopo {

/// Node count, disk radius and the node density delta ~ N / (pi e^R).
struct TheoryContext {
  TheoryContext(std::size_t n, double radius);
  std::size_t n;
  double radius;
  double delta;
};

struct AreaEstimate {
  double area = 0.0;
  /// The small-area approximation needs l well away from 0.
  bool valid = true;
};

/// Area of the intersection of the two R-disks centred l apart: 4 e^(l/2).
AreaEstimate intersection_area(double l);

/// Probability that no third node falls in that intersection: exp(-4 delta e^(l/2)).
double connect_prob(const TheoryContext& ctx, double l);

/// Expected cone size against radial coordinate on a uniform grid over [0, R].
struct ConeProfile {
  std::vector<double> grid;
  std::vector<double> values;
  double radius = 0.0;

  /// Log-linear interpolation; r must lie in [0, R].
  double at(double r) const;
};

struct ConeSolveOptions {
  /// Combine the solutions on h and h/2 (trapezoid error is O(h^2)).
  bool richardson = true;
};

/// Solves T(r) = 1 + 1/2 int_r^R T(s) e^((s - r)/2) ds backward from
/// T(R) = 1 with the trapezoid rule. grid_size >= 64. Throws on
/// non-finite values.
ConeProfile solve_cone_profile(double radius, std::size_t grid_size,
                               const ConeSolveOptions& opts = {});

/// Closed form of the same equation (differentiate: T' = 1/2 - T).
double cone_profile_closed_form(double r, double radius);

struct PeeringProb {
  double exact = 0.0;   // intersection-area ratio, arccos form
  double approx = 0.0;  // 1 below R/2, e^(R/2 - r2) above
};

/// Peering probability of a node at radius r2 with the nodes inside it.
/// Throws if r2 <= 0 or r2 > R.
PeeringProb peering_prob(double r2, double radius);

/// Same likelihood as a function of the expected cone size t2 >= 1:
/// 1 above T(R/2), linear in t2 below it.
double peering_prob_by_cone(double t2, const ConeProfile& profile);

/// Monte-Carlo estimate of int_0^2pi exp(-4 delta e^(l/2)) dphi, with l the
/// distance between (s, phi) and (r, 0).
double angle_integral_mc(const TheoryContext& ctx, double s, double r, std::size_t samples,
                         std::uint64_t seed);
/// The approximation of that integral used to reduce the full cone equation:
/// e^(-(s + r)/2) / delta.
double angle_integral_approx(const TheoryContext& ctx, double s, double r);

/// phi_p = N c1 / #cp-edges, phi_r = N c2 / #peer-edges.
GameParams estimate_phis(const LabeledAsGraph& g, double c1 = 1.1, double c2 = 0.05);

struct BoundRow {
  std::string label;
  std::size_t nodes = 0;
  std::size_t peer_edges = 0;
  std::size_t cp_edges = 0;
  GameParams phis;
  double clique_bound = 0.0;
  double cone_bound = 0.0;
  std::size_t tier1 = 0;
  std::size_t max_cone = 0;
};

struct Snapshot {
  std::string label;
  LabeledAsGraph graph;
};

/// One row per snapshot: estimated costs, both bounds (cone bound with the
/// measured tier-1 count) next to the measured values.
std::vector<BoundRow> bound_timeseries(const std::vector<Snapshot>& snapshots, double c1 = 1.1,
                                       double c2 = 0.05);

}  // namespace astopo
