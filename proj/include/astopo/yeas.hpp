#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "astopo/graph.hpp"

namespace astopo {

/// Clique admission rule used in phase 1.
///  scaled_min: sum of distances to the clique < q * distance to the nearest placed node
///  literal:    q * sum of distances to the clique < distance to the nearest placed node
///              (frozen at a single clique member for q >= 1; kept for comparison runs)
enum class CliqueRule : std::uint8_t { scaled_min, literal };

struct YeasParams {
  std::size_t n = 0;
  double q = 5.0;
  double alpha = 0.55;   // layout heterogeneity, (0.5, 1]
  double beta = 0.7;     // peering threshold as a fraction of the radius, (0, 1)
  double radius = 18.5;  // disk radius R
  std::uint64_t seed = 0;
  CliqueRule rule = CliqueRule::scaled_min;
};

/// Throws Error if any parameter is outside its domain (n == 0 included).
void validate(const YeasParams& p);

struct HyperbolicPoint {
  double r = 0.0;    // [0, R]
  double phi = 0.0;  // [0, 2pi)
};

/// Uniform variates on the open interval (0, 1) from a 64-bit Mersenne
/// Twister; bit-exact for a given seed on every platform.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}
  double next() {
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

/// Inverse-CDF radial coordinate: (1/alpha) acosh(1 + (cosh(alpha R) - 1) u).
double radial_coordinate(double u, double alpha, double radius);

/// Draws U1 then U2 from the stream.
HyperbolicPoint sample_point(const YeasParams& params, UniformStream& rng);

/// Hyperbolic law of cosines, evaluated in the cancellation-free form
/// cosh(ra - rb) + 2 sinh ra sinh rb sin^2(dphi / 2).
double hdist(const HyperbolicPoint& a, const HyperbolicPoint& b);

/// cosh of hdist(a, b); monotone in the distance, cheaper to compare.
double hdist_cosh(const HyperbolicPoint& a, const HyperbolicPoint& b);

struct Predecessor {
  NodeId node = 0;
  double distance = 0.0;
};

/// Nodes sorted by increasing radius, ties by index.
std::vector<NodeId> radial_order(const std::vector<HyperbolicPoint>& points);

/// For every node except the first in radial order: the closest node that
/// precedes it in that order (ties by index). Angular buckets with an exact
/// point-to-ray lower bound prune the scan; OpenMP over query nodes.
std::vector<std::optional<Predecessor>> nearest_predecessors(
    const std::vector<HyperbolicPoint>& points, const std::vector<NodeId>& order);
/// Brute-force O(n^2) reference.
std::vector<std::optional<Predecessor>> nearest_predecessors_serial(
    const std::vector<HyperbolicPoint>& points, const std::vector<NodeId>& order);

/// Phase-2 peer edges: unordered pairs {u, v}, not both clique members and
/// not already joined by a phase-1 edge, with hdist(u, v) < threshold.
/// Radial bands x angular windows; OpenMP over nodes. Sorted output.
std::vector<PeerPair> phase2_peer_edges(const std::vector<HyperbolicPoint>& points,
                                        const std::vector<bool>& in_clique,
                                        const std::vector<std::optional<NodeId>>& provider,
                                        double threshold);
/// Brute-force O(n^2) reference.
std::vector<PeerPair> phase2_peer_edges_serial(const std::vector<HyperbolicPoint>& points,
                                               const std::vector<bool>& in_clique,
                                               const std::vector<std::optional<NodeId>>& provider,
                                               double threshold);

/// Hyperbolic point with cosh/sinh of its radius cached.
struct PolarCache {
  double r, phi, ch, sh;
};

struct CliqueGrowth {
  std::vector<NodeId> clique;                   // in admission order
  std::vector<std::optional<NodeId>> provider;  // per node; empty for clique members
};

/// Sampled coordinates and the Q-independent geometry of phase 1.
class YeasLayout {
 public:
  explicit YeasLayout(const YeasParams& params);

  const YeasParams& params() const { return params_; }
  const std::vector<HyperbolicPoint>& points() const { return points_; }
  const std::vector<NodeId>& order() const { return order_; }
  const std::vector<std::optional<Predecessor>>& predecessors() const { return pred_; }

  /// Phase 1 for a given q.
  CliqueGrowth grow(double q) const;

 private:
  YeasParams params_;
  std::vector<HyperbolicPoint> points_;
  std::vector<NodeId> order_;
  std::vector<std::optional<Predecessor>> pred_;
  std::vector<PolarCache> polar_;
};

struct YeasResult {
  LabeledAsGraph graph;
  std::vector<NodeId> clique;  // sorted
  std::vector<HyperbolicPoint> coords;
};

YeasResult generate(const YeasParams& params);
YeasResult generate(const YeasLayout& layout, double q);

struct QCalibration {
  double q = 0.0;
  std::size_t clique_size = 0;
  /// Smallest q reaching the target clique size and the smallest q exceeding it.
  double q_low = 0.0;
  double q_high = 0.0;
};

/// Finds q giving exactly `target` clique members for this layout, taking the
/// midpoint of the plateau. Only defined for CliqueRule::scaled_min. Throws
/// Error when the target is not reachable.
QCalibration calibrate_q(const YeasLayout& layout, std::size_t target);

}  // namespace astopo
