#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "astopo/graph.hpp"

namespace astopo {

struct MetricsOptions {
  /// All-sources BFS up to this many nodes, sampled sources above it.
  std::size_t exact_threshold = 50000;
  std::size_t sample_sources = 1000;
  std::uint64_t seed = 0;
  /// Replace the diameter by a double-sweep lower bound.
  bool double_sweep = false;
};

struct MetricsReport {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double avg_degree = 0.0;
  /// Mean local clustering over nodes of degree >= 2 (undefined elsewhere).
  double avg_local_clustering = 0.0;
  /// Same mean over all nodes, degree < 2 counted as 0.
  double avg_local_clustering_all = 0.0;
  /// 3 * triangles / connected triples.
  double global_transitivity = 0.0;
  /// Mean hop distance over connected ordered pairs (unlabeled graph).
  double avg_distance = 0.0;
  std::size_t diameter = 0;
  bool distances_exact = true;
  bool diameter_exact = true;
  std::size_t largest_component_size = 0;
  std::size_t tier1_count = 0;
  std::string method_notes;
};

MetricsReport basic_metrics(const LabeledAsGraph& g, const MetricsOptions& opts = {});

struct DistanceSummary {
  std::uint64_t pair_count = 0;      // connected ordered (source, target) pairs
  std::uint64_t distance_sum = 0;
  std::size_t eccentricity_max = 0;  // max over the sources used
};

/// BFS from each listed source on the undirected graph. OpenMP over sources.
DistanceSummary distance_summary(const Adjacency& adj, const std::vector<NodeId>& sources);
/// Serial reference.
DistanceSummary distance_summary_serial(const Adjacency& adj, const std::vector<NodeId>& sources);

/// Repeated double sweep from `start`: a lower bound on the diameter of its component.
std::size_t double_sweep_diameter(const Adjacency& adj, NodeId start, int rounds = 4);

/// Local clustering per node (0 for degree < 2). OpenMP over nodes.
std::vector<double> local_clustering(const Adjacency& adj);
std::vector<double> local_clustering_serial(const Adjacency& adj);

std::size_t largest_component_size(const Adjacency& adj);

/// One row per bin. For CCDFs, value = P(X > bin_high) and count = number of
/// observations falling in [bin_low, bin_high]. For likelihood curves,
/// value = hits / count.
struct CurveBin {
  double low = 0.0;
  double high = 0.0;
  double value = 0.0;
  std::uint64_t count = 0;
};

struct BinnedCurve {
  std::vector<CurveBin> bins;
  std::string scheme;  // human-readable binning description
};

/// Exact CCDF of integer observations: one bin per distinct value.
BinnedCurve integer_ccdf(std::vector<std::size_t> values);

BinnedCurve degree_ccdf(const LabeledAsGraph& g);
BinnedCurve cone_ccdf(const LabeledAsGraph& g);

/// Fraction of node pairs that are peers, binned by min cone size in base-2
/// bins [2^j, 2^(j+1)). count is the exact number of unordered pairs whose
/// min cone falls in the bin; bins without pairs are omitted.
BinnedCurve peering_likelihood(const LabeledAsGraph& g, const std::vector<std::size_t>& cone_sizes);
BinnedCurve peering_likelihood(const LabeledAsGraph& g);

struct OverlapResult {
  BinnedCurve curve;
  double zero_fraction = 0.0;
  std::size_t samples = 0;
  std::vector<double> values;  // per-sample overlap ratio, in sample order
};

/// Degree-weighted choice of C, then two distinct peer neighbors A, B of C
/// uniformly; x = |t(A) ^ t(B)| / min(|t(A)|, |t(B)|). A draw of C with
/// fewer than two peers is redrawn. Sample i uses its own stream derived
/// from (seed, i), so results do not depend on the thread count.
OverlapResult overlap_ccdf(const LabeledAsGraph& g, std::size_t samples, std::uint64_t seed);

/// Least-squares slope of log10(value) against log10(x) with the CCDF
/// evaluated at log-spaced points of [x_lo, x_hi] (points_per_decade each).
/// Points where the CCDF is zero are skipped. Throws if fewer than 3 remain.
double loglog_slope(const BinnedCurve& ccdf, double x_lo, double x_hi,
                    std::size_t points_per_decade = 10);

/// [x_lo, x_hi] spanning `decades` centred (in log scale) on the support of
/// the curve: from the smallest positive observation to the largest value
/// with a nonzero CCDF. Clipped to that support.
std::pair<double, double> middle_decades(const BinnedCurve& ccdf, double decades = 2.0);

/// CSV with header bin_low,bin_high,value,count.
void write_csv(const BinnedCurve& curve, std::ostream& out);

}  // namespace astopo
