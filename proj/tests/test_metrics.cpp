#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <sstream>

#include "astopo/metrics.hpp"
#include "astopo/spider.hpp"
#include "astopo/yeas.hpp"

using namespace astopo;

namespace {

LabeledAsGraph path(std::size_t n) {
  std::vector<PeerPair> e;
  for (NodeId i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return LabeledAsGraph(n, e, {});
}

bool nonincreasing(const BinnedCurve& c) {
  for (std::size_t i = 1; i < c.bins.size(); ++i) {
    if (c.bins[i].value > c.bins[i - 1].value) return false;
  }
  return c.bins.empty() || c.bins.front().value <= 1.0;
}

const LabeledAsGraph& sample_graph() {
  static const LabeledAsGraph g = [] {
    YeasParams p;
    p.n = 5000;
    p.seed = 3;
    p.radius = 14.0;
    return generate(p).graph;
  }();
  return g;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("path and triangle") {
    const auto m = basic_metrics(path(5));
    CHECK(m.diameter == 4);
    CHECK(m.avg_local_clustering == 0.0);
    CHECK(m.avg_distance == doctest::Approx(2.0));  // 40 / 20 ordered pairs
    CHECK(m.largest_component_size == 5);
    CHECK(m.distances_exact);

    const auto t = basic_metrics(LabeledAsGraph(3, {{0, 1}, {1, 2}, {0, 2}}, {}));
    CHECK(t.avg_local_clustering == doctest::Approx(1.0));
    CHECK(t.avg_local_clustering_all == doctest::Approx(1.0));
    CHECK(t.global_transitivity == doctest::Approx(1.0));
    CHECK(t.diameter == 1);
    CHECK(t.tier1_count == 3);
  }

  TEST_CASE("clustering conventions differ only on low-degree nodes") {
    // triangle 0-1-2 plus pendant 3 on node 0
    const LabeledAsGraph g(4, {{0, 1}, {1, 2}, {0, 2}, {0, 3}}, {});
    const auto m = basic_metrics(g);
    // local: c0 = 1/3, c1 = c2 = 1, c3 undefined
    CHECK(m.avg_local_clustering == doctest::Approx((1.0 / 3 + 2.0) / 3.0));
    CHECK(m.avg_local_clustering_all == doctest::Approx((1.0 / 3 + 2.0) / 4.0));
    // 3 triangles-at-nodes over 3 + 1 + 1 triples
    CHECK(m.global_transitivity == doctest::Approx(3.0 / 5.0));
  }

  TEST_CASE("components and empty graph") {
    const LabeledAsGraph g(6, {{0, 1}, {1, 2}, {3, 4}}, {});
    CHECK(basic_metrics(g).largest_component_size == 3);
    CHECK(basic_metrics(LabeledAsGraph()).nodes == 0);
  }

  TEST_CASE("parallel kernels match the serial references") {
    const auto& g = sample_graph();
    std::vector<NodeId> src;
    for (NodeId u = 0; u < g.node_count(); u += 7) src.push_back(u);
    const auto a = distance_summary(g.undirected(), src);
    const auto b = distance_summary_serial(g.undirected(), src);
    CHECK(a.pair_count == b.pair_count);
    CHECK(a.distance_sum == b.distance_sum);
    CHECK(a.eccentricity_max == b.eccentricity_max);
    CHECK(local_clustering(g.undirected()) == local_clustering_serial(g.undirected()));
  }

  TEST_CASE("sampled distances track the exact ones") {
    const auto& g = sample_graph();
    const auto exact = basic_metrics(g);
    MetricsOptions o;
    o.exact_threshold = 0;
    o.seed = 17;
    const auto sampled = basic_metrics(g, o);
    CHECK_FALSE(sampled.distances_exact);
    CHECK(sampled.avg_distance == doctest::Approx(exact.avg_distance).epsilon(0.02));
    CHECK(sampled.diameter <= exact.diameter);
    o.double_sweep = true;
    const auto swept = basic_metrics(g, o);
    CHECK(swept.diameter <= exact.diameter);
    CHECK(swept.diameter + 2 >= exact.diameter);
    CHECK(double_sweep_diameter(path(9).undirected(), 4) == 8);
  }

  TEST_CASE("degree and cone CCDFs") {
    // star K_{1,9}
    std::vector<PeerPair> star;
    for (NodeId i = 1; i < 10; ++i) star.push_back({0, i});
    const auto dc = degree_ccdf(LabeledAsGraph(10, star, {}));
    REQUIRE(dc.bins.size() == 2);
    CHECK(dc.bins[0].low == 1.0);
    CHECK(dc.bins[0].value == doctest::Approx(0.1));
    CHECK(dc.bins[1].value == 0.0);
    // cycle: 2-regular step
    std::vector<PeerPair> ring;
    for (NodeId i = 0; i < 6; ++i) ring.push_back({i, static_cast<NodeId>((i + 1) % 6)});
    const auto rc = degree_ccdf(LabeledAsGraph(6, ring, {}));
    REQUIRE(rc.bins.size() == 1);
    CHECK(rc.bins[0].value == 0.0);
    CHECK(rc.bins[0].count == 6);

    const auto flat = cone_ccdf(LabeledAsGraph(4, {}, {}));
    REQUIRE(flat.bins.size() == 1);
    CHECK(flat.bins[0].low == 1.0);
    CHECK(flat.bins[0].value == 0.0);

    std::vector<CustomerProvider> tree;
    for (NodeId c = 1; c < 15; ++c) tree.push_back({c, (c - 1) / 2});
    const auto tc = cone_ccdf(LabeledAsGraph(15, {}, tree));
    REQUIRE(tc.bins.size() == 4);
    const double xs[] = {1, 3, 7, 15};
    const std::uint64_t counts[] = {8, 4, 2, 1};
    const double above[] = {7.0 / 15, 3.0 / 15, 1.0 / 15, 0.0};
    for (int i = 0; i < 4; ++i) {
      CHECK(tc.bins[i].low == xs[i]);
      CHECK(tc.bins[i].count == counts[i]);
      CHECK(tc.bins[i].value == doctest::Approx(above[i]));
    }
    CHECK(nonincreasing(degree_ccdf(sample_graph())));
    CHECK(nonincreasing(cone_ccdf(sample_graph())));
  }

  TEST_CASE("peering likelihood denominators") {
    // cones {1, 1, 3, 3}: 2 and 3 are both providers of 0 and 1; peer {2, 3}
    const LabeledAsGraph g(4, {{2, 3}}, {{0, 2}, {1, 2}, {0, 3}, {1, 3}});
    const auto c = peering_likelihood(g);
    REQUIRE(c.bins.size() == 2);
    CHECK(c.bins[0].low == 1.0);
    CHECK(c.bins[0].count == 5);
    CHECK(c.bins[0].value == 0.0);
    CHECK(c.bins[1].low == 2.0);
    CHECK(c.bins[1].high == 3.0);
    CHECK(c.bins[1].count == 1);
    CHECK(c.bins[1].value == 1.0);

    const auto& big = sample_graph();
    std::uint64_t total = 0;
    for (const auto& b : peering_likelihood(big).bins) total += b.count;
    const std::uint64_t n = big.node_count();
    CHECK(total == n * (n - 1) / 2);
    CHECK_THROWS_AS(peering_likelihood(big, std::vector<std::size_t>(3, 1)), Error);
  }

  TEST_CASE("overlap sampling") {
    // C = 0 peers with A = 1 and B = 2; 3 is a customer of both
    const LabeledAsGraph half(4, {{0, 1}, {0, 2}}, {{3, 1}, {3, 2}});
    const auto r = overlap_ccdf(half, 200, 1);
    CHECK(r.zero_fraction == 0.0);
    for (double x : r.values) CHECK(x == 0.5);

    // spider: K = {0, 1, 2}, 3 -> 0, 4 -> 1, extra peer {3, 4}
    const LabeledAsGraph spider(5, {{0, 1}, {0, 2}, {1, 2}, {3, 4}}, {{3, 0}, {4, 1}});
    REQUIRE(verify_spider(spider).is_spider);
    const auto s = overlap_ccdf(spider, 500, 9);
    CHECK(s.zero_fraction == 1.0);
    CHECK(nonincreasing(s.curve));
    CHECK(s.curve.bins.front().count == 500);

    CHECK_THROWS_AS(overlap_ccdf(LabeledAsGraph(3, {{0, 1}}, {{2, 0}}), 10, 1), Error);
  }

  TEST_CASE("overlap sampling does not depend on the thread count") {
    const auto& g = sample_graph();
    const int before = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto a = overlap_ccdf(g, 3000, 77);
    omp_set_num_threads(4);
    const auto b = overlap_ccdf(g, 3000, 77);
    omp_set_num_threads(before);
    CHECK(a.values == b.values);
    CHECK(nonincreasing(a.curve));
    CHECK_FALSE(a.values == overlap_ccdf(g, 3000, 78).values);
  }

  TEST_CASE("log-log slope of an exact power law") {
    BinnedCurve c;
    for (int x = 1; x <= 100000; ++x) c.bins.push_back({double(x), double(x), std::pow(x, -1.5), 1});
    const auto [lo, hi] = middle_decades(c);
    CHECK(lo == doctest::Approx(std::sqrt(100000.0) / 10));
    CHECK(loglog_slope(c, lo, hi) == doctest::Approx(-1.5).epsilon(0.02));
    CHECK_THROWS_AS(loglog_slope(c, 10, 5), Error);
  }

  TEST_CASE("csv output") {
    BinnedCurve c;
    c.bins.push_back({1, 1, 0.5, 2});
    std::ostringstream os;
    write_csv(c, os);
    CHECK(os.str() == "bin_low,bin_high,value,count\n1,1,0.5,2\n");
  }
}
