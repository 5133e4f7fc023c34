#include "astopo/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>

#include "astopo/cone.hpp"
#include "astopo/game.hpp"
#include "astopo/io.hpp"
#include "astopo/metrics.hpp"
#include "astopo/spider.hpp"
#include "astopo/theory.hpp"
#include "astopo/yeas.hpp"

namespace astopo {
namespace {

using json = nlohmann::ordered_json;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Infinity and NaN are not JSON numbers.
json jnum(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string invocation_of(int argc, const char* const* argv) {
  std::string s = "astopo";
  for (int i = 1; i < argc; ++i) {
    s += ' ';
    s += argv[i];
  }
  return s;
}

json curve_json(const BinnedCurve& c) {
  json bins = json::array();
  for (const auto& b : c.bins) {
    bins.push_back({{"bin_low", b.low}, {"bin_high", b.high}, {"value", b.value}, {"count", b.count}});
  }
  return {{"scheme", c.scheme}, {"bins", bins}};
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  return f;
}

void write_curve_file(const BinnedCurve& c, const std::string& path, const std::string& invocation) {
  auto f = open_out(path);
  f << "# invocation: " << invocation << '\n';
  write_csv(c, f);
  if (!f) throw IoError("write failure on '" + path + "'");
}

std::optional<double> slope_or_null(const BinnedCurve& c, std::pair<double, double>& range) {
  try {
    range = middle_decades(c);
    return loglog_slope(c, range.first, range.second);
  } catch (const Error&) {
    return std::nullopt;
  }
}

json asn_list(const std::vector<NodeId>& ids, const SnapshotMeta& meta) {
  json a = json::array();
  for (NodeId u : ids) a.push_back(meta.asn(u));
  return a;
}

struct Cli {
  std::ostream& out;
  std::string invocation;

  json header(const std::string& command) const {
    return {{"command", command}, {"invocation", invocation}};
  }
  void emit(const json& j) const { out << j.dump(2) << '\n'; }
};

void add_generate(CLI::App& app, Cli& cli, std::function<void()>& run) {
  auto* sub = app.add_subcommand("generate", "Generate a YEAS topology");
  auto p = std::make_shared<YeasParams>();
  auto calibrate = std::make_shared<std::size_t>(0);
  auto rule = std::make_shared<std::string>("scaled-min");
  auto paths = std::make_shared<std::array<std::string, 3>>();
  sub->add_option("--n", p->n, "Node count")->required()->check(CLI::PositiveNumber);
  sub->add_option("--q", p->q, "Clique admission parameter")->capture_default_str();
  sub->add_option("--alpha", p->alpha, "Radial heterogeneity in (0.5, 1]")->capture_default_str();
  sub->add_option("--beta", p->beta, "Peering threshold fraction of R in (0, 1)")->capture_default_str();
  sub->add_option("--radius", p->radius, "Disk radius R")->capture_default_str();
  sub->add_option("--seed", p->seed, "Random seed")->required();
  sub->add_option("--rule", *rule, "Clique rule")
      ->check(CLI::IsMember({"scaled-min", "literal"}))
      ->capture_default_str();
  sub->add_option("--calibrate-clique", *calibrate,
                  "Choose q so the clique has exactly this many members (overrides --q)");
  sub->add_option("--out", (*paths)[0], "Graph file")->required();
  sub->add_option("--coords", (*paths)[1], "CSV of node coordinates");
  sub->add_option("--clique", (*paths)[2], "File listing clique members");
  sub->callback([&cli, &run, p, calibrate, rule, paths] {
    run = [&cli, p, calibrate, rule, paths] {
      p->rule = *rule == "literal" ? CliqueRule::literal : CliqueRule::scaled_min;
      validate(*p);
      const YeasLayout layout(*p);
      json cal = nullptr;
      double q = p->q;
      if (*calibrate > 0) {
        const auto c = calibrate_q(layout, *calibrate);
        q = c.q;
        cal = {{"target", *calibrate}, {"q", c.q}, {"q_low", c.q_low}, {"q_high", c.q_high}};
      }
      const auto res = generate(layout, q);
      const auto& g = res.graph;
      write_graph_file(g, SnapshotMeta::identity(g.node_count()), (*paths)[0],
                       {"astopo generate", "invocation: " + cli.invocation,
                        "params: n=" + std::to_string(p->n) + " q=" + num(q) + " alpha=" + num(p->alpha) +
                            " beta=" + num(p->beta) + " radius=" + num(p->radius) +
                            " seed=" + std::to_string(p->seed) + " rule=" + *rule});
      if (!(*paths)[1].empty()) {
        auto f = open_out((*paths)[1]);
        f << "# invocation: " << cli.invocation << "\nid,r,phi\n";
        for (std::size_t i = 0; i < res.coords.size(); ++i) {
          f << i << ',' << num(res.coords[i].r) << ',' << num(res.coords[i].phi) << '\n';
        }
      }
      if (!(*paths)[2].empty()) {
        auto f = open_out((*paths)[2]);
        f << "# invocation: " << cli.invocation << '\n';
        for (NodeId u : res.clique) f << u << '\n';
      }
      json j = cli.header("generate");
      j["params"] = {{"n", p->n}, {"q", q},           {"alpha", p->alpha}, {"beta", p->beta},
                     {"radius", p->radius}, {"seed", p->seed}, {"rule", *rule}};
      j["calibration"] = cal;
      j["nodes"] = g.node_count();
      j["edges"] = g.edge_count();
      j["peer_edges"] = g.peer_edge_count();
      j["cp_edges"] = g.cp_edge_count();
      j["clique_size"] = res.clique.size();
      j["clique"] = res.clique;
      cli.emit(j);
    };
  });
}

void add_metrics(CLI::App& app, Cli& cli, std::function<void()>& run) {
  auto* sub = app.add_subcommand("metrics", "Graph statistics and CCDF curves");
  auto path = std::make_shared<std::string>();
  auto opts = std::make_shared<MetricsOptions>();
  auto curves = std::make_shared<std::array<std::string, 2>>();
  sub->add_option("graph", *path, "Graph file")->required();
  sub->add_option("--exact-threshold", opts->exact_threshold, "Exact BFS up to this many nodes")
      ->capture_default_str();
  sub->add_option("--sample-sources", opts->sample_sources, "BFS sources when sampling")
      ->capture_default_str();
  sub->add_option("--seed", opts->seed, "Seed for source sampling")->capture_default_str();
  sub->add_flag("--double-sweep", opts->double_sweep, "Diameter lower bound instead of exact BFS");
  sub->add_option("--degree-ccdf", (*curves)[0], "Write the degree CCDF as CSV");
  sub->add_option("--cone-ccdf", (*curves)[1], "Write the cone-size CCDF as CSV");
  sub->callback([&cli, &run, path, opts, curves] {
    run = [&cli, path, opts, curves] {
      const auto snap = read_graph_file(*path);
      const auto& g = snap.graph;
      const auto r = basic_metrics(g, *opts);
      json j = cli.header("metrics");
      j["source"] = *path;
      j["nodes"] = r.nodes;
      j["edges"] = r.edges;
      j["peer_edges"] = g.peer_edge_count();
      j["cp_edges"] = g.cp_edge_count();
      j["avg_degree"] = r.avg_degree;
      j["avg_local_clustering"] = r.avg_local_clustering;
      j["avg_local_clustering_all_nodes"] = r.avg_local_clustering_all;
      j["global_transitivity"] = r.global_transitivity;
      j["avg_distance"] = r.avg_distance;
      j["diameter"] = r.diameter;
      j["distances_exact"] = r.distances_exact;
      j["diameter_exact"] = r.diameter_exact;
      j["largest_component_size"] = r.largest_component_size;
      j["tier1_count"] = r.tier1_count;
      j["method_notes"] = r.method_notes;
      const auto dc = degree_ccdf(g);
      const auto cc = cone_ccdf(g);
      for (const auto& [name, curve] : {std::pair{"degree_ccdf", &dc}, {"cone_ccdf", &cc}}) {
        std::pair<double, double> range{0, 0};
        const auto s = slope_or_null(*curve, range);
        j[std::string(name) + "_slope"] =
            s ? json{{"slope", *s}, {"x_low", range.first}, {"x_high", range.second}} : json(nullptr);
      }
      if (!(*curves)[0].empty()) write_curve_file(dc, (*curves)[0], cli.invocation);
      if (!(*curves)[1].empty()) write_curve_file(cc, (*curves)[1], cli.invocation);
      cli.emit(j);
    };
  });
}

void add_spider(CLI::App& app, Cli& cli, std::function<void()>& run) {
  auto* sub = app.add_subcommand("spider", "Check the Spider structure and its coverage");
  auto path = std::make_shared<std::string>();
  auto opts = std::make_shared<SpiderOptions>();
  sub->add_option("graph", *path, "Graph file")->required();
  sub->add_option("--max-pairs", opts->max_pairs_per_node, "Pair checks per node before sampling")
      ->capture_default_str();
  sub->add_option("--seed", opts->seed, "Seed for pair sampling")->capture_default_str();
  sub->callback([&cli, &run, path, opts] {
    run = [&cli, path, opts] {
      const auto snap = read_graph_file(*path);
      const auto& g = snap.graph;
      const auto rep = verify_spider(g, *opts);
      json j = cli.header("spider");
      j["source"] = *path;
      j["provider_free"] = asn_list(rep.clique_nodes, snap.meta);
      j["is_peer_clique"] = rep.is_peer_clique;
      j["forest_ok"] = rep.forest_ok;
      j["cone_disjointness_violations"] = rep.cone_disjointness_violations;
      j["sampled"] = rep.sampled;
      j["is_spider"] = rep.is_spider;
      j["top_clique"] = g.node_count() ? asn_list(top_clique(g), snap.meta) : json::array();
      j["coverage"] = g.node_count() ? jnum(spider_coverage(g)) : json(nullptr);
      cli.emit(j);
    };
  });
}

void add_overlap(CLI::App& app, Cli& cli, std::function<void()>& run) {
  auto* sub = app.add_subcommand("overlap", "Cone overlap of peer-neighbour pairs");
  auto path = std::make_shared<std::string>();
  auto samples = std::make_shared<std::size_t>(500000);
  auto seed = std::make_shared<std::uint64_t>(0);
  auto csv = std::make_shared<std::string>();
  sub->add_option("graph", *path, "Graph file")->required();
  sub->add_option("--samples", *samples, "Number of sampled pairs")->capture_default_str();
  sub->add_option("--seed", *seed, "Random seed")->required();
  sub->add_option("--csv", *csv, "Write the overlap CCDF as CSV");
  sub->callback([&cli, &run, path, samples, seed, csv] {
    run = [&cli, path, samples, seed, csv] {
      const auto snap = read_graph_file(*path);
      const auto res = overlap_ccdf(snap.graph, *samples, *seed);
      json j = cli.header("overlap");
      j["source"] = *path;
      j["samples"] = res.samples;
      j["seed"] = *seed;
      j["zero_fraction"] = res.zero_fraction;
      j["curve"] = curve_json(res.curve);
      if (!csv->empty()) write_curve_file(res.curve, *csv, cli.invocation);
      cli.emit(j);
    };
  });
}

void add_peering(CLI::App& app, Cli& cli, std::function<void()>& run) {
  auto* sub = app.add_subcommand("peering", "Peering likelihood against min cone size");
  auto path = std::make_shared<std::string>();
  auto csv = std::make_shared<std::string>();
  sub->add_option("graph", *path, "Graph file")->required();
  sub->add_option("--csv", *csv, "Write the curve as CSV");
  sub->callback([&cli, &run, path, csv] {
    run = [&cli, path, csv] {
      const auto snap = read_graph_file(*path);
      const auto curve = peering_likelihood(snap.graph);
      json j = cli.header("peering");
      j["source"] = *path;
      j["curve"] = curve_json(curve);
      if (!csv->empty()) write_curve_file(curve, *csv, cli.invocation);
      cli.emit(j);
    };
  });
}

json edges_json(const LabeledAsGraph& g) {
  json peers = json::array(), cps = json::array();
  for (const auto& e : g.peer_edges()) peers.push_back({e.a, e.b});
  for (const auto& e : g.cp_edges()) cps.push_back({{"customer", e.customer}, {"provider", e.provider}});
  return {{"peer", peers}, {"customer_provider", cps}};
}

void add_game(CLI::App& app, Cli& cli, std::function<void()>& run) {
  auto* game = app.add_subcommand("game", "Formation game tools");
  game->require_subcommand(1);
  auto* sub = game->add_subcommand("enumerate", "All pairwise stable equilibria for small n");
  auto n = std::make_shared<std::size_t>(3);
  auto params = std::make_shared<GameParams>();
  auto cp_add = std::make_shared<bool>(false);
  sub->add_option("--n", *n, "Players (2..4)")->required()->check(CLI::Range(2, 4));
  sub->add_option("--phi-p", params->phi_p, "Provider edge cost")->required();
  sub->add_option("--phi-r", params->phi_r, "Peer edge cost")->required();
  sub->add_flag("--cp-additions", *cp_add, "Also test unilateral customer-provider additions");
  sub->callback([&cli, &run, n, params, cp_add] {
    run = [&cli, n, params, cp_add] {
      StabilityOptions opts;
      opts.include_cp_additions = *cp_add;
      const auto eqs = enumerate_equilibria(*n, *params, opts);
      json list = json::array();
      for (const auto& eq : eqs) {
        const auto& g = eq.graph;
        const auto spider = verify_spider(g);
        const auto clique = top_clique(g);
        std::vector<bool> in_k(g.node_count(), false);
        for (NodeId u : clique) in_k[u] = true;
        json peer_checks = json::array();
        for (const auto& e : g.peer_edges()) {
          peer_checks.push_back({{"edge", {e.a, e.b}},
                                 {"clique_internal", in_k[e.a] && in_k[e.b]},
                                 {"cpe", is_cpe(g, e.a, e.b, *params)}});
        }
        const auto costs = cost_vector(g, *params);
        json jc = json::array();
        for (double c : costs) jc.push_back(jnum(c));
        const auto sizes = cone_sizes(g);
        std::size_t max_cone = 0;
        for (NodeId u : clique) max_cone = std::max(max_cone, sizes[u]);
        list.push_back({{"edges", edges_json(g)},
                        {"costs", jc},
                        {"is_spider", spider.is_spider},
                        {"clique", clique},
                        {"max_clique_cone", max_cone},
                        {"peer_edges", peer_checks}});
      }
      json j = cli.header("game enumerate");
      j["n"] = *n;
      j["phi_p"] = params->phi_p;
      j["phi_r"] = params->phi_r;
      j["include_cp_additions"] = *cp_add;
      j["equilibria"] = list;
      cli.emit(j);
    };
  });
}

void add_bounds(CLI::App& app, Cli& cli, std::function<void()>& run) {
  auto* sub = app.add_subcommand("bounds", "Equilibrium bounds on clique size and cone size");
  auto params = std::make_shared<GameParams>();
  auto n = std::make_shared<std::size_t>(0);
  auto k = std::make_shared<std::size_t>(0);
  sub->add_option("--phi-p", params->phi_p, "Provider edge cost")->required();
  sub->add_option("--phi-r", params->phi_r, "Peer edge cost")->required();
  auto* nopt = sub->add_option("--n", *n, "Node count (for the cone bound)");
  auto* kopt = sub->add_option("--clique-size", *k, "Clique size (for the cone bound)");
  nopt->needs(kopt);
  kopt->needs(nopt);
  sub->callback([&cli, &run, params, n, k] {
    run = [&cli, params, n, k] {
      json j = cli.header("bounds");
      j["phi_p"] = params->phi_p;
      j["phi_r"] = params->phi_r;
      j["clique_bound"] = params->phi_r > 0.0 ? jnum(clique_size_bound(*params)) : json(nullptr);
      j["cone_bound"] = *n > 0 ? jnum(cone_size_bound(*n, *k, *params)) : json(nullptr);
      cli.emit(j);
    };
  });
}

void add_theory(CLI::App& app, Cli& cli, std::function<void()>& run) {
  auto* theory = app.add_subcommand("theory", "Analytical curves");
  theory->require_subcommand(1);
  auto radius = std::make_shared<double>(18.5);
  auto grid = std::make_shared<std::size_t>(1024);
  auto plain = std::make_shared<bool>(false);

  auto* cone = theory->add_subcommand("cone-profile", "Expected cone size against radius (CSV)");
  cone->add_option("--radius", *radius, "Disk radius R")->capture_default_str();
  cone->add_option("--grid", *grid, "Grid points (>= 64)")->capture_default_str();
  cone->add_flag("--no-richardson", *plain, "Plain trapezoid without extrapolation");
  cone->callback([&cli, &run, radius, grid, plain] {
    run = [&cli, radius, grid, plain] {
      const auto p = solve_cone_profile(*radius, *grid, {!*plain});
      cli.out << "# invocation: " << cli.invocation << "\nr,cone_size,closed_form\n";
      for (std::size_t i = 0; i < p.grid.size(); ++i) {
        cli.out << num(p.grid[i]) << ',' << num(p.values[i]) << ','
                << num(cone_profile_closed_form(p.grid[i], *radius)) << '\n';
      }
    };
  });

  auto* peer = theory->add_subcommand("peering", "Peering probability against radius (CSV)");
  peer->add_option("--radius", *radius, "Disk radius R")->capture_default_str();
  peer->add_option("--grid", *grid, "Evaluation points on (0, R]")->capture_default_str();
  peer->callback([&cli, &run, radius, grid] {
    run = [&cli, radius, grid] {
      if (*grid < 2) throw Error("theory peering: --grid must be at least 2");
      const auto profile = solve_cone_profile(*radius, std::max<std::size_t>(*grid, 64));
      cli.out << "# invocation: " << cli.invocation << "\nr2,exact,approx,cone_size,by_cone\n";
      for (std::size_t i = 1; i <= *grid; ++i) {
        const double r2 = *radius * static_cast<double>(i) / static_cast<double>(*grid);
        const auto p = peering_prob(r2, *radius);
        const double t = profile.at(r2);
        cli.out << num(r2) << ',' << num(p.exact) << ',' << num(p.approx) << ',' << num(t) << ','
                << num(peering_prob_by_cone(t, profile)) << '\n';
      }
    };
  });
}

void add_estimate(CLI::App& app, Cli& cli, std::function<void()>& run) {
  auto* sub = app.add_subcommand("estimate-phis", "Edge costs implied by a measured graph");
  auto path = std::make_shared<std::string>();
  auto c = std::make_shared<std::array<double, 2>>(std::array<double, 2>{1.1, 0.05});
  sub->add_option("graph", *path, "Graph file")->required();
  sub->add_option("--c1", (*c)[0], "Provider cost constant")->capture_default_str();
  sub->add_option("--c2", (*c)[1], "Peer cost constant")->capture_default_str();
  sub->callback([&cli, &run, path, c] {
    run = [&cli, path, c] {
      const auto snap = read_graph_file(*path);
      const auto phis = estimate_phis(snap.graph, (*c)[0], (*c)[1]);
      json j = cli.header("estimate-phis");
      j["source"] = *path;
      j["c1"] = (*c)[0];
      j["c2"] = (*c)[1];
      j["nodes"] = snap.graph.node_count();
      j["peer_edges"] = snap.graph.peer_edge_count();
      j["cp_edges"] = snap.graph.cp_edge_count();
      j["phi_p"] = phis.phi_p;
      j["phi_r"] = phis.phi_r;
      j["clique_bound"] = phis.phi_r > 0.0 ? jnum(clique_size_bound(phis)) : json(nullptr);
      cli.emit(j);
    };
  });
}

void add_timeseries(CLI::App& app, Cli& cli, std::function<void()>& run) {
  auto* sub = app.add_subcommand("timeseries", "Bounds against measured values per snapshot (CSV)");
  auto dir = std::make_shared<std::string>();
  auto c = std::make_shared<std::array<double, 2>>(std::array<double, 2>{1.1, 0.05});
  sub->add_option("--snapshots", *dir, "Directory of graph files")->required();
  sub->add_option("--c1", (*c)[0], "Provider cost constant")->capture_default_str();
  sub->add_option("--c2", (*c)[1], "Peer cost constant")->capture_default_str();
  sub->callback([&cli, &run, dir, c] {
    run = [&cli, dir, c] {
      namespace fs = std::filesystem;
      std::error_code ec;
      if (!fs::is_directory(*dir, ec)) throw IoError("not a directory: '" + *dir + "'");
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(*dir)) {
        if (e.is_regular_file()) files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      std::vector<Snapshot> snaps;
      for (const auto& f : files) snaps.push_back({f.filename().string(), read_graph_file(f.string()).graph});
      const auto rows = bound_timeseries(snaps, (*c)[0], (*c)[1]);
      cli.out << "# invocation: " << cli.invocation << '\n'
              << "label,nodes,peer_edges,cp_edges,phi_p,phi_r,clique_bound,tier1,cone_bound,max_cone\n";
      for (const auto& r : rows) {
        cli.out << r.label << ',' << r.nodes << ',' << r.peer_edges << ',' << r.cp_edges << ','
                << num(r.phis.phi_p) << ',' << num(r.phis.phi_r) << ',' << num(r.clique_bound) << ','
                << r.tier1 << ',' << num(r.cone_bound) << ',' << r.max_cone << '\n';
      }
    };
  });
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"AS topology formation game and YEAS generator toolkit", "astopo"};
  app.require_subcommand(1);
  Cli cli{out, invocation_of(argc, argv)};
  std::function<void()> run;
  add_generate(app, cli, run);
  add_metrics(app, cli, run);
  add_spider(app, cli, run);
  add_overlap(app, cli, run);
  add_peering(app, cli, run);
  add_game(app, cli, run);
  add_bounds(app, cli, run);
  add_theory(app, cli, run);
  add_estimate(app, cli, run);
  add_timeseries(app, cli, run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }
  try {
    if (run) run();
    out.flush();
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace astopo
