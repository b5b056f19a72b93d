// gwlab: reproducible experiments on the boundary geometry of
// supercritical Galton-Watson trees. Subcommands wire the samplers,
// empirical tails, gauges, density traces, ball-cover optimization and
// the identity battery into file-producing runs.
//
// Exit codes: 0 success (soft statistical checks may warn), 1 a hard
// invariant failed, 2 bad usage or a malformed distribution spec.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gwlab/config.hpp"
#include "gwlab/identity.hpp"
#include "gwlab/parallel.hpp"
#include "gwlab/pipeline.hpp"
#include "gwlab/report.hpp"
#include "gwlab/stats.hpp"
#include "gwlab/wfield.hpp"

namespace gw = gwlab;
using nlohmann::json;

namespace {

struct TailBundle {
  std::shared_ptr<const gw::TailFunction> tail;
  std::shared_ptr<gw::EmpiricalTail> empirical;  // null in analytic mode
  std::optional<gw::Gauge> gauge;
  gw::TailValidation validation;  // meaningful in analytic mode
  bool analytic = false;
};

TailBundle build_tail(const gw::ExperimentConfig& cfg,
                      const gw::OffspringDistribution& d, bool analytic) {
  TailBundle bundle;
  if (analytic) {
    if (d.family() != gw::OffspringDistribution::Family::kGeometric)
      throw std::invalid_argument(
          "--analytic-tail exists only for the geometric family");
    gw::RngStream rng(cfg.seed, gw::stream_id(gw::stream_purpose::kValidate, 0));
    bundle.validation = gw::validate_geometric_tail(
        d, cfg.tail_depth, std::max<std::int64_t>(cfg.tail_reps, 1000), rng);
    if (!bundle.validation.passed)
      throw std::runtime_error(
          "analytic geometric tail failed its moment validation (z_mean=" +
          std::to_string(bundle.validation.z_mean) +
          ", z_w2=" + std::to_string(bundle.validation.z_w2) + ")");
    bundle.tail = std::make_shared<gw::GeometricAnalyticTail>(d);
    bundle.analytic = true;
  } else {
    auto samples = gw::sample_w_estimates(d, cfg.tail_depth, cfg.tail_reps,
                                          cfg.seed, gw::stream_purpose::kTail,
                                          cfg.threads, cfg.cap);
    bundle.empirical = std::make_shared<gw::EmpiricalTail>(std::move(samples),
                                                           cfg.tail_depth);
    bundle.tail = bundle.empirical;
  }
  // The Hawkes gauge only exists for supercritical laws; the tail itself
  // is still a legitimate object for flagged boundary/subcritical runs.
  if (d.hyp_ok()) bundle.gauge.emplace(d.mean(), bundle.tail);
  return bundle;
}

const gw::Gauge& require_gauge(const TailBundle& bundle) {
  if (!bundle.gauge)
    throw std::invalid_argument(
        "this subcommand needs the Hawkes gauge, which requires m > 1");
  return *bundle.gauge;
}

std::vector<double> doubling_grid() {
  // 20 points on [1, 20], the diagnostic range used throughout.
  std::vector<double> grid;
  for (int i = 0; i < 20; ++i) grid.push_back(1.0 + i);
  return grid;
}

void write_output(const gw::ExperimentConfig& cfg, const std::string& name,
                  const std::string& content) {
  std::filesystem::create_directories(cfg.output_dir);
  gw::write_file(cfg.output_dir + "/" + name, content);
  std::cout << "wrote " << cfg.output_dir << "/" << name << "\n";
}

int cmd_tail(const gw::ExperimentConfig& cfg,
             const gw::OffspringDistribution& d, bool analytic) {
  auto bundle = build_tail(cfg, d, analytic);
  json out;
  out["meta"] = gw::run_meta(cfg, d);
  out["tail"] = gw::to_json(bundle.tail->meta());
  out["survival_at_zero"] = bundle.tail->survival(0.0);
  out["one_minus_q"] = 1.0 - d.extinction_probability();
  if (analytic) out["validation"] = gw::to_json(bundle.validation);
  auto doubling = gw::doubling_diagnostic(*bundle.tail, doubling_grid());
  out["doubling"] = gw::to_json(doubling);

  if (bundle.empirical) {
    std::ostringstream tail_csv;
    tail_csv << gw::csv_meta(cfg, d);
    bundle.empirical->write_csv(tail_csv);
    write_output(cfg, "tail.csv", tail_csv.str());
  }
  out["gauge_available"] = bundle.gauge.has_value();
  if (bundle.gauge) {
    std::ostringstream gauge_csv;
    gauge_csv << gw::csv_meta(cfg, d);
    bundle.gauge->write_csv(gauge_csv, 2, std::max(3, cfg.spine_length),
                            cfg.r_grid_points);
    write_output(cfg, "gauge.csv", gauge_csv.str());
  } else {
    std::cerr << "warning: m <= 1, no Hawkes gauge; tail written anyway\n";
  }
  write_output(cfg, "tail.json", out.dump(2) + "\n");
  return 0;
}

int cmd_spine(const gw::ExperimentConfig& cfg,
              const gw::OffspringDistribution& d, bool analytic) {
  auto bundle = build_tail(cfg, d, analytic);
  (void)require_gauge(bundle);
  auto doubling =
      gw::doubling_diagnostic(*bundle.tail, doubling_grid());
  auto traces = gw::sample_density_traces(
      d, cfg.spine_length, cfg.subtree_depth, cfg.reps, cfg.seed,
      gw::stream_purpose::kTraces, cfg.threads, cfg.cap);
  auto stats =
      gw::density_ratios(traces, require_gauge(bundle), doubling.exponent_a);

  json out;
  out["meta"] = gw::run_meta(cfg, d);
  out["tail"] = gw::to_json(bundle.tail->meta());
  out["doubling"] = gw::to_json(doubling);
  out["ratio_statistics"] = gw::to_json(stats);
  bool warn_lower = stats.frac_at_least_one < 0.95;
  bool warn_upper = stats.frac_within_budget < 0.95;
  out["soft_checks"] = {
      {"windowed_max_at_least_one_in_95pct", !warn_lower},
      {"windowed_max_within_budget_in_95pct", !warn_upper}};
  if (warn_lower)
    std::cerr << "warning: windowed ratio max reached 1 in only "
              << stats.frac_at_least_one * 100 << "% of replicas\n";
  if (warn_upper)
    std::cerr << "warning: windowed ratio max within 6^a*m budget in only "
              << stats.frac_within_budget * 100 << "% of replicas\n";

  for (int i = 0; i < std::min<std::int64_t>(3, cfg.reps); ++i) {
    std::ostringstream trace_csv;
    trace_csv << gw::csv_meta(cfg, d);
    traces[i].write_csv(trace_csv);
    write_output(cfg, "trace_" + std::to_string(i) + ".csv", trace_csv.str());
  }
  write_output(cfg, "spine.json", out.dump(2) + "\n");
  return 0;
}

int cmd_verify(const gw::ExperimentConfig& cfg,
               const gw::OffspringDistribution& d, int w_depth) {
  std::vector<gw::TwoSidedEstimate> battery;
  auto run_key = [&](const gw::FunctionalSpec& g, std::uint64_t salt) {
    gw::RngStream lhs(cfg.seed, gw::stream_id(gw::stream_purpose::kIdentityLhs, salt));
    gw::RngStream rhs(cfg.seed, gw::stream_id(gw::stream_purpose::kIdentityRhs, salt));
    battery.push_back(gw::spine_measure_identity_mc(d, g, w_depth, cfg.reps, lhs, rhs));
  };
  run_key(gw::FunctionalSpec::constant_one(1), 0);
  run_key(gw::FunctionalSpec::first_step(1), 1);
  run_key(gw::FunctionalSpec::first_step(2), 2);
  run_key(gw::FunctionalSpec::root_count(2), 3);
  run_key(gw::FunctionalSpec::root_count(1), 4);
  {
    gw::TruncatedTree pattern(2);
    pattern.set_offspring(gw::Word::root(), 2);
    pattern.set_offspring(gw::Word::parse("1"), 2);
    pattern.set_offspring(gw::Word::parse("2"), 0);
    run_key(gw::FunctionalSpec::cylinder(pattern, gw::Word::parse("1.1")), 5);
  }
  {
    gw::RngStream lhs(cfg.seed, gw::stream_id(gw::stream_purpose::kIdentityLhs, 6));
    gw::RngStream rhs(cfg.seed, gw::stream_id(gw::stream_purpose::kIdentityRhs, 6));
    battery.push_back(gw::many_to_one_check(d, 2,
                                         gw::FunctionalSpec::constant_one(0),
                                         gw::FunctionalSpec::constant_one(0),
                                         cfg.reps, lhs, rhs));
  }
  {
    gw::RngStream lhs(cfg.seed, gw::stream_id(gw::stream_purpose::kIdentityLhs, 7));
    gw::RngStream rhs(cfg.seed, gw::stream_id(gw::stream_purpose::kIdentityRhs, 7));
    battery.push_back(gw::many_to_one_check(d, 1,
                                         gw::FunctionalSpec::constant_one(0),
                                         gw::FunctionalSpec::root_count(0),
                                         cfg.reps, lhs, rhs));
  }

  json out;
  out["meta"] = gw::run_meta(cfg, d);
  out["w_depth"] = w_depth;
  json specs = json::array();
  bool hard_fail = false;
  bool soft_warn = false;
  for (const auto& est : battery) {
    specs.push_back(gw::to_json(est));
    if (est.z > 5.0) hard_fail = true;
    else if (est.z > 3.0) soft_warn = true;
  }
  out["battery"] = specs;

  // Exact enumeration where the support permits it.
  if (d.family() == gw::OffspringDistribution::Family::kFiniteSupport &&
      d.max_support() <= 5) {
    json tvs = json::array();
    for (int n = 1; n <= 2; ++n) {
      double tv = gw::sizebias_law_tv(d, n);
      tvs.push_back({{"n", n}, {"tv", tv}, {"ok", tv < 1e-12}});
      if (tv >= 1e-12) hard_fail = true;
    }
    out["sizebias_enumeration"] = tvs;
  }
  out["hard_fail"] = hard_fail;
  write_output(cfg, "battery.json", out.dump(2) + "\n");
  if (soft_warn)
    std::cerr << "warning: some identity z-scores lie in (3, 5]\n";
  if (hard_fail) {
    std::cerr << "error: identity battery hard failure (z > 5 or TV >= 1e-12)\n";
    return 1;
  }
  return 0;
}

int cmd_cover(const gw::ExperimentConfig& cfg,
              const gw::OffspringDistribution& d, bool analytic) {
  auto bundle = build_tail(cfg, d, analytic);
  auto covers = gw::run_covers(d, cfg.tree_depth, cfg.min_gen,
                               require_gauge(bundle), cfg.reps, cfg.seed,
                               gw::stream_purpose::kCovers, cfg.threads,
                               cfg.cap);
  auto doubling =
      gw::doubling_diagnostic(*bundle.tail, doubling_grid());
  auto traces = gw::sample_density_traces(
      d, cfg.spine_length, cfg.subtree_depth,
      std::max<std::int64_t>(cfg.reps, 500), cfg.seed,
      gw::stream_purpose::kTraces, cfg.threads, cfg.cap);
  auto stats =
      gw::density_ratios(traces, require_gauge(bundle), doubling.exponent_a);
  auto pairing = gw::c_xi_pairing(stats.kappa_hat, covers.pairs,
                                  bundle.tail->meta(), bundle.tail->meta());

  // Dump the first sampled tree, its ball-mass table, and a discretized
  // comparison verdict on its own frontier masses.
  {
    gw::RngStream rng(cfg.seed, gw::stream_id(gw::stream_purpose::kCovers, 0));
    auto tree = gw::sample_tree(d, cfg.tree_depth, rng, cfg.cap);
    std::ostringstream tree_dump;
    if (cfg.format == "csv") {
      tree_dump << gw::csv_meta(cfg, d);
      tree.write_csv(tree_dump);
      write_output(cfg, "tree_0.csv", tree_dump.str());
    } else {
      tree.write_jsonl(tree_dump);
      write_output(cfg, "tree_0.jsonl", tree_dump.str());
    }
    gw::WField wf(tree, d.mean());
    std::ostringstream wfield_csv;
    wfield_csv << gw::csv_meta(cfg, d);
    wf.write_csv(wfield_csv);
    write_output(cfg, "wfield_0.csv", wfield_csv.str());

    std::map<gw::Word, double, gw::BfsLexLess> frontier_masses;
    for (const auto& leaf : tree.generation(tree.depth()))
      if (wf.value(leaf) > 0.0) frontier_masses[leaf] = wf.ball_mass(leaf);
    if (!frontier_masses.empty()) {
      auto verdict = gw::comparison_check(frontier_masses,
                                          require_gauge(bundle),
                                          std::exp(1.0), cfg.min_gen);
      json comparison;
      comparison["meta"] = gw::run_meta(cfg, d);
      comparison["verdict"] = gw::to_json(verdict);
      write_output(cfg, "comparison.json", comparison.dump(2) + "\n");
    }
  }

  std::vector<double> costs;
  for (const auto& p : covers.pairs) costs.push_back(p.cover_cost);
  auto cost_stats = gw::summarize(costs);

  json out;
  out["meta"] = gw::run_meta(cfg, d);
  out["tail"] = gw::to_json(bundle.tail->meta());
  out["min_gen"] = cfg.min_gen;
  out["cost_mean"] = cost_stats.mean;
  out["cost_se"] = cost_stats.stderr_mean;
  out["sample_cover"] = gw::to_json(covers.sample_solution);
  json per_ball = json::array();
  for (const auto& w : covers.sample_solution.antichain)
    per_ball.push_back(
        {{"word", w.str()},
         {"cost",
          bundle.gauge->at_generation(static_cast<int>(w.length())).value}});
  out["sample_cover_per_ball"] = per_ball;
  out["pairing"] = gw::to_json(pairing);
  write_output(cfg, "cover.json", out.dump(2) + "\n");
  std::cout << "cover cost mean " << cost_stats.mean << ", slope "
            << pairing.slope << " vs 1/kappa " << pairing.inv_kappa << "\n";
  return 0;
}

int cmd_bounds(const gw::ExperimentConfig& cfg,
               const gw::OffspringDistribution& d) {
  auto samples = gw::sample_w_estimates(d, cfg.tail_depth, cfg.tail_reps,
                                        cfg.seed, gw::stream_purpose::kTail,
                                        cfg.threads, cfg.cap);
  auto tail = std::make_shared<gw::EmpiricalTail>(std::move(samples),
                                                  cfg.tail_depth);
  gw::RngStream x1_rng(cfg.seed, gw::stream_id(gw::stream_purpose::kX1, 0));
  auto x1 = gw::sample_x1(d, cfg.tail_depth, cfg.reps, x1_rng, cfg.cap);

  double hi = cfg.x_grid_hi;
  if (hi <= 0.0) {
    const auto& sorted = tail->sorted_samples();
    hi = sorted[static_cast<std::size_t>(0.995 * (sorted.size() - 1))];
  }
  std::vector<double> grid;
  for (int i = 0; i < cfg.x_grid_points; ++i)
    grid.push_back(cfg.x_grid_lo + (hi - cfg.x_grid_lo) * i /
                   std::max(1, cfg.x_grid_points - 1));
  auto report = gw::bound_check(d, *tail, x1, cfg.tail_depth, grid);

  json out;
  out["meta"] = gw::run_meta(cfg, d);
  out["bounds"] = gw::to_json(report);
  write_output(cfg, "bounds.json", out.dump(2) + "\n");
  if (!report.all_ok)
    std::cerr << "warning: some bound checks exceeded 3 combined se\n";
  return 0;
}

int cmd_thin(const gw::ExperimentConfig& cfg,
             const gw::OffspringDistribution& d, int reference_depth) {
  auto bundle = build_tail(cfg, d, false);
  gw::RngStream direct(cfg.seed, gw::stream_id(gw::stream_purpose::kThinDirect, 0));
  gw::RngStream spine(cfg.seed, gw::stream_id(gw::stream_purpose::kThinSpine, 0));
  auto report = gw::thin_ray_identity(d, *bundle.tail, require_gauge(bundle),
                                      cfg.thin_n0, cfg.thin_horizon,
                                      reference_depth, cfg.reps, cfg.reps,
                                      direct, spine, cfg.cap);
  json out;
  out["meta"] = gw::run_meta(cfg, d);
  out["tail"] = gw::to_json(bundle.tail->meta());
  out["thin_ray"] = gw::to_json(report);
  write_output(cfg, "thin.json", out.dump(2) + "\n");
  if (!report.identity_ok)
    std::cerr << "warning: thin-ray identity beyond 3 combined se (z="
              << report.z << ")\n";
  for (const auto& lb : report.level_bounds)
    if (!lb.ok)
      std::cerr << "warning: per-level Y bound exceeded at n=" << lb.n << "\n";
  return 0;
}

std::optional<std::string> config_path_from_argv(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") return std::string(argv[i + 1]);
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  gw::ExperimentConfig cfg;
  bool seed_from_config = false;
  if (auto path = config_path_from_argv(argc, argv)) {
    std::ifstream is(*path);
    if (!is) {
      std::cerr << "error: cannot read config file '" << *path << "'\n";
      return 2;
    }
    std::string text((std::istreambuf_iterator<char>(is)),
                     std::istreambuf_iterator<char>());
    try {
      cfg = gw::ExperimentConfig::from_kv(
          *std::make_unique<std::istringstream>(text));
    } catch (const std::exception& e) {
      std::cerr << "error: bad config file: " << e.what() << "\n";
      return 2;
    }
    seed_from_config = text.find("seed=") != std::string::npos;
  }

  CLI::App app{"Galton-Watson boundary laboratory"};
  app.require_subcommand(1);
  std::string config_file;
  app.add_option("--config", config_file,
                 "key=value config file; command-line flags win");
  bool seed_given = false;
  std::uint64_t seed_value = 0;
  app.add_option("--offspring", cfg.offspring_spec,
                 "offspring law: \"k1:p1,k2:p2,...\" or \"geom:c\"");
  app.add_option("--seed", seed_value, "base rng seed (mandatory)")
      ->each([&](const std::string&) { seed_given = true; });
  app.add_option("--reps", cfg.reps, "replicas for the main stage");
  app.add_option("--tail-reps", cfg.tail_reps, "replicas for tail building");
  app.add_option("--subtree-depth", cfg.subtree_depth,
                 "relative truncation depth of grafted subtrees");
  app.add_option("--tail-depth", cfg.tail_depth,
                 "truncation depth of W estimates");
  app.add_option("--min-gen", cfg.min_gen, "smallest cover ball generation");
  app.add_option("--cap", cfg.cap, "population cap (abort above)");
  app.add_option("--threads", cfg.threads, "worker pool size");
  app.add_option("--output-dir", cfg.output_dir, "output directory");
  app.add_option("--format", cfg.format, "json|csv where both exist")
      ->check(CLI::IsMember({"json", "csv"}));

  int depth = -1;
  bool analytic = false;
  app.add_option("--depth", depth, "primary depth of the subcommand");
  app.add_flag("--analytic-tail", analytic,
               "use the validated closed-form tail (geometric family only)");

  auto* sub_tail = app.add_subcommand("tail", "W samples -> tail and gauge files");
  auto* sub_spine = app.add_subcommand("spine", "density traces and kappa estimate");
  auto* sub_verify = app.add_subcommand("verify", "size-bias identity battery");
  auto* sub_cover = app.add_subcommand("cover", "minimal ball covers and pairing");
  auto* sub_bounds = app.add_subcommand("bounds", "tail bound grids for X_1");
  auto* sub_thin = app.add_subcommand("thin", "thin-ray counting identity");
  int thin_n0 = -1, thin_horizon = -1;
  sub_thin->add_option("--n0", thin_n0, "first constrained generation");
  sub_thin->add_option("--horizon", thin_horizon, "counting generation N");
  for (auto* sub :
       {sub_tail, sub_spine, sub_verify, sub_cover, sub_bounds, sub_thin})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
      return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (seed_given) cfg.seed = seed_value;
  if (!seed_given && !seed_from_config) {
    std::cerr << "error: --seed is mandatory (no wall-clock seeding)\n";
    return 2;
  }
  if (cfg.offspring_spec.empty()) {
    std::cerr << "error: --offspring is required\n";
    return 2;
  }
  if (thin_n0 > 0) cfg.thin_n0 = thin_n0;
  if (thin_horizon > 0) cfg.thin_horizon = thin_horizon;

  gw::OffspringDistribution d = gw::OffspringDistribution::parse("2:1.0");
  try {
    d = gw::OffspringDistribution::parse(cfg.offspring_spec);
  } catch (const std::exception& e) {
    std::cerr << "error: bad --offspring: " << e.what() << "\n";
    return 2;
  }
  if (!d.hyp_ok())
    std::cerr << "warning: offspring law has m <= 1; supercritical "
                 "machinery is flagged off\n";

  try {
    if (*sub_tail) {
      if (depth > 0) cfg.tail_depth = depth;
      return cmd_tail(cfg, d, analytic);
    }
    if (*sub_spine) {
      if (depth > 0) cfg.spine_length = depth;
      return cmd_spine(cfg, d, analytic);
    }
    if (*sub_verify) {
      int w_depth = depth > 0 ? depth : 10;
      return cmd_verify(cfg, d, w_depth);
    }
    if (*sub_cover) {
      if (depth > 0) cfg.tree_depth = depth;
      return cmd_cover(cfg, d, analytic);
    }
    if (*sub_bounds) {
      if (depth > 0) cfg.tail_depth = depth;
      return cmd_bounds(cfg, d);
    }
    if (*sub_thin) {
      int ref = depth > 0 ? depth : cfg.thin_horizon + 6;
      return cmd_thin(cfg, d, ref);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
