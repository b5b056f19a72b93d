#include "gwlab/report.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gwlab {

namespace {
std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}
}  // namespace

nlohmann::json run_meta(const ExperimentConfig& cfg,
                        const OffspringDistribution& d) {
  nlohmann::json meta;
  meta["offspring"] = cfg.offspring_spec;
  meta["m"] = d.mean();
  meta["q"] = d.extinction_probability();
  meta["hyp_xi_ok"] = d.hyp_ok();
  meta["seed"] = cfg.seed;
  meta["reps"] = cfg.reps;
  meta["tail_reps"] = cfg.tail_reps;
  meta["tree_depth"] = cfg.tree_depth;
  meta["spine_length"] = cfg.spine_length;
  meta["subtree_depth"] = cfg.subtree_depth;
  meta["w_truncation_depth"] = cfg.tail_depth;
  meta["population_cap"] = cfg.cap;
  meta["config_hash"] = cfg.hash();
  meta["generated_at"] = iso_timestamp();
  return meta;
}

std::string csv_meta(const ExperimentConfig& cfg,
                     const OffspringDistribution& d) {
  auto meta = run_meta(cfg, d);
  std::ostringstream os;
  for (auto it = meta.begin(); it != meta.end(); ++it)
    os << "#" << it.key() << "=" << it.value().dump() << "\n";
  return os.str();
}

nlohmann::json to_json(const TailMeta& m) {
  return {{"kind", m.kind}, {"depth", m.depth}, {"n_samples", m.n_samples}};
}

nlohmann::json to_json(const TailValidation& v) {
  return {{"mean_w", v.mean_w},       {"se_mean", v.se_mean},
          {"z_mean", v.z_mean},       {"mean_w2", v.mean_w2},
          {"se_w2", v.se_w2},         {"expected_w2", v.expected_w2},
          {"z_w2", v.z_w2},           {"passed", v.passed}};
}

nlohmann::json to_json(const DoublingReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"x", row.x},
                    {"finv_x", row.finv_x},
                    {"finv_2x", row.finv_2x},
                    {"ratio", row.ratio},
                    {"excluded_zero", row.excluded_zero},
                    {"saturated", row.saturated}});
  }
  return {{"sup_ratio", r.sup_ratio},
          {"exponent_a", r.exponent_a},
          {"n_excluded", r.n_excluded},
          {"rows", rows}};
}

nlohmann::json to_json(const BoundCheckReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"x", row.x},
                    {"p_x1_above", row.p_x1_above},
                    {"se_p_x1", row.se_p_x1},
                    {"lower_bound", row.lower_bound},
                    {"se_lower", row.se_lower},
                    {"lower_ok", row.lower_ok},
                    {"p_x1_above_mx", row.p_x1_above_mx},
                    {"se_p_mx", row.se_p_mx},
                    {"w_indicator_mean", row.w_indicator_mean},
                    {"se_w_indicator", row.se_w_indicator},
                    {"z_equality", row.z_equality},
                    {"equality_ok", row.equality_ok},
                    {"upper_bound", row.upper_bound},
                    {"se_upper", row.se_upper},
                    {"upper_ok", row.upper_ok}});
  }
  return {{"c0", r.constants.c0},
          {"c1", r.constants.c1},
          {"tail", to_json(r.tail_meta)},
          {"x1_depth", r.x1_depth},
          {"x1_reps", r.x1_reps},
          {"all_ok", r.all_ok},
          {"rows", rows}};
}

nlohmann::json to_json(const RatioStatistics& r) {
  return {{"spine_length", r.spine_length},
          {"window_lo", r.window_lo},
          {"window_hi", r.window_hi},
          {"replicas", r.replicas},
          {"kappa_hat", r.kappa_hat},
          {"mean_max", r.mean_max},
          {"q05", r.q05},
          {"q25", r.q25},
          {"q75", r.q75},
          {"q95", r.q95},
          {"frac_at_least_one", r.frac_at_least_one},
          {"upper_budget", r.upper_budget},
          {"frac_within_budget", r.frac_within_budget},
          {"skipped_gauge_zero", r.skipped_gauge_zero},
          {"dyadic_medians", r.dyadic_medians}};
}

nlohmann::json to_json(const ThinRayReport& r) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& lb : r.level_bounds) {
    levels.push_back({{"n", lb.n},
                      {"p_y_below", lb.p_y_below},
                      {"budget", lb.budget},
                      {"se", lb.se},
                      {"ok", lb.ok}});
  }
  return {{"n0", r.n0},
          {"horizon", r.horizon},
          {"reference_depth", r.reference_depth},
          {"thresholds", r.thresholds},
          {"degenerate_levels", r.degenerate_levels},
          {"lhs", r.lhs},
          {"lhs_se", r.lhs_se},
          {"rhs", r.rhs},
          {"rhs_se", r.rhs_se},
          {"event_probability", r.event_probability},
          {"z", r.z},
          {"identity_ok", r.identity_ok},
          {"level_bounds", levels}};
}

nlohmann::json to_json(const PairingReport& r) {
  return {{"slope", r.slope},
          {"slope_se", r.slope_se},
          {"inv_kappa", r.inv_kappa},
          {"ratio", r.ratio},
          {"n_pairs", r.n_pairs},
          {"n_dead", r.n_dead},
          {"tail", to_json(r.tail_meta)},
          {"note", r.note}};
}

nlohmann::json to_json(const TwoSidedEstimate& e) {
  return {{"label", e.label}, {"lhs", e.lhs},       {"lhs_se", e.lhs_se},
          {"rhs", e.rhs},     {"rhs_se", e.rhs_se}, {"z", e.z},
          {"ok", e.ok}};
}

nlohmann::json to_json(const CoverSolution& s) {
  nlohmann::json words = nlohmann::json::array();
  for (const auto& w : s.antichain) words.push_back(w.str());
  return {{"total_cost", s.total_cost},
          {"antichain", words},
          {"min_generation_used", s.min_generation_used},
          {"max_generation_used", s.max_generation_used},
          {"gauge_saturated", s.gauge_saturated}};
}

nlohmann::json to_json(const ComparisonVerdict& v) {
  auto words = [](const std::vector<Word>& ws) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& w : ws) arr.push_back(w.str());
    return arr;
  };
  return {{"cover_cost", v.cover_cost},
          {"mu_total", v.mu_total},
          {"comparison_constant", v.comparison_constant},
          {"lower_hypothesis_holds", v.lower_hypothesis_holds},
          {"lower_witnesses", words(v.lower_witnesses)},
          {"lower_conclusion_checked", v.lower_conclusion_checked},
          {"lower_conclusion_ok", v.lower_conclusion_ok},
          {"upper_hypothesis_holds", v.upper_hypothesis_holds},
          {"upper_witnesses", words(v.upper_witnesses)},
          {"upper_conclusion_checked", v.upper_conclusion_checked},
          {"upper_conclusion_ok", v.upper_conclusion_ok}};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << content;
  if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace gwlab
