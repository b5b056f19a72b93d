#include "gwlab/spine_density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "gwlab/stats.hpp"
#include "gwlab/wfield.hpp"

namespace gwlab {

void DensityTrace::write_csv(std::ostream& os) const {
  os << "n,Y,X,tail_bound,R\n";
  char buf[160];
  for (int n = 1; n <= spine_length; ++n) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g", n, y[n - 1],
                  x[n - 1], x_tail_bound[n - 1],
                  ratios.empty() ? std::numeric_limits<double>::quiet_NaN()
                                 : ratios[n - 1]);
    os << buf << "\n";
  }
}

std::vector<Word> graft_set(const SpineTree& s, int n) {
  if (n < 1 || n > s.depth())
    throw std::out_of_range("graft generation outside 1..N");
  std::vector<Word> out;
  for (const auto& graft : s.grafts(n)) out.push_back(graft.root);
  return out;
}

GraftWValues graft_w_from_subtrees(const SpineTree& s, double m) {
  GraftWValues wv;
  wv.w.resize(s.depth());
  int common = -2;  // unset
  for (int n = 1; n <= s.depth(); ++n) {
    for (const auto& graft : s.grafts(n)) {
      wv.w[n - 1].push_back(WField(graft.subtree, m).root_value());
      if (common == -2)
        common = graft.subtree.depth();
      else if (common != graft.subtree.depth())
        common = -1;
    }
  }
  wv.relative_depth = common == -2 ? -1 : common;
  return wv;
}

namespace {

void fill_x_from_y(DensityTrace& trace) {
  int n_levels = trace.spine_length;
  trace.x.assign(n_levels, 0.0);
  trace.x_tail_bound.assign(n_levels, 0.0);
  double x_next = 0.0;
  for (int n = n_levels; n >= 1; --n) {
    x_next = trace.y[n - 1] + x_next / trace.mean_offspring;
    trace.x[n - 1] = x_next;
  }
  double y_mean = 0.0;
  for (double v : trace.y) y_mean += v;
  y_mean /= static_cast<double>(n_levels);
  double m = trace.mean_offspring;
  for (int n = 1; n <= n_levels; ++n) {
    // Omitted terms p > N - n, estimated from the empirical mean of Y.
    trace.x_tail_bound[n - 1] =
        std::pow(m, -(n_levels - n + 1)) * y_mean * m / (m - 1.0);
  }
}

}  // namespace

DensityTrace build_density_trace(const SpineTree& s, const GraftWValues& wv,
                                 double m) {
  if (static_cast<int>(wv.w.size()) != s.depth())
    throw std::invalid_argument("graft W values do not span the spine");
  DensityTrace trace;
  trace.spine_length = s.depth();
  trace.mean_offspring = m;
  trace.graft_w_depth = wv.relative_depth;
  trace.y.assign(s.depth(), 0.0);
  for (int n = 1; n <= s.depth(); ++n) {
    if (wv.w[n - 1].size() != s.grafts(n).size())
      throw std::invalid_argument("missing W value for a grafted subtree");
    for (double w : wv.w[n - 1]) trace.y[n - 1] += w;
  }
  fill_x_from_y(trace);
  return trace;
}

DensityTrace sample_density_trace(const OffspringDistribution& d,
                                  int spine_length, int graft_w_depth,
                                  RngStream& rng, std::int64_t cap) {
  if (spine_length < 1) throw std::invalid_argument("spine length >= 1");
  if (graft_w_depth < 0) throw std::invalid_argument("graft depth >= 0");
  OffspringSampler sampler(d);
  SizeBiasedSampler spine_sampler(d);
  double w_scale = std::pow(d.mean(), -graft_w_depth);
  DensityTrace trace;
  trace.spine_length = spine_length;
  trace.mean_offspring = d.mean();
  trace.graft_w_depth = graft_w_depth;
  trace.y.assign(spine_length, 0.0);
  for (int n = 1; n <= spine_length; ++n) {
    auto step = spine_sampler.draw_spine_step(rng);
    std::int64_t z_sum = 0;
    for (int j = 0; j + 1 < step.offspring_count; ++j)
      z_sum += sample_final_generation(sampler, graft_w_depth, rng, cap);
    trace.y[n - 1] = static_cast<double>(z_sum) * w_scale;
  }
  fill_x_from_y(trace);
  return trace;
}

int attach_ratios(DensityTrace& trace, const Gauge& g) {
  int skipped = 0;
  trace.ratios.assign(trace.spine_length,
                      std::numeric_limits<double>::quiet_NaN());
  double m = trace.mean_offspring;
  for (int n = 2; n <= trace.spine_length; ++n) {
    auto gv = g.at_generation(n);
    if (gv.value == 0.0) {
      ++skipped;
      continue;
    }
    trace.ratios[n - 1] = std::pow(m, -n) * trace.x[n - 1] / gv.value;
  }
  return skipped;
}

std::vector<double> ray_ball_masses(const DensityTrace& trace, double m) {
  if (trace.spine_length < 2)
    throw std::invalid_argument("ray masses need a spine of length >= 2");
  std::vector<double> masses(trace.spine_length - 1);
  for (int n = 0; n + 2 <= trace.spine_length; ++n) {
    // radius e^{-n}: n(r) = n+1, mass = m^{-n(r)-1} X_{n(r)+1}
    masses[n] = std::pow(m, -(n + 2)) * trace.x[n + 1];
  }
  return masses;
}

BoundConstants bound_constants(const OffspringDistribution& d) {
  SizeBiasedLaw hat(d);
  return {1.0 - hat.pmf(1), std::sqrt(d.w_second_moment())};
}

std::vector<double> sample_x1(const OffspringDistribution& d, int depth,
                              std::int64_t reps, RngStream& rng,
                              std::int64_t cap) {
  if (depth < 1) throw std::invalid_argument("x1 depth must be >= 1");
  double scale = std::pow(d.mean(), 1 - depth);
  std::vector<double> out(reps);
  for (std::int64_t i = 0; i < reps; ++i) {
    auto z = sample_sizebiased_generation_sizes(d, depth, rng, cap);
    out[i] = static_cast<double>(z[depth]) * scale;
  }
  return out;
}

namespace {
double proportion_se(double p, std::int64_t n) {
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}
}  // namespace

BoundCheckReport bound_check(const OffspringDistribution& d,
                             const EmpiricalTail& tail,
                             const std::vector<double>& x1_samples,
                             int x1_depth,
                             const std::vector<double>& x_grid) {
  if (x1_samples.empty()) throw std::invalid_argument("no X_1 samples");
  BoundCheckReport rep;
  rep.constants = bound_constants(d);
  rep.tail_meta = tail.meta();
  rep.x1_depth = x1_depth;
  rep.x1_reps = static_cast<std::int64_t>(x1_samples.size());
  if (x1_depth != rep.tail_meta.depth)
    throw std::invalid_argument(
        "X_1 samples and tail use different truncation depths");
  auto n1 = static_cast<std::int64_t>(x1_samples.size());
  auto nt = static_cast<std::int64_t>(tail.sorted_samples().size());
  double m = d.mean();
  rep.all_ok = true;
  for (double x : x_grid) {
    double s = tail.survival(x);
    if (s == 0.0)
      throw std::invalid_argument(
          "grid point beyond the tail sample range; shrink the grid");
    BoundCheckRow row;
    row.x = x;
    std::int64_t above = 0, above_m = 0;
    for (double v : x1_samples) {
      if (v > x) ++above;
      if (v > m * x) ++above_m;
    }
    row.p_x1_above = static_cast<double>(above) / static_cast<double>(n1);
    row.se_p_x1 = proportion_se(row.p_x1_above, n1);
    row.lower_bound = rep.constants.c0 * s;
    row.se_lower = rep.constants.c0 * proportion_se(s, nt);
    row.lower_ok =
        row.p_x1_above >=
        row.lower_bound -
            3.0 * std::hypot(row.se_p_x1, row.se_lower);

    row.p_x1_above_mx = static_cast<double>(above_m) / static_cast<double>(n1);
    row.se_p_mx = proportion_se(row.p_x1_above_mx, n1);
    std::vector<double> w_ind;
    w_ind.reserve(tail.sorted_samples().size());
    for (double w : tail.sorted_samples()) w_ind.push_back(w > x ? w : 0.0);
    auto ind_stats = summarize(w_ind);
    row.w_indicator_mean = ind_stats.mean;
    row.se_w_indicator = ind_stats.stderr_mean;
    row.z_equality = z_score(row.p_x1_above_mx, row.se_p_mx,
                             row.w_indicator_mean, row.se_w_indicator);
    row.equality_ok = row.z_equality <= 3.0;

    row.upper_bound = rep.constants.c1 * std::sqrt(s);
    row.se_upper =
        rep.constants.c1 * 0.5 / std::sqrt(s) * proportion_se(s, nt);
    row.upper_ok =
        row.p_x1_above_mx <=
        row.upper_bound + 3.0 * std::hypot(row.se_p_mx, row.se_upper);

    rep.all_ok = rep.all_ok && row.lower_ok && row.equality_ok && row.upper_ok;
    rep.rows.push_back(row);
  }
  return rep;
}

RatioStatistics density_ratios(std::vector<DensityTrace>& traces,
                               const Gauge& g, double doubling_exponent_a,
                               double safety, int window_lo, int window_hi) {
  if (traces.empty()) throw std::invalid_argument("no traces");
  RatioStatistics st;
  st.spine_length = traces.front().spine_length;
  st.window_lo = window_lo > 0 ? window_lo : std::max(2, st.spine_length / 2);
  st.window_hi = window_hi > 0 ? window_hi : st.spine_length;
  if (st.window_lo < 2 || st.window_hi > st.spine_length ||
      st.window_lo > st.window_hi)
    throw std::invalid_argument("ratio window outside [2, N]");
  st.replicas = static_cast<std::int64_t>(traces.size());
  st.upper_budget =
      std::pow(6.0, doubling_exponent_a) * g.mean_offspring() * safety;

  std::vector<double> maxima;
  maxima.reserve(traces.size());
  int n_dyadic = 0;
  while ((1 << (n_dyadic + 1)) <= st.spine_length) ++n_dyadic;
  std::vector<std::vector<double>> dyadic(n_dyadic);
  std::int64_t at_least_one = 0, within_budget = 0;
  for (auto& trace : traces) {
    if (trace.spine_length != st.spine_length)
      throw std::invalid_argument("traces have mixed spine lengths");
    st.skipped_gauge_zero += attach_ratios(trace, g);
    double mx = 0.0;
    bool any = false;
    for (int n = st.window_lo; n <= st.window_hi; ++n) {
      double r = trace.ratios[n - 1];
      if (std::isnan(r)) continue;
      mx = any ? std::max(mx, r) : r;
      any = true;
    }
    if (!any) continue;
    maxima.push_back(mx);
    if (mx >= 1.0) ++at_least_one;
    if (mx <= st.upper_budget) ++within_budget;
    for (int j = 1; j <= n_dyadic; ++j) {
      int lo = std::max(2, 1 << j);
      int hi = std::min((2 << j) - 1, st.spine_length);
      double wmx = 0.0;
      bool wany = false;
      for (int n = lo; n <= hi; ++n) {
        double r = trace.ratios[n - 1];
        if (std::isnan(r)) continue;
        wmx = wany ? std::max(wmx, r) : r;
        wany = true;
      }
      if (wany) dyadic[j - 1].push_back(wmx);
    }
  }
  if (maxima.empty())
    throw std::runtime_error("gauge vanished on the whole ratio window");
  st.kappa_hat = quantile(maxima, 0.5);
  st.mean_max = summarize(maxima).mean;
  st.q05 = quantile(maxima, 0.05);
  st.q25 = quantile(maxima, 0.25);
  st.q75 = quantile(maxima, 0.75);
  st.q95 = quantile(maxima, 0.95);
  auto denom = static_cast<double>(maxima.size());
  st.frac_at_least_one = static_cast<double>(at_least_one) / denom;
  st.frac_within_budget = static_cast<double>(within_budget) / denom;
  for (auto& window : dyadic)
    st.dyadic_medians.push_back(window.empty() ? 0.0
                                               : quantile(window, 0.5));
  return st;
}

ThinRayReport thin_ray_identity(const OffspringDistribution& d,
                                const TailFunction& tail, const Gauge& g,
                                int n0, int horizon, int reference_depth,
                                std::int64_t reps_direct,
                                std::int64_t reps_spine,
                                RngStream& rng_direct, RngStream& rng_spine,
                                std::int64_t cap) {
  if (!(2 <= n0 && n0 < horizon))
    throw std::invalid_argument("need 2 <= n0 < N");
  if (horizon > 12)
    throw std::invalid_argument(
        "direct side materializes ~m^N nodes per tree; N > 12 refused");
  if (reference_depth < horizon)
    throw std::invalid_argument("reference depth must reach the horizon");
  double m = d.mean();
  ThinRayReport rep;
  rep.n0 = n0;
  rep.horizon = horizon;
  rep.reference_depth = reference_depth;
  for (int n = n0; n <= horizon; ++n) {
    double thr = tail.inverse(0.5 * std::log(static_cast<double>(n))).value / m;
    rep.thresholds.push_back(thr);
    if (thr == 0.0) rep.degenerate_levels.push_back(n);
  }

  // Direct side: materialized GW trees, count J via ancestral Ŵ values.
  double g_at_horizon = g.at_generation(horizon).value;
  std::vector<double> lhs_values(reps_direct);
  for (std::int64_t i = 0; i < reps_direct; ++i) {
    auto tree = sample_tree(d, reference_depth, rng_direct, cap);
    WField wf(tree, m);
    std::int64_t count = 0;
    for (const auto& v : tree.generation(horizon)) {
      bool ok = true;
      for (int n = n0; n <= horizon && ok; ++n)
        ok = wf.value(v.restrict(n)) < rep.thresholds[n - n0];
      if (ok) ++count;
    }
    lhs_values[i] = g_at_horizon * static_cast<double>(count);
  }
  auto lhs_stats = summarize(lhs_values);
  rep.lhs = lhs_stats.mean;
  rep.lhs_se = lhs_stats.stderr_mean;

  // Spine side: X*_n = m^{-(N-n)} W' + Σ_{p=n+1}^N m^{-(p-n)} Y_p with the
  // graft estimates taken at the depths the direct side implies
  // (reference_depth - p), so the identity is exact at finite truncation.
  OffspringSampler sampler(d);
  SizeBiasedSampler spine_sampler(d);
  std::int64_t hits = 0;
  std::vector<std::int64_t> y_below(horizon - n0, 0);
  for (std::int64_t i = 0; i < reps_spine; ++i) {
    std::vector<double> y(horizon + 1, 0.0);
    for (int p = n0 + 1; p <= horizon; ++p) {
      auto step = spine_sampler.draw_spine_step(rng_spine);
      std::int64_t z_sum = 0;
      for (int j = 0; j + 1 < step.offspring_count; ++j)
        z_sum += sample_final_generation(sampler, reference_depth - p,
                                         rng_spine, cap);
      y[p] = static_cast<double>(z_sum) *
             std::pow(m, -(reference_depth - p));
    }
    double w_prime = static_cast<double>(sample_final_generation(
                         sampler, reference_depth - horizon, rng_spine, cap)) *
                     std::pow(m, -(reference_depth - horizon));
    for (int n = n0; n < horizon; ++n) {
      double x_thr = rep.thresholds[n - n0] * m;  // F̂^{-1}(log(n)/2)
      if (y[n + 1] < x_thr) ++y_below[n - n0];
    }
    double x_star = w_prime;  // X*_N
    bool ok = x_star < rep.thresholds[horizon - n0];
    for (int n = horizon - 1; n >= n0 && ok; --n) {
      x_star = (x_star + y[n + 1]) / m;
      ok = x_star < rep.thresholds[n - n0];
    }
    if (ok) ++hits;
  }
  rep.event_probability =
      static_cast<double>(hits) / static_cast<double>(reps_spine);
  double finv_log_n = tail.inverse(std::log(static_cast<double>(horizon))).value;
  rep.rhs = finv_log_n * rep.event_probability;
  rep.rhs_se =
      finv_log_n * proportion_se(rep.event_probability, reps_spine);
  rep.z = z_score(rep.lhs, rep.lhs_se, rep.rhs, rep.rhs_se);
  rep.identity_ok = rep.z <= 3.0;

  double c0 = bound_constants(d).c0;
  auto tail_n = tail.meta().n_samples;
  for (int n = n0; n < horizon; ++n) {
    ThinRayReport::LevelBound lb;
    lb.n = n;
    lb.p_y_below = static_cast<double>(y_below[n - n0]) /
                   static_cast<double>(reps_spine);
    lb.budget = 1.0 - c0 / std::sqrt(static_cast<double>(n));
    // The quantile of an empirical tail is itself noisy; fold the tail's
    // survival-level error into the slack.
    double se_tail = 0.0;
    if (tail_n > 0) {
      double s = tail.survival(rep.thresholds[n - n0] * m);
      se_tail = c0 * proportion_se(s, tail_n);
    }
    lb.se = std::hypot(proportion_se(lb.p_y_below, reps_spine), se_tail);
    lb.ok = lb.p_y_below <= lb.budget + 3.0 * lb.se;
    rep.level_bounds.push_back(lb);
  }
  return rep;
}

}  // namespace gwlab
