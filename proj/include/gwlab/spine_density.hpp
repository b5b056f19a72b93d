#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gwlab/offspring.hpp"
#include "gwlab/rng.hpp"
#include "gwlab/sampler.hpp"
#include "gwlab/tail.hpp"
#include "gwlab/word.hpp"

namespace gwlab {

// Everything observed along the distinguished ray of one size-biased
// tree: Y_n (summed W estimates of the grafts at generation n), the
// discounted series X_n = Σ_{p=0}^{N-n} m^{-p} Y_{n+p} truncated at the
// spine horizon, the estimated omitted tail of that series, and the
// gauge ratios R_n = m^{-n} X_n / g(e^{-n}) once a gauge is attached.
struct DensityTrace {
  int spine_length = 0;       // N
  double mean_offspring = 0.0;
  int graft_w_depth = -1;     // common relative depth; -1 when per-graft
  std::vector<double> y;      // y[n-1] = Y_n, n = 1..N
  std::vector<double> x;      // x[n-1] = X_n (horizon-truncated)
  std::vector<double> x_tail_bound;  // estimated omitted series tail
  std::vector<double> ratios; // ratios[n-1] = R_n (n >= 2; NaN at n = 1)

  void write_csv(std::ostream& os) const;
};

// Gr(T*, U*) at generation n: off-spine children of the spine node at
// generation n-1. Their count is k*_n - 1.
std::vector<Word> graft_set(const SpineTree& s, int n);

// W estimates of every grafted subtree, aligned with graft_set order.
struct GraftWValues {
  std::vector<std::vector<double>> w;  // w[n-1][j], graft j at level n
  int relative_depth = -1;             // -1 when depths vary per graft
};

// Ŵ of each graft from its own materialized subtree (root value of its
// W field). relative_depth is set only when all subtrees share one.
GraftWValues graft_w_from_subtrees(const SpineTree& s, double m);

// Y and X sequences from spine records plus graft W values. Ratios stay
// unset until attach_ratios.
DensityTrace build_density_trace(const SpineTree& s, const GraftWValues& wv,
                                 double m);

// Streaming sampler for deep spines: draws the spine records and graft W
// estimates (z-chains at graft_w_depth) without materializing any tree.
DensityTrace sample_density_trace(const OffspringDistribution& d,
                                  int spine_length, int graft_w_depth,
                                  RngStream& rng,
                                  std::int64_t cap = kDefaultPopulationCap);

// Fills trace.ratios from the gauge; returns the number of generations
// skipped because the gauge vanished there.
int attach_ratios(DensityTrace& trace, const Gauge& g);

// Ball masses along the spine via the ancestral decomposition:
// masses[n] = M(B(U*, e^{-n})) = m^{-n(r)-1} X_{n(r)+1} with n(e^{-n}) =
// n+1, for n = 0..N-2 (the horizon bounds how deep the series reaches).
std::vector<double> ray_ball_masses(const DensityTrace& trace, double m);

// C0 = 1 - ξ̂(1) and C1 = sqrt(E[W^2]), the constants of the tail bounds.
struct BoundConstants {
  double c0 = 0.0;
  double c1 = 0.0;
};
BoundConstants bound_constants(const OffspringDistribution& d);

// X_1 draws at a truncation depth consistent with the tail samples:
// X_1 = m W*(root) where W*(root) is the depth-`depth` W estimate of a
// size-biased tree, sampled as a size-biased generation-size chain. With
// matched depths, P(X_1 > m x) = E[Ŵ 1_{Ŵ > x}] holds exactly in law.
std::vector<double> sample_x1(const OffspringDistribution& d, int depth,
                              std::int64_t reps, RngStream& rng,
                              std::int64_t cap = kDefaultPopulationCap);

struct BoundCheckRow {
  double x = 0.0;
  double p_x1_above = 0.0;        // P̂(X_1 > x)
  double se_p_x1 = 0.0;
  double lower_bound = 0.0;       // C0 e^{-F̂(x)}
  double se_lower = 0.0;
  bool lower_ok = false;          // domination within 3 combined se
  double p_x1_above_mx = 0.0;     // P̂(X_1 > m x)
  double se_p_mx = 0.0;
  double w_indicator_mean = 0.0;  // E[Ŵ 1_{Ŵ > x}] from the tail samples
  double se_w_indicator = 0.0;
  double z_equality = 0.0;
  bool equality_ok = false;       // |z| <= 3
  double upper_bound = 0.0;       // C1 e^{-F̂(x)/2}
  double se_upper = 0.0;
  bool upper_ok = false;
};

struct BoundCheckReport {
  BoundConstants constants;
  TailMeta tail_meta;
  int x1_depth = 0;
  std::int64_t x1_reps = 0;
  std::vector<BoundCheckRow> rows;
  bool all_ok = false;
};

// (OKbound)/(roughbound) on a grid: P(X_1 > x) dominates C0 e^{-F̂(x)},
// P(X_1 > m x) equals E[Ŵ 1_{Ŵ>x}] and is dominated by C1 e^{-F̂(x)/2}.
BoundCheckReport bound_check(const OffspringDistribution& d,
                             const EmpiricalTail& tail,
                             const std::vector<double>& x1_samples,
                             int x1_depth,
                             const std::vector<double>& x_grid);

// Cross-replica summary of the windowed ratio maxima.
struct RatioStatistics {
  int spine_length = 0;
  int window_lo = 0;
  int window_hi = 0;
  std::int64_t replicas = 0;
  double kappa_hat = 0.0;  // median of windowed maxima: the limsup proxy
  double mean_max = 0.0;
  double q05 = 0.0, q25 = 0.0, q75 = 0.0, q95 = 0.0;
  double frac_at_least_one = 0.0;   // share of replicas with max >= 1
  double upper_budget = 0.0;        // 6^a m * safety
  double frac_within_budget = 0.0;
  std::int64_t skipped_gauge_zero = 0;
  // median windowed max per dyadic window [2^j, 2^{j+1}) — shows whether
  // the limsup proxy has stabilized in n.
  std::vector<double> dyadic_medians;
};

// window_lo = 0 picks the default deep-half window [max(2, N/2), N].
RatioStatistics density_ratios(std::vector<DensityTrace>& traces,
                               const Gauge& g, double doubling_exponent_a,
                               double safety = 2.0, int window_lo = 0,
                               int window_hi = 0);

// Thin-ray counting identity: the expected gauge-weighted count of
// depth-N words whose ancestral W estimates stay below the thinness
// thresholds, against
// F̂^{-1}(log N) P(∀ n in [n0,N]: X*_n < m^{-1} F̂^{-1}(log(n)/2)).
struct ThinRayReport {
  int n0 = 0;
  int horizon = 0;          // N
  int reference_depth = 0;  // depth at which ancestral Ŵ's are estimated
  std::vector<double> thresholds;  // m^{-1} F̂^{-1}(log(n)/2), n = n0..N
  std::vector<int> degenerate_levels;  // threshold exactly 0
  double lhs = 0.0, lhs_se = 0.0;
  double rhs = 0.0, rhs_se = 0.0;
  double event_probability = 0.0;
  double z = 0.0;
  bool identity_ok = false;  // |z| <= 3

  struct LevelBound {
    int n = 0;                // constraint level (uses Y_{n+1})
    double p_y_below = 0.0;   // P̂(Y_{n+1} < F̂^{-1}(log(n)/2))
    double budget = 0.0;      // 1 - C0 n^{-1/2}
    double se = 0.0;
    bool ok = false;          // soft: p <= budget + 3 se
  };
  std::vector<LevelBound> level_bounds;
};

ThinRayReport thin_ray_identity(const OffspringDistribution& d,
                                const TailFunction& tail, const Gauge& g,
                                int n0, int horizon, int reference_depth,
                                std::int64_t reps_direct,
                                std::int64_t reps_spine, RngStream& rng_direct,
                                RngStream& rng_spine,
                                std::int64_t cap = kDefaultPopulationCap);

}  // namespace gwlab
