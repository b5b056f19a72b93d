#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "gwlab/offspring.hpp"
#include "gwlab/rng.hpp"

namespace gwlab {

struct TailMeta {
  std::string kind;             // "empirical" or "analytic-geometric"
  int depth = 0;                // truncation depth of the W estimates
  std::int64_t n_samples = 0;   // 0 for analytic tails

  bool operator==(const TailMeta&) const = default;
};

struct TailValue {
  double value = 0.0;
  bool saturated = false;  // beyond the largest sample; never extrapolated
};

// F(x) = -log P(W > x) together with its right-continuous inverse
// F^{-1}(y) = inf{ x >= 0 : F(x) > y }.
class TailFunction {
 public:
  virtual ~TailFunction() = default;
  virtual double survival(double x) const = 0;   // P(W > x)
  virtual double log_tail(double x) const = 0;   // F(x), may be +inf
  virtual TailValue inverse(double y) const = 0; // F^{-1}(y)
  virtual TailMeta meta() const = 0;
};

// Order statistics of W estimates (zeros from extinct populations
// included: they are what makes S(0) estimate 1 - q).
class EmpiricalTail : public TailFunction {
 public:
  // Requires at least 100 nonnegative samples.
  EmpiricalTail(std::vector<double> w_samples, int depth);

  double survival(double x) const override;
  double log_tail(double x) const override;
  TailValue inverse(double y) const override;
  TailMeta meta() const override;

  const std::vector<double>& sorted_samples() const { return sorted_; }
  double max_sample() const { return sorted_.back(); }
  // Largest finite value of F̂, attained just below the maximum sample.
  double sup_finite_log_tail() const;

  // CSV export over the distinct sample values:
  // x,survival,F,Finv_at_logx (last column only where x >= 1).
  void write_csv(std::ostream& os) const;

 private:
  std::vector<double> sorted_;
  int depth_;
};

// Closed-form tail of W for the geometric offspring family: W vanishes
// with probability q and is exponential with rate 1-q otherwise, so
// P(W > x) = (1-q) e^{-(1-q)x}. The form must be machine-validated (see
// validate_geometric_tail) before it is trusted anywhere.
class GeometricAnalyticTail : public TailFunction {
 public:
  explicit GeometricAnalyticTail(const OffspringDistribution& d);

  double survival(double x) const override;
  double log_tail(double x) const override;
  TailValue inverse(double y) const override;
  TailMeta meta() const override;

  double extinction_q() const { return q_; }

 private:
  double q_;
};

// Monte Carlo confirmation of the analytic geometric tail through the two
// independent moment identities E[W] = 1 and E[W^2] = (E[k^2]-m)/(m^2-m).
// The truncated estimator has E[Ŵ^2] = 1 + (Var W)(1 - m^{-depth}), which
// is the value actually tested against.
struct TailValidation {
  double mean_w = 0.0;
  double se_mean = 0.0;
  double z_mean = 0.0;
  double mean_w2 = 0.0;
  double se_w2 = 0.0;
  double expected_w2 = 0.0;
  double z_w2 = 0.0;
  bool passed = false;
};
TailValidation validate_geometric_tail(const OffspringDistribution& d,
                                       int depth, std::int64_t reps,
                                       RngStream& rng);

// Hawkes gauge g(r) = r^{log m} F^{-1}(log log 1/r) on (0, 1/e).
class Gauge {
 public:
  Gauge(double mean, std::shared_ptr<const TailFunction> tail);

  // g(r); throws std::domain_error outside (0, e^{-1}).
  TailValue eval(double r) const;

  // g(e^{-n}) computed through the algebraic identity
  // g(e^{-n}) = m^{-n} F^{-1}(log n); defined for every integer n >= 1.
  TailValue at_generation(int n) const;

  double mean_offspring() const { return m_; }
  const TailFunction& tail() const { return *tail_; }
  TailMeta tail_meta() const { return tail_->meta(); }

  // CSV export r,g on a log-spaced grid of `points` radii spanning
  // [e^{-max_gen}, e^{-min_gen}].
  void write_csv(std::ostream& os, int min_gen, int max_gen,
                 int points) const;

 private:
  double m_;
  std::shared_ptr<const TailFunction> tail_;
};

struct DoublingRow {
  double x = 0.0;
  double finv_x = 0.0;
  double finv_2x = 0.0;
  double ratio = 0.0;
  bool excluded_zero = false;  // F^{-1}(x) = 0: ratio undefined
  bool saturated = false;      // either inverse beyond the sample range
};

struct DoublingReport {
  std::vector<DoublingRow> rows;
  double sup_ratio = 0.0;
  double exponent_a = 0.0;  // log2(sup ratio), the growth exponent
  int n_excluded = 0;
};

// sup_x F^{-1}(2x)/F^{-1}(x) over the grid: finite iff F^{-1} grows
// polynomially, with a = log2(sup) the implied exponent. Points where
// F^{-1}(x) = 0 are reported and excluded.
DoublingReport doubling_diagnostic(const TailFunction& tail,
                                   const std::vector<double>& x_grid);

}  // namespace gwlab
