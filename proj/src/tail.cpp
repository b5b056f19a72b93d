#include "gwlab/tail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "gwlab/sampler.hpp"
#include "gwlab/stats.hpp"

namespace gwlab {

EmpiricalTail::EmpiricalTail(std::vector<double> w_samples, int depth)
    : sorted_(std::move(w_samples)), depth_(depth) {
  if (sorted_.size() < 100)
    throw std::invalid_argument("empirical tail needs at least 100 samples");
  for (double w : sorted_)
    if (!(w >= 0.0))
      throw std::invalid_argument("W estimates must be nonnegative");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalTail::survival(double x) const {
  auto above = sorted_.end() -
               std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(above) / static_cast<double>(sorted_.size());
}

double EmpiricalTail::log_tail(double x) const {
  double s = survival(x);
  if (s == 0.0) return std::numeric_limits<double>::infinity();
  return -std::log(s);
}

double EmpiricalTail::sup_finite_log_tail() const {
  auto ties = sorted_.end() - std::lower_bound(sorted_.begin(), sorted_.end(),
                                               sorted_.back());
  return -std::log(static_cast<double>(ties) /
                   static_cast<double>(sorted_.size()));
}

TailValue EmpiricalTail::inverse(double y) const {
  if (!(y >= 0.0)) throw std::invalid_argument("inverse needs y >= 0");
  auto n = static_cast<double>(sorted_.size());
  // Smallest order statistic at which the survival drops below e^{-y}.
  double rank = std::floor(n - n * std::exp(-y)) + 1.0;
  auto j = static_cast<std::size_t>(std::max(1.0, std::min(rank, n)));
  return {sorted_[j - 1], y >= sup_finite_log_tail()};
}

TailMeta EmpiricalTail::meta() const {
  return {"empirical", depth_, static_cast<std::int64_t>(sorted_.size())};
}

void EmpiricalTail::write_csv(std::ostream& os) const {
  os << "x,survival,F,Finv_at_logx\n";
  char buf[128];
  double prev = -1.0;
  for (double x : sorted_) {
    if (x == prev) continue;
    prev = x;
    double s = survival(x);
    double f = log_tail(x);
    if (x >= 1.0) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g", x, s, f,
                    inverse(std::log(x)).value);
    } else {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,", x, s, f);
    }
    os << buf << "\n";
  }
}

GeometricAnalyticTail::GeometricAnalyticTail(const OffspringDistribution& d) {
  if (d.family() != OffspringDistribution::Family::kGeometric)
    throw std::domain_error("analytic tail exists for the geometric family");
  if (!(d.mean() > 1.0))
    throw std::domain_error("analytic tail needs a supercritical law");
  q_ = d.extinction_probability();
}

double GeometricAnalyticTail::survival(double x) const {
  if (x < 0.0) return 1.0;
  return (1.0 - q_) * std::exp(-(1.0 - q_) * x);
}

double GeometricAnalyticTail::log_tail(double x) const {
  if (x < 0.0) return 0.0;
  return -std::log1p(-q_) + (1.0 - q_) * x;
}

TailValue GeometricAnalyticTail::inverse(double y) const {
  if (!(y >= 0.0)) throw std::invalid_argument("inverse needs y >= 0");
  double x = (y + std::log1p(-q_)) / (1.0 - q_);
  return {std::max(0.0, x), false};
}

TailMeta GeometricAnalyticTail::meta() const {
  return {"analytic-geometric", 0, 0};
}

TailValidation validate_geometric_tail(const OffspringDistribution& d,
                                       int depth, std::int64_t reps,
                                       RngStream& rng) {
  double scale = std::pow(d.mean(), -depth);
  std::vector<double> w(reps), w2(reps);
  for (std::int64_t i = 0; i < reps; ++i) {
    auto z = sample_generation_sizes(d, depth, rng);
    double what = static_cast<double>(z[depth]) * scale;
    w[i] = what;
    w2[i] = what * what;
  }
  auto s1 = summarize(w);
  auto s2 = summarize(w2);
  TailValidation v;
  v.mean_w = s1.mean;
  v.se_mean = s1.stderr_mean;
  v.z_mean = z_score(s1.mean, s1.stderr_mean, 1.0, 0.0);
  v.mean_w2 = s2.mean;
  v.se_w2 = s2.stderr_mean;
  double var_w = d.w_second_moment() - 1.0;
  v.expected_w2 = 1.0 + var_w * (1.0 - std::pow(d.mean(), -depth));
  v.z_w2 = z_score(s2.mean, s2.stderr_mean, v.expected_w2, 0.0);
  v.passed = v.z_mean <= 3.0 && v.z_w2 <= 3.0;
  return v;
}

Gauge::Gauge(double mean, std::shared_ptr<const TailFunction> tail)
    : m_(mean), tail_(std::move(tail)) {
  if (!(m_ > 1.0)) throw std::invalid_argument("gauge needs m > 1");
  if (!tail_) throw std::invalid_argument("gauge needs a tail");
}

TailValue Gauge::eval(double r) const {
  if (!(r > 0.0 && r < std::exp(-1.0)))
    throw std::domain_error("gauge domain is (0, e^{-1})");
  auto inv = tail_->inverse(std::log(std::log(1.0 / r)));
  return {std::pow(r, std::log(m_)) * inv.value, inv.saturated};
}

TailValue Gauge::at_generation(int n) const {
  if (n < 1) throw std::domain_error("gauge generation must be >= 1");
  auto inv = tail_->inverse(std::log(static_cast<double>(n)));
  return {std::pow(m_, -n) * inv.value, inv.saturated};
}

void Gauge::write_csv(std::ostream& os, int min_gen, int max_gen,
                      int points) const {
  if (min_gen < 1 || max_gen <= min_gen || points < 2)
    throw std::invalid_argument("bad gauge export grid");
  os << "r,g,saturated\n";
  char buf[96];
  for (int i = 0; i < points; ++i) {
    double t = min_gen + (max_gen - min_gen) * static_cast<double>(i) /
                             static_cast<double>(points - 1);
    double r = std::exp(-t);
    auto gv = eval(r);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d", r, gv.value,
                  gv.saturated ? 1 : 0);
    os << buf << "\n";
  }
}

DoublingReport doubling_diagnostic(const TailFunction& tail,
                                   const std::vector<double>& x_grid) {
  DoublingReport rep;
  for (double x : x_grid) {
    DoublingRow row;
    row.x = x;
    auto fx = tail.inverse(x);
    auto f2x = tail.inverse(2.0 * x);
    row.finv_x = fx.value;
    row.finv_2x = f2x.value;
    row.saturated = fx.saturated || f2x.saturated;
    if (fx.value == 0.0) {
      row.excluded_zero = true;
      ++rep.n_excluded;
    } else {
      row.ratio = f2x.value / fx.value;
      rep.sup_ratio = std::max(rep.sup_ratio, row.ratio);
    }
    rep.rows.push_back(row);
  }
  rep.exponent_a = rep.sup_ratio > 0.0 ? std::log2(rep.sup_ratio) : 0.0;
  return rep;
}

}  // namespace gwlab
