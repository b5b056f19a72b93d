#include "gwlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace gwlab {

SampleStats summarize(const std::vector<double>& xs) {
  SampleStats s;
  s.n = static_cast<std::int64_t>(xs.size());
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double x : xs) {
      double d = x - s.mean;
      ss += d * d;
    }
    s.variance = ss / static_cast<double>(s.n - 1);
    s.stderr_mean = std::sqrt(s.variance / static_cast<double>(s.n));
  }
  return s;
}

double quantile(std::vector<double> xs, double p) {
  if (xs.empty()) throw std::invalid_argument("quantile of empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p outside [0,1]");
  std::sort(xs.begin(), xs.end());
  auto idx = static_cast<std::size_t>(
      std::ceil(p * static_cast<double>(xs.size())));
  if (idx > 0) --idx;
  return xs[std::min(idx, xs.size() - 1)];
}

double z_score(double a, double se_a, double b, double se_b) {
  double se = std::sqrt(se_a * se_a + se_b * se_b);
  double diff = std::abs(a - b);
  if (se == 0.0) return diff == 0.0 ? 0.0 : INFINITY;
  return diff / se;
}

double chi_square_survival(double stat, int df) {
  if (df <= 0) throw std::invalid_argument("df must be positive");
  if (stat <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * stat);
}

ChiSquareResult chi_square_gof(const std::vector<std::int64_t>& counts,
                               const std::vector<double>& probs,
                               std::int64_t n) {
  if (counts.size() != probs.size())
    throw std::invalid_argument("counts and probs must align");
  // Pool rare bins upward so every expected count is >= 5.
  std::vector<double> obs, exp;
  double o_acc = 0.0, e_acc = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    o_acc += static_cast<double>(counts[i]);
    e_acc += probs[i] * static_cast<double>(n);
    if (e_acc >= 5.0) {
      obs.push_back(o_acc);
      exp.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (exp.empty()) {
      obs.push_back(o_acc);
      exp.push_back(e_acc);
    } else {
      obs.back() += o_acc;
      exp.back() += e_acc;
    }
  }
  ChiSquareResult r;
  r.df = static_cast<int>(obs.size()) - 1;
  if (r.df < 1) return r;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    double d = obs[i] - exp[i];
    r.statistic += d * d / exp[i];
  }
  r.p_value = chi_square_survival(r.statistic, r.df);
  return r;
}

ChiSquareResult chi_square_two_sample(const std::vector<std::int64_t>& a,
                                      const std::vector<std::int64_t>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("histograms must align");
  double na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    na += static_cast<double>(a[i]);
    nb += static_cast<double>(b[i]);
  }
  if (na == 0.0 || nb == 0.0)
    throw std::invalid_argument("empty sample in two-sample chi-square");
  double ra = std::sqrt(nb / na), rb = std::sqrt(na / nb);
  // Pool bins until each combined count is >= 10.
  std::vector<double> pa, pb;
  double aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    aa += static_cast<double>(a[i]);
    bb += static_cast<double>(b[i]);
    if (aa + bb >= 10.0) {
      pa.push_back(aa);
      pb.push_back(bb);
      aa = bb = 0.0;
    }
  }
  if (aa + bb > 0.0 && !pa.empty()) {
    pa.back() += aa;
    pb.back() += bb;
  }
  ChiSquareResult r;
  r.df = static_cast<int>(pa.size()) - 1;
  if (r.df < 1) return r;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    double d = ra * pa[i] - rb * pb[i];
    r.statistic += d * d / (pa[i] + pb[i]);
  }
  r.p_value = chi_square_survival(r.statistic, r.df);
  return r;
}

namespace {
double ks_asymptotic_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    double term = sign * 2.0 * std::exp(-2.0 * j * j * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(sum, 0.0, 1.0);
}
}  // namespace

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("empty sample in KS test");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  double ne = std::sqrt(na * nb / (na + nb));
  KsResult r;
  r.statistic = d;
  r.p_value = ks_asymptotic_q((ne + 0.12 + 0.11 / ne) * d);
  return r;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace gwlab
