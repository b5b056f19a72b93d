#include "gwlab/offspring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace gwlab {

namespace {

// Parses a nonnegative decimal literal into (numerator, 10^digits) so the
// enumeration harness can work with the exact pmf the user wrote.
std::pair<std::int64_t, std::int64_t> parse_decimal_exact(
    const std::string& tok) {
  auto bad = [&] {
    throw std::invalid_argument("bad probability token '" + tok + "'");
  };
  if (tok.empty()) bad();
  std::int64_t num = 0, den = 1;
  std::size_t i = 0;
  bool any_digit = false, seen_dot = false;
  for (; i < tok.size(); ++i) {
    char ch = tok[i];
    if (ch == '.') {
      if (seen_dot) bad();
      seen_dot = true;
      continue;
    }
    if (ch < '0' || ch > '9') bad();
    if (num > (INT64_MAX - 9) / 10) bad();  // literal absurdly long
    num = num * 10 + (ch - '0');
    if (seen_dot) {
      if (den > INT64_MAX / 10) bad();
      den *= 10;
    }
    any_digit = true;
  }
  if (!any_digit) bad();
  return {num, den};
}

}  // namespace

OffspringDistribution OffspringDistribution::parse(const std::string& spec) {
  if (spec.rfind("geom:", 0) == 0) {
    std::string tok = spec.substr(5);
    std::size_t used = 0;
    double c = 0;
    try {
      c = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad geometric parameter '" + tok + "'");
    }
    if (used != tok.size())
      throw std::invalid_argument("bad geometric parameter '" + tok + "'");
    auto d = geometric(c);
    d.spec_ = spec;
    return d;
  }

  std::vector<std::pair<int, double>> pmf;
  std::vector<std::pair<std::int64_t, std::int64_t>> exact;
  std::size_t pos = 0;
  while (pos < spec.size()) {
    std::size_t comma = spec.find(',', pos);
    std::string entry = spec.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t colon = entry.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("bad pmf entry '" + entry +
                                  "' (expected k:p)");
    std::string ktok = entry.substr(0, colon);
    if (ktok.empty() || ktok.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("bad offspring count token '" + ktok + "'");
    int k = std::stoi(ktok);
    auto [num, den] = parse_decimal_exact(entry.substr(colon + 1));
    for (const auto& [kk, pp] : pmf)
      if (kk == k)
        throw std::invalid_argument("duplicate offspring count " + ktok);
    pmf.emplace_back(k, static_cast<double>(num) / static_cast<double>(den));
    exact.emplace_back(num, den);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (pmf.empty()) throw std::invalid_argument("empty distribution spec");

  // Keep the exact literals aligned with the sorted pmf.
  std::vector<std::size_t> order(pmf.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pmf[a].first < pmf[b].first; });
  std::vector<std::pair<int, double>> sorted_pmf;
  std::vector<std::pair<std::int64_t, std::int64_t>> sorted_exact;
  for (std::size_t i : order) {
    sorted_pmf.push_back(pmf[i]);
    sorted_exact.push_back(exact[i]);
  }

  auto d = finite(std::move(sorted_pmf));
  d.exact_pmf_ = std::move(sorted_exact);
  d.spec_ = spec;
  return d;
}

OffspringDistribution OffspringDistribution::finite(
    std::vector<std::pair<int, double>> pmf) {
  double sum = 0.0, mean = 0.0;
  for (const auto& [k, p] : pmf) {
    if (k < 0) throw std::invalid_argument("offspring counts must be >= 0");
    if (p < 0.0) throw std::invalid_argument("negative probability");
    sum += p;
    mean += k * p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("pmf sums to " + std::to_string(sum) +
                                ", not 1");
  OffspringDistribution d;
  d.family_ = Family::kFiniteSupport;
  d.pmf_ = std::move(pmf);
  std::sort(d.pmf_.begin(), d.pmf_.end());
  d.mean_ = mean;
  return d;
}

OffspringDistribution OffspringDistribution::geometric(double c) {
  if (!(c > 0.0 && c < 1.0))
    throw std::invalid_argument("geometric parameter must lie in (0,1)");
  OffspringDistribution d;
  d.family_ = Family::kGeometric;
  d.c_ = c;
  d.mean_ = c / (1.0 - c);
  return d;
}

double OffspringDistribution::pmf(int k) const {
  if (k < 0) return 0.0;
  if (family_ == Family::kGeometric)
    return (1.0 - c_) * std::pow(c_, k);
  for (const auto& [kk, p] : pmf_)
    if (kk == k) return p;
  return 0.0;
}

double OffspringDistribution::pgf(double r) const {
  if (!(r >= 0.0 && r <= 1.0))
    throw std::invalid_argument("pgf argument must lie in [0,1]");
  if (family_ == Family::kGeometric) return (1.0 - c_) / (1.0 - c_ * r);
  double acc = 0.0;
  for (const auto& [k, p] : pmf_) acc += p * std::pow(r, k);
  return acc;
}

double OffspringDistribution::extinction_probability(double tol) const {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  double q = 0.0;
  for (std::int64_t it = 0; it < 1000000; ++it) {
    double next = pgf(q);
    if (std::abs(next - q) < tol) return next;
    q = next;
  }
  return q;
}

double OffspringDistribution::second_moment() const {
  if (family_ == Family::kGeometric) {
    double one_minus = 1.0 - c_;
    return c_ * (1.0 + c_) / (one_minus * one_minus);
  }
  double acc = 0.0;
  for (const auto& [k, p] : pmf_) acc += static_cast<double>(k) * k * p;
  return acc;
}

double OffspringDistribution::w_second_moment() const {
  if (!(mean_ > 1.0))
    throw std::domain_error("E[W^2] needs a supercritical law");
  return (second_moment() - mean_) / (mean_ * mean_ - mean_);
}

const std::vector<std::pair<int, double>>& OffspringDistribution::support()
    const {
  if (family_ != Family::kFiniteSupport)
    throw std::domain_error("geometric family has unbounded support");
  return pmf_;
}

int OffspringDistribution::max_support() const {
  return support().empty() ? 0 : support().back().first;
}

const std::vector<std::pair<std::int64_t, std::int64_t>>&
OffspringDistribution::exact_pmf() const {
  if (family_ != Family::kFiniteSupport || exact_pmf_.empty())
    throw std::domain_error(
        "exact pmf literals only exist for parsed finite-support laws");
  return exact_pmf_;
}

double OffspringDistribution::geometric_c() const {
  if (family_ != Family::kGeometric)
    throw std::domain_error("not a geometric law");
  return c_;
}

SizeBiasedLaw::SizeBiasedLaw(const OffspringDistribution& base) : base_(base) {
  if (!(base.mean() > 1.0) || !std::isfinite(base.mean()))
    throw std::domain_error("size-biased law needs m in (1, inf)");
}

double SizeBiasedLaw::pmf(int k) const {
  if (k < 1) return 0.0;
  return k * base_.pmf(k) / base_.mean();
}

double SizeBiasedLaw::repartition(int k, int l) const {
  if (k < 1 || l < 1 || k > l) return 0.0;
  return base_.pmf(l) / base_.mean();
}

double SizeBiasedLaw::mean() const {
  return base_.second_moment() / base_.mean();
}

}  // namespace gwlab
