#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gwlab {

struct SampleStats {
  std::int64_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double stderr_mean = 0.0;
};

SampleStats summarize(const std::vector<double>& xs);

// Empirical quantile (sorted copy, nearest-rank on the right).
double quantile(std::vector<double> xs, double p);

// z = |a - b| / sqrt(se_a^2 + se_b^2); se 0 on both sides compares exactly.
double z_score(double a, double se_a, double b, double se_b);

// Survival function of chi-square with df degrees of freedom.
double chi_square_survival(double stat, int df);

struct ChiSquareResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
};

// One-sample goodness of fit of integer draws against a pmf. Bins with
// expected count < 5 are pooled into their upper neighbour.
ChiSquareResult chi_square_gof(const std::vector<std::int64_t>& counts,
                               const std::vector<double>& probs,
                               std::int64_t n);

// Two-sample chi-square homogeneity test on aligned histograms.
ChiSquareResult chi_square_two_sample(const std::vector<std::int64_t>& a,
                                      const std::vector<std::int64_t>& b);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Two-sample Kolmogorov-Smirnov with the asymptotic p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// FNV-1a over a string; used for config hashes in output metadata.
std::uint64_t fnv1a(const std::string& text);

}  // namespace gwlab
