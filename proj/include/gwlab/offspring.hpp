#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gwlab {

// Offspring law ξ with its derived quantities: mean m, generating
// function f, extinction probability q. Two families are supported:
// finite-support pmf tables and geometric(c) with ξ(k) = (1-c)c^k. The
// geometric family exists because its Kesten-Stigum limit W has a closed
// form, which the acceptance checks lean on.
class OffspringDistribution {
 public:
  enum class Family { kFiniteSupport, kGeometric };

  // Spec grammar: "k1:p1,k2:p2,..." or "geom:c". Throws
  // std::invalid_argument with the offending token on malformed input,
  // negative probabilities, or a pmf off 1 by more than 1e-9.
  static OffspringDistribution parse(const std::string& spec);

  static OffspringDistribution finite(std::vector<std::pair<int, double>> pmf);
  static OffspringDistribution geometric(double c);

  Family family() const { return family_; }
  double pmf(int k) const;  // ξ(k)
  double mean() const { return mean_; }
  // Hyp(ξ): m in (1, ∞) plus the k log k moment, which is automatic for
  // both families. False marks the law as unusable for boundary geometry
  // but still fine for sanity experiments.
  bool hyp_ok() const { return mean_ > 1.0; }

  // f(r) on [0, 1]; closed form (1-c)/(1-cr) for the geometric family.
  double pgf(double r) const;

  // Smallest fixed point of f in [0, 1], by monotone fixed-point
  // iteration from 0. Convexity of f guarantees convergence to the
  // smallest root.
  double extinction_probability(double tol = 1e-12) const;

  // E[k^2]; exact from the table or the geometric closed form.
  double second_moment() const;

  // E[W^2] = (E[k^2] - m)/(m^2 - m), the fixed point of the projective
  // identity. Requires m > 1.
  double w_second_moment() const;

  // Finite-support accessors (throw for the geometric family).
  const std::vector<std::pair<int, double>>& support() const;
  int max_support() const;
  // pmf entries as exact rationals (numerator, power-of-ten denominator),
  // preserved verbatim from the parsed decimal literals for the exact
  // enumeration harness.
  const std::vector<std::pair<std::int64_t, std::int64_t>>& exact_pmf() const;

  double geometric_c() const;

  const std::string& spec_string() const { return spec_; }

 private:
  OffspringDistribution() = default;

  Family family_ = Family::kFiniteSupport;
  std::vector<std::pair<int, double>> pmf_;  // sorted by k
  std::vector<std::pair<std::int64_t, std::int64_t>> exact_pmf_;
  double c_ = 0.0;
  double mean_ = 0.0;
  std::string spec_;
};

// Size-biased offspring law ξ̂(k) = kξ(k)/m and the repartition law
// ρ(k, ℓ) = 1_{k ≤ ℓ} ξ(ℓ)/m that drives the spine construction.
class SizeBiasedLaw {
 public:
  explicit SizeBiasedLaw(const OffspringDistribution& base);

  double pmf(int k) const;                // ξ̂(k)
  double repartition(int k, int l) const; // ρ(k, ℓ)
  double mean() const;                    // E[k̂] = E[k^2]/m

  const OffspringDistribution& base() const { return base_; }

 private:
  OffspringDistribution base_;
};

}  // namespace gwlab
