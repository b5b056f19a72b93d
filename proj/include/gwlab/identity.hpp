#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gwlab/offspring.hpp"
#include "gwlab/rng.hpp"
#include "gwlab/tree.hpp"
#include "gwlab/word.hpp"

namespace gwlab {

// A functional G evaluable on both a (tree prefix, ray prefix) pair and a
// (spine tree prefix, spine prefix) pair; depends only on depth-n data.
class FunctionalSpec {
 public:
  enum class Kind { kConstantOne, kFirstStep, kRootCount, kCylinder };

  static FunctionalSpec constant_one(int depth);
  static FunctionalSpec first_step(int step);             // 1{u_1 = step}
  static FunctionalSpec root_count(int count);            // 1{k_root = count}
  static FunctionalSpec cylinder(TruncatedTree pattern, Word ray_prefix);

  Kind kind() const { return kind_; }
  int depth() const { return depth_; }
  std::string name() const;

  // Evaluate on (T|depth, u|depth); the tree must be truncated at exactly
  // this spec's depth.
  double eval(const TruncatedTree& tree_prefix, const Word& ray_prefix) const;

  // Tree-only evaluation for functionals that ignore the ray (constant
  // and root-count kinds); throws for ray-dependent kinds.
  double eval_tree(const TruncatedTree& tree_prefix) const;

 private:
  FunctionalSpec(Kind kind, int depth)
      : kind_(kind), depth_(depth), pattern_(0) {}

  Kind kind_;
  int depth_;
  int param_ = 0;
  TruncatedTree pattern_;
  Word ray_;
};

struct TwoSidedEstimate {
  std::string label;
  double lhs = 0.0;
  double lhs_se = 0.0;
  double rhs = 0.0;
  double rhs_se = 0.0;
  double z = 0.0;
  bool ok = false;  // |z| <= 3
};

// The measure-vs-spine identity: E[∫ M(du) G(T; u)] = E[G(T*; U*)],
// estimated with Σ_{|u|=n} G(T|n, u) m^{-n} Ŵ_u on the left (the identity
// is exact at every truncation depth because E[Ŵ_u | u in T] = 1) and the
// spine construction on the right.
TwoSidedEstimate spine_measure_identity_mc(const OffspringDistribution& d,
                               const FunctionalSpec& g, int w_depth,
                               std::int64_t reps, RngStream& rng_lhs,
                               RngStream& rng_rhs);

// The generation-n decomposition identity:
// E[Σ_{|u|=n} G1(Cut_u T, u) G2(θ_u T)] =
// m^n E[G1(Cut_{U*|n} T*, U*|n)] E[G2(T)],
// with the cut taken literally on materialized trees on the left.
TwoSidedEstimate many_to_one_check(const OffspringDistribution& d, int n,
                                const FunctionalSpec& g1,
                                const FunctionalSpec& g2, std::int64_t reps,
                                RngStream& rng_lhs, RngStream& rng_rhs);

// Exact enumeration (rational arithmetic): total-variation distance
// between the law of T*|n and the (Z_n/m^n)-reweighted GW law. Finite
// support only; capped at max support 5 and n <= 2.
double sizebias_law_tv(const OffspringDistribution& d, int n);

}  // namespace gwlab
