#pragma once

#include <map>
#include <string>
#include <vector>

#include "gwlab/tail.hpp"
#include "gwlab/tree.hpp"
#include "gwlab/word.hpp"

namespace gwlab {

// Exact minimal ball-cover cost of the alive-at-depth-N shadow of the
// boundary. On an ultrametric space every cover reduces to a ball cover,
// balls are cylinders B_u, and non-overlapping ball covers are antichains
// of tree words, so the ε-level pre-measure is a bottom-up DP.
struct CoverSolution {
  double total_cost = 0.0;
  std::vector<Word> antichain;  // chosen ball centers, BFS-lex order
  int min_generation_used = 0;
  int max_generation_used = 0;
  bool gauge_saturated = false;  // some scale used a saturated F^{-1}
};

// Optimal antichain cover with ball generations in [min_gen, t.depth]:
// cost(u) = 0 for subtrees dead before the frontier, g(e^{-N}) at alive
// frontier words, min(g(e^{-|u|}), Σ children) at internal words of
// generation >= min_gen, and Σ children above min_gen. Equals the
// pre-measure H_g^{(ε)} at ε = e^{-min_gen} of the depth-N shadow.
// Throws if the gauge vanishes at a needed scale.
CoverSolution min_cover_cost(const TruncatedTree& t, const Gauge& g,
                             int min_gen);

// Leaf masses keyed by frontier word define a measure on the shadow:
// μ(B_u) = sum of masses below u. Discretized Rogers-Taylor comparison.
struct ComparisonVerdict {
  double cover_cost = 0.0;
  double mu_total = 0.0;
  double comparison_constant = 0.0;  // C
  // (i): if μ(B_u) <= g(e^{-|u|}) everywhere in range, then
  //      cover cost >= C^{-1} μ(total).
  bool lower_hypothesis_holds = false;
  std::vector<Word> lower_witnesses;  // hypothesis violations
  bool lower_conclusion_checked = false;
  bool lower_conclusion_ok = false;
  // (ii): dual with μ(B_u) >= g(e^{-|u|}) and cost <= C μ(total).
  bool upper_hypothesis_holds = false;
  std::vector<Word> upper_witnesses;
  bool upper_conclusion_checked = false;
  bool upper_conclusion_ok = false;
};

ComparisonVerdict comparison_check(
    const std::map<Word, double, BfsLexLess>& leaf_masses, const Gauge& g,
    double comparison_constant, int min_gen = 1);

// One tree's contribution to the cover-cost / W pairing.
struct CoverWPair {
  double cover_cost = 0.0;
  double w_root = 0.0;
};

// Pairs the two desk-scale estimates related by the exact-Hausdorff
// theorem: the through-origin regression slope of cover cost on W, and
// 1/κ̂ from the density-ratio pipeline. No equality is asserted — the
// pre-measure at fixed min_gen is not the limit object — both numbers and
// their uncertainties are reported side by side.
struct PairingReport {
  double slope = 0.0;
  double slope_se = 0.0;
  double inv_kappa = 0.0;
  double ratio = 0.0;  // slope / (1/κ̂)
  std::int64_t n_pairs = 0;
  std::int64_t n_dead = 0;
  TailMeta tail_meta;
  std::string note;
};

PairingReport c_xi_pairing(double kappa_hat,
                           const std::vector<CoverWPair>& pairs,
                           const TailMeta& cover_tail_meta,
                           const TailMeta& ratio_tail_meta);

}  // namespace gwlab
