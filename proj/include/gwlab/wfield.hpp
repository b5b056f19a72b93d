#pragma once

#include <iosfwd>
#include <map>

#include "gwlab/tree.hpp"
#include "gwlab/word.hpp"

namespace gwlab {

// Truncated Kesten-Stigum estimates over a tree: for every u in the tree,
// Ŵ_u = Z_{N-|u|}(θ_u T) / m^{N-|u|} at the tree's truncation depth N.
// Frontier words carry Ŵ = 1 (Z_0 = 1), so the projective identity
// Ŵ_u = m^{-1} Σ_i Ŵ_{u*i} holds exactly at every internal word, not just
// in the limit. The reference depth travels with every derived statistic
// because the estimator's bias lives exactly there.
class WField {
 public:
  WField(const TruncatedTree& t, double mean);

  int reference_depth() const { return depth_; }
  double mean_offspring() const { return m_; }

  // Ŵ_u; exact 0 for words off the tree, 1 on the frontier. Words below
  // the truncation depth are unknowable and throw.
  double value(const Word& u) const;

  // Branching-measure ball mass estimate M(B_u) = m^{-|u|} Ŵ_u.
  double ball_mass(const Word& u) const;

  // log M(B_u), computed without forming m^{-|u|}; linear masses
  // underflow once |u| log m passes ~700, this never does. -inf off the
  // tree.
  double log_ball_mass(const Word& u) const;

  double root_value() const { return value(Word::root()); }

  const std::map<Word, double, BfsLexLess>& values() const { return values_; }
  const TruncatedTree& tree() const { return tree_; }

  // CSV export: word,generation,w_value,ball_mass over all stored words.
  void write_csv(std::ostream& os) const;

 private:
  TruncatedTree tree_;
  int depth_;
  double m_;
  std::map<Word, double, BfsLexLess> values_;
};

struct RadiusClass {
  int generation;        // n(r)
  bool whole_space;      // r > 1: the ball is all of the boundary
};

// n(r) = floor((-log r)_+) + 1; the generation whose cylinders realize
// balls of radius r. Throws for r <= 0.
RadiusClass radius_to_generation(double r);

// Balls are cylinders over words, so any two are equal, nested, or
// disjoint; which one is decided by the meet.
enum class BallRelation { kEqual, kFirstInsideSecond, kSecondInsideFirst, kDisjoint };
BallRelation ball_relation(const Word& u, const Word& v);

}  // namespace gwlab
