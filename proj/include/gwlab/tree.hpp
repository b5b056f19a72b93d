#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "gwlab/word.hpp"

namespace gwlab {

// Depth-N prefix of an ordered rooted tree, stored as offspring counts
// keyed by word in breadth-first lexicographic order. Words at |u| = N
// (the frontier) carry no offspring record; truncation is explicit, and
// queries that would need data below the frontier fail loudly.
//
// Immutable after construction apart from the builder interface used by
// the samplers; safe for concurrent reads.
class TruncatedTree {
 public:
  // Single-node tree of the given depth (root present, no offspring drawn
  // yet). depth 0 means the root itself is frontier.
  explicit TruncatedTree(int depth);

  static TruncatedTree single_node() { return TruncatedTree(0); }

  int depth() const { return depth_; }

  // k_u(T): offspring count, or -1 if u is not in the tree. Words on the
  // frontier are in the tree but have no recorded count; asking for their
  // offspring throws.
  int offspring_count(const Word& u) const;
  bool contains(const Word& u) const;
  bool is_frontier(const Word& u) const {
    return static_cast<int>(u.length()) == depth_ && contains(u);
  }

  // Z_n(T), 0 <= n <= depth. n > depth is unknowable and throws.
  std::int64_t generation_size(int n) const;

  // Total number of words in the tree (all generations, frontier included).
  std::int64_t node_count() const;

  // Builder: record the offspring count of u. Requires |u| < depth and
  // that the parent chain is already recorded (BFS insertion order).
  void set_offspring(const Word& u, int k);

  const std::map<Word, int, BfsLexLess>& offspring() const {
    return offspring_;
  }

  // Words of generation n, in lexicographic order (n <= depth).
  std::vector<Word> generation(int n) const;

  bool operator==(const TruncatedTree& other) const = default;

  struct Violation {
    Word word;
    std::string rule;  // "Tree(1)" or "Tree(2)"
    std::string detail;
  };

  // Serialization: header line "depth=N", then one "word,offspring_count"
  // record per stored word in BFS-lex order (CSV) or the same as JSON
  // lines.
  void write_csv(std::ostream& os) const;
  static TruncatedTree read_csv(std::istream& is);
  void write_jsonl(std::ostream& os) const;

 private:
  int depth_ = 0;
  std::map<Word, int, BfsLexLess> offspring_;
};

// Checks Tree(1) (prefix closure) and Tree(2) (children are exactly
// u*1..u*k_u) on the stored records. An empty report means the tree is
// well formed.
std::vector<TruncatedTree::Violation> validate(const TruncatedTree& t);

// Cut_u T: u stays, all strict descendants of u are removed, k_u becomes 0.
// Throws if u is not in t.
TruncatedTree cut(const TruncatedTree& t, const Word& u);

// θ_u T: subtree rooted at u re-rooted at the empty word, with depth
// t.depth - |u|. If u is not in t the result is the empty-tree
// convention, signalled by an empty optional-like flag.
struct ShiftResult {
  bool present = false;
  TruncatedTree tree = TruncatedTree(0);
};
ShiftResult shift(const TruncatedTree& t, const Word& u);

// T|m: the same tree truncated at a shallower depth m <= t.depth.
TruncatedTree restrict_depth(const TruncatedTree& t, int m);

}  // namespace gwlab
