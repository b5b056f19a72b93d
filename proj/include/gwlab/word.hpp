#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gwlab {

// Finite word over the positive integers (Ulam-Harris label). The empty
// word is the root; |u| is the generation of the vertex labelled u.
class Word {
 public:
  using Letter = std::uint32_t;

  Word() = default;
  explicit Word(std::vector<Letter> letters);

  static Word root() { return Word(); }

  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter letter(std::size_t i) const { return letters_[i]; }
  Letter last() const { return letters_.back(); }
  const std::vector<Letter>& letters() const { return letters_; }

  // u|m: the prefix of length min(m, |u|).
  Word restrict(std::size_t m) const;
  Word parent() const;          // requires non-empty
  Word child(Letter i) const;   // u*i, requires i >= 1
  Word concat(const Word& v) const;

  bool is_prefix_of(const Word& v) const;

  bool operator==(const Word& other) const = default;

  // Dot-separated letters; the root is the empty string.
  std::string str() const;
  static Word parse(const std::string& text);

 private:
  std::vector<Letter> letters_;
};

// Longest common prefix u ∧ v.
Word meet(const Word& u, const Word& v);

// Breadth-first lexicographic order: by length, then lexicographically.
// Canonical ordering for tree storage and serialization.
struct BfsLexLess {
  bool operator()(const Word& a, const Word& b) const {
    if (a.length() != b.length()) return a.length() < b.length();
    return a.letters() < b.letters();
  }
};

struct WordHash {
  std::size_t operator()(const Word& w) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto letter : w.letters()) {
      h ^= letter;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace gwlab
