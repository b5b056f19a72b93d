#include "gwlab/tree.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

namespace gwlab {

namespace {
Word first_word_of_length(std::size_t n) {
  return Word(std::vector<Word::Letter>(n, 1));
}
}  // namespace

TruncatedTree::TruncatedTree(int depth) : depth_(depth) {
  if (depth < 0) throw std::invalid_argument("tree depth must be >= 0");
}

bool TruncatedTree::contains(const Word& u) const {
  int n = static_cast<int>(u.length());
  if (n > depth_)
    throw std::out_of_range("membership below the truncation depth is unknowable");
  if (n == 0) return true;
  if (n < depth_) return offspring_.count(u) > 0;
  // Frontier word: present iff its parent has enough children.
  auto it = offspring_.find(u.parent());
  return it != offspring_.end() && u.last() <= static_cast<Word::Letter>(it->second);
}

int TruncatedTree::offspring_count(const Word& u) const {
  int n = static_cast<int>(u.length());
  if (n > depth_)
    throw std::out_of_range("offspring below the truncation depth is unknowable");
  if (n == depth_) {
    if (contains(u))
      throw std::out_of_range("frontier word has no offspring record");
    return -1;
  }
  auto it = offspring_.find(u);
  return it == offspring_.end() ? -1 : it->second;
}

std::int64_t TruncatedTree::generation_size(int n) const {
  if (n < 0 || n > depth_)
    throw std::out_of_range("generation size outside [0, depth] is unknowable");
  if (n == 0) return 1;
  std::int64_t count = 0;
  if (n < depth_) {
    for (auto it = offspring_.lower_bound(first_word_of_length(n));
         it != offspring_.end() && it->first.length() == static_cast<std::size_t>(n);
         ++it)
      ++count;
    return count;
  }
  // Frontier generation: sum the parents' offspring counts.
  if (depth_ == 0) return 1;
  for (auto it = offspring_.lower_bound(first_word_of_length(n - 1));
       it != offspring_.end() && it->first.length() == static_cast<std::size_t>(n - 1);
       ++it)
    count += it->second;
  return count;
}

std::int64_t TruncatedTree::node_count() const {
  return static_cast<std::int64_t>(offspring_.size()) + generation_size(depth_);
}

void TruncatedTree::set_offspring(const Word& u, int k) {
  if (static_cast<int>(u.length()) >= depth_)
    throw std::out_of_range("cannot record offspring at or below the frontier");
  if (k < 0) throw std::invalid_argument("offspring count must be >= 0");
  // Structural consistency (prefix closure, child ranges) is validate's
  // job: violations are reportable values, not construction failures.
  offspring_[u] = k;
}

std::vector<Word> TruncatedTree::generation(int n) const {
  if (n < 0 || n > depth_) throw std::out_of_range("generation out of range");
  std::vector<Word> out;
  if (n == 0) {
    out.push_back(Word::root());
    return out;
  }
  if (n < depth_) {
    for (auto it = offspring_.lower_bound(first_word_of_length(n));
         it != offspring_.end() && it->first.length() == static_cast<std::size_t>(n);
         ++it)
      out.push_back(it->first);
    return out;
  }
  // Frontier generation: derive from the parents' counts.
  for (auto it = offspring_.lower_bound(first_word_of_length(n - 1));
       it != offspring_.end() && it->first.length() == static_cast<std::size_t>(n - 1);
       ++it) {
    for (int i = 1; i <= it->second; ++i)
      out.push_back(it->first.child(static_cast<Word::Letter>(i)));
  }
  return out;
}

std::vector<TruncatedTree::Violation> validate(const TruncatedTree& t) {
  std::vector<TruncatedTree::Violation> report;
  const auto& rec = t.offspring();
  if (t.depth() > 0 && rec.find(Word::root()) == rec.end())
    report.push_back({Word::root(), "Tree(1)", "root record missing"});
  for (const auto& [w, k] : rec) {
    if (static_cast<int>(w.length()) >= t.depth()) {
      report.push_back({w, "Tree(2)", "record at or below the frontier"});
      continue;
    }
    if (k < 0) {
      report.push_back({w, "Tree(2)", "negative offspring count"});
      continue;
    }
    if (!w.empty()) {
      auto pit = rec.find(w.parent());
      if (pit == rec.end()) {
        report.push_back({w, "Tree(1)", "prefix missing"});
        continue;
      }
      if (w.last() > static_cast<Word::Letter>(pit->second))
        report.push_back({w, "Tree(2)", "child index exceeds parent count"});
    }
    if (k >= 1 && static_cast<int>(w.length()) + 1 < t.depth()) {
      for (int i = 1; i <= k; ++i) {
        if (rec.find(w.child(static_cast<Word::Letter>(i))) == rec.end())
          report.push_back({w.child(static_cast<Word::Letter>(i)), "Tree(2)",
                            "child record missing"});
      }
    }
  }
  return report;
}

TruncatedTree cut(const TruncatedTree& t, const Word& u) {
  if (!t.contains(u)) throw std::invalid_argument("cut: word not in tree");
  TruncatedTree out(t.depth());
  for (const auto& [w, k] : t.offspring()) {
    if (u.is_prefix_of(w)) {
      if (w == u) out.set_offspring(w, 0);
      // strict descendants dropped
    } else {
      out.set_offspring(w, k);
    }
  }
  return out;
}

ShiftResult shift(const TruncatedTree& t, const Word& u) {
  int n = static_cast<int>(u.length());
  if (n > t.depth() || !t.contains(u)) return {};
  TruncatedTree out(t.depth() - n);
  for (const auto& [w, k] : t.offspring()) {
    if (!u.is_prefix_of(w)) continue;
    std::vector<Word::Letter> tail(w.letters().begin() + n, w.letters().end());
    out.set_offspring(Word(std::move(tail)), k);
  }
  return {true, std::move(out)};
}

TruncatedTree restrict_depth(const TruncatedTree& t, int m) {
  if (m < 0 || m > t.depth())
    throw std::invalid_argument("restriction depth outside [0, depth]");
  TruncatedTree out(m);
  for (const auto& [w, k] : t.offspring()) {
    if (static_cast<int>(w.length()) < m) out.set_offspring(w, k);
  }
  return out;
}

void TruncatedTree::write_csv(std::ostream& os) const {
  os << "depth=" << depth_ << "\n";
  for (const auto& [w, k] : offspring_) os << w.str() << "," << k << "\n";
}

TruncatedTree TruncatedTree::read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("depth=", 0) != 0)
    throw std::invalid_argument("tree csv: missing depth header");
  TruncatedTree out(std::stoi(line.substr(6)));
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto comma = line.rfind(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("tree csv: bad record '" + line + "'");
    out.set_offspring(Word::parse(line.substr(0, comma)),
                      std::stoi(line.substr(comma + 1)));
  }
  return out;
}

void TruncatedTree::write_jsonl(std::ostream& os) const {
  os << "{\"depth\":" << depth_ << "}\n";
  for (const auto& [w, k] : offspring_)
    os << "{\"word\":\"" << w.str() << "\",\"offspring_count\":" << k << "}\n";
}

}  // namespace gwlab
