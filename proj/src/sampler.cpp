#include "gwlab/sampler.hpp"

#include <deque>

namespace gwlab {

TruncatedTree sample_tree(const OffspringDistribution& d, int depth,
                          RngStream& rng, std::int64_t cap) {
  if (depth < 0) throw std::invalid_argument("depth must be >= 0");
  OffspringSampler sampler(d);
  TruncatedTree t(depth);
  std::int64_t nodes = 1;
  std::deque<Word> queue;
  if (depth > 0) queue.push_back(Word::root());
  while (!queue.empty()) {
    Word u = queue.front();
    queue.pop_front();
    int k = sampler.draw(rng);
    nodes += k;
    if (nodes > cap) throw PopulationCapExceeded(cap);
    t.set_offspring(u, k);
    if (static_cast<int>(u.length()) + 1 < depth) {
      for (int i = 1; i <= k; ++i)
        queue.push_back(u.child(static_cast<Word::Letter>(i)));
    }
  }
  return t;
}

std::vector<std::int64_t> sample_generation_sizes(
    const OffspringDistribution& d, int depth, RngStream& rng,
    std::int64_t cap) {
  if (depth < 0) throw std::invalid_argument("depth must be >= 0");
  OffspringSampler sampler(d);
  std::vector<std::int64_t> z(depth + 1);
  z[0] = 1;
  std::int64_t nodes = 1;
  for (int n = 0; n < depth; ++n) {
    std::int64_t next = 0;
    for (std::int64_t i = 0; i < z[n]; ++i) next += sampler.draw(rng);
    nodes += next;
    if (nodes > cap) throw PopulationCapExceeded(cap);
    z[n + 1] = next;
    if (next == 0) break;  // extinct; the tail stays zero
  }
  return z;
}

std::vector<std::int64_t> sample_sizebiased_generation_sizes(
    const OffspringDistribution& d, int depth, RngStream& rng,
    std::int64_t cap) {
  if (depth < 0) throw std::invalid_argument("depth must be >= 0");
  OffspringSampler sampler(d);
  SizeBiasedSampler spine_sampler(d);
  std::vector<std::int64_t> z(depth + 1);
  z[0] = 1;
  std::int64_t nodes = 1;
  for (int n = 0; n < depth; ++n) {
    std::int64_t next = spine_sampler.draw(rng);
    for (std::int64_t i = 0; i + 1 < z[n]; ++i) next += sampler.draw(rng);
    nodes += next;
    if (nodes > cap) throw PopulationCapExceeded(cap);
    z[n + 1] = next;
  }
  return z;
}

SpineTree::SpineTree(int depth, Word spine, std::vector<Level> levels,
                     std::vector<std::vector<Graft>> grafts_by_level)
    : depth_(depth),
      spine_(std::move(spine)),
      levels_(std::move(levels)),
      grafts_by_level_(std::move(grafts_by_level)) {
  if (static_cast<int>(spine_.length()) != depth_ ||
      static_cast<int>(levels_.size()) != depth_ ||
      static_cast<int>(grafts_by_level_.size()) != depth_)
    throw std::invalid_argument("inconsistent spine records");
  for (int n = 1; n <= depth_; ++n) {
    const auto& lv = levels_[n - 1];
    if (lv.spine_index < 1 || lv.spine_index > lv.offspring_count)
      throw std::invalid_argument("spine index outside 1..k*");
    if (static_cast<int>(spine_.letter(n - 1)) != lv.spine_index)
      throw std::invalid_argument("spine word disagrees with level records");
  }
}

TruncatedTree SpineTree::assemble(int truncate_at) const {
  if (truncate_at < 0 || truncate_at > depth_)
    throw std::invalid_argument("assemble depth outside [0, spine length]");
  TruncatedTree out(truncate_at);
  for (int n = 1; n <= truncate_at; ++n) {
    const Word spine_parent = spine_.restrict(n - 1);
    if (n - 1 < truncate_at)
      out.set_offspring(spine_parent, levels_[n - 1].offspring_count);
    for (const auto& graft : grafts_by_level_[n - 1]) {
      int needed = truncate_at - n;
      if (graft.subtree.depth() < needed)
        throw std::invalid_argument(
            "graft subtree too shallow for requested assembly depth");
      for (const auto& [w, k] : graft.subtree.offspring()) {
        if (static_cast<int>(w.length()) < needed)
          out.set_offspring(graft.root.concat(w), k);
      }
    }
  }
  return out;
}

namespace {

SpineTree sample_spine_impl(const OffspringDistribution& d, int depth,
                            bool filled, int subtree_depth, int fill_depth,
                            RngStream& rng, std::int64_t cap) {
  if (depth < 1) throw std::invalid_argument("spine length must be >= 1");
  SizeBiasedSampler spine_sampler(d);
  std::vector<SpineTree::Level> levels;
  std::vector<std::vector<SpineTree::Graft>> grafts(depth);
  std::vector<Word::Letter> spine_letters;
  std::int64_t nodes = 1;
  Word spine_parent = Word::root();
  for (int n = 1; n <= depth; ++n) {
    auto step = spine_sampler.draw_spine_step(rng);
    levels.push_back({step.spine_index, step.offspring_count});
    nodes += step.offspring_count;
    if (nodes > cap) throw PopulationCapExceeded(cap);
    int graft_depth = filled ? std::max(0, fill_depth - n) : subtree_depth;
    for (int i = 1; i <= step.offspring_count; ++i) {
      if (i == step.spine_index) continue;
      auto sub = sample_tree(d, graft_depth, rng, cap - nodes);
      nodes += sub.node_count() - 1;  // root already counted above
      if (nodes > cap) throw PopulationCapExceeded(cap);
      grafts[n - 1].push_back(
          {spine_parent.child(static_cast<Word::Letter>(i)), std::move(sub)});
    }
    spine_letters.push_back(static_cast<Word::Letter>(step.spine_index));
    spine_parent = spine_parent.child(spine_letters.back());
  }
  return SpineTree(depth, Word(std::move(spine_letters)), std::move(levels),
                   std::move(grafts));
}

}  // namespace

SpineTree sample_spine(const OffspringDistribution& d, int depth,
                       int subtree_depth, RngStream& rng, std::int64_t cap) {
  if (subtree_depth < 0)
    throw std::invalid_argument("subtree depth must be >= 0");
  return sample_spine_impl(d, depth, false, subtree_depth, 0, rng, cap);
}

SpineTree sample_spine_filled(const OffspringDistribution& d, int depth,
                              int fill_depth, RngStream& rng,
                              std::int64_t cap) {
  if (fill_depth < 0 || fill_depth > depth)
    throw std::invalid_argument("fill depth outside [0, spine length]");
  return sample_spine_impl(d, depth, true, 0, fill_depth, rng, cap);
}

}  // namespace gwlab
