#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gwlab/offspring.hpp"
#include "gwlab/rng.hpp"
#include "gwlab/tree.hpp"
#include "gwlab/word.hpp"

namespace gwlab {

// Thrown when a sample would exceed the configured node budget. Aborting
// beats silently truncating: a silently clipped population biases every
// downstream statistic.
class PopulationCapExceeded : public std::runtime_error {
 public:
  explicit PopulationCapExceeded(std::int64_t cap)
      : std::runtime_error("population cap " + std::to_string(cap) +
                           " exceeded") {}
};

constexpr std::int64_t kDefaultPopulationCap = 100000000;  // 1e8 nodes

// Draws from a finite discrete law: linear scan for small supports, Vose
// alias table above 8 points.
class DiscreteSampler {
 public:
  DiscreteSampler(std::vector<int> values, std::vector<double> probs) {
    if (values.size() != probs.size() || values.empty())
      throw std::invalid_argument("discrete sampler needs aligned tables");
    values_ = std::move(values);
    probs_ = std::move(probs);
    if (values_.size() > 8) build_alias();
    cumulative_.resize(probs_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      acc += probs_[i];
      cumulative_[i] = acc;
    }
  }

  int draw(RngStream& rng) const {
    if (!alias_.empty()) {
      auto i = rng.below(static_cast<std::uint32_t>(values_.size()));
      return rng.uniform() < alias_prob_[i] ? values_[i] : values_[alias_[i]];
    }
    double u = rng.uniform();
    for (std::size_t i = 0; i + 1 < cumulative_.size(); ++i)
      if (u < cumulative_[i]) return values_[i];
    return values_.back();
  }

 private:
  void build_alias() {
    std::size_t n = probs_.size();
    alias_prob_.assign(n, 0.0);
    alias_.assign(n, 0u);
    std::vector<double> scaled(n);
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i] = probs_[i] * static_cast<double>(n);
      (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
      auto s = small.back(), l = large.back();
      small.pop_back();
      large.pop_back();
      alias_prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] -= 1.0 - scaled[s];
      (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    for (auto i : large) alias_prob_[i] = 1.0;
    for (auto i : small) alias_prob_[i] = 1.0;
  }

  std::vector<int> values_;
  std::vector<double> probs_;
  std::vector<double> cumulative_;
  std::vector<double> alias_prob_;
  std::vector<std::uint32_t> alias_;
};

// Sampler for ξ itself.
class OffspringSampler {
 public:
  explicit OffspringSampler(const OffspringDistribution& d) {
    if (d.family() == OffspringDistribution::Family::kGeometric) {
      geometric_ = true;
      log_c_ = std::log(d.geometric_c());
    } else {
      std::vector<int> vals;
      std::vector<double> probs;
      for (const auto& [k, p] : d.support()) {
        vals.push_back(k);
        probs.push_back(p);
      }
      table_.emplace_back(std::move(vals), std::move(probs));
    }
  }

  int draw(RngStream& rng) const {
    if (geometric_)
      return static_cast<int>(std::log(rng.uniform_open()) / log_c_);
    return table_.front().draw(rng);
  }

 private:
  bool geometric_ = false;
  double log_c_ = 0.0;
  std::vector<DiscreteSampler> table_;
};

// Sampler for the size-biased law ξ̂(k) = kξ(k)/m. For the geometric
// family, ξ̂ - 1 is negative binomial with two failures, i.e. the sum of
// two independent geometric draws.
class SizeBiasedSampler {
 public:
  explicit SizeBiasedSampler(const OffspringDistribution& d) {
    if (!(d.mean() > 1.0))
      throw std::domain_error("size-biased sampling needs m > 1");
    if (d.family() == OffspringDistribution::Family::kGeometric) {
      geometric_ = true;
      log_c_ = std::log(d.geometric_c());
    } else {
      std::vector<int> vals;
      std::vector<double> probs;
      for (const auto& [k, p] : d.support()) {
        if (k < 1) continue;
        vals.push_back(k);
        probs.push_back(k * p / d.mean());
      }
      table_.emplace_back(std::move(vals), std::move(probs));
    }
  }

  int draw(RngStream& rng) const {
    if (geometric_) {
      auto g = [&] {
        return static_cast<int>(std::log(rng.uniform_open()) / log_c_);
      };
      return 1 + g() + g();
    }
    return table_.front().draw(rng);
  }

  // One step of the repartition law ρ: spine child index and offspring
  // count of the current spine node.
  struct SpineStep {
    int spine_index;      // I*, uniform on 1..count
    int offspring_count;  // k* ~ ξ̂
  };

  SpineStep draw_spine_step(RngStream& rng) const {
    int count = draw(rng);
    int idx = 1 + static_cast<int>(rng.below(static_cast<std::uint32_t>(count)));
    return {idx, count};
  }

 private:
  bool geometric_ = false;
  double log_c_ = 0.0;
  std::vector<DiscreteSampler> table_;
};

// Z_depth of a fresh GW(ξ) population, without storing the intermediate
// generations. Hot path of every W-estimate, hence inline.
inline std::int64_t sample_final_generation(const OffspringSampler& sampler,
                                            int depth, RngStream& rng,
                                            std::int64_t cap) {
  std::int64_t z = 1, total = 1;
  for (int n = 0; n < depth && z > 0; ++n) {
    std::int64_t next = 0;
    for (std::int64_t i = 0; i < z; ++i) next += sampler.draw(rng);
    total += next;
    if (total > cap) throw PopulationCapExceeded(cap);
    z = next;
  }
  return z;
}

// GW(ξ) tree truncated at `depth`, offspring drawn i.i.d. in
// breadth-first order.
TruncatedTree sample_tree(const OffspringDistribution& d, int depth,
                          RngStream& rng,
                          std::int64_t cap = kDefaultPopulationCap);

// Generation sizes (Z_0, ..., Z_depth) without tree structure; same law
// as the generation sizes of sample_tree, far cheaper for deep replicas.
std::vector<std::int64_t> sample_generation_sizes(
    const OffspringDistribution& d, int depth, RngStream& rng,
    std::int64_t cap = kDefaultPopulationCap);

// Generation sizes of the size-biased tree: one spine node per level
// drawing from ξ̂, everything else from ξ. Z*_depth / m^depth is the
// truncated W mass of the size-biased tree.
std::vector<std::int64_t> sample_sizebiased_generation_sizes(
    const OffspringDistribution& d, int depth, RngStream& rng,
    std::int64_t cap = kDefaultPopulationCap);

// Truncated size-biased tree: distinguished ray, per-level spine records,
// and the independent GW subtrees grafted off the spine.
class SpineTree {
 public:
  struct Level {
    int spine_index;      // I*_n
    int offspring_count;  // k*_n
  };

  struct Graft {
    Word root;  // word of the grafted vertex (off-spine child)
    TruncatedTree subtree;
  };

  SpineTree(int depth, Word spine, std::vector<Level> levels,
            std::vector<std::vector<Graft>> grafts_by_level);

  int depth() const { return depth_; }
  const Word& spine() const { return spine_; }
  // 1-based by generation: level(n) describes the children of the spine
  // node at generation n-1.
  const Level& level(int n) const { return levels_.at(n - 1); }
  const std::vector<Level>& levels() const { return levels_; }
  // Grafted vertices at generation n (off-spine children of spine nodes).
  const std::vector<Graft>& grafts(int n) const {
    return grafts_by_level_.at(n - 1);
  }

  // Union of spine and grafted subtrees as one uniformly truncated tree
  // of depth M. Requires every graft at level j to be filled to relative
  // depth at least M - j.
  TruncatedTree assemble(int truncate_at) const;

 private:
  int depth_;
  Word spine_;
  std::vector<Level> levels_;
  std::vector<std::vector<Graft>> grafts_by_level_;
};

// Spine of length `depth`; each graft carries an independent GW(ξ)
// subtree truncated at `subtree_depth` levels below its root.
SpineTree sample_spine(const OffspringDistribution& d, int depth,
                       int subtree_depth, RngStream& rng,
                       std::int64_t cap = kDefaultPopulationCap);

// Same construction but grafts at level j are filled to relative depth
// fill_depth - j, so assemble(fill_depth) is a complete truncated tree.
SpineTree sample_spine_filled(const OffspringDistribution& d, int depth,
                              int fill_depth, RngStream& rng,
                              std::int64_t cap = kDefaultPopulationCap);

}  // namespace gwlab
