#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "gwlab/sampler.hpp"

namespace gwlab {

// One experiment's knobs. Seeds are mandatory — nothing in this project
// ever seeds from the wall clock — and the whole struct round-trips
// through its key-value serialization unchanged.
struct ExperimentConfig {
  std::string offspring_spec;
  std::uint64_t seed = 0;
  std::int64_t reps = 10000;
  std::int64_t tail_reps = 10000;
  int tree_depth = 12;
  int spine_length = 64;
  int subtree_depth = 12;
  int tail_depth = 14;
  int min_gen = 2;
  int thin_n0 = 2;
  int thin_horizon = 8;
  double x_grid_lo = 0.0;
  double x_grid_hi = 0.0;  // 0 = derive from the tail sample range
  int x_grid_points = 20;
  int r_grid_points = 40;
  std::int64_t cap = kDefaultPopulationCap;
  int threads = 1;
  std::string output_dir = "out";
  std::string format = "json";  // json | csv where both exist

  // Canonical "key=value" lines (sorted, one per line).
  std::string to_kv() const;
  static ExperimentConfig from_kv(std::istream& is);

  // FNV-1a over the semantic fields (everything except output_dir and
  // threads, which cannot change any numeric output).
  std::uint64_t hash() const;
};

}  // namespace gwlab
