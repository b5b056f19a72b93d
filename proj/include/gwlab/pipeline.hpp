#pragma once

#include <cstdint>
#include <vector>

#include "gwlab/hausdorff.hpp"
#include "gwlab/offspring.hpp"
#include "gwlab/spine_density.hpp"
#include "gwlab/tail.hpp"

namespace gwlab {

// Disjoint stream namespaces per sampling purpose, so no two pipeline
// stages ever share a pcg32 sequence.
namespace stream_purpose {
constexpr std::uint64_t kTail = 1;
constexpr std::uint64_t kTraces = 2;
constexpr std::uint64_t kCovers = 3;
constexpr std::uint64_t kX1 = 4;
constexpr std::uint64_t kThinDirect = 5;
constexpr std::uint64_t kThinSpine = 6;
constexpr std::uint64_t kIdentityLhs = 7;
constexpr std::uint64_t kIdentityRhs = 8;
constexpr std::uint64_t kValidate = 9;
constexpr std::uint64_t kProjective = 10;
}  // namespace stream_purpose

inline std::uint64_t stream_id(std::uint64_t purpose, std::uint64_t rep) {
  return (purpose << 32) | rep;
}

// Ŵ = Z_depth / m^depth over independent replicas (one stream each).
std::vector<double> sample_w_estimates(const OffspringDistribution& d,
                                       int depth, std::int64_t reps,
                                       std::uint64_t seed,
                                       std::uint64_t purpose, int threads,
                                       std::int64_t cap);

std::vector<DensityTrace> sample_density_traces(const OffspringDistribution& d,
                                                int spine_length,
                                                int graft_w_depth,
                                                std::int64_t reps,
                                                std::uint64_t seed,
                                                std::uint64_t purpose,
                                                int threads, std::int64_t cap);

struct CoverRun {
  std::vector<CoverWPair> pairs;
  CoverSolution sample_solution;  // the first replica's full cover
  bool gauge_saturated = false;
};

CoverRun run_covers(const OffspringDistribution& d, int tree_depth,
                    int min_gen, const Gauge& g, std::int64_t reps,
                    std::uint64_t seed, std::uint64_t purpose, int threads,
                    std::int64_t cap);

}  // namespace gwlab
