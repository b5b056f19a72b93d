#include "gwlab/pipeline.hpp"

#include <cmath>

#include "gwlab/parallel.hpp"
#include "gwlab/sampler.hpp"
#include "gwlab/wfield.hpp"

namespace gwlab {

std::vector<double> sample_w_estimates(const OffspringDistribution& d,
                                       int depth, std::int64_t reps,
                                       std::uint64_t seed,
                                       std::uint64_t purpose, int threads,
                                       std::int64_t cap) {
  std::vector<double> out(reps);
  double scale = std::pow(d.mean(), -depth);
  parallel_for(reps, threads, [&](std::int64_t i) {
    RngStream rng(seed, stream_id(purpose, static_cast<std::uint64_t>(i)));
    OffspringSampler sampler(d);
    out[i] = static_cast<double>(
                 sample_final_generation(sampler, depth, rng, cap)) *
             scale;
  });
  return out;
}

std::vector<DensityTrace> sample_density_traces(const OffspringDistribution& d,
                                                int spine_length,
                                                int graft_w_depth,
                                                std::int64_t reps,
                                                std::uint64_t seed,
                                                std::uint64_t purpose,
                                                int threads,
                                                std::int64_t cap) {
  std::vector<DensityTrace> out(reps);
  parallel_for(reps, threads, [&](std::int64_t i) {
    RngStream rng(seed, stream_id(purpose, static_cast<std::uint64_t>(i)));
    out[i] = sample_density_trace(d, spine_length, graft_w_depth, rng, cap);
  });
  return out;
}

CoverRun run_covers(const OffspringDistribution& d, int tree_depth,
                    int min_gen, const Gauge& g, std::int64_t reps,
                    std::uint64_t seed, std::uint64_t purpose, int threads,
                    std::int64_t cap) {
  CoverRun run;
  run.pairs.resize(reps);
  std::vector<CoverSolution> first(1);
  parallel_for(reps, threads, [&](std::int64_t i) {
    RngStream rng(seed, stream_id(purpose, static_cast<std::uint64_t>(i)));
    auto tree = sample_tree(d, tree_depth, rng, cap);
    auto solution = min_cover_cost(tree, g, min_gen);
    run.pairs[i] = {solution.total_cost, WField(tree, d.mean()).root_value()};
    if (i == 0) first[0] = std::move(solution);
  });
  run.sample_solution = std::move(first[0]);
  run.gauge_saturated = run.sample_solution.gauge_saturated;
  return run;
}

}  // namespace gwlab
