// Turning a sampling request into batches and running them, possibly on a
// worker pool. One batch = one (start class, replication) pair with its own
// derived seed, so results are identical whatever the worker count.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tourcount/board.hpp"
#include "tourcount/sampler.hpp"

namespace tourcount {

struct ExperimentPlan {
  int board_side = 0;
  Alpha alpha;
  // Classes sampled, with per-replication sample counts aligned by index.
  // Batch seeds derive from the position in `classes`.
  std::vector<StartClass> classes;
  std::vector<std::int64_t> samples_per_class;
  int replications = 1;
  std::uint64_t base_seed = 0;
  ViolationMin violation_min = ViolationMin::kAllCandidates;

  std::int64_t total_samples_per_replication() const;
};

// Splits total_samples_per_replication equally across the board's start
// classes (earlier classes take the remainder). When `start` is given, the
// whole budget goes to that single square with multiplicity 1: estimates then
// cover tours from that square only. Throws ConfigError when the budget is
// smaller than the number of classes or any count is out of range.
ExperimentPlan make_plan(const Board& board, Alpha alpha,
                         std::int64_t total_samples_per_replication, int replications,
                         std::uint64_t base_seed, std::optional<Square> start = std::nullopt,
                         ViolationMin violation_min = ViolationMin::kAllCandidates);

// Runs all classes x replications batches and returns them in class-major
// order (batch b = class * replications + replication). `threads` <= 1 runs
// inline; more spread batches over a pool. Output is byte-identical for any
// thread count.
std::vector<BatchResult> run_experiment(const Board& board, const ExperimentPlan& plan,
                                        int threads = 1);

}  // namespace tourcount
