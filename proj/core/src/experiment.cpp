#include "tourcount/experiment.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "tourcount/errors.hpp"

namespace tourcount {

std::int64_t ExperimentPlan::total_samples_per_replication() const {
  std::int64_t total = 0;
  for (auto m : samples_per_class) total += m;
  return total;
}

ExperimentPlan make_plan(const Board& board, Alpha alpha,
                         std::int64_t total_samples_per_replication, int replications,
                         std::uint64_t base_seed, std::optional<Square> start,
                         ViolationMin violation_min) {
  if (total_samples_per_replication < 1)
    throw ConfigError("samples per replication must be at least 1");
  if (replications < 1) throw ConfigError("replications must be at least 1");

  ExperimentPlan plan;
  plan.board_side = board.side();
  plan.alpha = alpha;
  plan.replications = replications;
  plan.base_seed = base_seed;
  plan.violation_min = violation_min;

  if (start) {
    if (!board.contains(*start)) throw ConfigError("start square is not on the board");
    plan.classes.push_back({*start, 1});
    plan.samples_per_class.push_back(total_samples_per_replication);
    return plan;
  }

  plan.classes = board.start_classes();
  auto count = static_cast<std::int64_t>(plan.classes.size());
  if (total_samples_per_replication < count)
    throw ConfigError("need at least " + std::to_string(count) +
                      " samples per replication (one per start class), got " +
                      std::to_string(total_samples_per_replication));
  std::int64_t base = total_samples_per_replication / count;
  std::int64_t remainder = total_samples_per_replication % count;
  for (std::int64_t c = 0; c < count; ++c)
    plan.samples_per_class.push_back(base + (c < remainder ? 1 : 0));
  return plan;
}

std::vector<BatchResult> run_experiment(const Board& board, const ExperimentPlan& plan,
                                        int threads) {
  if (board.side() != plan.board_side) throw ConfigError("board does not match the plan");
  const int classes = static_cast<int>(plan.classes.size());
  const int reps = plan.replications;
  const int batch_count = classes * reps;

  std::vector<BatchResult> results(static_cast<std::size_t>(batch_count));
  auto run_one = [&](int b) {
    int c = b / reps;
    int r = b % reps;
    SamplerConfig config;
    config.board_side = plan.board_side;
    config.alpha = plan.alpha;
    config.samples_per_replication = plan.samples_per_class[static_cast<std::size_t>(c)];
    config.replications = reps;
    config.base_seed = plan.base_seed;
    config.violation_min = plan.violation_min;
    results[static_cast<std::size_t>(b)] =
        run_batch(board, config, plan.classes[static_cast<std::size_t>(c)], c, r);
  };

  if (threads <= 1 || batch_count <= 1) {
    for (int b = 0; b < batch_count; ++b) run_one(b);
    return results;
  }

  if (threads > batch_count) threads = batch_count;
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      try {
        for (;;) {
          int b = next.fetch_add(1);
          if (b >= batch_count) return;
          run_one(b);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace tourcount
