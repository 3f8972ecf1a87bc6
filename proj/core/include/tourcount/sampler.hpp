// Randomized Warnsdorff sampling of knight paths.
//
// One sample walks from a start square, drawing each step among the unvisited
// knight moves of the current square with probability proportional to
// free_degree^(-alpha). A completed path carries the product of inverse step
// probabilities as its importance weight, so the weight's expectation equals
// the number of directed tours from that start. Dead ends yield weight zero.
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "tourcount/board.hpp"

namespace tourcount {

// The importance-sampling exponent. Finite values may be negative; the
// infinite marker selects the pure minimum-degree rule (ties uniform).
class Alpha {
 public:
  constexpr Alpha() = default;

  static constexpr Alpha finite(double v) { return Alpha(v, false); }
  static constexpr Alpha infinite() { return Alpha(0.0, true); }

  constexpr bool is_infinite() const { return infinite_; }
  // Meaningful only when finite.
  constexpr double value() const { return value_; }
  // For display: the value, or +infinity.
  double as_double() const;

  friend constexpr bool operator==(Alpha a, Alpha b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  constexpr Alpha(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_ = 0.0;
  bool infinite_ = false;
};

// Which candidates the per-step minimum degree is taken over when counting
// rule violations. kAllCandidates matches the literal rule text (even squares
// that cannot be continued are candidates); kViableOnly restricts to squares
// the sampler could actually pick.
enum class ViolationMin { kAllCandidates, kViableOnly };

struct SamplerConfig {
  int board_side = 8;
  Alpha alpha = Alpha::finite(1.5);
  std::int64_t samples_per_replication = 1;  // per start class
  int replications = 1;
  std::uint64_t base_seed = 0;
  std::optional<Square> start;  // nullopt: sample all start classes
  ViolationMin violation_min = ViolationMin::kAllCandidates;
};

// Throws ConfigError when a field is out of range.
void validate(const SamplerConfig& config);

// A partial path; front of `path` is the start square.
struct PathState {
  std::vector<Square> path;

  Square current() const { return path.back(); }
  int step() const { return static_cast<int>(path.size()); }
};

struct StepCandidate {
  Square square;
  int free_degree = 0;
  double probability = 0.0;
};

// Candidates in square-index order. Empty when no viable candidate exists
// (a dead end). Non-viable candidates appear with probability 0.
struct StepDistribution {
  std::vector<StepCandidate> candidates;

  bool dead_end() const { return candidates.empty(); }
};

struct TourSample {
  bool completed = false;
  double weight = 0.0;  // 0 unless completed
  int violations = 0;
  bool closes = false;  // completed and final square attacks the start
  Square start;
};

// Sums over one (start class, replication) stream.
struct BatchResult {
  int board_side = 0;
  Alpha alpha;
  int class_index = 0;  // position in Board::start_classes()
  StartClass start_class;
  int replication_index = 0;
  std::int64_t samples = 0;
  std::int64_t successes = 0;
  std::int64_t closed_successes = 0;
  double sum_weight = 0.0;
  double sum_weight_sq = 0.0;
  double sum_weight_closed = 0.0;
  double sum_weight_sq_closed = 0.0;
  std::vector<double> sum_weight_by_violations;  // index k, size side^2 - 1
  std::uint64_t seed_used = 0;
};

// Unvisited knight moves of j, not counting j itself. `visited` order is
// irrelevant; j must not be in it.
int free_degree(const Board& board, const std::vector<Square>& visited, Square j);

// The step law at `state`. At the final step (one square left) every
// candidate gets equal probability regardless of alpha.
StepDistribution step_distribution(const Board& board, const PathState& state, Alpha alpha);

// Reusable sampler holding per-board workspace.
class TourSampler {
 public:
  TourSampler(const Board& board, Alpha alpha,
              ViolationMin violation_min = ViolationMin::kAllCandidates);

  TourSample sample(Square start, std::mt19937_64& rng);
  // As sample(), but records the visit order into `path`.
  TourSample sample_traced(Square start, std::mt19937_64& rng, std::vector<Square>& path);

  const Board& board() const { return *board_; }

 private:
  const Board* board_;
  Alpha alpha_;
  ViolationMin violation_min_;
  double degree_weight_[9];  // degree_weight_[d] = d^(-alpha), [0] = 0
  std::vector<std::uint64_t> visited_;
  std::vector<int> degree_;

  TourSample run(Square start, std::mt19937_64& rng, std::vector<Square>* trace);
};

// One sample with a fresh workspace; convenience over TourSampler.
TourSample sample_tour(const Board& board, Square start, Alpha alpha, std::mt19937_64& rng,
                       ViolationMin violation_min = ViolationMin::kAllCandidates);

// Draws config.samples_per_replication tours from cls.representative on a
// stream derived from (base_seed, class_index, replication_index). All sums
// use compensated summation.
BatchResult run_batch(const Board& board, const SamplerConfig& config, const StartClass& cls,
                      int class_index, int replication_index);

}  // namespace tourcount
