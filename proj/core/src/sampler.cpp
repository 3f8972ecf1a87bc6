#include "tourcount/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tourcount/errors.hpp"
#include "tourcount/kahan.hpp"
#include "tourcount/rng.hpp"

namespace tourcount {
namespace {

// Step weights for candidates with the given free degrees. Returns the total;
// a zero total is a dead end. Mid-tour, degree-0 candidates get weight 0:
// no completable path ever steps onto one, so excluding them keeps the
// estimator unbiased. At the final step every candidate gets weight 1.
double step_weights(Alpha alpha, bool final_step, const double* degree_weight,
                    const int* deg, int count, double* w) {
  double total = 0.0;
  if (final_step) {
    for (int i = 0; i < count; ++i) {
      w[i] = 1.0;
      total += 1.0;
    }
    return total;
  }
  if (alpha.is_infinite()) {
    int min_viable = 9;
    for (int i = 0; i < count; ++i)
      if (deg[i] >= 1 && deg[i] < min_viable) min_viable = deg[i];
    for (int i = 0; i < count; ++i) {
      w[i] = deg[i] == min_viable ? 1.0 : 0.0;
      total += w[i];
    }
    return total;
  }
  for (int i = 0; i < count; ++i) {
    w[i] = degree_weight[deg[i]];
    total += w[i];
  }
  return total;
}

inline bool test_bit(const std::uint64_t* words, int j) {
  return (words[j >> 6] >> (j & 63)) & 1;
}

inline void set_bit(std::uint64_t* words, int j) { words[j >> 6] |= std::uint64_t{1} << (j & 63); }

}  // namespace

double Alpha::as_double() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : value_;
}

void validate(const SamplerConfig& config) {
  if (config.board_side < 3)
    throw ConfigError("board side must be at least 3, got " +
                      std::to_string(config.board_side));
  if (config.samples_per_replication < 1)
    throw ConfigError("samples per replication must be at least 1");
  if (config.replications < 1) throw ConfigError("replications must be at least 1");
  if (config.start) {
    Square s = *config.start;
    if (s.file < 0 || s.file >= config.board_side || s.rank < 0 ||
        s.rank >= config.board_side)
      throw ConfigError("start square is not on the board");
  }
}

int free_degree(const Board& board, const std::vector<Square>& visited, Square j) {
  int d = 0;
  for (Square t : board.knight_moves(j))
    if (std::find(visited.begin(), visited.end(), t) == visited.end()) ++d;
  return d;
}

StepDistribution step_distribution(const Board& board, const PathState& state, Alpha alpha) {
  bool final_step = state.step() == board.square_count() - 1;

  int deg[8];
  Square cand[8];
  int count = 0;
  for (Square t : board.knight_moves(state.current())) {
    if (std::find(state.path.begin(), state.path.end(), t) != state.path.end()) continue;
    cand[count] = t;
    deg[count] = free_degree(board, state.path, t);
    ++count;
  }

  double degree_weight[9];
  degree_weight[0] = 0.0;
  if (!alpha.is_infinite())
    for (int d = 1; d <= 8; ++d)
      degree_weight[d] = std::pow(static_cast<double>(d), -alpha.value());

  double w[8];
  double total = step_weights(alpha, final_step, degree_weight, deg, count, w);
  if (total <= 0.0) return {};

  StepDistribution dist;
  dist.candidates.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    dist.candidates.push_back({cand[i], deg[i], w[i] > 0.0 ? w[i] / total : 0.0});
  return dist;
}

TourSampler::TourSampler(const Board& board, Alpha alpha, ViolationMin violation_min)
    : board_(&board),
      alpha_(alpha),
      violation_min_(violation_min),
      visited_(static_cast<std::size_t>(board.mask_words())),
      degree_(static_cast<std::size_t>(board.square_count())) {
  degree_weight_[0] = 0.0;
  for (int d = 1; d <= 8; ++d)
    degree_weight_[d] =
        alpha.is_infinite() ? 0.0 : std::pow(static_cast<double>(d), -alpha.value());
}

TourSample TourSampler::run(Square start, std::mt19937_64& rng, std::vector<Square>* trace) {
  const Board& b = *board_;
  const int n = b.square_count();
  if (!b.contains(start)) throw ConfigError("start square is not on the board");

  std::fill(visited_.begin(), visited_.end(), 0);
  for (int i = 0; i < n; ++i)
    degree_[static_cast<std::size_t>(i)] = static_cast<int>(b.knight_move_indices(i).size());

  TourSample out;
  out.start = start;
  if (trace) {
    trace->clear();
    trace->push_back(start);
  }

  int head = b.index_of(start);
  set_bit(visited_.data(), head);
  for (int v : b.knight_move_indices(head)) --degree_[static_cast<std::size_t>(v)];

  double weight = 1.0;
  int violations = 0;

  for (int step = 1; step < n; ++step) {
    int cand[8];
    int deg[8];
    int count = 0;
    int min_all = 9;
    for (int j : b.knight_move_indices(head)) {
      if (test_bit(visited_.data(), j)) continue;
      cand[count] = j;
      int d = degree_[static_cast<std::size_t>(j)];
      deg[count] = d;
      if (d < min_all) min_all = d;
      ++count;
    }
    if (count == 0) return out;  // dead end: completed stays false, weight 0

    bool final_step = step == n - 1;
    double w[8];
    double total = step_weights(alpha_, final_step, degree_weight_, deg, count, w);
    if (total <= 0.0) return out;  // only degree-0 continuations remain

    double u = uniform_double(rng) * total;
    int pick = -1;
    double acc = 0.0;
    for (int i = 0; i < count; ++i) {
      if (w[i] <= 0.0) continue;
      pick = i;
      acc += w[i];
      if (u < acc) break;  // falls through to the last positive weight if u rounds high
    }

    weight *= total / w[pick];

    int min_deg = min_all;
    if (violation_min_ == ViolationMin::kViableOnly && !final_step) {
      min_deg = 9;
      for (int i = 0; i < count; ++i)
        if (deg[i] >= 1 && deg[i] < min_deg) min_deg = deg[i];
    }
    if (deg[pick] > min_deg) ++violations;

    head = cand[pick];
    set_bit(visited_.data(), head);
    // Unvisited squares keep an exact count of unvisited neighbors; entries
    // for visited squares are never read, so decrement unconditionally.
    for (int v : b.knight_move_indices(head)) --degree_[static_cast<std::size_t>(v)];
    if (trace) trace->push_back(b.square_at(head));
  }

  out.completed = true;
  out.weight = weight;
  out.violations = violations;
  out.closes = b.knights_adjacent(head, b.index_of(start));
  return out;
}

TourSample TourSampler::sample(Square start, std::mt19937_64& rng) {
  return run(start, rng, nullptr);
}

TourSample TourSampler::sample_traced(Square start, std::mt19937_64& rng,
                                      std::vector<Square>& path) {
  return run(start, rng, &path);
}

TourSample sample_tour(const Board& board, Square start, Alpha alpha, std::mt19937_64& rng,
                       ViolationMin violation_min) {
  TourSampler sampler(board, alpha, violation_min);
  return sampler.sample(start, rng);
}

BatchResult run_batch(const Board& board, const SamplerConfig& config, const StartClass& cls,
                      int class_index, int replication_index) {
  validate(config);
  if (board.side() != config.board_side)
    throw ConfigError("board does not match config.board_side");

  BatchResult out;
  out.board_side = board.side();
  out.alpha = config.alpha;
  out.class_index = class_index;
  out.start_class = cls;
  out.replication_index = replication_index;
  out.samples = config.samples_per_replication;
  out.sum_weight_by_violations.assign(static_cast<std::size_t>(board.square_count() - 1), 0.0);
  out.seed_used = derive_stream_seed(config.base_seed, class_index, replication_index);

  std::mt19937_64 rng(out.seed_used);
  TourSampler sampler(board, config.alpha, config.violation_min);

  KahanSum sum_w, sum_w_sq, sum_wc, sum_wc_sq;
  std::vector<KahanSum> by_violations(out.sum_weight_by_violations.size());

  for (std::int64_t s = 0; s < config.samples_per_replication; ++s) {
    TourSample t = sampler.sample(cls.representative, rng);
    if (!t.completed) continue;
    ++out.successes;
    sum_w.add(t.weight);
    sum_w_sq.add(t.weight * t.weight);
    by_violations[static_cast<std::size_t>(t.violations)].add(t.weight);
    if (t.closes) {
      ++out.closed_successes;
      sum_wc.add(t.weight);
      sum_wc_sq.add(t.weight * t.weight);
    }
  }

  out.sum_weight = sum_w.value();
  out.sum_weight_sq = sum_w_sq.value();
  out.sum_weight_closed = sum_wc.value();
  out.sum_weight_sq_closed = sum_wc_sq.value();
  for (std::size_t k = 0; k < by_violations.size(); ++k)
    out.sum_weight_by_violations[k] = by_violations[k].value();
  return out;
}

}  // namespace tourcount
