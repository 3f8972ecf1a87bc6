#include "tourcount/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "tourcount/errors.hpp"
#include "tourcount/kahan.hpp"

namespace tourcount {
namespace {

struct Cell {
  std::int64_t samples = 0;
  int multiplicity = 0;
  KahanSum sum_w;
  KahanSum sum_w_sq;
};

// Weight-mass accessors for the quantity being estimated. sum_sq may be
// null (violation buckets carry no squared sums; their spread comes from
// replications alone).
struct Extractor {
  double (*sum)(const BatchResult&, int k);
  double (*sum_sq)(const BatchResult&, int k);
  std::int64_t (*successes)(const BatchResult&);
  int k = 0;
};

Estimate assemble(QuantityKind kind, const std::vector<BatchResult>& batches,
                  const Extractor& ex, double scale) {
  if (batches.empty()) throw ConfigError("no batches to estimate from");

  const int side = batches.front().board_side;
  const Alpha alpha = batches.front().alpha;
  for (const auto& b : batches) {
    if (b.board_side != side) throw ConfigError("batches mix board sides");
    if (!(b.alpha == alpha)) throw ConfigError("batches mix alpha values");
  }

  // Fixed pooling order regardless of input order: one (replication, class)
  // cell may arrive in several pieces.
  std::vector<const BatchResult*> ordered;
  ordered.reserve(batches.size());
  for (const auto& b : batches) ordered.push_back(&b);
  std::sort(ordered.begin(), ordered.end(), [](const BatchResult* a, const BatchResult* b) {
    if (a->replication_index != b->replication_index)
      return a->replication_index < b->replication_index;
    if (a->class_index != b->class_index) return a->class_index < b->class_index;
    return a->seed_used < b->seed_used;
  });

  std::map<std::pair<int, int>, Cell> cells;  // (replication, class) -> sums
  std::map<int, int> class_multiplicity;
  std::int64_t samples_total = 0;
  std::int64_t successes_total = 0;
  for (const BatchResult* b : ordered) {
    samples_total += b->samples;
    successes_total += ex.successes(*b);
    auto [it, inserted] = class_multiplicity.emplace(b->class_index, b->start_class.multiplicity);
    if (!inserted && it->second != b->start_class.multiplicity)
      throw ConfigError("batches disagree on a start class multiplicity");
    Cell& cell = cells[{b->replication_index, b->class_index}];
    cell.samples += b->samples;
    cell.multiplicity = b->start_class.multiplicity;
    cell.sum_w.add(ex.sum(*b, ex.k));
    if (ex.sum_sq) cell.sum_w_sq.add(ex.sum_sq(*b, ex.k));
  }

  // Every replication must cover the same classes, or the V_r would estimate
  // different quantities.
  std::map<int, std::set<int>> classes_by_rep;
  for (const auto& [key, cell] : cells) classes_by_rep[key.first].insert(key.second);
  const std::set<int>& class_set = classes_by_rep.begin()->second;
  for (const auto& [rep, classes] : classes_by_rep)
    if (classes != class_set)
      throw ConfigError("replication " + std::to_string(rep) +
                        " does not cover the same start classes as the others");

  std::vector<double> rep_points;
  std::vector<double> rep_within_var;
  rep_points.reserve(classes_by_rep.size());
  for (const auto& [rep, classes] : classes_by_rep) {
    KahanSum v;
    KahanSum within;
    for (int c : classes) {
      const Cell& cell = cells.at({rep, c});
      double m = static_cast<double>(cell.samples);
      double mean = cell.sum_w.value() / m;
      v.add(static_cast<double>(cell.multiplicity) * mean);
      if (ex.sum_sq) {
        double var = std::max(0.0, cell.sum_w_sq.value() / m - mean * mean);
        within.add(static_cast<double>(cell.multiplicity) *
                   static_cast<double>(cell.multiplicity) * var / m);
      }
    }
    rep_points.push_back(v.value() * scale);
    rep_within_var.push_back(within.value() * scale * scale);
  }

  const int reps = static_cast<int>(rep_points.size());
  KahanSum mean_sum;
  for (double v : rep_points) mean_sum.add(v);
  const double point = mean_sum.value() / reps;

  // Per-sample variance propagated to the point estimate (the mean of the
  // V_r), for diagnostics and as the single-replication fallback.
  KahanSum within_sum;
  for (double v : rep_within_var) within_sum.add(v);
  const double within_se_point = std::sqrt(within_sum.value()) / reps;

  // Replications are i.i.d., so the point (their mean) has standard error
  // sd(V_r)/sqrt(R). One replication falls back to the propagated value.
  double std_error = within_se_point;
  if (reps >= 2) {
    KahanSum sq;
    for (double v : rep_points) sq.add((v - point) * (v - point));
    std_error = std::sqrt(sq.value() / (reps - 1)) / std::sqrt(static_cast<double>(reps));
  }

  Estimate e;
  e.kind = kind;
  e.board_side = side;
  e.alpha = alpha;
  e.point = point;
  e.std_error = std_error;
  e.ci_low = point - 3.0 * std_error;
  e.ci_high = point + 3.0 * std_error;
  e.samples_total = samples_total;
  e.successes = successes_total;
  e.replications = reps;
  e.replication_points = std::move(rep_points);
  e.std_error_within = within_se_point;
  return e;
}

double open_sum(const BatchResult& b, int) { return b.sum_weight; }
double open_sum_sq(const BatchResult& b, int) { return b.sum_weight_sq; }
std::int64_t open_successes(const BatchResult& b) { return b.successes; }

double closed_sum(const BatchResult& b, int) { return b.sum_weight_closed; }
double closed_sum_sq(const BatchResult& b, int) { return b.sum_weight_sq_closed; }
std::int64_t closed_successes(const BatchResult& b) { return b.closed_successes; }

double violation_sum(const BatchResult& b, int k) {
  return b.sum_weight_by_violations[static_cast<std::size_t>(k)];
}

}  // namespace

Estimate estimate_numberings(const std::vector<BatchResult>& batches) {
  return assemble(QuantityKind::kOpenNumberings, batches,
                  {open_sum, open_sum_sq, open_successes}, 1.0);
}

Estimate estimate_closed_diagrams(const std::vector<BatchResult>& batches) {
  if (batches.empty()) throw ConfigError("no batches to estimate from");
  // Closed weight mass from any one start estimates 2 * diagrams (each cycle
  // passes the start once per direction), so the multiplicity-weighted class
  // total estimates 2 * diagrams * (squares covered): side^2 over all
  // classes, 1 for a pinned start.
  std::map<int, int> multiplicity;
  for (const auto& b : batches) multiplicity.emplace(b.class_index, b.start_class.multiplicity);
  double covered = 0;
  for (const auto& [index, m] : multiplicity) covered += m;
  return assemble(QuantityKind::kClosedDiagrams, batches,
                  {closed_sum, closed_sum_sq, closed_successes}, 1.0 / (2.0 * covered));
}

Estimate to_geometric(const Estimate& numberings, bool assume_asymmetric) {
  if (numberings.kind != QuantityKind::kOpenNumberings)
    throw ConfigError("geometric conversion starts from open numberings");
  if (numberings.board_side != 8 && !assume_asymmetric)
    throw ConfigError(
        "the /16 conversion is only known to hold on the 8x8 board; pass "
        "assume_asymmetric to apply it anyway");
  Estimate e = numberings;
  e.kind = QuantityKind::kOpenGeometric;
  e.point /= 16.0;
  e.std_error /= 16.0;
  e.ci_low /= 16.0;
  e.ci_high /= 16.0;
  e.std_error_within /= 16.0;
  for (double& v : e.replication_points) v /= 16.0;
  return e;
}

ViolationHistogramEstimate estimate_violation_histogram(
    const std::vector<BatchResult>& batches) {
  if (batches.empty()) throw ConfigError("no batches to estimate from");
  const int side = batches.front().board_side;
  for (const auto& b : batches)
    if (b.sum_weight_by_violations.size() !=
        static_cast<std::size_t>(side * side - 1))
      throw ConfigError("violation bucket count does not match the board");

  ViolationHistogramEstimate out;
  out.geometric_units = side == 8;
  const double scale = out.geometric_units ? 1.0 / 16.0 : 1.0;
  const int buckets = side * side - 1;
  out.per_k.reserve(static_cast<std::size_t>(buckets));
  for (int k = 0; k < buckets; ++k)
    out.per_k.push_back(assemble(QuantityKind::kViolationClass, batches,
                                 {violation_sum, nullptr, open_successes, k}, scale));
  return out;
}

std::pair<double, double> confidence_interval(const Estimate& e, double z) {
  return {e.point - z * e.std_error, e.point + z * e.std_error};
}

}  // namespace tourcount
