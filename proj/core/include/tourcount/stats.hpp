// Estimates and their uncertainties from batch sums.
//
// The estimator treats replications as i.i.d.: each replication r yields
//   V_r = sum over start classes of multiplicity * mean weight,
// the point estimate is the mean of the V_r, and std_error is the sample
// standard deviation of the V_r divided by sqrt(replications). With a single
// replication the propagated within-replication formula
// sqrt(sum multiplicity^2 * var(mean weight)) substitutes; it is always
// available as std_error_within for diagnostics.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tourcount/sampler.hpp"

namespace tourcount {

enum class QuantityKind {
  kOpenNumberings,   // directed open tours, all starts (N)
  kOpenDiagrams,     // open tours modulo direction (T = N/2)
  kOpenGeometric,    // open tours modulo direction and symmetry (G = N/16)
  kClosedDiagrams,   // undirected closed tours modulo start (D)
  kViolationClass,   // weight mass at one violation count
};

struct Estimate {
  QuantityKind kind = QuantityKind::kOpenNumberings;
  int board_side = 0;
  Alpha alpha;
  double point = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;   // point - 3 * std_error
  double ci_high = 0.0;  // point + 3 * std_error
  std::int64_t samples_total = 0;
  std::int64_t successes = 0;  // closed successes for closed quantities
  int replications = 0;
  std::vector<double> replication_points;  // V_r by replication index
  double std_error_within = 0.0;           // propagated per-sample variance
};

struct ViolationHistogramEstimate {
  std::vector<Estimate> per_k;  // index = violation count
  bool geometric_units = false;  // true on 8x8 (divided by 16)
};

// Total directed open tours over all starts. Batches may arrive in any order
// and may split one (class, replication) cell into several pieces; they must
// agree on side and alpha, and every replication must cover the same classes.
// Throws ConfigError otherwise.
Estimate estimate_numberings(const std::vector<BatchResult>& batches);

// Closed-tour diagrams: closed weight mass scaled by 1/(2*c) where c is the
// total multiplicity of the covered start classes, since each cycle is seen
// once per covered start square and direction. Over all classes c = side^2;
// from a single start c = 1.
Estimate estimate_closed_diagrams(const std::vector<BatchResult>& batches);

// Open numberings divided by 16 (direction x 8 symmetries). Only meaningful
// when no tour is symmetric under reversal or a board transform; that holds
// on 8x8. Other sides require assume_asymmetric = true. Throws ConfigError.
Estimate to_geometric(const Estimate& numberings, bool assume_asymmetric = false);

// Per violation count k, the same estimator restricted to weight mass at k.
// On 8x8 the entries are converted to geometric units. Per-k std_error comes
// from the replication spread, so it is 0 when replications == 1.
ViolationHistogramEstimate estimate_violation_histogram(const std::vector<BatchResult>& batches);

// (point - z * std_error, point + z * std_error).
std::pair<double, double> confidence_interval(const Estimate& e, double z = 3.0);

}  // namespace tourcount
