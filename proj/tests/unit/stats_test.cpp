#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "tourcount/errors.hpp"
#include "tourcount/exact.hpp"
#include "tourcount/experiment.hpp"
#include "tourcount/sampler.hpp"
#include "tourcount/stats.hpp"

using namespace tourcount;

namespace {

// A hand-built batch with exactly representable sums.
BatchResult synth(int side, Alpha alpha, int cls, int mult, int rep, std::int64_t n,
                  double sum_w, double sum_sq) {
  BatchResult b;
  b.board_side = side;
  b.alpha = alpha;
  b.class_index = cls;
  b.start_class = {{cls, 0}, mult};
  b.replication_index = rep;
  b.samples = n;
  b.successes = n;
  b.sum_weight = sum_w;
  b.sum_weight_sq = sum_sq;
  b.sum_weight_by_violations.assign(static_cast<std::size_t>(side * side - 1), 0.0);
  b.sum_weight_by_violations[0] = sum_w;
  return b;
}

}  // namespace

TEST_CASE("point and spread follow the replication estimator") {
  Alpha a = Alpha::finite(1.5);
  // Replication sums: V_0 = 4*8 + 8*4 = 64, V_1 = 4*16 + 8*24 = 256.
  std::vector<BatchResult> batches{
      synth(5, a, 0, 4, 0, 10, 80.0, 0.0), synth(5, a, 1, 8, 0, 10, 40.0, 0.0),
      synth(5, a, 0, 4, 1, 10, 160.0, 0.0), synth(5, a, 1, 8, 1, 10, 240.0, 0.0)};
  auto e = estimate_numberings(batches);
  CHECK(e.kind == QuantityKind::kOpenNumberings);
  CHECK(e.board_side == 5);
  CHECK(e.alpha == a);
  CHECK(e.replications == 2);
  REQUIRE(e.replication_points.size() == 2);
  CHECK(e.replication_points[0] == doctest::Approx(64.0));
  CHECK(e.replication_points[1] == doctest::Approx(256.0));
  CHECK(e.point == doctest::Approx(160.0));
  // Sample sd of {64, 256} is sqrt(18432); divided by sqrt(2) gives 96.
  CHECK(e.std_error == doctest::Approx(96.0).epsilon(1e-12));
  CHECK(e.ci_low == doctest::Approx(160.0 - 3 * 96.0));
  CHECK(e.ci_high == doctest::Approx(160.0 + 3 * 96.0));
  CHECK(e.samples_total == 40);
  CHECK(e.successes == 40);
}

TEST_CASE("single replication falls back to the propagated error") {
  Alpha a = Alpha::finite(0.0);
  // Both classes: per-sample variance 1, so var(mean) = 1/4.
  std::vector<BatchResult> batches{synth(4, a, 0, 4, 0, 4, 8.0, 20.0),
                                   synth(4, a, 1, 8, 0, 4, 4.0, 8.0)};
  auto e = estimate_numberings(batches);
  CHECK(e.point == doctest::Approx(16.0));
  // within^2 = 16 * 1/4 + 64 * 1/4 = 20.
  CHECK(e.std_error_within == doctest::Approx(std::sqrt(20.0)).epsilon(1e-12));
  CHECK(e.std_error == doctest::Approx(e.std_error_within));
  CHECK(e.replications == 1);
}

TEST_CASE("scaling all weights scales the estimate linearly") {
  Alpha a = Alpha::finite(1.5);
  std::vector<BatchResult> base{
      synth(5, a, 0, 4, 0, 10, 80.0, 900.0), synth(5, a, 1, 8, 0, 10, 40.0, 500.0),
      synth(5, a, 0, 4, 1, 10, 160.0, 3000.0), synth(5, a, 1, 8, 1, 10, 240.0, 7000.0)};
  auto scaled = base;
  for (auto& b : scaled) {
    b.sum_weight *= 3.0;
    b.sum_weight_sq *= 9.0;
  }
  auto e1 = estimate_numberings(base);
  auto e2 = estimate_numberings(scaled);
  CHECK(e2.point == doctest::Approx(3.0 * e1.point).epsilon(1e-12));
  CHECK(e2.std_error == doctest::Approx(3.0 * e1.std_error).epsilon(1e-12));
  CHECK(e2.std_error_within == doctest::Approx(3.0 * e1.std_error_within).epsilon(1e-12));
}

TEST_CASE("batch order and cell splitting do not change the estimate") {
  Alpha a = Alpha::finite(1.5);
  std::vector<BatchResult> merged{
      synth(5, a, 0, 4, 0, 10, 80.0, 640.0), synth(5, a, 1, 8, 0, 10, 40.0, 200.0),
      synth(5, a, 0, 4, 1, 10, 160.0, 2600.0), synth(5, a, 1, 8, 1, 10, 240.0, 5800.0)};
  auto split = merged;
  split[0] = synth(5, a, 0, 4, 0, 6, 48.0, 600.0);
  split.push_back(synth(5, a, 0, 4, 0, 4, 32.0, 40.0));
  std::reverse(split.begin(), split.end());
  auto e1 = estimate_numberings(merged);
  auto e2 = estimate_numberings(split);
  CHECK(e2.point == e1.point);
  CHECK(e2.std_error == e1.std_error);
  CHECK(e2.samples_total == e1.samples_total);
}

TEST_CASE("mismatched batches are rejected") {
  Alpha a = Alpha::finite(1.5);
  auto ok = [&] {
    return std::vector<BatchResult>{synth(5, a, 0, 4, 0, 10, 80.0, 0.0),
                                    synth(5, a, 1, 8, 0, 10, 40.0, 0.0)};
  };
  CHECK_THROWS_AS(estimate_numberings({}), ConfigError);

  auto alpha_clash = ok();
  alpha_clash[1].alpha = Alpha::finite(2.0);
  CHECK_THROWS_AS(estimate_numberings(alpha_clash), ConfigError);

  auto side_clash = ok();
  side_clash[1].board_side = 6;
  CHECK_THROWS_AS(estimate_numberings(side_clash), ConfigError);

  auto mult_clash = ok();
  mult_clash.push_back(synth(5, a, 0, 7, 1, 10, 80.0, 0.0));
  mult_clash.push_back(synth(5, a, 1, 8, 1, 10, 40.0, 0.0));
  CHECK_THROWS_AS(estimate_numberings(mult_clash), ConfigError);

  auto missing_class = ok();
  missing_class.push_back(synth(5, a, 0, 4, 1, 10, 80.0, 0.0));
  CHECK_THROWS_AS(estimate_numberings(missing_class), ConfigError);
}

TEST_CASE("closed diagrams scale by covered start multiplicity") {
  Alpha a = Alpha::finite(1.5);
  SUBCASE("two classes cover twelve squares") {
    auto b0 = synth(6, a, 0, 4, 0, 10, 0.0, 0.0);
    auto b1 = synth(6, a, 1, 8, 0, 10, 0.0, 0.0);
    b0.sum_weight_closed = 60.0;  // mean 6
    b1.sum_weight_closed = 30.0;  // mean 3
    b0.closed_successes = 3;
    b1.closed_successes = 2;
    auto e = estimate_closed_diagrams({b0, b1});
    CHECK(e.kind == QuantityKind::kClosedDiagrams);
    // V = 4*6 + 8*3 = 48, divided by 2 * (4 + 8).
    CHECK(e.point == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(e.successes == 5);
  }
  SUBCASE("a single start divides by two") {
    auto b = synth(6, a, 0, 1, 0, 5, 0.0, 0.0);
    b.sum_weight_closed = 10.0;  // mean 2
    auto e = estimate_closed_diagrams({b});
    CHECK(e.point == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("geometric conversion divides by sixteen and is gated") {
  Alpha a = Alpha::finite(1.5);
  std::vector<BatchResult> batches{synth(8, a, 0, 4, 0, 10, 1600.0, 400000.0),
                                   synth(8, a, 0, 4, 1, 10, 1760.0, 500000.0)};
  auto n = estimate_numberings(batches);
  auto g = to_geometric(n);
  CHECK(g.kind == QuantityKind::kOpenGeometric);
  CHECK(g.point == doctest::Approx(n.point / 16.0).epsilon(1e-12));
  CHECK(g.std_error == doctest::Approx(n.std_error / 16.0).epsilon(1e-12));
  CHECK(g.ci_low == doctest::Approx(n.ci_low / 16.0).epsilon(1e-12));
  CHECK(g.ci_high == doctest::Approx(n.ci_high / 16.0).epsilon(1e-12));
  CHECK(g.std_error_within == doctest::Approx(n.std_error_within / 16.0).epsilon(1e-12));
  REQUIRE(g.replication_points.size() == 2);
  CHECK(g.replication_points[0] == doctest::Approx(n.replication_points[0] / 16.0));

  // Division by 16 assumes no tour maps to itself under symmetry or reversal;
  // that is only established for 8x8, so other sides need the explicit flag.
  std::vector<BatchResult> six{synth(6, a, 0, 4, 0, 10, 80.0, 0.0)};
  auto n6 = estimate_numberings(six);
  CHECK_THROWS_AS(to_geometric(n6), ConfigError);
  auto g6 = to_geometric(n6, true);
  CHECK(g6.point == doctest::Approx(n6.point / 16.0));
}

TEST_CASE("interval helper widens around the point") {
  Estimate e;
  e.point = 1.222801e15;
  e.std_error = 8.26e11;
  auto [lo3, hi3] = confidence_interval(e, 3.0);
  CHECK(lo3 == doctest::Approx(e.point - 3 * e.std_error));
  CHECK(hi3 == doctest::Approx(e.point + 3 * e.std_error));
  auto [lo0, hi0] = confidence_interval(e, 0.0);
  CHECK(lo0 == e.point);
  CHECK(hi0 == e.point);
}

TEST_CASE("violation histogram partitions the weight mass") {
  SUBCASE("small board keeps raw numbering units") {
    Board board(5);
    auto plan = make_plan(board, Alpha::finite(1.5), 3000, 4, 11);
    auto batches = run_experiment(board, plan);
    auto total = estimate_numberings(batches);
    auto hist = estimate_violation_histogram(batches);
    CHECK(!hist.geometric_units);
    REQUIRE(hist.per_k.size() == 24);
    double mass = 0;
    for (const auto& e : hist.per_k) {
      CHECK(e.kind == QuantityKind::kViolationClass);
      mass += e.point;
    }
    CHECK(mass == doctest::Approx(total.point).epsilon(1e-9));
  }
  SUBCASE("eight by eight converts to geometric units") {
    Board board(8);
    auto plan = make_plan(board, Alpha::finite(1.5), 1000, 2, 11);
    auto batches = run_experiment(board, plan);
    auto total = estimate_numberings(batches);
    auto hist = estimate_violation_histogram(batches);
    CHECK(hist.geometric_units);
    REQUIRE(hist.per_k.size() == 63);
    double mass = 0;
    for (const auto& e : hist.per_k) mass += e.point;
    CHECK(mass == doctest::Approx(total.point / 16.0).epsilon(1e-9));
  }
}

TEST_CASE("estimates from all-failing batches are zero") {
  // No 3x3 tour exists, so every sample dead-ends.
  Board board(3);
  auto plan = make_plan(board, Alpha::finite(1.0), 300, 2, 5);
  auto batches = run_experiment(board, plan);
  for (const auto& b : batches) {
    CHECK(b.successes == 0);
    CHECK(b.sum_weight == 0.0);
  }
  auto e = estimate_numberings(batches);
  CHECK(e.point == 0.0);
  CHECK(e.std_error == 0.0);
  CHECK(e.successes == 0);
}

TEST_CASE("sampling brackets exact counts through the full pipeline") {
  SUBCASE("five by five open numberings") {
    Board board(5);
    auto plan = make_plan(board, Alpha::finite(1.5), 6000, 4, 2026);
    auto e = estimate_numberings(run_experiment(board, plan));
    CHECK(std::abs(e.point - 1728.0) <= 5.0 * std::max(e.std_error, e.std_error_within));
  }
  SUBCASE("six by six closed diagrams, all starts") {
    Board board(6);
    auto plan = make_plan(board, Alpha::finite(1.5), 20000, 5, 2026);
    auto e = estimate_closed_diagrams(run_experiment(board, plan));
    CHECK(std::abs(e.point - 9862.0) <= 5.0 * std::max(e.std_error, e.std_error_within));
  }
  SUBCASE("six by six closed diagrams from one start") {
    // The single-start estimator divides by 2, not 2 * side^2.
    Board board(6);
    auto plan = make_plan(board, Alpha::finite(1.5), 20000, 3, 2026, Square{0, 0});
    auto e = estimate_closed_diagrams(run_experiment(board, plan));
    CHECK(std::abs(e.point - 9862.0) <= 5.0 * std::max(e.std_error, e.std_error_within));
  }
}
