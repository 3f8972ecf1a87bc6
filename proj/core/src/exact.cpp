#include "tourcount/exact.hpp"

#include <cassert>
#include <string>

#include "tourcount/errors.hpp"

namespace tourcount {

namespace {

void check_enumerable(const Board& board, int exact_limit) {
  if (board.side() > kMaxEnumerableSide) {
    throw ResourceLimitError(
        "exact enumeration infeasible: side " + std::to_string(board.side()) +
        " exceeds the " + std::to_string(kMaxEnumerableSide) +
        "x" + std::to_string(kMaxEnumerableSide) + " enumerator cap");
  }
  if (board.side() > exact_limit) {
    throw ResourceLimitError(
        "exact enumeration infeasible: side " + std::to_string(board.side()) +
        " exceeds the configured exact limit " + std::to_string(exact_limit));
  }
}

// Backtracking searcher over a <=64-square board. `deg[i]` tracks the number
// of unvisited neighbors of each unvisited square; `zero_deg` counts unvisited
// squares with deg == 0. Any such square, with two or more squares still to
// go, can only be entered as the immediate next move and then has no exit, so
// the branch is dead.
struct Searcher {
  int nbr_count[64];
  int nbr[64][8];
  std::uint64_t nbr_mask[64];
  int squares;

  std::uint64_t visited = 0;
  int deg[64];
  int zero_deg = 0;

  // Closed-search extras.
  int start = 0;
  int start_free = 0;

  explicit Searcher(const Board& board) : squares(board.square_count()) {
    for (int i = 0; i < squares; ++i) {
      const auto& ids = board.knight_move_indices(i);
      nbr_count[i] = static_cast<int>(ids.size());
      for (std::size_t k = 0; k < ids.size(); ++k) nbr[i][k] = ids[k];
      nbr_mask[i] = board.knight_move_mask(i)[0];
      deg[i] = nbr_count[i];
      if (deg[i] == 0) ++zero_deg;
    }
  }

  void visit(int j) {
    visited |= std::uint64_t{1} << j;
    if (deg[j] == 0) --zero_deg;
    for (int k = 0; k < nbr_count[j]; ++k) {
      const int v = nbr[j][k];
      if (!((visited >> v) & 1) && --deg[v] == 0) ++zero_deg;
    }
  }

  void unvisit(int j) {
    for (int k = 0; k < nbr_count[j]; ++k) {
      const int v = nbr[j][k];
      if (!((visited >> v) & 1) && deg[v]++ == 0) --zero_deg;
    }
    visited &= ~(std::uint64_t{1} << j);
    if (deg[j] == 0) ++zero_deg;
  }

  std::uint64_t open_paths(int head, int remaining) {
    std::uint64_t total = 0;
    for (int k = 0; k < nbr_count[head]; ++k) {
      const int j = nbr[head][k];
      if ((visited >> j) & 1) continue;
      if (remaining == 1) {
        ++total;
        continue;
      }
      visit(j);
      if (remaining == 2 || zero_deg == 0) {
        total += open_paths(j, remaining - 1);
      }
      unvisit(j);
    }
    return total;
  }

  std::uint64_t closed_paths(int head, int remaining) {
    std::uint64_t total = 0;
    for (int k = 0; k < nbr_count[head]; ++k) {
      const int j = nbr[head][k];
      if ((visited >> j) & 1) continue;
      if (remaining == 1) {
        total += (nbr_mask[j] >> start) & 1;
        continue;
      }
      const bool touches_start = (nbr_mask[start] >> j) & 1;
      visit(j);
      if (touches_start) --start_free;
      if (start_free > 0 && (remaining == 2 || zero_deg == 0)) {
        total += closed_paths(j, remaining - 1);
      }
      if (touches_start) ++start_free;
      unvisit(j);
    }
    return total;
  }

  void violation_paths(int head, int remaining, int violations,
                       std::vector<std::uint64_t>& hist) {
    int min_deg = 9;
    for (int k = 0; k < nbr_count[head]; ++k) {
      const int j = nbr[head][k];
      if (!((visited >> j) & 1) && deg[j] < min_deg) min_deg = deg[j];
    }
    for (int k = 0; k < nbr_count[head]; ++k) {
      const int j = nbr[head][k];
      if ((visited >> j) & 1) continue;
      const int v = violations + (deg[j] > min_deg ? 1 : 0);
      if (remaining == 1) {
        ++hist[v];
        continue;
      }
      visit(j);
      if (remaining == 2 || zero_deg == 0) {
        violation_paths(j, remaining - 1, v, hist);
      }
      unvisit(j);
    }
  }
};

std::uint64_t open_paths_from(const Board& board, Square start) {
  Searcher s(board);
  const int si = board.index_of(start);
  s.visit(si);
  const int remaining = s.squares - 1;
  if (remaining == 0) return 1;
  if (remaining >= 2 && s.zero_deg > 0) return 0;
  return s.open_paths(si, remaining);
}

}  // namespace

std::uint64_t count_open_numberings_from(const Board& board, Square start,
                                         int exact_limit) {
  check_enumerable(board, exact_limit);
  if (!board.contains(start)) {
    throw ConfigError("start square is not on the board");
  }
  return open_paths_from(board, start);
}

std::uint64_t count_open_numberings(const Board& board, int exact_limit) {
  check_enumerable(board, exact_limit);
  std::uint64_t total = 0;
  for (int i = 0; i < board.square_count(); ++i) {
    total += open_paths_from(board, board.square_at(i));
  }
  return total;
}

namespace detail {

std::uint64_t count_closed_numberings_search(const Board& board,
                                             Square start) {
  Searcher s(board);
  const int si = board.index_of(start);
  s.start = si;
  s.start_free = s.nbr_count[si];
  s.visit(si);
  const int remaining = s.squares - 1;
  if (remaining == 0) return 0;
  if (s.start_free == 0) return 0;
  if (remaining >= 2 && s.zero_deg > 0) return 0;
  return s.closed_paths(si, remaining);
}

}  // namespace detail

std::uint64_t count_closed_numberings_from(const Board& board, Square start,
                                           int exact_limit) {
  check_enumerable(board, exact_limit);
  if (!board.contains(start)) {
    throw ConfigError("start square is not on the board");
  }
  // Odd boards have an odd square count; the knight graph is bipartite, so no
  // Hamiltonian cycle exists.
  if (board.square_count() % 2 != 0) return 0;
  return detail::count_closed_numberings_search(board, start);
}

std::uint64_t count_closed_diagrams(const Board& board, int exact_limit) {
  // A cycle visits every square, so tracing from one fixed start finds each
  // diagram exactly twice (once per direction).
  const std::uint64_t directed =
      count_closed_numberings_from(board, {0, 0}, exact_limit);
  assert(directed % 2 == 0);
  return directed / 2;
}

std::vector<std::uint64_t> exact_violation_histogram(const Board& board,
                                                     int exact_limit) {
  check_enumerable(board, exact_limit);
  if (board.side() > 5) {
    throw ResourceLimitError(
        "exact violation histogram is limited to side <= 5");
  }
  std::vector<std::uint64_t> hist(board.square_count() - 1, 0);
  for (int i = 0; i < board.square_count(); ++i) {
    Searcher s(board);
    s.visit(i);
    const int remaining = s.squares - 1;
    if (remaining == 0) continue;
    if (remaining >= 2 && s.zero_deg > 0) continue;
    s.violation_paths(i, remaining, 0, hist);
  }
  return hist;
}

}  // namespace tourcount
