// Exact backtracking enumeration of knight's tours on small boards.
//
// Counts are exact integers. Degree pruning (abandoning a branch as soon as
// some unvisited square has no unvisited neighbor left) is applied throughout;
// it never discards a completable path, so counts are unaffected.
#pragma once

#include <cstdint>
#include <vector>

#include "tourcount/board.hpp"

namespace tourcount {

// Boards above this side are refused unless the caller raises the limit.
inline constexpr int kDefaultExactLimit = 6;
// Hard cap: the enumerator works on a single 64-bit occupancy word.
inline constexpr int kMaxEnumerableSide = 8;

// Directed Hamiltonian knight paths starting at `start` (each direction of a
// geometric tour counts separately). Throws ResourceLimitError when the board
// exceeds exact_limit or kMaxEnumerableSide.
std::uint64_t count_open_numberings_from(const Board& board, Square start,
                                         int exact_limit = kDefaultExactLimit);

// Sum of count_open_numberings_from over all squares: the quantity N_n.
std::uint64_t count_open_numberings(const Board& board,
                                    int exact_limit = kDefaultExactLimit);

// Directed Hamiltonian knight cycles traced from a fixed start square. Every
// cycle passes through every square, so the value is start-independent and
// equals twice the diagram count.
std::uint64_t count_closed_numberings_from(const Board& board, Square start,
                                           int exact_limit = kDefaultExactLimit);

// Undirected Hamiltonian knight cycles with direction and starting point
// quotiented out: the quantity D_n. Zero for odd sides (bipartite parity).
std::uint64_t count_closed_diagrams(const Board& board,
                                    int exact_limit = kDefaultExactLimit);

// For every open numbering, the number of steps whose chosen square had a
// strictly larger free degree than the minimum over all legal candidates at
// that step. Returns hist where hist[k] counts numberings with k violations,
// k = 0 .. side^2-2. Guarded to side <= 5: the tree over all numberings grows
// too fast beyond that.
std::vector<std::uint64_t> exact_violation_histogram(
    const Board& board, int exact_limit = kDefaultExactLimit);

namespace detail {
// Closed-cycle search without the odd-side parity shortcut; exposed so tests
// can confirm the search itself agrees with the parity argument.
std::uint64_t count_closed_numberings_search(const Board& board, Square start);
}  // namespace detail

}  // namespace tourcount
