// Square-board geometry: knight adjacency and the dihedral symmetry group.
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <vector>

namespace tourcount {

struct Square {
  int file = 0;
  int rank = 0;
  friend constexpr auto operator<=>(const Square&, const Square&) = default;
};

// The eight symmetries of a square board (4 rotations x optional reflection).
enum class Transform : int {
  kIdentity = 0,
  kRot90,
  kRot180,
  kRot270,
  kFlipFile,      // mirror across the vertical axis
  kFlipRank,      // mirror across the horizontal axis
  kFlipMainDiag,  // transpose
  kFlipAntiDiag,
};

inline constexpr std::array<Transform, 8> kAllTransforms = {
    Transform::kIdentity,  Transform::kRot90,       Transform::kRot180,
    Transform::kRot270,    Transform::kFlipFile,    Transform::kFlipRank,
    Transform::kFlipMainDiag, Transform::kFlipAntiDiag,
};

// compose(a, b) applies b first, then a. Both return members of the group.
Transform compose(Transform a, Transform b);
Transform inverse(Transform t);

// One orbit of squares under the eight transforms. multiplicity is the orbit
// size; representative is the lexicographically smallest member.
struct StartClass {
  Square representative;
  int multiplicity = 0;
};

class Board {
 public:
  // Throws std::invalid_argument for side < 3 (no knight structure below 3x3).
  explicit Board(int side);

  int side() const { return side_; }
  int square_count() const { return side_ * side_; }

  bool contains(Square s) const {
    return s.file >= 0 && s.file < side_ && s.rank >= 0 && s.rank < side_;
  }

  // Index order (file*side + rank) coincides with (file, rank) lexicographic
  // order; the canonical-representative logic relies on that.
  int index_of(Square s) const { return s.file * side_ + s.rank; }
  Square square_at(int index) const { return {index / side_, index % side_}; }

  // Knight moves from `from`, sorted by (file, rank). May be empty (3x3 center).
  const std::vector<Square>& knight_moves(Square from) const {
    return moves_[index_of(from)];
  }
  const std::vector<int>& knight_move_indices(int from_index) const {
    return move_indices_[from_index];
  }

  // Adjacency bitmask rows, mask_words() words per square.
  int mask_words() const { return mask_words_; }
  const std::uint64_t* knight_move_mask(int from_index) const {
    return move_masks_.data() + static_cast<std::size_t>(from_index) * mask_words_;
  }
  bool knights_adjacent(int a, int b) const {
    return (knight_move_mask(a)[b >> 6] >> (b & 63)) & 1u;
  }

  Square apply(Transform t, Square s) const;

  // Orbit partition of all squares, ordered by representative.
  std::vector<StartClass> start_classes() const;

 private:
  int side_;
  int mask_words_;
  std::vector<std::vector<Square>> moves_;
  std::vector<std::vector<int>> move_indices_;
  std::vector<std::uint64_t> move_masks_;
};

}  // namespace tourcount
