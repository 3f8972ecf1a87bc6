#include "tourcount/board.hpp"

#include <algorithm>
#include <stdexcept>

namespace tourcount {

namespace {

constexpr std::array<std::pair<int, int>, 8> kKnightOffsets = {{
    {-2, -1}, {-2, 1}, {-1, -2}, {-1, 2}, {1, -2}, {1, 2}, {2, -1}, {2, 1},
}};

Square apply_on(Transform t, Square s, int side) {
  const int m = side - 1;
  switch (t) {
    case Transform::kIdentity:     return {s.file, s.rank};
    case Transform::kRot90:        return {m - s.rank, s.file};
    case Transform::kRot180:       return {m - s.file, m - s.rank};
    case Transform::kRot270:       return {s.rank, m - s.file};
    case Transform::kFlipFile:     return {m - s.file, s.rank};
    case Transform::kFlipRank:     return {s.file, m - s.rank};
    case Transform::kFlipMainDiag: return {s.rank, s.file};
    case Transform::kFlipAntiDiag: return {m - s.rank, m - s.file};
  }
  return s;
}

// The group is board-size independent; identify elements by their action on a
// 5x5 probe board, where the 8 transforms act distinctly.
int identify(const std::array<Square, 25>& images) {
  for (Transform t : kAllTransforms) {
    bool match = true;
    for (int i = 0; i < 25 && match; ++i) {
      match = apply_on(t, {i / 5, i % 5}, 5) == images[i];
    }
    if (match) return static_cast<int>(t);
  }
  throw std::logic_error("transform composition left the dihedral group");
}

struct GroupTables {
  std::array<std::array<Transform, 8>, 8> compose;
  std::array<Transform, 8> inverse;

  GroupTables() {
    for (Transform a : kAllTransforms) {
      for (Transform b : kAllTransforms) {
        std::array<Square, 25> images;
        for (int i = 0; i < 25; ++i) {
          images[i] = apply_on(a, apply_on(b, {i / 5, i % 5}, 5), 5);
        }
        compose[static_cast<int>(a)][static_cast<int>(b)] =
            static_cast<Transform>(identify(images));
      }
    }
    for (Transform t : kAllTransforms) {
      for (Transform u : kAllTransforms) {
        if (compose[static_cast<int>(t)][static_cast<int>(u)] ==
            Transform::kIdentity) {
          inverse[static_cast<int>(t)] = u;
        }
      }
    }
  }
};

const GroupTables& tables() {
  static const GroupTables t;
  return t;
}

}  // namespace

Transform compose(Transform a, Transform b) {
  return tables().compose[static_cast<int>(a)][static_cast<int>(b)];
}

Transform inverse(Transform t) { return tables().inverse[static_cast<int>(t)]; }

Board::Board(int side) : side_(side) {
  if (side < 3) {
    throw std::invalid_argument("board side must be at least 3");
  }
  const int n = square_count();
  mask_words_ = (n + 63) / 64;
  moves_.resize(n);
  move_indices_.resize(n);
  move_masks_.assign(static_cast<std::size_t>(n) * mask_words_, 0);
  for (int i = 0; i < n; ++i) {
    const Square from = square_at(i);
    for (auto [df, dr] : kKnightOffsets) {
      const Square to{from.file + df, from.rank + dr};
      if (contains(to)) moves_[i].push_back(to);
    }
    std::sort(moves_[i].begin(), moves_[i].end());
    for (const Square& to : moves_[i]) {
      const int j = index_of(to);
      move_indices_[i].push_back(j);
      move_masks_[static_cast<std::size_t>(i) * mask_words_ + (j >> 6)] |=
          std::uint64_t{1} << (j & 63);
    }
  }
}

Square Board::apply(Transform t, Square s) const {
  return apply_on(t, s, side_);
}

std::vector<StartClass> Board::start_classes() const {
  std::vector<StartClass> classes;
  std::vector<char> seen(square_count(), 0);
  for (int i = 0; i < square_count(); ++i) {
    if (seen[i]) continue;
    const Square rep = square_at(i);
    std::vector<int> orbit;
    for (Transform t : kAllTransforms) {
      const int j = index_of(apply(t, rep));
      if (std::find(orbit.begin(), orbit.end(), j) == orbit.end()) {
        orbit.push_back(j);
      }
    }
    for (int j : orbit) seen[j] = 1;
    classes.push_back({rep, static_cast<int>(orbit.size())});
  }
  return classes;
}

}  // namespace tourcount
