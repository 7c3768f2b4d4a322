// Copyright 2026 The afford Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AFFORD_GEOMETRY_H_
#define AFFORD_GEOMETRY_H_

#include <cstdint>
#include <cstdlib>
#include <algorithm>
#include <compare>

namespace afford {

struct Color {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend auto operator<=>(const Color&, const Color&) = default;
};

// Integer cell coordinate or displacement. y grows downwards.
struct Cell {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
  friend Cell operator+(Cell a, Cell b) { return {a.x + b.x, a.y + b.y}; }
  friend Cell operator-(Cell a, Cell b) { return {a.x - b.x, a.y - b.y}; }
};

struct Extent {
  int width = 1;
  int height = 1;
  friend auto operator<=>(const Extent&, const Extent&) = default;
};

// Half-open cell rectangle [x, x + width) x [y, y + height).
struct Box {
  Cell origin;
  Extent extent;

  int left() const { return origin.x; }
  int top() const { return origin.y; }
  int right() const { return origin.x + extent.width; }
  int bottom() const { return origin.y + extent.height; }

  bool overlaps(const Box& other) const {
    return left() < other.right() && other.left() < right() &&
           top() < other.bottom() && other.top() < bottom();
  }
  bool inside(int grid_width, int grid_height) const {
    return left() >= 0 && top() >= 0 && right() <= grid_width &&
           bottom() <= grid_height;
  }
  // Chebyshev distance between the closest cells of two boxes: 0 when they
  // overlap, 1 when they are adjacent (diagonals included).
  int chebyshev_distance(const Box& other) const {
    const int gx = std::max({0, other.left() - right() + 1,
                             left() - other.right() + 1});
    const int gy = std::max({0, other.top() - bottom() + 1,
                             top() - other.bottom() + 1});
    return std::max(gx, gy);
  }
  friend auto operator<=>(const Box&, const Box&) = default;
};

inline int manhattan(Cell a, Cell b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

}  // namespace afford

#endif  // AFFORD_GEOMETRY_H_
