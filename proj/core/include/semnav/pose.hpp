#pragma once

#include <string_view>

#include "semnav/grid.hpp"

namespace semnav {

enum class Heading { north = 0, east = 1, south = 2, west = 3 };

inline Heading turned_left(Heading h) { return static_cast<Heading>((static_cast<int>(h) + 3) % 4); }
inline Heading turned_right(Heading h) { return static_cast<Heading>((static_cast<int>(h) + 1) % 4); }

// Unit step for a heading, as (d_row, d_col).
inline Cell heading_step(Heading h) {
  switch (h) {
    case Heading::north: return {-1, 0};
    case Heading::east: return {0, 1};
    case Heading::south: return {1, 0};
    case Heading::west: return {0, -1};
  }
  return {0, 0};
}

std::string_view heading_name(Heading h);
Heading parse_heading(std::string_view name);

struct Pose {
  Cell cell;
  Heading heading = Heading::north;

  friend bool operator==(const Pose&, const Pose&) = default;
};

// Egocentric crops have the agent on the centre cell looking up (towards row 0).
// Maps crop (row, col) of a size x size crop to a world cell for the pose.
inline Cell crop_to_world(const Pose& pose, int crop_row, int crop_col, int crop_size) {
  const int centre = crop_size / 2;
  const int ahead = centre - crop_row;
  const int right = crop_col - centre;
  const Cell fwd = heading_step(pose.heading);
  const Cell rgt = heading_step(turned_right(pose.heading));
  return {pose.cell.row + ahead * fwd.row + right * rgt.row,
          pose.cell.col + ahead * fwd.col + right * rgt.col};
}

}  // namespace semnav
