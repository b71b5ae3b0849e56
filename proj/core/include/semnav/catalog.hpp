#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace semnav {

namespace occupancy {
inline constexpr int kUnknown = 0;
inline constexpr int kOccupied = 1;
inline constexpr int kFree = 2;
inline constexpr int kCount = 3;
}  // namespace occupancy

namespace semantic {
inline constexpr int kUnknown = 0;
inline constexpr int kFloor = 1;
inline constexpr int kWall = 2;
inline constexpr int kFirstObject = 3;
}  // namespace semantic

// Ordered label sets. Index 0 is `unknown` in both; semantic indices 1 and 2
// are `floor` and `wall`, object classes follow.
struct ClassCatalog {
  std::vector<std::string> occupancy_classes;
  std::vector<std::string> semantic_classes;

  static ClassCatalog standard();

  int semantic_count() const { return static_cast<int>(semantic_classes.size()); }
  int occupancy_count() const { return static_cast<int>(occupancy_classes.size()); }

  // Returns -1 when the name is absent.
  int semantic_index(std::string_view name) const;
  const std::string& semantic_name(int index) const;

  // unknown, floor and wall cannot be navigation targets.
  static bool is_structural(int semantic_class) { return semantic_class < semantic::kFirstObject; }

  // Throws ConfigError when the fixed slots are violated.
  void validate() const;

  friend bool operator==(const ClassCatalog&, const ClassCatalog&) = default;
};

// Semantic label to occupancy label: floor is free, everything else occupied.
inline int occupancy_of(int semantic_class) {
  if (semantic_class == semantic::kUnknown) return occupancy::kUnknown;
  return semantic_class == semantic::kFloor ? occupancy::kFree : occupancy::kOccupied;
}

}  // namespace semnav
