#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semnav/catalog.hpp"
#include "semnav/grid.hpp"
#include "semnav/pose.hpp"

namespace semnav {

// Place `object` next to an instance of `anchor` with the given probability;
// otherwise the object lands on a random floor cell of its room.
struct PriorRule {
  std::string object;
  std::string anchor;
  double probability = 0.0;

  friend bool operator==(const PriorRule&, const PriorRule&) = default;
};

struct WorldConfig {
  int width = 48;
  int height = 48;
  int min_rooms = 3;
  int max_rooms = 6;
  // Smallest room interior along either axis.
  int min_room_interior = 5;
  double cell_size = 0.1;
  std::vector<PriorRule> prior_rules = default_prior_rules();

  static std::vector<PriorRule> default_prior_rules() {
    return {{"chair", "table", 0.9}, {"cushion", "sofa", 0.8}, {"cushion", "bed", 0.8}};
  }

  friend bool operator==(const WorldConfig&, const WorldConfig&) = default;
};

// Fully labelled ground truth. Immutable after generation.
class GridWorld {
 public:
  GridWorld() = default;
  GridWorld(std::uint64_t seed, double cell_size, ClassCatalog catalog, Grid<int> semantic);

  int width() const { return semantic_.cols(); }
  int height() const { return semantic_.rows(); }
  std::uint64_t seed() const { return seed_; }
  double cell_size() const { return cell_size_; }
  const ClassCatalog& catalog() const { return catalog_; }

  const Grid<int>& semantic() const { return semantic_; }
  const Grid<int>& occupancy() const { return occupancy_; }
  const Grid<bool>& free_mask() const { return free_; }

  bool contains(Cell c) const { return semantic_.contains(c); }
  bool is_free(Cell c) const { return semantic_.contains(c) && free_[c]; }
  int label(Cell c) const { return semantic_[c]; }

  std::vector<Cell> free_cells() const;
  std::vector<Cell> cells_of_class(int semantic_class) const;
  // Object classes with at least one instance, ascending.
  std::vector<int> present_object_classes() const;

  friend bool operator==(const GridWorld&, const GridWorld&) = default;

 private:
  std::uint64_t seed_ = 0;
  double cell_size_ = 0.1;
  ClassCatalog catalog_;
  Grid<int> semantic_;
  Grid<int> occupancy_;
  Grid<bool> free_;
};

// Binary space partition into rooms, door carving, then room furnishing under
// the configured co-occurrence rules. Throws GenerationError when the layout
// does not fit. Deterministic in (seed, config).
GridWorld generate_world(std::uint64_t seed, const WorldConfig& config,
                         const ClassCatalog& catalog = ClassCatalog::standard());

// True when the free cells form one 4-connected component.
bool free_space_connected(const Grid<bool>& free);

}  // namespace semnav
