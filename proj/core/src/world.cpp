#include "semnav/world.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <random>
#include <sstream>

#include "semnav/error.hpp"

namespace semnav {

std::string_view heading_name(Heading h) {
  switch (h) {
    case Heading::north: return "N";
    case Heading::east: return "E";
    case Heading::south: return "S";
    case Heading::west: return "W";
  }
  return "?";
}

Heading parse_heading(std::string_view name) {
  if (name == "N") return Heading::north;
  if (name == "E") return Heading::east;
  if (name == "S") return Heading::south;
  if (name == "W") return Heading::west;
  throw FormatError("unknown heading: " + std::string(name));
}

GridWorld::GridWorld(std::uint64_t seed, double cell_size, ClassCatalog catalog, Grid<int> semantic)
    : seed_(seed),
      cell_size_(cell_size),
      catalog_(std::move(catalog)),
      semantic_(std::move(semantic)),
      occupancy_(semantic_.rows(), semantic_.cols()),
      free_(semantic_.rows(), semantic_.cols(), false) {
  for (std::size_t i = 0; i < semantic_.size(); ++i) {
    const Cell c = semantic_.cell_at(i);
    const int label = semantic_[c];
    if (label <= semantic::kUnknown || label >= catalog_.semantic_count())
      throw PreconditionError("world cell carries an invalid semantic label");
    occupancy_[c] = occupancy_of(label);
    free_[c] = occupancy_[c] == occupancy::kFree;
  }
}

std::vector<Cell> GridWorld::free_cells() const {
  std::vector<Cell> out;
  for (std::size_t i = 0; i < free_.size(); ++i)
    if (free_.values()[i]) out.push_back(free_.cell_at(i));
  return out;
}

std::vector<Cell> GridWorld::cells_of_class(int semantic_class) const {
  std::vector<Cell> out;
  for (std::size_t i = 0; i < semantic_.size(); ++i)
    if (semantic_.values()[i] == semantic_class) out.push_back(semantic_.cell_at(i));
  return out;
}

std::vector<int> GridWorld::present_object_classes() const {
  std::vector<bool> seen(static_cast<std::size_t>(catalog_.semantic_count()), false);
  for (int v : semantic_.values()) seen[static_cast<std::size_t>(v)] = true;
  std::vector<int> out;
  for (int k = semantic::kFirstObject; k < catalog_.semantic_count(); ++k)
    if (seen[static_cast<std::size_t>(k)]) out.push_back(k);
  return out;
}

bool free_space_connected(const Grid<bool>& free) {
  std::size_t total = 0;
  std::size_t start = free.size();
  for (std::size_t i = 0; i < free.size(); ++i)
    if (free.values()[i]) {
      ++total;
      if (start == free.size()) start = i;
    }
  if (total == 0) return true;
  Grid<bool> seen(free.rows(), free.cols(), false);
  std::deque<Cell> queue{free.cell_at(start)};
  seen[queue.front()] = true;
  std::size_t reached = 0;
  constexpr std::array<Cell, 4> kSteps{{{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    ++reached;
    for (Cell d : kSteps) {
      const Cell n{c.row + d.row, c.col + d.col};
      if (free.contains(n) && free[n] && !seen[n]) {
        seen[n] = true;
        queue.push_back(n);
      }
    }
  }
  return reached == total;
}

namespace {

constexpr int kMinWorldSide = 24;

// Wall-inclusive room bounds; the interior is [r0+1, r1-1] x [c0+1, c1-1].
struct Rect {
  int r0, c0, r1, c1;
  int interior_rows() const { return r1 - r0 - 1; }
  int interior_cols() const { return c1 - c0 - 1; }
};

struct Split {
  Rect parent;
  bool along_row;  // true: the dividing wall is row `at`
  int at;
};

enum class RoomType { bedroom, living, dining, kitchen };

class Furnisher {
 public:
  Furnisher(Grid<int>& labels, const ClassCatalog& catalog, const std::vector<PriorRule>& rules,
            std::mt19937_64& rng)
      : labels_(labels), catalog_(catalog), rules_(rules), rng_(rng) {}

  void furnish(const Rect& room, RoomType type) {
    const int bed = catalog_.semantic_index("bed");
    const int sofa = catalog_.semantic_index("sofa");
    const int table = catalog_.semantic_index("table");
    const int counter = catalog_.semantic_index("counter");
    const int chair = catalog_.semantic_index("chair");
    const int cushion = catalog_.semantic_index("cushion");
    switch (type) {
      case RoomType::bedroom:
        against_wall(room, bed, 5, 7);
        dependents(room, cushion, uniform(1, 2), 1, 2);
        break;
      case RoomType::living:
        against_wall(room, sofa, 2, uniform(5, 7));
        if (coin(0.5)) free_standing(room, table, 3, 4);
        dependents(room, cushion, uniform(1, 3), 1, 2);
        break;
      case RoomType::dining:
        free_standing(room, table, 4, uniform(5, 6));
        dependents(room, chair, uniform(2, 5), 2, 2);
        break;
      case RoomType::kitchen:
        against_wall(room, counter, 2, uniform(6, 10));
        if (coin(0.6)) {
          free_standing(room, table, 3, 4);
          dependents(room, chair, uniform(1, 3), 2, 2);
        }
        break;
    }
  }

 private:
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }

  bool interior_floor(const Rect& room, Cell c) const {
    return c.row > room.r0 && c.row < room.r1 && c.col > room.c0 && c.col < room.c1 &&
           labels_[c] == semantic::kFloor;
  }

  // Sets the cells to `cls` if all are interior floor and free space stays connected.
  bool try_place(const Rect& room, const std::vector<Cell>& cells, int cls) {
    for (Cell c : cells)
      if (!interior_floor(room, c)) return false;
    for (Cell c : cells) labels_[c] = cls;
    Grid<bool> free(labels_.rows(), labels_.cols(), false);
    for (std::size_t i = 0; i < labels_.size(); ++i)
      free.values()[i] = labels_.values()[i] == semantic::kFloor;
    if (free_space_connected(free)) return true;
    for (Cell c : cells) labels_[c] = semantic::kFloor;
    return false;
  }

  static std::vector<Cell> rect_cells(int r, int c, int rows, int cols) {
    std::vector<Cell> out;
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) out.push_back({r + i, c + j});
    return out;
  }

  // Long side parallel to a randomly chosen wall, flush against it.
  void against_wall(const Rect& room, int cls, int depth, int length) {
    if (cls < 0) return;
    for (int attempt = 0; attempt < 30; ++attempt) {
      const int side = uniform(0, 3);
      const bool horizontal = side < 2;  // north or south wall
      const int span = horizontal ? room.interior_cols() : room.interior_rows();
      const int across = horizontal ? room.interior_rows() : room.interior_cols();
      if (length > span || depth >= across) continue;
      const int offset = uniform(0, span - length);
      int r, c, rows, cols;
      if (horizontal) {
        rows = depth;
        cols = length;
        c = room.c0 + 1 + offset;
        r = side == 0 ? room.r0 + 1 : room.r1 - depth;
      } else {
        rows = length;
        cols = depth;
        r = room.r0 + 1 + offset;
        c = side == 2 ? room.c0 + 1 : room.c1 - depth;
      }
      if (try_place(room, rect_cells(r, c, rows, cols), cls)) return;
    }
  }

  // At least one cell of clearance to the walls.
  void free_standing(const Rect& room, int cls, int a, int b) {
    if (cls < 0) return;
    for (int attempt = 0; attempt < 30; ++attempt) {
      const bool flip = coin(0.5);
      const int rows = flip ? b : a;
      const int cols = flip ? a : b;
      const int r_lo = room.r0 + 2, r_hi = room.r1 - 1 - rows;
      const int c_lo = room.c0 + 2, c_hi = room.c1 - 1 - cols;
      if (r_hi < r_lo || c_hi < c_lo) continue;
      if (try_place(room, rect_cells(uniform(r_lo, r_hi), uniform(c_lo, c_hi), rows, cols), cls))
        return;
    }
  }

  void dependents(const Rect& room, int cls, int count, int a, int b) {
    if (cls < 0) return;
    for (int i = 0; i < count; ++i) {
      const bool flip = coin(0.5);
      place_dependent(room, cls, flip ? b : a, flip ? a : b);
    }
  }

  // A rows x cols block touching the anchor class with the rule's probability,
  // anywhere in the room otherwise.
  void place_dependent(const Rect& room, int cls, int rows, int cols) {
    const std::string& name = catalog_.semantic_name(cls);
    for (const PriorRule& rule : rules_) {
      if (rule.object != name) continue;
      const int anchor = catalog_.semantic_index(rule.anchor);
      std::vector<Cell> candidates;
      for (int r = room.r0 + 1; r + rows <= room.r1; ++r)
        for (int c = room.c0 + 1; c + cols <= room.c1; ++c)
          if (touches(r, c, rows, cols, anchor)) candidates.push_back({r, c});
      if (candidates.empty()) continue;
      // The first rule whose anchor is in the room decides.
      if (!coin(rule.probability)) break;
      std::shuffle(candidates.begin(), candidates.end(), rng_);
      for (std::size_t k = 0; k < candidates.size() && k < 12; ++k)
        if (try_place(room, rect_cells(candidates[k].row, candidates[k].col, rows, cols), cls)) return;
      break;
    }
    for (int attempt = 0; attempt < 20; ++attempt) {
      const Cell c{uniform(room.r0 + 1, room.r1 - rows), uniform(room.c0 + 1, room.c1 - cols)};
      if (try_place(room, rect_cells(c.row, c.col, rows, cols), cls)) return;
    }
  }

  bool touches(int r, int c, int rows, int cols, int anchor) const {
    for (int i = r - 1; i <= r + rows; ++i)
      for (int j = c - 1; j <= c + cols; ++j) {
        const bool edge_row = i == r - 1 || i == r + rows;
        const bool edge_col = j == c - 1 || j == c + cols;
        if (edge_row == edge_col) continue;  // interior or diagonal corner
        if (labels_.contains({i, j}) && labels_[Cell{i, j}] == anchor) return true;
      }
    return false;
  }

  Grid<int>& labels_;
  const ClassCatalog& catalog_;
  const std::vector<PriorRule>& rules_;
  std::mt19937_64& rng_;
};

void validate(const WorldConfig& config, const ClassCatalog& catalog) {
  catalog.validate();
  if (config.width < kMinWorldSide || config.height < kMinWorldSide) {
    std::ostringstream msg;
    msg << "rooms don't fit: " << config.width << "x" << config.height
        << " is below the minimum world size of " << kMinWorldSide << "x" << kMinWorldSide;
    throw GenerationError(msg.str());
  }
  if (config.min_rooms < 1 || config.max_rooms < config.min_rooms)
    throw ConfigError("room count range must satisfy 1 <= min_rooms <= max_rooms");
  if (config.min_room_interior < 3) throw ConfigError("min_room_interior must be at least 3");
  if (!(config.cell_size > 0.0)) throw ConfigError("cell_size must be positive");
  for (const PriorRule& rule : config.prior_rules) {
    if (catalog.semantic_index(rule.object) < semantic::kFirstObject ||
        catalog.semantic_index(rule.anchor) < semantic::kFirstObject)
      throw ConfigError("prior rule names a class that is not an object class: " + rule.object +
                        " -> " + rule.anchor);
    if (rule.probability < 0.0 || rule.probability > 1.0)
      throw ConfigError("prior rule probability must lie in [0, 1]");
  }
}

}  // namespace

GridWorld generate_world(std::uint64_t seed, const WorldConfig& config, const ClassCatalog& catalog) {
  validate(config, catalog);
  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  const int rows = config.height;
  const int cols = config.width;
  const int min_span = config.min_room_interior + 1;
  const int target_rooms = uniform(config.min_rooms, config.max_rooms);

  std::vector<Rect> leaves{{0, 0, rows - 1, cols - 1}};
  std::vector<Split> splits;
  while (static_cast<int>(leaves.size()) < target_rooms) {
    int best = -1;
    long best_area = -1;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      const Rect& r = leaves[i];
      const bool splittable = r.r1 - r.r0 >= 2 * min_span || r.c1 - r.c0 >= 2 * min_span;
      const long area = static_cast<long>(r.interior_rows()) * r.interior_cols();
      if (splittable && area > best_area) {
        best = static_cast<int>(i);
        best_area = area;
      }
    }
    if (best < 0) {
      std::ostringstream msg;
      msg << "rooms don't fit: only " << leaves.size() << " of " << target_rooms
          << " rooms with interior >= " << config.min_room_interior << " fit in " << cols << "x"
          << rows;
      throw GenerationError(msg.str());
    }
    const Rect r = leaves[static_cast<std::size_t>(best)];
    const bool can_rows = r.r1 - r.r0 >= 2 * min_span;
    const bool can_cols = r.c1 - r.c0 >= 2 * min_span;
    bool along_row;
    if (can_rows && can_cols) {
      const int h = r.r1 - r.r0, w = r.c1 - r.c0;
      along_row = h == w ? uniform(0, 1) == 0 : h > w;
    } else {
      along_row = can_rows;
    }
    Split split{r, along_row, 0};
    if (along_row) {
      split.at = uniform(r.r0 + min_span, r.r1 - min_span);
      leaves[static_cast<std::size_t>(best)] = {r.r0, r.c0, split.at, r.c1};
      leaves.push_back({split.at, r.c0, r.r1, r.c1});
    } else {
      split.at = uniform(r.c0 + min_span, r.c1 - min_span);
      leaves[static_cast<std::size_t>(best)] = {r.r0, r.c0, r.r1, split.at};
      leaves.push_back({r.r0, split.at, r.r1, r.c1});
    }
    splits.push_back(split);
  }

  Grid<int> labels(rows, cols, semantic::kWall);
  for (const Rect& room : leaves)
    for (int r = room.r0 + 1; r < room.r1; ++r)
      for (int c = room.c0 + 1; c < room.c1; ++c) labels(r, c) = semantic::kFloor;

  // One door per split joins the two subtrees, so the room graph is connected.
  for (const Split& s : splits) {
    std::vector<Cell> candidates;
    if (s.along_row) {
      for (int c = s.parent.c0 + 1; c < s.parent.c1; ++c)
        if (labels(s.at - 1, c) == semantic::kFloor && labels(s.at + 1, c) == semantic::kFloor)
          candidates.push_back({s.at, c});
    } else {
      for (int r = s.parent.r0 + 1; r < s.parent.r1; ++r)
        if (labels(r, s.at - 1) == semantic::kFloor && labels(r, s.at + 1) == semantic::kFloor)
          candidates.push_back({r, s.at});
    }
    if (candidates.empty()) throw GenerationError("rooms don't fit: no room for a door");
    const std::size_t pick = static_cast<std::size_t>(uniform(0, static_cast<int>(candidates.size()) - 1));
    labels[candidates[pick]] = semantic::kFloor;
    if (pick + 1 < candidates.size() && uniform(0, 1) == 1 &&
        manhattan(candidates[pick], candidates[pick + 1]) == 1)
      labels[candidates[pick + 1]] = semantic::kFloor;
  }

  Furnisher furnisher(labels, catalog, config.prior_rules, rng);
  constexpr std::array<RoomType, 4> kTypes{RoomType::bedroom, RoomType::living, RoomType::dining,
                                           RoomType::kitchen};
  for (const Rect& room : leaves) furnisher.furnish(room, kTypes[static_cast<std::size_t>(uniform(0, 3))]);

  GridWorld world(seed, config.cell_size, catalog, std::move(labels));
  if (!free_space_connected(world.free_mask()))
    throw GenerationError("generated free space is not connected");
  return world;
}

}  // namespace semnav
