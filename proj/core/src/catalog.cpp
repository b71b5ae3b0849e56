#include "semnav/catalog.hpp"

#include <algorithm>

#include "semnav/error.hpp"

namespace semnav {

ClassCatalog ClassCatalog::standard() {
  return ClassCatalog{
      {"unknown", "occupied", "free"},
      {"unknown", "floor", "wall", "bed", "chair", "cushion", "sofa", "counter", "table"},
  };
}

int ClassCatalog::semantic_index(std::string_view name) const {
  auto it = std::find(semantic_classes.begin(), semantic_classes.end(), name);
  return it == semantic_classes.end() ? -1 : static_cast<int>(it - semantic_classes.begin());
}

const std::string& ClassCatalog::semantic_name(int index) const {
  if (index < 0 || index >= semantic_count())
    throw PreconditionError("semantic class index out of range: " + std::to_string(index));
  return semantic_classes[static_cast<std::size_t>(index)];
}

void ClassCatalog::validate() const {
  if (occupancy_classes != std::vector<std::string>{"unknown", "occupied", "free"})
    throw ConfigError("occupancy classes must be exactly [unknown, occupied, free]");
  if (semantic_classes.size() < 4)
    throw ConfigError("semantic classes need unknown, floor, wall and at least one object");
  if (semantic_classes[0] != "unknown" || semantic_classes[1] != "floor" ||
      semantic_classes[2] != "wall")
    throw ConfigError("semantic classes must start with [unknown, floor, wall]");
  if (semantic_classes.size() > 36)
    throw ConfigError("at most 36 semantic classes are supported");
}

}  // namespace semnav
