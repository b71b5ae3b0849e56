#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "semnav/grid.hpp"

namespace semnav {

using Rgb = std::array<std::uint8_t, 3>;

// Fixed colour per semantic class index; indices past the table wrap.
Rgb class_color(int semantic_class);

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // row-major RGB triples

  Image() = default;
  Image(int w, int h, Rgb fill = {0, 0, 0});
  void set(int x, int y, Rgb color);
  Rgb get(int x, int y) const;
};

// One `scale` x `scale` block per cell.
Image render_labels(const Grid<int>& labels, int scale = 4);

// Paints cells over an image produced at the same scale.
void paint_cells(Image& image, const std::vector<Cell>& cells, Rgb color, int scale = 4);

void save_png(const Image& image, const std::filesystem::path& path);

// Greyscale binary PGM, linearly normalised to [min, max] of the field.
void save_pgm(const Grid<double>& field, const std::filesystem::path& path, int scale = 4);

}  // namespace semnav
