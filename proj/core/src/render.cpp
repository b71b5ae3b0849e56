#include "semnav/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

#include <png.h>

#include "semnav/error.hpp"

namespace semnav {

Rgb class_color(int semantic_class) {
  static constexpr std::array<Rgb, 12> kPalette{{
      {40, 40, 40},     // unknown
      {230, 230, 220},  // floor
      {90, 90, 110},    // wall
      {214, 39, 40},    // bed
      {255, 127, 14},   // chair
      {227, 119, 194},  // cushion
      {31, 119, 180},   // sofa
      {44, 160, 44},    // counter
      {140, 86, 75},    // table
      {188, 189, 34},
      {23, 190, 207},
      {148, 103, 189},
  }};
  if (semantic_class < 0) return {0, 0, 0};
  return kPalette[static_cast<std::size_t>(semantic_class) % kPalette.size()];
}

Image::Image(int w, int h, Rgb fill) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3) {
  for (std::size_t i = 0; i < rgb.size(); i += 3) std::copy(fill.begin(), fill.end(), rgb.begin() + static_cast<long>(i));
}

void Image::set(int x, int y, Rgb color) {
  if (x < 0 || y < 0 || x >= width || y >= height) return;
  std::copy(color.begin(), color.end(), rgb.begin() + (static_cast<long>(y) * width + x) * 3);
}

Rgb Image::get(int x, int y) const {
  const auto at = (static_cast<std::size_t>(y) * width + x) * 3;
  return {rgb[at], rgb[at + 1], rgb[at + 2]};
}

Image render_labels(const Grid<int>& labels, int scale) {
  Image img(labels.cols() * scale, labels.rows() * scale);
  for (int r = 0; r < labels.rows(); ++r)
    for (int c = 0; c < labels.cols(); ++c)
      for (int dy = 0; dy < scale; ++dy)
        for (int dx = 0; dx < scale; ++dx) img.set(c * scale + dx, r * scale + dy, class_color(labels(r, c)));
  return img;
}

void paint_cells(Image& image, const std::vector<Cell>& cells, Rgb color, int scale) {
  for (const Cell& cell : cells)
    for (int dy = 0; dy < scale; ++dy)
      for (int dx = 0; dx < scale; ++dx) image.set(cell.col * scale + dx, cell.row * scale + dy, color);
}

void save_png(const Image& image, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!fp) throw Error("cannot write " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw Error("libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("libpng failed writing " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < image.height; ++y)
    png_write_row(png, const_cast<png_bytep>(image.rgb.data() + static_cast<std::size_t>(y) * image.width * 3));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void save_pgm(const Grid<double>& field, const std::filesystem::path& path, int scale) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path.string());
  double lo = 0.0, hi = 0.0;
  if (field.size() > 0) {
    const auto [mn, mx] = std::minmax_element(field.values().begin(), field.values().end());
    lo = *mn;
    hi = *mx;
  }
  const int w = field.cols() * scale, h = field.rows() * scale;
  os << "P5\n" << w << ' ' << h << "\n255\n";
  std::vector<std::uint8_t> row(static_cast<std::size_t>(w));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double v = field(y / scale, x / scale);
      const double t = hi > lo ? (v - lo) / (hi - lo) : 0.0;
      row[static_cast<std::size_t>(x)] = static_cast<std::uint8_t>(std::lround(t * 255.0));
    }
    os.write(reinterpret_cast<const char*>(row.data()), w);
  }
}

}  // namespace semnav
