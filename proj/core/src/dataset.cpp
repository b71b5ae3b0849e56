#include "semnav/dataset.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include "semnav/error.hpp"

namespace semnav {

namespace {

constexpr std::array<char, 8> kMagic{'S', 'N', 'V', 'D', 'A', 'T', 'A', '1'};

Grid<std::uint8_t> narrow(const Grid<int>& g) {
  Grid<std::uint8_t> out(g.rows(), g.cols());
  for (std::size_t i = 0; i < g.size(); ++i) out.values()[i] = static_cast<std::uint8_t>(g.values()[i]);
  return out;
}

Grid<int> widen(const Grid<std::uint8_t>& g) {
  Grid<int> out(g.rows(), g.cols());
  for (std::size_t i = 0; i < g.size(); ++i) out.values()[i] = g.values()[i];
  return out;
}

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw FormatError("dataset file truncated");
  return v;
}

}  // namespace

void Dataset::append(const Dataset& other) {
  if (samples.empty()) {
    if (other.empty()) return;
    crop_size = other.crop_size;
    semantic_classes = other.semantic_classes;
  } else if (crop_size != other.crop_size || semantic_classes != other.semantic_classes) {
    throw PreconditionError("cannot merge datasets with different crop size or class count");
  }
  samples.insert(samples.end(), other.samples.begin(), other.samples.end());
}

TrainingSample make_sample(const LocalObservation& input, const GridWorld& world) {
  const int size = input.occupancy.rows();
  return TrainingSample{narrow(input.occupancy), narrow(input.semantics),
                        narrow(ground_truth_occupancy_crop(world, input.pose_at_capture, size)),
                        narrow(ground_truth_semantic_crop(world, input.pose_at_capture, size))};
}

Example to_example(const TrainingSample& s, int semantic_classes) {
  return Example{one_hot(s.input_occupancy, occupancy::kCount), one_hot(s.input_semantics, semantic_classes),
                 widen(s.target_occupancy), widen(s.target_semantics)};
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write dataset: " + path.string());
  os.write(kMagic.data(), kMagic.size());
  put<std::int32_t>(os, dataset.crop_size);
  put<std::int32_t>(os, dataset.semantic_classes);
  put<std::uint64_t>(os, dataset.samples.size());
  const std::size_t cells = static_cast<std::size_t>(dataset.crop_size) * dataset.crop_size;
  for (const TrainingSample& s : dataset.samples)
    for (const auto* g : {&s.input_occupancy, &s.input_semantics, &s.target_occupancy, &s.target_semantics}) {
      if (g->size() != cells) throw PreconditionError("sample crop size differs from dataset crop size");
      os.write(reinterpret_cast<const char*>(g->values().data()), static_cast<std::streamsize>(cells));
    }
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot read dataset: " + path.string());
  std::array<char, 8> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) throw FormatError("not a dataset file: " + path.string());
  Dataset d;
  d.crop_size = get<std::int32_t>(is);
  d.semantic_classes = get<std::int32_t>(is);
  const auto count = get<std::uint64_t>(is);
  if (d.crop_size <= 0 || d.crop_size > 1024) throw FormatError("implausible dataset crop size");
  d.samples.resize(count);
  const std::size_t cells = static_cast<std::size_t>(d.crop_size) * d.crop_size;
  for (TrainingSample& s : d.samples)
    for (auto* g : {&s.input_occupancy, &s.input_semantics, &s.target_occupancy, &s.target_semantics}) {
      *g = Grid<std::uint8_t>(d.crop_size, d.crop_size);
      is.read(reinterpret_cast<char*>(g->values().data()), static_cast<std::streamsize>(cells));
      if (!is) throw FormatError("dataset file truncated");
    }
  return d;
}

}  // namespace semnav
