#include "semnav/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>

#include "semnav/error.hpp"

namespace semnav {

namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

constexpr std::array<char, 8> kMagic{'S', 'N', 'V', 'C', 'K', 'P', 'T', '\0'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw FormatError("checkpoint truncated");
  return v;
}

void put_vector(std::ostream& os, const std::vector<double>& v) {
  put<std::uint64_t>(os, v.size());
  os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::vector<double> get_vector(std::istream& is, std::size_t expected) {
  const auto n = get<std::uint64_t>(is);
  if (n != expected) throw FormatError("checkpoint parameter count does not match its architecture");
  std::vector<double> v(n);
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!is) throw FormatError("checkpoint truncated");
  return v;
}

}  // namespace

void save_checkpoint(const Ensemble& ensemble, const std::filesystem::path& path) {
  if (ensemble.size() == 0) throw PreconditionError("cannot save an empty ensemble");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write checkpoint: " + path.string());
  const ArchConfig& a = ensemble.arch();
  os.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(os, kVersion);
  for (int v : {a.crop_size, a.semantic_classes, a.width1, a.width2, a.width3}) put<std::int32_t>(os, v);
  put<std::int32_t>(os, ensemble.size());
  for (const TwoStagePredictor& m : ensemble.members()) {
    put<std::uint64_t>(os, m.parameters().init_seed);
    put_vector(os, m.parameters().theta_o);
    put_vector(os, m.parameters().theta_s);
  }
  if (!os) throw Error("failed writing checkpoint: " + path.string());
}

Ensemble load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot read checkpoint: " + path.string());
  std::array<char, 8> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) throw FormatError("not a checkpoint file: " + path.string());
  const auto version = get<std::uint32_t>(is);
  if (version != kVersion) throw FormatError("unsupported checkpoint version " + std::to_string(version));
  ArchConfig a;
  a.crop_size = get<std::int32_t>(is);
  a.semantic_classes = get<std::int32_t>(is);
  a.width1 = get<std::int32_t>(is);
  a.width2 = get<std::int32_t>(is);
  a.width3 = get<std::int32_t>(is);
  try {
    a.validate();
  } catch (const ConfigError& e) {
    throw FormatError(std::string("checkpoint architecture invalid: ") + e.what());
  }
  const auto members = get<std::int32_t>(is);
  if (members < 1) throw FormatError("checkpoint holds no members");
  const std::size_t n_o = nn::EncoderDecoder(a.occupancy_stage()).parameter_count();
  const std::size_t n_s = nn::EncoderDecoder(a.semantic_stage()).parameter_count();
  std::vector<TwoStagePredictor> out;
  for (int i = 0; i < members; ++i) {
    PredictorParameters p;
    p.init_seed = get<std::uint64_t>(is);
    p.theta_o = get_vector(is, n_o);
    p.theta_s = get_vector(is, n_s);
    out.emplace_back(a, std::move(p));
  }
  return Ensemble(std::move(out));
}

}  // namespace semnav
