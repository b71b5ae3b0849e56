#include "semnav/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "semnav/error.hpp"

namespace semnav {

namespace {

constexpr const char* kDigits = "0123456789abcdefghijklmnopqrstuvwxyz";

int digit_value(char ch) {
  if (ch >= '0' && ch <= '9') return ch - '0';
  if (ch >= 'a' && ch <= 'z') return ch - 'a' + 10;
  return -1;
}

}  // namespace

std::string world_to_string(const GridWorld& world) {
  nlohmann::ordered_json header;
  header["format"] = "semnav-world";
  header["version"] = 1;
  header["seed"] = world.seed();
  header["width"] = world.width();
  header["height"] = world.height();
  header["cell_size"] = world.cell_size();
  header["occupancy_classes"] = world.catalog().occupancy_classes;
  header["semantic_classes"] = world.catalog().semantic_classes;
  std::string out = header.dump() + "\n";
  for (int r = 0; r < world.height(); ++r) {
    for (int c = 0; c < world.width(); ++c) out += kDigits[world.semantic()(r, c)];
    out += '\n';
  }
  return out;
}

GridWorld world_from_string(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw FormatError("world file is empty");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("world header is not JSON: ") + e.what());
  }
  if (header.value("format", "") != "semnav-world") throw FormatError("not a world file");
  if (header.value("version", 0) != 1) throw FormatError("unsupported world file version");
  ClassCatalog catalog;
  int width = 0, height = 0;
  std::uint64_t seed = 0;
  double cell_size = 0.0;
  try {
    width = header.at("width").get<int>();
    height = header.at("height").get<int>();
    seed = header.at("seed").get<std::uint64_t>();
    cell_size = header.at("cell_size").get<double>();
    catalog.occupancy_classes = header.at("occupancy_classes").get<std::vector<std::string>>();
    catalog.semantic_classes = header.at("semantic_classes").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("world header incomplete: ") + e.what());
  }
  try {
    catalog.validate();
  } catch (const ConfigError& e) {
    throw FormatError(std::string("world catalog invalid: ") + e.what());
  }
  if (width < 1 || height < 1) throw FormatError("world dimensions must be positive");
  Grid<int> semantic(height, width);
  for (int r = 0; r < height; ++r) {
    if (!std::getline(is, line)) throw FormatError("world file has fewer rows than its header says");
    if (static_cast<int>(line.size()) != width)
      throw FormatError("world row " + std::to_string(r) + " has " + std::to_string(line.size()) + " cells, expected " +
                        std::to_string(width));
    for (int c = 0; c < width; ++c) {
      const int v = digit_value(line[static_cast<std::size_t>(c)]);
      if (v < 0 || v >= catalog.semantic_count())
        throw FormatError("bad class digit at row " + std::to_string(r) + ", col " + std::to_string(c));
      semantic(r, c) = v;
    }
  }
  return GridWorld(seed, cell_size, std::move(catalog), std::move(semantic));
}

void save_world(const GridWorld& world, const std::filesystem::path& path) { write_text(path, world_to_string(world)); }

GridWorld load_world(const std::filesystem::path& path) { return world_from_string(read_text(path)); }

nlohmann::ordered_json episode_to_json(const Episode& e) {
  nlohmann::ordered_json j;
  j["world_seed"] = e.world_seed;
  j["start"] = {{"row", e.start.cell.row}, {"col", e.start.cell.col}, {"heading", heading_name(e.start.heading)}};
  j["target_class"] = e.target_class;
  j["geodesic"] = e.geodesic_start_to_target;
  j["euclidean"] = e.euclidean_start_to_target;
  j["path_ratio"] = e.path_ratio;
  j["difficulty"] = difficulty_name(e.difficulty);
  return j;
}

Episode episode_from_json(const nlohmann::json& j) {
  try {
    Episode e;
    e.world_seed = j.at("world_seed").get<std::uint64_t>();
    e.start.cell = {j.at("start").at("row").get<int>(), j.at("start").at("col").get<int>()};
    e.start.heading = parse_heading(j.at("start").at("heading").get<std::string>());
    e.target_class = j.at("target_class").get<int>();
    e.geodesic_start_to_target = j.at("geodesic").get<int>();
    e.euclidean_start_to_target = j.at("euclidean").get<double>();
    e.path_ratio = j.at("path_ratio").get<double>();
    e.difficulty = parse_difficulty(j.at("difficulty").get<std::string>());
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError(std::string("malformed episode: ") + ex.what());
  }
}

void save_episodes(const std::vector<Episode>& episodes, const std::filesystem::path& path) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const Episode& e : episodes) arr.push_back(episode_to_json(e));
  write_text(path, arr.dump(1) + "\n");
}

std::vector<Episode> load_episodes(const std::filesystem::path& path) {
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("episodes file is not JSON: " + std::string(e.what()));
  }
  if (!arr.is_array()) throw FormatError("episodes file must hold a JSON array");
  std::vector<Episode> out;
  for (const auto& j : arr) out.push_back(episode_from_json(j));
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path.string());
  os << text;
  if (!os) throw Error("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string fmt(double value, int precision) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, value);
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos) return std::string("0.") + std::string(static_cast<std::size_t>(precision), '0');
  return s;
}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw PreconditionError("CSV row width does not match the header");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  auto cell = [](const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string q = "\"";
    for (char ch : v) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  };
  std::string out;
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + cell(r[i]);
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

void CsvTable::save(const std::filesystem::path& path) const { write_text(path, str()); }

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
    } else if (ch != '\r') {
      field += ch;
    }
  }
  if (!field.empty() || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace semnav
