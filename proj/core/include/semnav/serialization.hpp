#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "semnav/episodes.hpp"
#include "semnav/world.hpp"

namespace semnav {

// Text format: a one-line JSON header, then one row of base-36 class digits
// per grid row.
void save_world(const GridWorld& world, const std::filesystem::path& path);
GridWorld load_world(const std::filesystem::path& path);
std::string world_to_string(const GridWorld& world);
GridWorld world_from_string(const std::string& text);

nlohmann::ordered_json episode_to_json(const Episode& e);
Episode episode_from_json(const nlohmann::json& j);
void save_episodes(const std::vector<Episode>& episodes, const std::filesystem::path& path);
std::vector<Episode> load_episodes(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

// Fixed-precision number formatting so CSV output is reproducible.
std::string fmt(double value, int precision = 6);

// Rows of cells; quotes fields containing commas or quotes.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row);
  std::string str() const;
  void save(const std::filesystem::path& path) const;
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Parses a CSV written by CsvTable (header row included).
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

}  // namespace semnav
