#pragma once

#include <filesystem>

#include "semnav/predictor.hpp"

namespace semnav {

// Little-endian binary: magic, format version, architecture, then for each
// member its init seed, parameter counts and raw doubles.
void save_checkpoint(const Ensemble& ensemble, const std::filesystem::path& path);

// Throws FormatError on a bad magic, version, truncation, or parameter counts
// that disagree with the stored architecture.
Ensemble load_checkpoint(const std::filesystem::path& path);

}  // namespace semnav
