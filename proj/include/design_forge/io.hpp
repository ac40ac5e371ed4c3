#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "design_forge/kernel.hpp"
#include "design_forge/partition.hpp"
#include "design_forge/solver.hpp"
#include "design_forge/verifier.hpp"

namespace design_forge {

inline constexpr const char* kToolVersion = "0.1.0";

/// Malformed or invalid input data (CLI exit 65).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File system failure (CLI exit 74).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PointSetFile {
  std::size_t d = 0;
  std::optional<int> n;
  Configuration points;
  nlohmann::json metadata = nlohmann::json::object();
};

/// Rows must be unit within 1e-9.
PointSetFile point_set_from_json(const std::string& text);
nlohmann::json point_set_to_json(const PointSetFile& ps);

/// One point per line, comma separated; blank lines and lines starting with
/// '#' are skipped.
PointSetFile point_set_from_csv(const std::string& text);
std::string point_set_to_csv(const Configuration& points);

/// Dispatches on extension (.csv, otherwise JSON).
PointSetFile read_point_set(const std::filesystem::path& path);
void write_point_set(const std::filesystem::path& path, const PointSetFile& ps);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

nlohmann::json partition_to_json(const Partition& p);
/// Rebuilds eq_partition(d, N) from an exported partition and checks the centers match.
Partition partition_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SolveReport& r);
nlohmann::json to_json(const MzReport& r);
nlohmann::json to_json(const DesignCheck& c);

}  // namespace design_forge
