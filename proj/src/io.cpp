#include "design_forge/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace design_forge {

namespace {

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

void check_unit_row(std::span<const double> row, std::size_t index, const std::string& where) {
  double len2 = 0.0;
  for (double c : row) {
    if (!std::isfinite(c)) throw DataError(where + ": point " + std::to_string(index) + " has a non-finite coordinate");
    len2 += c * c;
  }
  const double len = std::sqrt(len2);
  if (!(std::abs(len - 1.0) <= 1e-9)) {
    std::ostringstream os;
    os << where << ": point " << index << " is not unit (norm " << std::setprecision(17) << len << ")";
    throw DataError(os.str());
  }
}

}  // namespace

PointSetFile point_set_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("line " + std::to_string(line_of_offset(text, e.byte)) + ": " + e.what());
  }
  try {
    PointSetFile ps;
    if (!j.is_object()) throw DataError("point set must be a JSON object");
    if (!j.contains("points") || !j["points"].is_array()) throw DataError("missing 'points' array");
    const auto& rows = j["points"];
    if (rows.empty()) throw DataError("'points' is empty");
    const std::size_t len = rows.front().size();
    if (len < 2) throw DataError("points need at least 2 coordinates");
    ps.d = j.contains("d") ? j["d"].get<std::size_t>() : len - 1;
    if (ps.d + 1 != len) throw DataError("'d' does not match the point length");
    if (j.contains("n") && !j["n"].is_null()) ps.n = j["n"].get<int>();
    if (j.contains("N") && j["N"].get<std::size_t>() != rows.size())
      throw DataError("'N' = " + std::to_string(j["N"].get<std::size_t>()) + " but " + std::to_string(rows.size()) +
                      " rows present");
    std::vector<double> coords;
    coords.reserve(rows.size() * len);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i].is_array() || rows[i].size() != len)
        throw DataError("point " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                        " coordinates, expected " + std::to_string(len));
      const std::size_t start = coords.size();
      for (const auto& v : rows[i]) coords.push_back(v.get<double>());
      check_unit_row(std::span<const double>(coords).subspan(start, len), i, "points");
    }
    ps.points = Configuration(ps.d, std::move(coords));
    if (j.contains("metadata")) ps.metadata = j["metadata"];
    return ps;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("invalid point set: ") + e.what());
  }
}

nlohmann::json point_set_to_json(const PointSetFile& ps) {
  nlohmann::json j;
  j["d"] = ps.d;
  if (ps.n)
    j["n"] = *ps.n;
  else
    j["n"] = nullptr;
  j["N"] = ps.points.size();
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < ps.points.size(); ++i) {
    const auto p = ps.points.point(i);
    rows.push_back(std::vector<double>(p.begin(), p.end()));
  }
  j["points"] = std::move(rows);
  j["metadata"] = ps.metadata;
  return j;
}

PointSetFile point_set_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::size_t len = 0;
  std::vector<double> coords;
  std::size_t index = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<double> row;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(field, &used));
        if (field.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw DataError("line " + std::to_string(line_no) + ": cannot parse '" + field + "' as a number");
      }
    }
    if (len == 0) len = row.size();
    if (row.size() < 2 || row.size() != len)
      throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(len) + " columns, got " +
                      std::to_string(row.size()));
    check_unit_row(row, index, "line " + std::to_string(line_no));
    coords.insert(coords.end(), row.begin(), row.end());
    ++index;
  }
  if (coords.empty()) throw DataError("no points in CSV input");
  PointSetFile ps;
  ps.d = len - 1;
  ps.points = Configuration(ps.d, std::move(coords));
  return ps;
}

std::string point_set_to_csv(const Configuration& points) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto p = points.point(i);
    for (std::size_t c = 0; c < p.size(); ++c) os << (c ? "," : "") << p[c];
    os << '\n';
  }
  return os.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw IoError("read failure on '" + path.string() + "'");
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

PointSetFile read_point_set(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  if (path.extension() == ".csv") return point_set_from_csv(text);
  return point_set_from_json(text);
}

void write_point_set(const std::filesystem::path& path, const PointSetFile& ps) {
  if (path.extension() == ".csv")
    write_text_file(path, point_set_to_csv(ps.points));
  else
    write_text_file(path, point_set_to_json(ps).dump(2) + "\n");
}

nlohmann::json partition_to_json(const Partition& p) {
  nlohmann::json j;
  j["d"] = p.dim();
  j["N"] = p.size();
  j["partition_norm"] = p.norm();
  nlohmann::json centers = nlohmann::json::array();
  nlohmann::json bounds = nlohmann::json::array();
  nlohmann::json areas = nlohmann::json::array();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto c = p.region_center(i).coords();
    centers.push_back(std::vector<double>(c.begin(), c.end()));
    nlohmann::json b = nlohmann::json::array();
    for (const AngleInterval& iv : p.regions()[i].bounds) b.push_back({iv.lo, iv.hi});
    bounds.push_back(std::move(b));
    areas.push_back(p.region_area(i));
  }
  j["centers"] = std::move(centers);
  j["norms"] = p.region_diameters();
  j["bounds"] = std::move(bounds);
  j["areas"] = std::move(areas);
  return j;
}

Partition partition_from_json(const nlohmann::json& j) {
  try {
    const auto d = j.at("d").get<std::size_t>();
    const auto n = j.at("N").get<std::size_t>();
    if (d < 1 || n < 1) throw DataError("partition needs d >= 1 and N >= 1");
    Partition p = eq_partition(d, n);
    if (j.contains("centers")) {
      const auto& centers = j["centers"];
      if (centers.size() != n) throw DataError("partition 'centers' length does not match N");
      for (std::size_t i = 0; i < n; ++i) {
        const auto c = p.region_center(i).coords();
        const auto row = centers[i].get<std::vector<double>>();
        if (row.size() != c.size()) throw DataError("partition center " + std::to_string(i) + " has wrong length");
        for (std::size_t k = 0; k < c.size(); ++k)
          if (std::abs(row[k] - c[k]) > 1e-12)
            throw DataError("partition center " + std::to_string(i) + " does not match eq_partition(d, N)");
      }
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("invalid partition file: ") + e.what());
  }
}

nlohmann::json to_json(const SolveReport& r) {
  nlohmann::json j;
  j["iterations"] = r.iterations;
  j["energy_trace"] = r.energy_trace;
  j["step_trace"] = r.step_trace;
  j["final_residual"] = r.final_residual;
  j["terminated"] = to_string(r.terminated);
  j["initial_bound"] = r.initial_bound;
  j["mz_checked"] = r.mz_checked;
  return j;
}

nlohmann::json to_json(const MzReport& r) {
  nlohmann::json j;
  j["degree"] = r.degree;
  j["trials"] = r.trials;
  j["min_ratio"] = r.min_ratio;
  j["max_ratio"] = r.max_ratio;
  j["pass"] = r.pass;
  j["partition_norm"] = r.partition_norm;
  j["norm_times_degree"] = r.partition_norm * r.degree;
  j["in_region_fraction"] = r.in_region_fraction;
  j["reference_discrepancy"] = r.reference_discrepancy;
  return j;
}

nlohmann::json to_json(const DesignCheck& c) {
  nlohmann::json j;
  j["pass"] = c.pass;
  j["worst_error"] = c.worst_error;
  j["witness"] = c.witness;
  return j;
}

}  // namespace design_forge
