#pragma once

#include <chrono>
#include <cstdint>
#include <json.hpp>
#include <map>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace minicubes {

using Cell = std::variant<std::monostate, std::int64_t, std::uint64_t, double, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

inline constexpr int kMachineDigits = 17;
inline constexpr int kHumanDigits = 6;

std::string format_real(double v, int significant_digits);
std::string format_cell(const Cell& c, int significant_digits = kMachineDigits);

// Header line then one line per row. A nonempty manifest reference is
// written first as a '#' comment line.
void write_csv(std::ostream& os, const Table& t, const std::string& manifest_ref = "");
// Space-aligned table with 6 significant digits for people.
void write_human(std::ostream& os, const Table& t);

nlohmann::json table_rows_json(const Table& t);

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::string version;
  std::string timestamp;
  std::map<std::string, std::string> input_hashes;
  std::vector<std::pair<std::string, double>> timings_ms;
  nlohmann::json summary = nlohmann::json::object();

  nlohmann::json to_json() const;
};

std::string fnv1a_hex(const std::string& data);
std::string utc_timestamp();
std::string artifact_version();

// Wall-clock timer for per-operation manifest entries.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace minicubes
