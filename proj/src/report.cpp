#include "minicubes/report.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <iomanip>
#include <sstream>

namespace minicubes {

std::string format_real(double v, int significant_digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant_digits, v);
  return buf;
}

std::string format_cell(const Cell& c, int significant_digits) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_real(v, significant_digits);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "1" : "0";
        } else {
          return std::to_string(v);
        }
      },
      c);
}

void write_csv(std::ostream& os, const Table& t, const std::string& manifest_ref) {
  if (!manifest_ref.empty()) os << "# manifest=" << manifest_ref << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
    os << '\n';
  }
}

void write_human(std::ostream& os, const Table& t) {
  std::vector<std::size_t> width(t.columns.size());
  std::vector<std::vector<std::string>> cells;
  for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = t.columns[i].size();
  for (const auto& row : t.rows) {
    auto& out = cells.emplace_back();
    for (std::size_t i = 0; i < row.size(); ++i) {
      out.push_back(format_cell(row[i], kHumanDigits));
      width[i] = std::max(width[i], out.back().size());
    }
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    os << (i ? "  " : "") << std::setw(static_cast<int>(width[i])) << t.columns[i];
  os << '\n';
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "  " : "") << std::setw(static_cast<int>(width[i])) << row[i];
    os << '\n';
  }
}

nlohmann::json table_rows_json(const Table& t) {
  auto rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json rec = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
              rec[t.columns[i]] = nullptr;
            } else if constexpr (std::is_same_v<T, double>) {
              if (std::isfinite(v))
                rec[t.columns[i]] = v;
              else
                rec[t.columns[i]] = format_real(v, kMachineDigits);
            } else {
              rec[t.columns[i]] = v;
            }
          },
          row[i]);
    }
    rows.push_back(std::move(rec));
  }
  return rows;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["config"] = config;
  j["version"] = version;
  j["timestamp"] = timestamp;
  j["input_hashes"] = input_hashes;
  auto timing = nlohmann::json::object();
  for (const auto& [name, ms] : timings_ms) timing[name] = ms;
  j["timings_ms"] = timing;
  j["summary"] = summary;
  return j;
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string artifact_version() { return MINICUBES_VERSION; }

}  // namespace minicubes
