#include "coopra/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "coopra/rng.hpp"
#include "coopra/version.hpp"

namespace coopra::io {

std::string fmt9(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

double round9(double v) {
  if (!std::isfinite(v)) return v;
  const std::string s = fmt9(v);
  double out = v;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf, 16);
}

Cell::Cell(double v)
    : text(fmt9(v)),
      json(std::isfinite(v) ? nlohmann::json(round9(v)) : nlohmann::json()) {}
Cell::Cell(std::uint64_t v) : text(std::to_string(v)), json(v) {}
Cell::Cell(int v) : text(std::to_string(v)), json(v) {}
Cell::Cell(std::size_t v) : text(std::to_string(v)), json(v) {}
Cell::Cell(bool v) : text(v ? "true" : "false"), json(v) {}
Cell::Cell(const char* v) : text(v), json(text) {}
Cell::Cell(const std::string& v) : text(v), json(v) {}

void Table::add_row(std::vector<Cell> cells) { rows.push_back(std::move(cells)); }

namespace {

std::string csv_payload(const Document& doc) {
  std::ostringstream os;
  for (std::size_t i = 0; i < doc.table.columns.size(); ++i) {
    if (i) os << ',';
    os << doc.table.columns[i];
  }
  os << '\n';
  for (const auto& row : doc.table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << row[i].text;
    }
    os << '\n';
  }
  return os.str();
}

nlohmann::json rows_json(const Document& doc) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : doc.table.rows) {
    nlohmann::json obj;
    for (std::size_t i = 0; i < row.size(); ++i) {
      obj[doc.table.columns[i]] = row[i].json;
    }
    rows.push_back(std::move(obj));
  }
  return rows;
}

}  // namespace

std::uint64_t csv_payload_digest(const Document& doc) {
  return rng::fnv1a64(csv_payload(doc));
}

std::string render_csv(const Document& doc) {
  const std::string payload = csv_payload(doc);
  std::ostringstream os;
  os << "# tool: " << kToolName << ' ' << kToolVersion << '\n';
  os << "# command: " << doc.command << '\n';
  os << "# schema: " << doc.schema << '\n';
  os << "# seed: " << doc.seed << '\n';
  os << "# config: " << doc.config.dump() << '\n';
  os << "# digest: fnv1a64:" << hex64(rng::fnv1a64(payload)) << '\n';
  os << payload;
  return os.str();
}

std::string render_json(const Document& doc) {
  nlohmann::json rows = rows_json(doc);
  const std::string digest =
      "fnv1a64:" + hex64(rng::fnv1a64(rows.dump()));
  nlohmann::json out;
  out["manifest"] = {{"tool", kToolName},
                     {"version", kToolVersion},
                     {"command", doc.command},
                     {"schema", doc.schema},
                     {"seed", doc.seed},
                     {"config", doc.config},
                     {"digest", digest}};
  out["rows"] = std::move(rows);
  return out.dump(2) + "\n";
}

std::optional<std::string> extract_digest(const std::string& file_contents) {
  static constexpr const char* kCsvKey = "# digest: ";
  std::istringstream is(file_contents);
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind(kCsvKey, 0) == 0) return line.substr(std::string(kCsvKey).size());
    if (!line.empty() && line[0] == '{') {
      const auto j = nlohmann::json::parse(file_contents, nullptr, false);
      if (!j.is_discarded() && j.contains("manifest") &&
          j["manifest"].contains("digest")) {
        return j["manifest"]["digest"].get<std::string>();
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

nlohmann::json run_manifest(const Document& doc, const std::string& digest,
                            const std::string& timestamp_utc) {
  return {{"tool", kToolName},     {"version", kToolVersion},
          {"command", doc.command}, {"schema", doc.schema},
          {"seed", doc.seed},       {"config", doc.config},
          {"digest", digest},       {"timestamp", timestamp_utc}};
}

std::string timestamp_utc_now() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace coopra::io
