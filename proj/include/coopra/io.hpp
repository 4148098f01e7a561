#pragma once

// Machine-readable output for the CLI: CSV and JSON documents with a header
// that embeds the tool version, the resolved config, the master seed and a
// digest of the payload. Identical config + seed yields byte-identical files;
// the wall-clock timestamp therefore lives only in the run manifest printed
// to stderr, never inside the digested file.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace coopra::io {

// 9 significant digits, locale-independent; "inf"/"nan" for non-finite.
std::string fmt9(double v);

// The value after a fmt9 round-trip (what JSON rows carry).
double round9(double v);

std::string hex64(std::uint64_t v);

// One CSV cell. Doubles go through fmt9.
struct Cell {
  std::string text;
  nlohmann::json json;

  Cell(double v);
  Cell(std::uint64_t v);
  Cell(int v);
  Cell(std::size_t v);
  Cell(bool v);
  Cell(const char* v);
  Cell(const std::string& v);
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> cells);
};

struct Document {
  std::string command;     // subcommand that produced it
  std::string schema;      // versioned, e.g. "region/1"
  std::uint64_t seed = 0;  // resolved master seed
  nlohmann::json config;   // resolved config the run used
  Table table;
};

// Full file contents, digest embedded in the header.
std::string render_csv(const Document& doc);
std::string render_json(const Document& doc);

// Digest of what render_* embeds, for external verification.
std::uint64_t csv_payload_digest(const Document& doc);

// The "# digest: ..." value of a rendered CSV, or the manifest digest of a
// rendered JSON document; empty when absent.
std::optional<std::string> extract_digest(const std::string& file_contents);

// Manifest printed to stderr after each command; carries the timestamp.
nlohmann::json run_manifest(const Document& doc, const std::string& digest,
                            const std::string& timestamp_utc);

std::string timestamp_utc_now();

}  // namespace coopra::io
