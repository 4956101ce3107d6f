#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace noma::cli {

enum class Format { csv, json };

/// One cell: number, integer, text or missing.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Parameters needed to reproduce a run.
struct RunManifest {
  std::string command;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::uint64_t seed = 0;
  std::string rng = "philox4x64-10";
};

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

void write_csv(const Table& table, std::ostream& os);
void write_json(const Table& table, const RunManifest& manifest, std::ostream& os);

/// Writes the table to `path` (or `stdout_stream` when path is empty or "-").
/// File outputs get a `<path>.manifest.json` sidecar with timestamp and SHA-256.
void emit(const Table& table, const RunManifest& manifest, Format format,
          const std::string& path, std::ostream& stdout_stream);

std::string sha256_hex(const std::string& data);

}  // namespace noma::cli
