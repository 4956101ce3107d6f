#include "output.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "cli.hpp"

namespace noma::cli {
namespace {

nlohmann::ordered_json manifest_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["parameters"] = m.parameters;
  j["seed"] = m.seed;
  j["rng"] = m.rng;
  j["tool_version"] = kToolVersion;
  return j;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(const Table& table, std::ostream& os) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    os << (c ? "," : "") << table.columns[c];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      std::visit(
          [&os](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              os << format_double(v);
            } else if constexpr (std::is_same_v<T, std::int64_t> || std::is_same_v<T, std::string>) {
              os << v;
            }
          },
          row[c]);
    }
    os << '\n';
  }
}

void write_json(const Table& table, const RunManifest& manifest, std::ostream& os) {
  nlohmann::ordered_json doc;
  doc["manifest"] = manifest_json(manifest);
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json rec;
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
              rec[table.columns[c]] = nullptr;
            } else {
              rec[table.columns[c]] = v;
            }
          },
          row[c]);
    }
    records.push_back(std::move(rec));
  }
  doc["records"] = std::move(records);
  os << doc.dump(2) << '\n';
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256: digest failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  }
  return os.str();
}

void emit(const Table& table, const RunManifest& manifest, Format format,
          const std::string& path, std::ostream& stdout_stream) {
  std::ostringstream body;
  if (format == Format::csv) {
    write_csv(table, body);
  } else {
    write_json(table, manifest, body);
  }
  const std::string data = body.str();
  if (path.empty() || path == "-") {
    stdout_stream << data;
    return;
  }
  {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot open " + path + " for writing");
    f << data;
    if (!f) throw std::ios_base::failure("write to " + path + " failed");
  }
  nlohmann::ordered_json side = manifest_json(manifest);
  side["format"] = format == Format::csv ? "csv" : "json";
  side["timestamp"] = utc_timestamp();
  side["outputs"] = nlohmann::ordered_json::array(
      {nlohmann::ordered_json{{"path", path}, {"sha256", sha256_hex(data)}}});
  const std::string side_path = path + ".manifest.json";
  std::ofstream m(side_path, std::ios::binary);
  if (!m) throw std::ios_base::failure("cannot open " + side_path + " for writing");
  m << side.dump(2) << '\n';
}

}  // namespace noma::cli
