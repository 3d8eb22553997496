#include "fracmeas/csvout.hpp"

#include <Eigen/Core>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace fracmeas {

std::string isoTimestampUtc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm parts{};
  gmtime_r(&now, &parts);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &parts);
  return buf;
}

std::string toolVersions() {
  char buf[192];
  std::snprintf(buf, sizeof buf, "fracmeas 0.1.0; eigen %d.%d.%d; %s", EIGEN_WORLD_VERSION,
                EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION,
#if defined(__VERSION__)
                "gcc-compatible " __VERSION__
#else
                "unknown compiler"
#endif
  );
  return buf;
}

std::string formatDouble(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string formatInteger(long long value) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%lld", value);
  return buf;
}

std::string formatUnsigned(std::uint64_t value) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(value));
  return buf;
}

std::string renderCsv(const RunManifest& manifest, const CsvTable& table) {
  std::string out;
  out += "# command: " + manifest.command + "\n";
  out += "# arguments: " + manifest.arguments + "\n";
  out += "# seed: " + formatUnsigned(manifest.seed) + "\n";
  out += "# versions: " + manifest.versions + "\n";
  out += "# input-hash: " + (manifest.inputHash.empty() ? std::string("-") : manifest.inputHash) +
         "\n";
  out += "# started: " + manifest.startedAt + "\n";
  out += "# finished: " + manifest.finishedAt + "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c > 0) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw std::invalid_argument("csv row width does not match the column header");
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += ',';
      out += row[c];
    }
    out += '\n';
  }
  return out;
}

void writeCsvFile(const std::string& path, const RunManifest& manifest, const CsvTable& table) {
  std::ofstream stream(path, std::ios::binary | std::ios::trunc);
  if (!stream) throw std::runtime_error("cannot open for writing: " + path);
  const std::string body = renderCsv(manifest, table);
  stream.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!stream) throw std::runtime_error("write failed: " + path);
}

}  // namespace fracmeas
