#pragma once

// CSV emission with an embedded provenance header. Every output file starts
// with '#'-prefixed manifest lines followed by a column header and data rows.

#include <cstdint>
#include <string>
#include <vector>

namespace fracmeas {

// Provenance record embedded at the top of every CSV product. All fields
// except the two timestamps are deterministic functions of the invocation,
// and the data rows depend only on those fields, so reruns with the same
// inputs reproduce every non-timestamp byte exactly.
struct RunManifest {
  std::string command;     // subcommand name
  std::string arguments;   // canonical rendering of the parsed arguments
  std::uint64_t seed = 0;  // RNG seed (0 when the command is deterministic)
  std::string versions;    // tool, dependency, and compiler versions
  std::string inputHash;   // content hash of the manifold input, "-" when none
  std::string startedAt;   // ISO-8601 UTC wall-clock time
  std::string finishedAt;  // ISO-8601 UTC wall-clock time
};

// Current wall-clock time as "YYYY-MM-DDThh:mm:ssZ".
std::string isoTimestampUtc();

// "fracmeas <version>; eigen <version>; <compiler>", fixed per build.
std::string toolVersions();

// One table: column names plus rows of pre-formatted cells. Cells must not
// contain commas or newlines (numbers and plain tokens only).
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

// Doubles are printed with 17 significant digits (round-trip exact).
std::string formatDouble(double value);
std::string formatInteger(long long value);
std::string formatUnsigned(std::uint64_t value);

std::string renderCsv(const RunManifest& manifest, const CsvTable& table);

// Renders and writes atomically enough for our purposes (single write).
// Throws std::runtime_error when the file cannot be written.
void writeCsvFile(const std::string& path, const RunManifest& manifest, const CsvTable& table);

}  // namespace fracmeas
