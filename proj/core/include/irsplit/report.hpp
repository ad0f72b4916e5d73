#pragma once

#include "irsplit/bench.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace irsplit::bench {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kCsvHeader =
    "problem,solver,outer,inner,seconds,kkt,objective,status";

void write_csv(std::ostream& out, const std::vector<RunResult>& records);

/// {"schema_version", "config", "records", "summary"}; the summary is left
/// out when there are no records.
std::string to_json(const std::vector<RunResult>& records,
                    const BatchConfig* config = nullptr);

/// Records from a JSON report. Throws ParseError on malformed input or an
/// unknown schema version.
std::vector<RunResult> records_from_json(const std::string& text);

/// IRSPLIT_OUTPUT_DIR when set, else the working directory.
std::filesystem::path default_output_dir();

struct EmittedFiles {
  std::optional<std::filesystem::path> csv;
  std::optional<std::filesystem::path> json;
};

/// Writes <stem>.csv and/or <stem>.json under dir, creating it if needed.
EmittedFiles emit(const std::vector<RunResult>& records,
                  const BatchConfig* config, const std::filesystem::path& dir,
                  const std::string& stem, bool csv, bool json);

}  // namespace irsplit::bench
