#pragma once
// CSV and text emission with embedded provenance metadata.
//
// Every generated file opens with '#' comment lines identifying the schema,
// the hash of the run configuration that produced it, and the calibration
// version in force.  No timestamps: identical runs must yield identical bytes.

#include <cstdint>
#include <string>
#include <vector>

namespace zm {

// Provenance stamped into every output file.
struct CsvMeta {
    std::string schema;             // short format tag, e.g. "moment-v1"
    std::uint64_t config_hash = 0;  // from config_hash(RunConfig)
    int calibration_version = 0;    // from the loaded Calibration
};

// Shortest-round-trip rendering (printf %.17g); NaN uniformly becomes "nan".
std::string format_double(double v);

// Full CSV text: metadata comments, one header row, then data rows.
// Comma delimiter, '.' decimal point.  Every row must match the header width.
std::string render_csv(const CsvMeta& meta,
                       const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows);

// Writes content to path atomically enough for our purposes; io_error on failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace zm
