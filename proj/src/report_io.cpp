#include "zetamoment/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "zetamoment/errors.hpp"

namespace zm {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string render_csv(const CsvMeta& meta,
                       const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows) {
    if (header.empty()) throw domain_error("CSV needs a nonempty header");
    std::ostringstream out;
    char hash_hex[20];
    std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                  static_cast<unsigned long long>(meta.config_hash));
    out << "# schema=" << meta.schema << "\n";
    out << "# config=" << hash_hex << "\n";
    out << "# calibration=" << meta.calibration_version << "\n";
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out << ',';
        out << header[i];
    }
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size()) {
            throw domain_error("CSV row width " + std::to_string(row.size()) +
                               " does not match header width " +
                               std::to_string(header.size()));
        }
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << "\n";
    }
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open for writing: " + path);
    out << content;
    if (!out.flush()) throw io_error("write failed: " + path);
}

}  // namespace zm
