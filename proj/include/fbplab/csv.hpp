#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace fbp::io {

/// Formats a double with 12 significant digits (the artifact-wide convention).
std::string fmt12(double v);

/// Shortest representation that parses back to the same double.
std::string fmt_exact(double v);

/// Column-oriented CSV writer; all columns must have equal length.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    const std::vector<double>& column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace fbp::io
