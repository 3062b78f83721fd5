#pragma once

#include <string>
#include <vector>

namespace qbm {

// Desk-scale CSV interchange: header row, comma separators, full-precision
// scientific formatting ("%.17g") so a re-read reproduces stored values
// exactly. '#' lines carry annotations (pole windows) and are skipped by the
// reader.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> comments;
};

std::string format_full(double v);

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

}  // namespace qbm
