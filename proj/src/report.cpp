#include "bosegas/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace bosegas {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void CsvTable::add_row(const std::vector<double>& values) {
    std::vector<std::string> row;
    row.reserve(values.size());
    for (double v : values) row.push_back(format_double(v));
    rows.push_back(std::move(row));
}

std::string CsvTable::to_string() const {
    std::string out;
    for (const auto& c : comments) out += "# " + c + "\n";
    for (size_t i = 0; i < header.size(); ++i)
        out += header[i] + (i + 1 < header.size() ? "," : "");
    out += "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i)
            out += row[i] + (i + 1 < row.size() ? "," : "");
        out += "\n";
    }
    return out;
}

void CsvTable::write(const std::string& path) const {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write: " + path);
    file << to_string();
}

}  // namespace bosegas
