#pragma once

#include <string>
#include <vector>

namespace bosegas {

// Locale-independent "%.12g" formatting used by every CSV/JSON writer.
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> comments;  // emitted as leading '# ' lines
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(const std::vector<double>& values);
    std::string to_string() const;
    void write(const std::string& path) const;
};

}  // namespace bosegas
