#include "polytherm/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace polytherm {

std::string format_double(double v) {
    char buf[40];
    // %.17g round-trips every double; try shorter forms first for readability
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) break;
    }
    return buf;
}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns.size())
        throw std::invalid_argument("csv: row width does not match header");
    rows.push_back(std::move(cells));
}

std::string CsvTable::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out += ',';
        out += columns[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

void CsvTable::save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("csv: cannot open " + path);
    f << to_string();
    if (!f) throw std::runtime_error("csv: write failed for " + path);
}

}  // namespace polytherm
