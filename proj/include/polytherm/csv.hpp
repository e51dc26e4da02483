/// @file csv.hpp
/// @brief Deterministic CSV emission: fixed column order, round-trip float
///        formatting, byte-identical output for identical inputs.

#ifndef POLYTHERM_CSV_HPP
#define POLYTHERM_CSV_HPP

#include <string>
#include <vector>

namespace polytherm {

/// Shortest round-trip decimal representation (%.17g trimmed).
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> cells);
    std::string to_string() const;
    void save(const std::string& path) const;  // throws std::runtime_error on IO failure
};

}  // namespace polytherm

#endif  // POLYTHERM_CSV_HPP
