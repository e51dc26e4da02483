/// @file snapshot.hpp
/// @brief Field snapshot file format: one text header line
///        `POLYTHERM v1, d, N, t, n_fields` followed by little-endian float64
///        arrays per field in axis-major order (first axis fastest).

#ifndef POLYTHERM_SNAPSHOT_HPP
#define POLYTHERM_SNAPSHOT_HPP

#include <string>
#include <vector>

#include "polytherm/grid.hpp"

namespace polytherm {

struct Snapshot {
    int d = 0;
    int n = 0;
    double t = 0.0;
    std::vector<Field> fields;
};

void write_snapshot(const std::string& path, const Snapshot& snap);
Snapshot read_snapshot(const std::string& path);

}  // namespace polytherm

#endif  // POLYTHERM_SNAPSHOT_HPP
