#include "polytherm/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "polytherm/csv.hpp"

namespace polytherm {

namespace {

void put_le(std::ofstream& f, const double* data, std::size_t count) {
    if constexpr (std::endian::native == std::endian::little) {
        f.write(reinterpret_cast<const char*>(data), count * sizeof(double));
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            std::uint64_t bits;
            std::memcpy(&bits, &data[i], 8);
            char buf[8];
            for (int b = 0; b < 8; ++b) buf[b] = static_cast<char>((bits >> (8 * b)) & 0xff);
            f.write(buf, 8);
        }
    }
}

void get_le(std::ifstream& f, double* data, std::size_t count) {
    if constexpr (std::endian::native == std::endian::little) {
        f.read(reinterpret_cast<char*>(data), count * sizeof(double));
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            char buf[8];
            f.read(buf, 8);
            std::uint64_t bits = 0;
            for (int b = 0; b < 8; ++b)
                bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[b])) << (8 * b);
            std::memcpy(&data[i], &bits, 8);
        }
    }
}

}  // namespace

void write_snapshot(const std::string& path, const Snapshot& snap) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("snapshot: cannot open " + path);
    f << "POLYTHERM v1, " << snap.d << ", " << snap.n << ", " << format_double(snap.t) << ", "
      << snap.fields.size() << "\n";
    std::size_t cells = 1;
    for (int k = 0; k < snap.d; ++k) cells *= snap.n;
    for (const auto& field : snap.fields) {
        if (field.size() != cells) throw std::runtime_error("snapshot: field size mismatch");
        put_le(f, field.data(), field.size());
    }
    if (!f) throw std::runtime_error("snapshot: write failed for " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("snapshot: cannot open " + path);
    std::string header;
    std::getline(f, header);
    Snapshot snap;
    int n_fields = 0;
    char tag[16] = {};
    if (std::sscanf(header.c_str(), "%13c %d , %d , %lf , %d", tag, &snap.d, &snap.n, &snap.t,
                    &n_fields) != 5 ||
        std::string(tag, 13) != "POLYTHERM v1,")
        throw std::runtime_error("snapshot: bad header in " + path);
    std::size_t cells = 1;
    for (int k = 0; k < snap.d; ++k) cells *= snap.n;
    snap.fields.assign(n_fields, Field(cells, 0.0));
    for (auto& field : snap.fields) get_le(f, field.data(), cells);
    if (!f) throw std::runtime_error("snapshot: truncated file " + path);
    return snap;
}

}  // namespace polytherm
