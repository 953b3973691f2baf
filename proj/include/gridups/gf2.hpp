#pragma once

#include <cstdint>
#include <vector>

#include "gridups/errors.hpp"

namespace gridups {

// Dense GF(2) matrix, rows packed into 64-bit words.
struct BitMatrix {
    int rows = 0;
    int cols = 0;
    int stride = 0;  // words per row
    std::vector<uint64_t> bits;

    BitMatrix() = default;
    BitMatrix(int r, int c)
        : rows(r), cols(c), stride(c == 0 ? 1 : (c + 63) / 64), bits(static_cast<size_t>(r) * stride, 0) {}

    uint64_t* row(int r) { return bits.data() + static_cast<size_t>(r) * stride; }
    const uint64_t* row(int r) const { return bits.data() + static_cast<size_t>(r) * stride; }

    bool get(int r, int c) const { return (row(r)[c >> 6] >> (c & 63)) & 1u; }
    void set(int r, int c) { row(r)[c >> 6] |= uint64_t{1} << (c & 63); }
    void flip(int r, int c) { row(r)[c >> 6] ^= uint64_t{1} << (c & 63); }

    void xor_rows(int dst, int src) {
        uint64_t* d = row(dst);
        const uint64_t* s = row(src);
        for (int w = 0; w < stride; ++w) d[w] ^= s[w];
    }
};

// Row-reduces in place and returns the rank.
inline int gf2_rank(BitMatrix& m) {
    int rank = 0;
    for (int c = 0; c < m.cols && rank < m.rows; ++c) {
        int pivot = -1;
        for (int r = rank; r < m.rows; ++r) {
            if (m.get(r, c)) { pivot = r; break; }
        }
        if (pivot < 0) continue;
        if (pivot != rank) {
            for (int w = 0; w < m.stride; ++w) std::swap(m.row(pivot)[w], m.row(rank)[w]);
        }
        for (int r = 0; r < m.rows; ++r) {
            if (r != rank && m.get(r, c)) m.xor_rows(r, rank);
        }
        ++rank;
    }
    return rank;
}

}  // namespace gridups
