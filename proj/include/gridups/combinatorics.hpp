#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "gridups/diagram.hpp"
#include "gridups/rational.hpp"

namespace gridups {

/* *** States *** */
//
// A state assigns to each horizontal circle (row) the vertical circle (col)
// of its intersection point: a permutation. States are indexed by
// lexicographic rank throughout.

using State = std::vector<int8_t>;

inline uint64_t pack_state(const State& s) {
    uint64_t b = 0;
    for (size_t i = 0; i < s.size(); ++i) b |= static_cast<uint64_t>(s[i]) << (4 * i);
    return b;
}

inline std::vector<State> all_states(int n) {
    State p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<State> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

struct StateIndex {
    std::unordered_map<uint64_t, int> rank;

    explicit StateIndex(const std::vector<State>& states) {
        rank.reserve(states.size() * 2);
        for (size_t i = 0; i < states.size(); ++i) rank[pack_state(states[i])] = static_cast<int>(i);
    }
    int of(const State& s) const { return rank.at(pack_state(s)); }
};

/* *** The J-pairing and gradings *** */

// I(A,B) = #{(a,b) in AxB : a < b coordinatewise, strictly}.
inline long long dominance_count(const std::vector<PlanarPoint>& a, const std::vector<PlanarPoint>& b) {
    long long k = 0;
    for (const auto& p : a)
        for (const auto& q : b)
            if (p.x2 < q.x2 && p.y2 < q.y2) ++k;
    return k;
}

inline Rational j_pairing(const std::vector<PlanarPoint>& a, const std::vector<PlanarPoint>& b) {
    return Rational(dominance_count(a, b) + dominance_count(b, a), 2);
}

inline std::vector<PlanarPoint> state_points(const PlanarDiagram& pd, const State& s) {
    std::vector<PlanarPoint> pts(pd.n);
    for (int i = 0; i < pd.n; ++i) pts[i] = pd.state_point(i, s[i]);
    return pts;
}

// M(x) = J(x - O, x - O) + 1.
inline long long maslov(const PlanarDiagram& pd, const State& s) {
    auto pts = state_points(pd, s);
    Rational m = j_pairing(pts, pts) - Rational(2) * j_pairing(pts, pd.os) + j_pairing(pd.os, pd.os) +
                 Rational(1);
    if (!m.is_integer()) throw invariant_violation_error("non-integral Maslov grading");
    return m.num;
}

// A(x) = J(x, X - sum_i m_i O_i); unsymmetrized.
inline Rational alexander_raw(const PlanarDiagram& pd, const State& s) {
    auto pts = state_points(pd, s);
    Rational a = j_pairing(pts, pd.xs);
    for (int i = 0; i < pd.n; ++i)
        a -= Rational(pd.m[i]) * j_pairing(pts, {pd.os[i]});
    return a;
}

// Closed Alexander formula for one-X-per-row diagrams:
//   J(x, X - O) - J(X,X)/2 + J(O,O)/2 - shift
// where shift = (n - l)/2 gives the symmetrized grading of a tight link
// diagram and shift = (n - 1)/2 gives the A'-grading.
inline Rational alexander_closed(const PlanarDiagram& pd, const State& s, const Rational& shift) {
    auto pts = state_points(pd, s);
    return j_pairing(pts, pd.xs) - j_pairing(pts, pd.os) - j_pairing(pd.xs, pd.xs) / Rational(2) +
           j_pairing(pd.os, pd.os) / Rational(2) - shift;
}

/* *** Rectangles *** */
//
// Rect(x, y) holds the two toroidal rectangles whose SW/NE corners are points
// of x and SE/NW corners points of y. Cells covered: rows row0..row0+rowspan-1,
// cols col0..col0+colspan-1, mod n.

struct Rect {
    int row0 = 0, rowspan = 0, col0 = 0, colspan = 0;

    bool contains_cell(int n, int r, int c) const {
        return ((r - row0) % n + n) % n < rowspan && ((c - col0) % n + n) % n < colspan;
    }
};

// The two rectangles from x to y; requires that x and y differ at exactly the
// rows i < j (all other rows equal).
inline std::array<Rect, 2> rects_between(int n, const State& x, int i, int j) {
    int a = x[i], b = x[j];
    Rect r1{i, j - i, a, ((b - a) % n + n) % n};
    Rect r2{j, n - (j - i), b, ((a - b) % n + n) % n};
    return {r1, r2};
}

// A rectangle is empty when no point of x (equivalently y) lies in its interior.
inline bool rect_empty(int n, const State& x, const Rect& r) {
    for (int s = 1; s < r.rowspan; ++s) {
        int row = (r.row0 + s) % n;
        int rel = ((x[row] - r.col0) % n + n) % n;
        if (rel > 0 && rel < r.colspan) return false;
    }
    return true;
}

struct RectCounts {
    int xs = 0;            // |X ∩ r|
    int os = 0;            // |O ∩ r|
    long long msum = 0;    // sum of m_i over O_i in r
    std::vector<int> o_rows; // rows of the O-markings inside r
};

inline RectCounts rect_counts(const GridDiagram& g, const Rect& r) {
    RectCounts k;
    for (int s = 0; s < r.rowspan; ++s) {
        int row = (r.row0 + s) % g.n;
        for (int t = 0; t < r.colspan; ++t) {
            int col = (r.col0 + t) % g.n;
            uint8_t b = g.cell(row, col);
            if (b & CELL_X) ++k.xs;
            if (b & (CELL_O | CELL_OSTAR)) {
                ++k.os;
                k.msum += x_count_row(g, row);
                k.o_rows.push_back(row);
            }
        }
    }
    return k;
}

} // namespace gridups
