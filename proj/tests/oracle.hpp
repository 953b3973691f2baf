#pragma once

// Brute-force homology oracle: dense Smith normal form over F2[w] with
// tracked unimodular transforms, applied to the boundary matrix, the kernel
// inclusion, and the induced relation matrix. Shares no code with
// dvr_reduce; gradings enter only at readout, where every surviving basis
// vector must come out homogeneous or the oracle aborts.

#include <climits>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "gridups/complex.hpp"
#include "gridups/homology.hpp"

namespace oracle {

struct Poly2 {
    std::vector<uint64_t> w;  // bit k = coefficient of w^k

    static Poly2 monomial(int k) {
        Poly2 p;
        p.w.assign(static_cast<size_t>(k) / 64 + 1, 0);
        p.w[static_cast<size_t>(k) / 64] = 1ull << (k % 64);
        return p;
    }
    void trim() {
        while (!w.empty() && w.back() == 0) w.pop_back();
    }
    bool is_zero() const { return w.empty(); }
    int deg() const {
        if (w.empty()) return -1;
        int top = 63;
        while (!(w.back() >> top & 1)) --top;
        return static_cast<int>(w.size() - 1) * 64 + top;
    }
    bool bit(int k) const {
        size_t i = static_cast<size_t>(k) / 64;
        return i < w.size() && (w[i] >> (k % 64) & 1);
    }
    bool is_monomial() const {
        int ones = 0;
        for (uint64_t x : w) ones += __builtin_popcountll(x);
        return ones == 1;
    }

    void operator^=(const Poly2& o) {
        if (o.w.size() > w.size()) w.resize(o.w.size(), 0);
        for (size_t i = 0; i < o.w.size(); ++i) w[i] ^= o.w[i];
        trim();
    }
    Poly2 shifted(int k) const {  // * w^k
        Poly2 r;
        if (is_zero()) return r;
        r.w.assign(w.size() + static_cast<size_t>(k) / 64 + 1, 0);
        int word = k / 64, bit = k % 64;
        for (size_t i = 0; i < w.size(); ++i) {
            r.w[i + word] ^= w[i] << bit;
            if (bit) r.w[i + word + 1] ^= w[i] >> (64 - bit);
        }
        r.trim();
        return r;
    }
    friend Poly2 operator*(const Poly2& a, const Poly2& b) {
        Poly2 r;
        for (size_t i = 0; i < a.w.size(); ++i)
            for (int j = 0; j < 64; ++j)
                if (a.w[i] >> j & 1) r ^= b.shifted(static_cast<int>(i) * 64 + j);
        return r;
    }
    // Euclidean division; remainder has degree < deg(b).
    static std::pair<Poly2, Poly2> divmod(Poly2 a, const Poly2& b) {
        if (b.is_zero()) throw std::logic_error("oracle: division by zero polynomial");
        Poly2 q;
        int db = b.deg();
        while (a.deg() >= db) {
            int s = a.deg() - db;
            q ^= monomial(s);
            a ^= b.shifted(s);
        }
        return {q, a};
    }
    friend bool operator==(const Poly2& a, const Poly2& b) = default;
};

struct Mat {
    int rows = 0, cols = 0;
    std::vector<Poly2> a;

    static Mat zero(int r, int c) {
        Mat m;
        m.rows = r;
        m.cols = c;
        m.a.resize(static_cast<size_t>(r) * c);
        return m;
    }
    static Mat identity(int n) {
        Mat m = zero(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = Poly2::monomial(0);
        return m;
    }
    Poly2& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Poly2& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

inline Mat mul(const Mat& x, const Mat& y) {
    if (x.cols != y.rows) throw std::logic_error("oracle: matrix product size mismatch");
    Mat r = Mat::zero(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            if (x.at(i, k).is_zero()) continue;
            for (int j = 0; j < y.cols; ++j)
                if (!y.at(k, j).is_zero()) r.at(i, j) ^= x.at(i, k) * y.at(k, j);
        }
    return r;
}

// s = u * input * v, diagonal with divisibility d_0 | d_1 | ...; uinv and
// vinv track the inverse transforms so that input = uinv * s * vinv.
struct Snf {
    Mat s, u, uinv, v, vinv;
    int rank = 0;
};

namespace detail {

inline void row_op(Snf& f, int i, int j, const Poly2& q) {  // row_i += q*row_j
    for (int c = 0; c < f.s.cols; ++c)
        if (!f.s.at(j, c).is_zero()) f.s.at(i, c) ^= q * f.s.at(j, c);
    for (int c = 0; c < f.u.cols; ++c)
        if (!f.u.at(j, c).is_zero()) f.u.at(i, c) ^= q * f.u.at(j, c);
    for (int r = 0; r < f.uinv.rows; ++r)
        if (!f.uinv.at(r, i).is_zero()) f.uinv.at(r, j) ^= q * f.uinv.at(r, i);
}

inline void col_op(Snf& f, int i, int j, const Poly2& q) {  // col_i += q*col_j
    for (int r = 0; r < f.s.rows; ++r)
        if (!f.s.at(r, j).is_zero()) f.s.at(r, i) ^= q * f.s.at(r, j);
    for (int r = 0; r < f.v.rows; ++r)
        if (!f.v.at(r, j).is_zero()) f.v.at(r, i) ^= q * f.v.at(r, j);
    for (int c = 0; c < f.vinv.cols; ++c)
        if (!f.vinv.at(i, c).is_zero()) f.vinv.at(j, c) ^= q * f.vinv.at(i, c);
}

inline void row_swap(Snf& f, int i, int j) {
    if (i == j) return;
    for (int c = 0; c < f.s.cols; ++c) std::swap(f.s.at(i, c), f.s.at(j, c));
    for (int c = 0; c < f.u.cols; ++c) std::swap(f.u.at(i, c), f.u.at(j, c));
    for (int r = 0; r < f.uinv.rows; ++r) std::swap(f.uinv.at(r, i), f.uinv.at(r, j));
}

inline void col_swap(Snf& f, int i, int j) {
    if (i == j) return;
    for (int r = 0; r < f.s.rows; ++r) std::swap(f.s.at(r, i), f.s.at(r, j));
    for (int r = 0; r < f.v.rows; ++r) std::swap(f.v.at(r, i), f.v.at(r, j));
    for (int c = 0; c < f.vinv.cols; ++c) std::swap(f.vinv.at(i, c), f.vinv.at(j, c));
}

}  // namespace detail

inline Snf snf(const Mat& input) {
    Snf f;
    f.s = input;
    f.u = Mat::identity(input.rows);
    f.uinv = Mat::identity(input.rows);
    f.v = Mat::identity(input.cols);
    f.vinv = Mat::identity(input.cols);

    int lim = std::min(input.rows, input.cols);
    for (int pos = 0; pos < lim; ++pos) {
        for (;;) {
            int pi = -1, pj = -1, best = INT_MAX;
            for (int i = pos; i < f.s.rows; ++i)
                for (int j = pos; j < f.s.cols; ++j) {
                    int d = f.s.at(i, j).deg();
                    if (d >= 0 && d < best) best = d, pi = i, pj = j;
                }
            if (pi < 0) { f.rank = pos; return f; }
            detail::row_swap(f, pos, pi);
            detail::col_swap(f, pos, pj);

            bool again = false;
            for (int i = 0; i < f.s.rows; ++i) {
                if (i == pos || f.s.at(i, pos).is_zero()) continue;
                auto [q, r] = Poly2::divmod(f.s.at(i, pos), f.s.at(pos, pos));
                detail::row_op(f, i, pos, q);
                if (!r.is_zero()) again = true;
            }
            for (int j = 0; j < f.s.cols; ++j) {
                if (j == pos || f.s.at(pos, j).is_zero()) continue;
                auto [q, r] = Poly2::divmod(f.s.at(pos, j), f.s.at(pos, pos));
                detail::col_op(f, j, pos, q);
                if (!r.is_zero()) again = true;
            }
            if (again) continue;

            // Invariant-factor divisibility into the remaining block.
            bool fixed = false;
            for (int i = pos + 1; i < f.s.rows && !fixed; ++i)
                for (int j = pos + 1; j < f.s.cols && !fixed; ++j) {
                    if (f.s.at(i, j).is_zero()) continue;
                    if (!Poly2::divmod(f.s.at(i, j), f.s.at(pos, pos)).second.is_zero()) {
                        detail::row_op(f, pos, i, Poly2::monomial(0));
                        fixed = true;
                    }
                }
            if (!fixed) break;
        }
    }
    f.rank = lim;
    for (int i = 0; i < lim; ++i)
        if (f.s.at(i, i).is_zero()) { f.rank = i; break; }
    return f;
}

// Grading of a homogeneous column vector in complex coordinates: every
// monomial w^m at row i sits in grading gr2q[i] - 2m and all must agree.
inline gridups::Rational column_grading(const Mat& m, int col,
                                        const std::vector<long long>& gr2q, long long q) {
    long long found = LLONG_MIN;
    for (int i = 0; i < m.rows; ++i) {
        const Poly2& p = m.at(i, col);
        for (int k = 0; k <= p.deg(); ++k) {
            if (!p.bit(k)) continue;
            long long g = gr2q[i] - 2 * k;
            if (found == LLONG_MIN) found = g;
            else if (g != found)
                throw std::logic_error("oracle: non-homogeneous basis vector");
        }
    }
    if (found == LLONG_MIN) throw std::logic_error("oracle: zero basis vector");
    return gridups::Rational(found, 2 * q);
}

inline gridups::ModuleDecomposition dense_snf_decomposition(const gridups::GradedDvrComplex& c) {
    int n = c.size();
    long long q = c.t.q;
    Mat b = Mat::zero(n, n);
    for (int x = 0; x < n; ++x)
        for (auto [y, k] : c.diff[x]) b.at(y, x) ^= Poly2::monomial(k);

    Mat sq = mul(b, b);
    for (const Poly2& p : sq.a)
        if (!p.is_zero()) throw std::logic_error("oracle: differential does not square to zero");

    Snf s1 = snf(b);
    int r = s1.rank, m = n - r;

    Mat kern = Mat::zero(n, m);  // kernel basis: trailing columns of v
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) kern.at(i, j) = s1.v.at(i, r + j);

    Mat img = Mat::zero(n, r);  // image generators: d_i * column i of uinv
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < r; ++j) img.at(i, j) = s1.s.at(j, j) * s1.uinv.at(i, j);

    // Solve kern * x = img; solvable exactly because im(d) sits inside ker(d).
    Snf s2 = snf(kern);
    if (s2.rank != m) throw std::logic_error("oracle: kernel basis is not independent");
    Mat y = mul(s2.u, img);
    Mat z = Mat::zero(m, r);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < r; ++j) {
            auto [quot, rem] = Poly2::divmod(y.at(i, j), s2.s.at(i, i));
            if (!rem.is_zero()) throw std::logic_error("oracle: image is not in the kernel span");
            z.at(i, j) = quot;
        }
    for (int i = m; i < n; ++i)
        for (int j = 0; j < r; ++j)
            if (!y.at(i, j).is_zero())
                throw std::logic_error("oracle: image is not in the kernel span");
    Mat x = mul(s2.v, z);

    // Quotient R^m / col-span(x) in the basis given by columns of u3inv.
    Snf s3 = snf(x);
    Mat gens = mul(kern, s3.uinv);

    gridups::ModuleDecomposition dec;
    for (int i = 0; i < m; ++i) {
        if (i < s3.rank) {
            const Poly2& d = s3.s.at(i, i);
            if (d.deg() == 0) continue;  // unit: trivial summand
            if (!d.is_monomial())
                throw std::logic_error("oracle: non-monomial invariant factor on graded input");
            dec.torsion.insert({column_grading(gens, i, c.gr2q, q), d.deg()});
        } else {
            dec.free.insert(column_grading(gens, i, c.gr2q, q));
        }
    }
    return dec;
}

// Cancels every unit (w^0) entry by dense mod-2 zig-zag elimination. The
// result is the minimal model: all surviving entries have valuation >= 1.
// Exponents stay pinned by the gradings, so plain bit toggles suffice.
inline gridups::GradedDvrComplex precancel_units(const gridups::GradedDvrComplex& c) {
    int n = c.size();
    long long twoq = 2 * c.t.q;
    auto pinned = [&](int x, int y) { return (c.gr2q[y] - c.gr2q[x]) / 2 + c.t.q; };

    std::vector<std::vector<char>> m(n, std::vector<char>(n, 0));
    for (int x = 0; x < n; ++x)
        for (auto [y, k] : c.diff[x]) m[x][y] ^= 1;

    std::vector<char> alive(n, 1);
    for (;;) {
        int x0 = -1, y0 = -1;
        for (int x = 0; x < n && x0 < 0; ++x) {
            if (!alive[x]) continue;
            for (int y = 0; y < n; ++y)
                if (alive[y] && m[x][y] && pinned(x, y) == 0) { x0 = x; y0 = y; break; }
        }
        if (x0 < 0) break;
        alive[x0] = alive[y0] = 0;
        for (int x = 0; x < n; ++x) {
            if (!alive[x] || !m[x][y0]) continue;
            for (int y = 0; y < n; ++y)
                if (alive[y] && m[x0][y]) m[x][y] ^= 1;
        }
    }

    gridups::GradedDvrComplex out;
    out.t = c.t;
    std::vector<int> remap(n, -1);
    for (int x = 0; x < n; ++x) {
        if (!alive[x]) continue;
        remap[x] = static_cast<int>(out.gr2q.size());
        out.gr2q.push_back(c.gr2q[x]);
    }
    out.diff.resize(out.gr2q.size());
    for (int x = 0; x < n; ++x) {
        if (!alive[x]) continue;
        for (int y = 0; y < n; ++y) {
            if (!alive[y] || !m[x][y]) continue;
            long long k = pinned(x, y);
            if (k < 1) throw std::logic_error("oracle: unit entry survived precancel");
            (void)twoq;
            out.diff[remap[x]].emplace_back(remap[y], static_cast<int>(k));
        }
    }
    return out;
}

// Random complex with a planted decomposition: a direct sum of free
// generators and elementary torsion pairs, obfuscated by random homogeneous
// changes of basis (which preserve the homology on the nose).
struct Planted {
    gridups::GradedDvrComplex complex;
    gridups::ModuleDecomposition expected;
};

inline Planted random_planted(std::mt19937_64& rng, long long q, int nfree, int ntors, int nops) {
    gridups::TParameter t(1, q);
    Planted out;
    out.complex.t = t;
    std::uniform_int_distribution<long long> grade(-4 * q, 4 * q);
    std::uniform_int_distribution<int> order(1, 3);

    std::vector<long long>& g = out.complex.gr2q;
    for (int i = 0; i < nfree; ++i) {
        g.push_back(2 * grade(rng));
        out.expected.free.insert(gridups::Rational(g.back(), 2 * q));
    }
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < ntors; ++i) {
        int k = order(rng);
        long long gy = 2 * grade(rng);
        int y = static_cast<int>(g.size());
        g.push_back(gy);
        g.push_back(gy + 2 * q - 2 * k);  // source grading making the entry w^k
        pairs.emplace_back(y + 1, y);
        out.expected.torsion.insert({gridups::Rational(gy, 2 * q), k});
    }

    int n = static_cast<int>(g.size());
    std::vector<std::vector<char>> m(n, std::vector<char>(n, 0));
    for (auto [x, y] : pairs) m[x][y] = 1;

    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int step = 0; step < nops && n > 1; ++step) {
        int i = pick(rng), j = pick(rng);
        // Conjugate by e_j -> e_j + w^((g_i-g_j)/2) e_i. Skipped when the
        // exponent would be negative or when d(e_i) hits e_j, which would
        // put an entry on the diagonal (grid complexes never have those).
        if (i == j || (g[i] - g[j]) % 2 != 0 || g[i] < g[j] || m[i][j]) continue;
        for (int r = 0; r < n; ++r) m[r][i] ^= m[r][j];
        for (int c2 = 0; c2 < n; ++c2) m[j][c2] ^= m[i][c2];
    }

    out.complex.diff.resize(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (m[x][y])
                out.complex.diff[x].emplace_back(y, out.complex.entry_exponent(x, y));
    return out;
}

}  // namespace oracle
