#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gridups/combinatorics.hpp"
#include "gridups/diagram.hpp"
#include "gridups/gf2.hpp"
#include "gridups/monomial.hpp"
#include "gridups/rational.hpp"

namespace gridups {

/* *** The parameter t = p/q *** */

struct TParameter {
    long long p = 0;
    long long q = 1;

    TParameter() = default;
    TParameter(long long p_, long long q_) {
        Rational r(p_, q_);
        if (r < Rational(0) || Rational(2) < r) throw invalid_input_error("t must lie in [0,2]");
        p = r.num;
        q = r.den;
    }
    Rational as_rational() const { return Rational(p, q); }
    TParameter reflected() const { return TParameter(2 * q - p, q); }
    std::string str() const { return p == 0 ? "0" : Rational(p, q).str(); }

    friend bool operator==(const TParameter& a, const TParameter& b) { return a.p == b.p && a.q == b.q; }
};

inline TParameter parse_t(const std::string& s) {
    Rational r = parse_rational(s);
    return TParameter(r.num, r.den);
}

/* *** CF^- and its hat quotient *** */
//
// Generators are all n! states in lexicographic order; the differential entry
// from x to y is the GF(2) sum of U_1^{O_1(r)}..U_n^{O_n(r)} over empty
// rectangles r from x to y. Variables are row-indexed: U_i belongs to the O
// in row i.

struct FilteredComplex {
    int n = 0;
    std::vector<int> m;                 // variable weights, m[i] = x_count_row(i)
    std::vector<char> killed;           // variables set to zero (hat quotient)
    std::vector<State> states;
    std::vector<long long> maslov;
    std::vector<Rational> alex;         // unsymmetrized A by default
    std::vector<std::vector<std::pair<int, MonomialSum>>> diff;  // sorted by target

    int size() const { return static_cast<int>(states.size()); }
};

namespace detail {

// Visits every empty rectangle leaving every state: f(x_id, y_id, rect, counts).
template <typename F>
void for_each_empty_rect(const GridDiagram& g, const std::vector<State>& states,
                         const StateIndex& index, F&& f) {
    int n = g.n;
    State y(n);
    for (size_t xi = 0; xi < states.size(); ++xi) {
        const State& x = states[xi];
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                y = x;
                std::swap(y[i], y[j]);
                int yi = index.of(y);
                for (const Rect& r : rects_between(n, x, i, j)) {
                    if (!rect_empty(n, x, r)) continue;
                    f(static_cast<int>(xi), yi, r, rect_counts(g, r));
                }
            }
    }
}

}  // namespace detail

inline FilteredComplex build_cf_minus(const GridDiagram& g) {
    validate(g);
    std::string why;
    if (!is_balanced(g, &why)) throw invalid_input_error("diagram not balanced: " + why);

    FilteredComplex c;
    c.n = g.n;
    c.m = m_weights(g);
    c.killed.assign(g.n, 0);
    c.states = all_states(g.n);
    StateIndex index(c.states);

    PlanarDiagram pd = planar_realization(g);
    c.maslov.reserve(c.states.size());
    c.alex.reserve(c.states.size());
    for (const State& s : c.states) {
        c.maslov.push_back(maslov(pd, s));
        c.alex.push_back(alexander_raw(pd, s));
    }

    std::vector<std::map<int, MonomialSum>> rows(c.states.size());
    detail::for_each_empty_rect(g, c.states, index,
                                [&](int xi, int yi, const Rect&, const RectCounts& k) {
                                    UMonomial mono = UMonomial::one();
                                    for (int row : k.o_rows) mono = mono.times_var(row);
                                    rows[xi][yi].add(mono);
                                });

    c.diff.resize(c.states.size());
    for (size_t xi = 0; xi < rows.size(); ++xi)
        for (auto& [yi, sum] : rows[xi])
            if (!sum.terms.empty()) c.diff[xi].emplace_back(yi, std::move(sum));
    return c;
}

// Quotient by the starred variables: in CF^- the span of the U_i-images for
// starred i is the minimal subcomplex containing them, so setting those
// variables to zero presents the quotient.
inline FilteredComplex build_hat(const FilteredComplex& c, const std::vector<int>& star_indices) {
    FilteredComplex h = c;
    for (int i : star_indices) {
        if (i < 0 || i >= c.n) throw invalid_input_error("star index outside variable range");
        h.killed[i] = 1;
    }
    std::vector<int> dead;
    for (int i = 0; i < h.n; ++i)
        if (h.killed[i]) dead.push_back(i);
    for (auto& row : h.diff) {
        std::vector<std::pair<int, MonomialSum>> kept;
        for (auto& [yi, sum] : row) {
            MonomialSum s;
            for (const UMonomial& mono : sum.terms)
                if (!mono.uses_any(dead)) s.add(mono);
            if (!s.terms.empty()) kept.emplace_back(yi, std::move(s));
        }
        row = std::move(kept);
    }
    return h;
}

/* *** Associated-graded pieces and the symmetrized Alexander grading *** */

// A finite GF(2) complex with exact bigradings.
struct GF2Complex {
    std::vector<long long> maslov;
    std::vector<Rational> alex;
    std::vector<std::vector<int>> diff;  // sorted target lists, odd multiplicity only

    int size() const { return static_cast<int>(maslov.size()); }
};

namespace detail {

// All exponent vectors over the alive variables with weighted sum = deficit.
template <typename F>
void enumerate_exponents(const std::vector<int>& vars, const std::vector<int>& weights, size_t at,
                         long long deficit, UMonomial acc, F&& f) {
    if (deficit == 0 && at == vars.size()) {
        f(acc);
        return;
    }
    if (at == vars.size()) return;
    int v = vars[at];
    long long w = weights[v];
    for (long long e = 0; e * w <= deficit; ++e) {
        if (at + 1 == vars.size() && e * w != deficit) continue;
        enumerate_exponents(vars, weights, at + 1, deficit - e * w,
                            e ? acc.times_var(v, static_cast<int>(e)) : acc, f);
    }
}

}  // namespace detail

// The subquotient of the hat complex spanned by monomials U^a x with
// A(U^a x) = m, carrying the A-preserving part of the differential.
inline GF2Complex associated_graded_piece(const FilteredComplex& hat, const Rational& m) {
    std::vector<int> alive;
    for (int i = 0; i < hat.n; ++i)
        if (!hat.killed[i]) alive.push_back(i);

    GF2Complex piece;
    std::vector<std::pair<int, UMonomial>> gens;
    std::map<std::pair<int, uint64_t>, int> id;
    for (int s = 0; s < hat.size(); ++s) {
        Rational deficit = hat.alex[s] - m;
        if (deficit < Rational(0) || !deficit.is_integer()) continue;
        detail::enumerate_exponents(alive, hat.m, 0, deficit.num, UMonomial::one(),
                                    [&](const UMonomial& a) {
                                        id[{s, a.bits}] = static_cast<int>(gens.size());
                                        gens.emplace_back(s, a);
                                        piece.maslov.push_back(hat.maslov[s] - 2 * a.total_degree(hat.n));
                                        piece.alex.push_back(m);
                                    });
    }

    piece.diff.resize(gens.size());
    for (size_t gi = 0; gi < gens.size(); ++gi) {
        auto [s, a] = gens[gi];
        for (const auto& [y, sum] : hat.diff[s])
            for (const UMonomial& b : sum.terms) {
                if (!(hat.alex[y] - hat.alex[s] == Rational(b.weighted_degree(hat.m)))) continue;
                auto it = id.find({y, a.times(b).bits});
                if (it == id.end()) throw invariant_violation_error("graded piece not closed under d");
                auto& row = piece.diff[gi];
                auto pos = std::lower_bound(row.begin(), row.end(), it->second);
                if (pos != row.end() && *pos == it->second)
                    row.erase(pos);
                else
                    row.insert(pos, it->second);
            }
    }
    return piece;
}

// Homology dimensions of a finite GF(2) complex per (Maslov, Alexander)
// bigrading. Requires each term to drop M by 1 and preserve A.
inline std::map<std::pair<long long, Rational>, long long> gf2_homology(const GF2Complex& c) {
    for (int x = 0; x < c.size(); ++x) {
        std::set<int> dd;
        for (int y : c.diff[x]) {
            if (c.maslov[y] != c.maslov[x] - 1 || !(c.alex[y] == c.alex[x]))
                throw invariant_violation_error("differential term not of bidegree (-1, 0)");
            for (int z : c.diff[y]) {
                auto it = dd.find(z);
                if (it == dd.end())
                    dd.insert(z);
                else
                    dd.erase(it);
            }
        }
        if (!dd.empty()) throw invariant_violation_error("d^2 != 0 on GF(2) complex");
    }

    using Key = std::pair<long long, Rational>;
    std::map<Key, std::vector<int>> block;
    std::vector<int> pos(c.size());
    for (int i = 0; i < c.size(); ++i) {
        auto& v = block[{c.maslov[i], c.alex[i]}];
        pos[i] = static_cast<int>(v.size());
        v.push_back(i);
    }

    std::map<Key, long long> rank_from;  // rank of d restricted to the block
    for (auto& [key, gens] : block) {
        Key below{key.first - 1, key.second};
        auto it = block.find(below);
        if (it == block.end()) {
            rank_from[key] = 0;
            continue;
        }
        BitMatrix mat(static_cast<int>(gens.size()), static_cast<int>(it->second.size()));
        for (size_t r = 0; r < gens.size(); ++r)
            for (int y : c.diff[gens[r]]) mat.set(static_cast<int>(r), pos[y]);
        rank_from[key] = gf2_rank(mat);
    }

    std::map<Key, long long> dims;
    for (auto& [key, gens] : block) {
        long long d = static_cast<long long>(gens.size()) - rank_from[key];
        auto above = rank_from.find({key.first + 1, key.second});
        if (above != rank_from.end()) d -= above->second;
        if (d != 0) dims[key] = d;
    }
    return dims;
}

struct SymmetrizedAlexander {
    std::vector<Rational> ah;  // per state, in lexicographic order
    Rational m_max, m_min;
};

// Scans the achievable Alexander values of the hat complex for the extremes
// with nonzero associated-graded homology and recenters A around them.
inline SymmetrizedAlexander symmetrized_alexander(const GridDiagram& g) {
    FilteredComplex hat = build_hat(build_cf_minus(g), star_rows(g));

    Rational min_a = hat.alex[0], max_a = hat.alex[0];
    for (const Rational& a : hat.alex) {
        if (a < min_a) min_a = a;
        if (max_a < a) max_a = a;
    }

    // Integers representable as weighted sums of alive-variable exponents.
    long long span = (max_a - min_a).num / (max_a - min_a).den;
    std::vector<char> reachable(static_cast<size_t>(span) + 1, 0);
    reachable[0] = 1;
    for (int i = 0; i < hat.n; ++i) {
        if (hat.killed[i]) continue;
        for (long long j = hat.m[i]; j <= span; ++j)
            if (reachable[j - hat.m[i]]) reachable[j] = 1;
    }

    std::set<Rational> candidates;
    for (const Rational& a : hat.alex)
        for (long long j = 0; j <= span; ++j) {
            if (!reachable[j]) continue;
            Rational m = a - Rational(j);
            if (!(m < min_a)) candidates.insert(m);
        }

    bool any = false;
    Rational m_max, m_min;
    for (const Rational& m : candidates) {
        if (gf2_homology(associated_graded_piece(hat, m)).empty()) continue;
        if (!any) {
            m_max = m_min = m;
            any = true;
        } else {
            if (m_max < m) m_max = m;
            if (m < m_min) m_min = m;
        }
    }
    if (!any) throw invariant_violation_error("all associated-graded pieces have zero homology");

    SymmetrizedAlexander out;
    out.m_max = m_max;
    out.m_min = m_min;
    Rational shift = (m_max + m_min) / Rational(2);
    out.ah.reserve(hat.alex.size());
    for (const Rational& a : hat.alex) out.ah.push_back(a - shift);
    return out;
}

// Symmetrized A per state: closed formula for tight link diagrams, homology
// scan otherwise.
inline std::vector<Rational> alexander_ah(const GridDiagram& g) {
    if (is_tight_link(g)) {
        PlanarDiagram pd = planar_realization(g);
        Rational shift(g.n - link_components(g), 2);
        std::vector<Rational> ah;
        for (const State& s : all_states(g.n)) ah.push_back(alexander_closed(pd, s, shift));
        return ah;
    }
    return symmetrized_alexander(g).ah;
}

// The A'-grading: same closed formula with shift (n-1)/2. Defined for any
// link-shaped diagram (one X per row and column), tight or not.
inline std::vector<Rational> alexander_prime(const GridDiagram& g) {
    if (!is_link_shaped(g)) throw invalid_input_error("A' requires a link-shaped diagram");
    PlanarDiagram pd = planar_realization(g);
    Rational shift(g.n - 1, 2);
    std::vector<Rational> ah;
    for (const State& s : all_states(g.n)) ah.push_back(alexander_closed(pd, s, shift));
    return ah;
}

/* *** The collapsed complex (U_1 = ... = U_n = U) *** */

struct CollapsedComplex {
    std::vector<long long> maslov;
    std::vector<Rational> ah;
    std::vector<std::vector<std::pair<int, int>>> diff;  // (target, U-exponent), odd multiplicity

    int size() const { return static_cast<int>(maslov.size()); }
};

// Identifies all variables; Maslov-graded only. The carried A-grading defaults
// to the one stored in c (pass the symmetrized values for downstream use).
inline CollapsedComplex collapse_U(const FilteredComplex& c,
                                   const std::vector<Rational>* alex = nullptr) {
    CollapsedComplex out;
    out.maslov = c.maslov;
    out.ah = alex ? *alex : c.alex;
    out.diff.resize(c.size());
    for (int x = 0; x < c.size(); ++x) {
        std::map<std::pair<int, int>, int> parity;
        for (const auto& [y, sum] : c.diff[x])
            for (const UMonomial& mono : sum.terms) {
                int e = mono.total_degree(c.n);
                if (2 * e != c.maslov[y] - c.maslov[x] + 1)
                    throw invariant_violation_error("collapsed exponent disagrees with Maslov drop");
                parity[{y, e}] ^= 1;
            }
        for (auto& [key, odd] : parity)
            if (odd) out.diff[x].push_back(key);
    }
    return out;
}

/* *** t-modified complexes over the valuation ring *** */
//
// Exponents are integers k in w = v^(1/q); gradings are stored as
// gr2q = 2q*M - 2p*A, an exact integer. Every differential entry's exponent
// is pinned by the gradings: k = (gr2q(y) - gr2q(x))/2 + q.

struct GradedDvrComplex {
    TParameter t;
    std::vector<long long> gr2q;
    std::vector<std::vector<std::pair<int, int>>> diff;  // (target, w-exponent), sorted

    int size() const { return static_cast<int>(gr2q.size()); }
    Rational grading(int i) const { return Rational(gr2q[i], 2 * t.q); }
    int entry_exponent(int x, int y) const {
        long long d = gr2q[y] - gr2q[x];
        if (d % 2 != 0) throw invariant_violation_error("odd gr2q difference");
        return static_cast<int>(d / 2 + t.q);
    }

    friend bool operator==(const GradedDvrComplex& a, const GradedDvrComplex& b) {
        return a.t == b.t && a.gr2q == b.gr2q && a.diff == b.diff;
    }
};

namespace detail {

inline long long gr2q_of(const TParameter& t, long long maslov, const Rational& ah) {
    Rational a2 = ah * Rational(2);
    if (!a2.is_integer()) throw invariant_violation_error("A-grading not half-integral");
    return 2 * t.q * maslov - t.p * a2.num;
}

inline std::string rect_str(const Rect& r) {
    return "rows [" + std::to_string(r.row0) + "," + std::to_string(r.row0 + r.rowspan) +
           ") cols [" + std::to_string(r.col0) + "," + std::to_string(r.col0 + r.colspan) + ")";
}

}  // namespace detail

enum class AlexKind { symmetrized, prime };

// The t-modified complex built directly from rectangle counts: the entry for
// an empty rectangle r is w^k with k = p|X cap r| + 2q|O cap r| - p sum m_i.
inline GradedDvrComplex build_t_complex(const GridDiagram& g, const TParameter& t,
                                        AlexKind kind = AlexKind::symmetrized) {
    validate(g);
    std::string why;
    if (!is_balanced(g, &why)) throw invalid_input_error("diagram not balanced: " + why);

    std::vector<State> states = all_states(g.n);
    StateIndex index(states);
    PlanarDiagram pd = planar_realization(g);
    std::vector<Rational> ah = kind == AlexKind::prime ? alexander_prime(g) : alexander_ah(g);

    GradedDvrComplex c;
    c.t = t;
    c.gr2q.reserve(states.size());
    for (size_t i = 0; i < states.size(); ++i)
        c.gr2q.push_back(detail::gr2q_of(t, maslov(pd, states[i]), ah[i]));

    int max_m = 1;
    for (int w : m_weights(g)) max_m = std::max(max_m, w);

    std::vector<std::map<int, int>> parity(states.size());
    detail::for_each_empty_rect(g, states, index,
                                [&](int xi, int yi, const Rect& r, const RectCounts& k) {
                                    long long e = t.p * k.xs + 2 * t.q * k.os - t.p * k.msum;
                                    if (e < 0)
                                        throw inadmissible_parameter_error(
                                            "t = " + t.str() + " inadmissible: rectangle " +
                                            detail::rect_str(r) + " has w-exponent " +
                                            std::to_string(e) + "; t <= " + Rational(2, max_m).str() +
                                            " required");
                                    if (2 * e != c.gr2q[yi] - c.gr2q[xi] + 2 * t.q)
                                        throw invariant_violation_error(
                                            "rectangle exponent disagrees with t-grading drop");
                                    parity[xi][yi] ^= 1;
                                });

    c.diff.resize(states.size());
    for (size_t xi = 0; xi < states.size(); ++xi)
        for (auto& [yi, odd] : parity[xi])
            if (odd) c.diff[xi].emplace_back(yi, c.entry_exponent(static_cast<int>(xi), yi));
    return c;
}

// The formal route: tensor the collapsed complex with the valuation ring via
// U = v^2 and regrade; entries become w^((gr2q(y) - gr2q(x))/2 + q).
inline GradedDvrComplex formal_t_modify(const CollapsedComplex& cU, const TParameter& t) {
    GradedDvrComplex c;
    c.t = t;
    c.gr2q.reserve(cU.size());
    for (int i = 0; i < cU.size(); ++i)
        c.gr2q.push_back(detail::gr2q_of(t, cU.maslov[i], cU.ah[i]));

    c.diff.resize(cU.size());
    for (int x = 0; x < cU.size(); ++x) {
        std::map<int, int> parity;
        for (auto [y, e] : cU.diff[x]) {
            if (2 * e != cU.maslov[y] - cU.maslov[x] + 1)
                throw invariant_violation_error("collapsed entry is not Maslov-degree -1");
            long long d = c.gr2q[y] - c.gr2q[x];
            if (d % 2 != 0) throw invariant_violation_error("non-integral w-exponent in t-modification");
            if (d / 2 + t.q < 0)
                throw inadmissible_parameter_error("t = " + t.str() +
                                                   " inadmissible: negative w-exponent " +
                                                   std::to_string(d / 2 + t.q) +
                                                   " in formal t-modification");
            parity[y] ^= 1;
        }
        for (auto& [y, odd] : parity)
            if (odd) c.diff[x].emplace_back(y, c.entry_exponent(x, y));
    }
    return c;
}

/* *** Chain maps: multivariable, collapsed, and lifted *** */

// GF(2) matrix of U-monomials; rows indexed by source generators.
struct UMatrix {
    int src = 0, dst = 0;
    std::vector<std::vector<std::pair<int, MonomialSum>>> rows;

    static UMatrix zero(int src, int dst) {
        UMatrix f;
        f.src = src;
        f.dst = dst;
        f.rows.resize(src);
        return f;
    }
    static UMatrix identity(int n) {
        UMatrix f = zero(n, n);
        for (int i = 0; i < n; ++i) f.rows[i].emplace_back(i, MonomialSum::of(UMonomial::one()));
        return f;
    }
    void add_entry(int x, int y, const UMonomial& mono) {
        auto& row = rows[x];
        auto it = std::lower_bound(row.begin(), row.end(), y,
                                   [](const auto& a, int b) { return a.first < b; });
        if (it == row.end() || it->first != y) it = row.insert(it, {y, MonomialSum::zero()});
        it->second.add(mono);
        if (it->second.terms.empty()) row.erase(it);
    }

    friend bool operator==(const UMatrix& a, const UMatrix& b) {
        return a.src == b.src && a.dst == b.dst && a.rows == b.rows;
    }
};

// g after f (apply f, then g).
inline UMatrix compose(const UMatrix& g, const UMatrix& f) {
    if (f.dst != g.src) throw invariant_violation_error("composition size mismatch");
    UMatrix h = UMatrix::zero(f.src, g.dst);
    for (int x = 0; x < f.src; ++x)
        for (const auto& [y, s1] : f.rows[x])
            for (const auto& [z, s2] : g.rows[y]) {
                MonomialSum prod = s1.times(s2);
                for (const UMonomial& mono : prod.terms) h.add_entry(x, z, mono);
            }
    return h;
}

// Mod-2 sum of equally shaped matrices.
inline UMatrix add(const UMatrix& a, const UMatrix& b) {
    if (a.src != b.src || a.dst != b.dst) throw invariant_violation_error("matrix sum size mismatch");
    UMatrix h = a;
    for (int x = 0; x < b.src; ++x)
        for (const auto& [y, s] : b.rows[x])
            for (const UMonomial& mono : s.terms) h.add_entry(x, y, mono);
    return h;
}

inline UMatrix differential_matrix(const FilteredComplex& c) {
    UMatrix f = UMatrix::zero(c.size(), c.size());
    for (int x = 0; x < c.size(); ++x)
        for (const auto& [y, s] : c.diff[x])
            for (const UMonomial& mono : s.terms) f.add_entry(x, y, mono);
    return f;
}

// Single-variable monomial matrix between collapsed complexes.
struct CollapsedMatrix {
    std::vector<std::vector<std::pair<int, int>>> rows;  // (target, U-exponent)

    static CollapsedMatrix identity(int n) {
        CollapsedMatrix f;
        f.rows.resize(n);
        for (int i = 0; i < n; ++i) f.rows[i].emplace_back(i, 0);
        return f;
    }
    friend bool operator==(const CollapsedMatrix& a, const CollapsedMatrix& b) = default;
};

inline CollapsedMatrix collapse_map(const UMatrix& f, int nvars) {
    CollapsedMatrix out;
    out.rows.resize(f.src);
    for (int x = 0; x < f.src; ++x) {
        std::map<std::pair<int, int>, int> parity;
        for (const auto& [y, sum] : f.rows[x])
            for (const UMonomial& mono : sum.terms) parity[{y, mono.total_degree(nvars)}] ^= 1;
        for (auto& [key, odd] : parity)
            if (odd) out.rows[x].push_back(key);
    }
    return out;
}

inline CollapsedMatrix compose(const CollapsedMatrix& g, const CollapsedMatrix& f) {
    CollapsedMatrix h;
    h.rows.resize(f.rows.size());
    for (size_t x = 0; x < f.rows.size(); ++x) {
        std::map<std::pair<int, int>, int> parity;
        for (auto [y, e1] : f.rows[x])
            for (auto [z, e2] : g.rows[y]) parity[{z, e1 + e2}] ^= 1;
        for (auto& [key, odd] : parity)
            if (odd) h.rows[x].push_back(key);
    }
    return h;
}

// Matrix over the valuation ring: entries w^k, GF(2) parity per (target, k).
struct DvrMatrix {
    std::vector<std::vector<std::pair<int, int>>> rows;  // (target, w-exponent)

    static DvrMatrix identity(int n) {
        DvrMatrix f;
        f.rows.resize(n);
        for (int i = 0; i < n; ++i) f.rows[i].emplace_back(i, 0);
        return f;
    }
    friend bool operator==(const DvrMatrix& a, const DvrMatrix& b) = default;
};

inline DvrMatrix differential_matrix(const GradedDvrComplex& c) {
    DvrMatrix f;
    f.rows.resize(c.size());
    for (int x = 0; x < c.size(); ++x)
        for (auto [y, k] : c.diff[x]) f.rows[x].emplace_back(y, k);
    return f;
}

inline DvrMatrix compose(const DvrMatrix& g, const DvrMatrix& f) {
    DvrMatrix h;
    h.rows.resize(f.rows.size());
    for (size_t x = 0; x < f.rows.size(); ++x) {
        std::map<std::pair<int, int>, int> parity;
        for (auto [y, e1] : f.rows[x])
            for (auto [z, e2] : g.rows[y]) parity[{z, e1 + e2}] ^= 1;
        for (auto& [key, odd] : parity)
            if (odd) h.rows[x].push_back(key);
    }
    return h;
}

// Lifts a Maslov-degree-0 chain map of collapsed complexes to the t-level:
// each entry c*U^e from x to y becomes c*w^((gr2q(y)-gr2q(x))/2), the
// degree-0 monomial. Requires the lift to stay in the ring (exponents >= 0).
inline DvrMatrix lift_chain_map_t(const CollapsedMatrix& f, const CollapsedComplex& src,
                                  const CollapsedComplex& dst, const TParameter& t) {
    std::vector<long long> gs, gd;
    for (int i = 0; i < src.size(); ++i) gs.push_back(detail::gr2q_of(t, src.maslov[i], src.ah[i]));
    for (int i = 0; i < dst.size(); ++i) gd.push_back(detail::gr2q_of(t, dst.maslov[i], dst.ah[i]));

    DvrMatrix out;
    out.rows.resize(f.rows.size());
    for (size_t x = 0; x < f.rows.size(); ++x)
        for (auto [y, e] : f.rows[x]) {
            if (2 * e != dst.maslov[y] - src.maslov[x])
                throw invariant_violation_error("lift input is not Maslov-degree-0");
            long long d = gd[y] - gs[static_cast<int>(x)];
            if (d % 2 != 0) throw invariant_violation_error("non-integral w-exponent in lift");
            if (d < 0)
                throw invariant_violation_error("map is not filtered at t = " + t.str() +
                                                ": negative lift exponent");
            out.rows[x].emplace_back(y, static_cast<int>(d / 2));
        }
    return out;
}

/* *** Text export *** */

inline std::string export_complex(const FilteredComplex& c) {
    std::ostringstream os;
    for (int i = 0; i < c.size(); ++i)
        os << "gen " << i << " " << c.maslov[i] << " " << c.alex[i].str() << "\n";
    for (int x = 0; x < c.size(); ++x)
        for (const auto& [y, sum] : c.diff[x])
            for (const UMonomial& mono : sum.terms)
                os << "d " << x << " " << y << " " << mono.str(c.n) << "\n";
    return os.str();
}

inline std::string export_complex(const GradedDvrComplex& c) {
    std::ostringstream os;
    for (int i = 0; i < c.size(); ++i) os << "gen " << i << " " << c.grading(i).str() << "\n";
    for (int x = 0; x < c.size(); ++x)
        for (auto [y, k] : c.diff[x])
            os << "d " << x << " " << y << " " << (k == 0 ? std::string("1") : "w^" + std::to_string(k))
               << "\n";
    return os.str();
}

}  // namespace gridups
