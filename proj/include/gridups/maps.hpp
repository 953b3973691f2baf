#pragma once

// Explicit chain maps between grid complexes: the destabilization /
// stabilization pair through the mapping cone of U1-U2, its homotopy, and
// the diagonal saddle maps at the t-level.
//
// Conventions. Circles and cells are indexed mod n; the cell (r,c) spans
// circles r..r+1 horizontally and c..c+1 vertically, so the marking stored
// at diagram cell (r,c) sits in that square. A stabilization at the X in
// cell (r,c) of g introduces the point c = (rc,cc) = (r+1,c+1) of g', the
// corner shared by the four cells of the new 2x2 block:
//   NE (rc,cc) = new O (O1), NW (rc,cc-1) = new X (X1),
//   SE (rc-1,cc) = moved X (X2), SW = the vacated cell.
// O2 is the O of the split row, living in g'-row rec.o2_row.
//
// States of g' split into I (containing c) and N (not containing c); the
// bijection e identifies I-states with states of g by deleting c. All
// D/S/K matrices are written over the n' variables of g', one per g'-row;
// U1 is the variable of row rc and never appears in a weight.

#include <algorithm>
#include <utility>
#include <vector>

#include <gridups/combinatorics.hpp>
#include <gridups/complex.hpp>
#include <gridups/diagram.hpp>
#include <gridups/errors.hpp>
#include <gridups/parallel.hpp>

namespace gridups {

/* *** Positive domains *** */

struct Domain {
    int n = 0;
    State x, y;
    std::vector<int> mult;  // n*n cells, row-major

    int at(int r, int c) const {
        return mult[static_cast<size_t>(detail::wrap(r, n)) * n + detail::wrap(c, n)];
    }
    bool trivial() const {
        return std::all_of(mult.begin(), mult.end(), [](int v) { return v == 0; });
    }
};

// Complexity: 1 for the trivial domain, otherwise the number of horizontal
// boundary segments counted with multiplicity. The flow across horizontal
// circle a at column k is b = p(a,k)-p(a-1,k); each cyclic ascent of the
// positive (resp. negative) part of b opens one segment.
inline int domain_complexity(const Domain& p) {
    if (p.trivial()) return 1;
    int segs = 0;
    for (int a = 0; a < p.n; ++a) {
        for (int k = 0; k < p.n; ++k) {
            auto flow = [&](int col) { return p.at(a, col) - p.at(a - 1, col); };
            int cur = flow(k), prev = flow(k - 1);
            segs += std::max(0, std::max(cur, 0) - std::max(prev, 0));
            segs += std::max(0, std::max(-cur, 0) - std::max(-prev, 0));
        }
    }
    return segs;
}

namespace detail {

// Corner defect of p at the point (a,b): NE + SW - NW - SE multiplicities.
inline int corner_defect(const Domain& p, int a, int b) {
    return p.at(a, b) + p.at(a - 1, b - 1) - p.at(a, b - 1) - p.at(a - 1, b);
}

inline bool three_adjoining_zero(const Domain& p, int a, int b) {
    int zeros = (p.at(a, b) == 0) + (p.at(a, b - 1) == 0) + (p.at(a - 1, b) == 0) +
                (p.at(a - 1, b - 1) == 0);
    return zeros >= 3;
}

inline bool interior_point(const Domain& p, int a, int b) {
    return p.at(a, b) > 0 && p.at(a, b - 1) > 0 && p.at(a - 1, b) > 0 && p.at(a - 1, b - 1) > 0;
}

}  // namespace detail

// All positive domains from x to y with every multiplicity <= cap. The
// corner defects chi_x - chi_y determine the table up to one free offset
// per row and per column; cell (a,0) carries the row offset directly and
// the column offsets range over independent intervals.
inline std::vector<Domain> enumerate_positive_domains(int n, const State& x, const State& y,
                                                      int cap) {
    std::vector<int> defect(static_cast<size_t>(n) * n, 0);
    for (int a = 0; a < n; ++a) {
        defect[static_cast<size_t>(a) * n + x[a]] += 1;
        defect[static_cast<size_t>(a) * n + y[a]] -= 1;
    }
    // P(a,b) = sum of defects over points (a',b') with 1 <= a' <= a, 1 <= b' <= b.
    std::vector<int> part(static_cast<size_t>(n) * n, 0);
    for (int a = 1; a < n; ++a)
        for (int b = 1; b < n; ++b)
            part[static_cast<size_t>(a) * n + b] = defect[static_cast<size_t>(a) * n + b] +
                                                   part[static_cast<size_t>(a - 1) * n + b] +
                                                   part[static_cast<size_t>(a) * n + b - 1] -
                                                   part[static_cast<size_t>(a - 1) * n + b - 1];
    auto P = [&](int a, int b) { return part[static_cast<size_t>(a) * n + b]; };

    std::vector<Domain> out;
    std::vector<int> rr(n, 0), cc(n, 0), lo(n, 0), hi(n, 0);
    auto emit = [&]() {
        Domain d;
        d.n = n;
        d.x = x;
        d.y = y;
        d.mult.resize(static_cast<size_t>(n) * n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                d.mult[static_cast<size_t>(a) * n + b] = P(a, b) + rr[a] + cc[b];
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (detail::corner_defect(d, a, b) != defect[static_cast<size_t>(a) * n + b])
                    throw invariant_violation_error("domain table violates its corner defects");
        out.push_back(std::move(d));
    };
    auto sweep_cols = [&](auto&& self, int b) -> void {
        if (b == n) {
            emit();
            return;
        }
        for (cc[b] = lo[b]; cc[b] <= hi[b]; ++cc[b]) self(self, b + 1);
    };
    auto sweep_rows = [&](auto&& self, int a) -> void {
        if (a == n) {
            for (int b = 1; b < n; ++b) {
                lo[b] = -P(0, b) - rr[0];
                hi[b] = cap - P(0, b) - rr[0];
                for (int i = 1; i < n; ++i) {
                    lo[b] = std::max(lo[b], -P(i, b) - rr[i]);
                    hi[b] = std::min(hi[b], cap - P(i, b) - rr[i]);
                }
                if (lo[b] > hi[b]) return;
            }
            sweep_cols(sweep_cols, 1);
            return;
        }
        for (rr[a] = 0; rr[a] <= cap; ++rr[a]) self(self, a + 1);
    };
    sweep_rows(sweep_rows, 0);
    return out;
}

enum class DomainKind { iL, iR, oL, oR, K1, K2, K3 };

namespace detail {

inline int moved_rows(const State& x, const State& y) {
    int m = 0;
    for (size_t i = 0; i < x.size(); ++i) m += x[i] != y[i];
    return m;
}

// Points of x and y as (row circle, column circle) pairs, deduplicated.
inline std::vector<std::pair<int, int>> endpoint_points(const State& x, const State& y) {
    std::vector<std::pair<int, int>> pts;
    for (size_t i = 0; i < x.size(); ++i) {
        pts.emplace_back(static_cast<int>(i), x[i]);
        if (y[i] != x[i]) pts.emplace_back(static_cast<int>(i), y[i]);
    }
    return pts;
}

// The four in/out types. x is arbitrary for iL/iR and contains c for oL/oR;
// nontrivial membership pins the multiplicities around c to a ladder with
// one offset square. The trivial domain is of type iL and oL only: ds1
// forces D^{iR} (resp. S^{oR}) to vanish on it.
inline bool domain_is_in_out(const Domain& p, int rc, int cc, DomainKind kind) {
    bool left = kind == DomainKind::iL || kind == DomainKind::oL;
    if (p.trivial()) return left && p.x == p.y;

    int ne = p.at(rc, cc), nw = p.at(rc, cc - 1), se = p.at(rc - 1, cc), sw = p.at(rc - 1, cc - 1);
    int k;
    switch (kind) {
        case DomainKind::iL:
            if (!(ne == nw && nw == se && sw == ne - 1)) return false;
            k = ne;
            break;
        case DomainKind::iR:
            if (!(ne == nw && nw == sw && se == ne + 1)) return false;
            k = ne;
            break;
        case DomainKind::oL:
            if (!(ne == se && se == sw && nw == ne - 1)) return false;
            k = ne;
            break;
        default:
            if (!(nw == se && se == sw && ne == nw + 1)) return false;
            k = nw;
            break;
    }
    if (k < (left ? 1 : 0)) return false;
    if (moved_rows(p.x, p.y) != 2 * k + (left ? 1 : 2)) return false;
    for (auto [a, b] : endpoint_points(p.x, p.y)) {
        if (a == rc && b == cc) continue;
        if (!three_adjoining_zero(p, a, b)) return false;
    }
    return true;
}

// K-type membership. Points of the symmetric difference are either interior
// to p or have three adjoining squares of multiplicity zero, and unmoved
// state points always satisfy the three-zero condition. K1 places the single
// interior point on the vertical circle through c, K2 prescribes the interior
// count, and K3 uses the K2 count with equal multiplicities at the three new
// markings plus an upward boundary segment right of c. Every kind requires
// Maslov index 2*O1 - 1, which makes the U1-free counting weight degree +1.
inline bool domain_is_k(const Domain& p, int rc, int cc, DomainKind kind) {
    int moved = moved_rows(p.x, p.y);
    if (moved == 0 || (2 * moved) % 4 != 0) return false;
    int m = 2 * moved;

    int interior = 0, interior_on_beta = 0;
    for (auto [a, b] : endpoint_points(p.x, p.y)) {
        if (p.x[a] != p.y[a]) {
            if (interior_point(p, a, b)) {
                ++interior;
                interior_on_beta += b == cc;
            } else if (!three_adjoining_zero(p, a, b)) {
                return false;
            }
        } else if (!three_adjoining_zero(p, a, b)) {
            return false;
        }
    }

    int o1 = p.at(rc, cc), x1 = p.at(rc, cc - 1), x2 = p.at(rc - 1, cc);

    // Maslov index via corner averages, scaled by 4.
    int mu4 = 0;
    for (size_t i = 0; i < p.x.size(); ++i) {
        int a = static_cast<int>(i);
        for (int b : {p.x[i], p.y[i]})
            mu4 += p.at(a, b) + p.at(a, b - 1) + p.at(a - 1, b) + p.at(a - 1, b - 1);
    }
    if (mu4 != 4 * (2 * o1 - 1)) return false;

    switch (kind) {
        case DomainKind::K1:
            return interior == 1 && interior_on_beta == 1 && o1 == x2 && o1 == x1 + 1;
        case DomainKind::K2:
            return m >= 4 && interior == (m - 4) / 4 && o1 == x2 && o1 == x1 + 1;
        default: {
            if (m < 4 || interior != (m - 4) / 4 || o1 != x2 || o1 != x1) return false;
            for (int i = 0; i < p.n; ++i)
                if (p.at(i, cc) > p.at(i, cc + 1)) return true;
            return false;
        }
    }
}

inline bool state_contains_c(const State& s, int rc, int cc) { return s[rc] == cc; }

}  // namespace detail

inline std::vector<Domain> enumerate_typed_domains(const GridDiagram& gp, const StabRecord& rec,
                                                   const State& x, const State& y, DomainKind kind,
                                                   int cap) {
    if (static_cast<int>(x.size()) != gp.n || static_cast<int>(y.size()) != gp.n)
        throw invalid_input_error("state size does not match the stabilized diagram");
    bool xc = detail::state_contains_c(x, rec.rc, rec.cc);
    bool yc = detail::state_contains_c(y, rec.rc, rec.cc);
    switch (kind) {
        case DomainKind::iL:
        case DomainKind::iR:
            if (!yc) throw invalid_input_error("in-type domains end at a state containing c");
            break;
        case DomainKind::oL:
        case DomainKind::oR:
            if (!xc) throw invalid_input_error("out-type domains start at a state containing c");
            break;
        default:
            if (xc || yc) throw invalid_input_error("K-type domains connect states avoiding c");
            break;
    }

    std::vector<Domain> out;
    for (Domain& p : enumerate_positive_domains(gp.n, x, y, cap)) {
        bool keep = (kind == DomainKind::K1 || kind == DomainKind::K2 || kind == DomainKind::K3)
                        ? detail::domain_is_k(p, rec.rc, rec.cc, kind)
                        : detail::domain_is_in_out(p, rec.rc, rec.cc, kind);
        if (keep) out.push_back(std::move(p));
    }
    return out;
}

/* *** The e bijection and the cone *** */

// e deletes the point c from an I-state of g'; rows and columns renumber
// through the stabilization record.
inline State e_state(const StabRecord& rec, const State& y) {
    int np = static_cast<int>(rec.row_map.size());
    if (y[rec.rc] != rec.cc) throw invalid_input_error("e is defined on states containing c");
    State s(static_cast<size_t>(np) - 1);
    for (int j = 0; j < np; ++j)
        if (j != rec.rc) s[rec.row_map[j]] = rec.col_map[y[j]];
    return s;
}

inline State e_inverse(const StabRecord& rec, const State& s) {
    int np = static_cast<int>(rec.row_map.size());
    std::vector<int> row_in(np, 0), col_in(np, 0);
    for (int j = 0; j < np; ++j) {
        if (rec.row_map[j] >= 0) row_in[rec.row_map[j]] = j;
        if (rec.col_map[j] >= 0) col_in[rec.col_map[j]] = j;
    }
    State y(static_cast<size_t>(np));
    y[rec.rc] = rec.cc;
    for (int i = 0; i + 1 < np; ++i) y[row_in[i]] = col_in[s[i]];
    return y;
}

namespace detail {

inline void check_stab_pair(const GridDiagram& g, const GridDiagram& gp, const StabRecord& rec) {
    if (gp.n != g.n + 1 || static_cast<int>(rec.row_map.size()) != gp.n)
        throw invalid_input_error("stabilization record does not fit the diagram pair");
    StabRecord fresh;
    GridDiagram replay = rec.is_birth ? birth_move(g, rec.rc - 1, rec.cc - 1, &fresh)
                                      : stabilize_prime(g, rec.rc - 1, rec.cc - 1, &fresh);
    if (!(replay == gp) || fresh.o2_row != rec.o2_row || fresh.row_map != rec.row_map ||
        fresh.col_map != rec.col_map)
        throw invalid_input_error("stabilization record does not reproduce the stabilized diagram");
}

inline std::vector<int> o_columns(const GridDiagram& g) {
    std::vector<int> ocol(g.n, -1);
    for (int r = 0; r < g.n; ++r)
        for (int c = 0; c < g.n; ++c)
            if (g.has_o(r, c)) ocol[r] = c;
    return ocol;
}

// U-weight of a domain: multiplicities at every O of g' except O1.
inline UMonomial domain_weight(const Domain& p, const std::vector<int>& ocol, int skip_row) {
    UMonomial m = UMonomial::one();
    for (int i = 0; i < p.n; ++i) {
        if (i == skip_row || ocol[i] < 0) continue;
        int e = p.at(i, ocol[i]);
        if (e > 0) m = m.times_var(i, e);
    }
    return m;
}

// Rewrites the variables of a g-complex matrix into g'-rows.
inline UMonomial remap_vars(const UMonomial& mono, const std::vector<int>& to, int nvars) {
    UMonomial out = UMonomial::one();
    for (int i = 0; i < nvars; ++i)
        if (int e = mono.exp(i); e > 0) out = out.times_var(to[i], e);
    return out;
}

}  // namespace detail

// Cone(U1-U2) on CF^-(g)[U1] next to the stabilized complex, both over the
// g'-variables. Cone generators: L-copy (index i) carries the [[1,1]] shift,
// R-copy (index N+i) is the plain one; the connecting map adds U1+U2.
struct ConePair {
    int nstates = 0;      // states of g; the cone has 2*nstates generators
    UMatrix cone_diff;    // 2N x 2N
    UMatrix gp_diff;      // N' x N'
};

inline ConePair make_cone_pair(const GridDiagram& g, const GridDiagram& gp,
                               const StabRecord& rec) {
    detail::check_stab_pair(g, gp, rec);
    std::vector<int> g_to_gp(g.n, -1);
    for (int j = 0; j < gp.n; ++j)
        if (rec.row_map[j] >= 0) g_to_gp[rec.row_map[j]] = j;

    FilteredComplex cg = build_cf_minus(g);
    ConePair out;
    out.nstates = cg.size();
    out.cone_diff = UMatrix::zero(2 * cg.size(), 2 * cg.size());
    for (int x = 0; x < cg.size(); ++x) {
        for (const auto& [y, s] : cg.diff[x])
            for (const UMonomial& mono : s.terms) {
                UMonomial m = detail::remap_vars(mono, g_to_gp, g.n);
                out.cone_diff.add_entry(x, y, m);
                out.cone_diff.add_entry(cg.size() + x, cg.size() + y, m);
            }
        out.cone_diff.add_entry(x, cg.size() + x, UMonomial::var(rec.rc));
        out.cone_diff.add_entry(x, cg.size() + x, UMonomial::var(rec.o2_row));
    }
    out.gp_diff = differential_matrix(build_cf_minus(gp));
    return out;
}

/* *** The maps D, S, K *** */

inline UMatrix destabilization_map(const GridDiagram& g, const GridDiagram& gp,
                                   const StabRecord& rec, int cap = 2) {
    detail::check_stab_pair(g, gp, rec);
    std::vector<State> xs = all_states(gp.n);
    std::vector<State> gstates = all_states(g.n);
    StateIndex gidx(gstates);
    std::vector<int> ocol = detail::o_columns(gp);
    int ngen = static_cast<int>(xs.size());
    int N = static_cast<int>(gstates.size());

    UMatrix f = UMatrix::zero(ngen, 2 * N);
    parallel_for(ngen, [&](int xi) {
        for (const State& y : all_states(gp.n)) {
            if (y[rec.rc] != rec.cc) continue;
            int target = gidx.of(e_state(rec, y));
            for (auto [kind, shift] :
                 {std::pair{DomainKind::iL, 0}, std::pair{DomainKind::iR, N}})
                for (const Domain& p : enumerate_typed_domains(gp, rec, xs[xi], y, kind, cap))
                    f.add_entry(xi, shift + target, detail::domain_weight(p, ocol, rec.rc));
        }
    });
    return f;
}

inline UMatrix stabilization_map(const GridDiagram& g, const GridDiagram& gp,
                                 const StabRecord& rec, int cap = 2) {
    detail::check_stab_pair(g, gp, rec);
    std::vector<State> gs = all_states(g.n);
    std::vector<State> gpstates = all_states(gp.n);
    StateIndex gpidx(gpstates);
    std::vector<int> ocol = detail::o_columns(gp);
    int N = static_cast<int>(gs.size());

    UMatrix f = UMatrix::zero(2 * N, static_cast<int>(gpstates.size()));
    parallel_for(N, [&](int si) {
        State x = e_inverse(rec, gs[si]);
        for (const State& y : all_states(gp.n)) {
            for (auto [kind, src] :
                 {std::pair{DomainKind::oL, si}, std::pair{DomainKind::oR, N + si}})
                for (const Domain& p : enumerate_typed_domains(gp, rec, x, y, kind, cap))
                    f.add_entry(src, gpidx.of(y), detail::domain_weight(p, ocol, rec.rc));
        }
    });
    return f;
}

inline UMatrix homotopy_K(const GridDiagram& gp, const StabRecord& rec, int cap = 2) {
    std::vector<State> xs = all_states(gp.n);
    StateIndex gpidx(xs);
    std::vector<int> ocol = detail::o_columns(gp);
    int ngen = static_cast<int>(xs.size());

    UMatrix f = UMatrix::zero(ngen, ngen);
    parallel_for(ngen, [&](int xi) {
        if (xs[xi][rec.rc] == rec.cc) return;
        for (const State& y : all_states(gp.n)) {
            if (y[rec.rc] == rec.cc) continue;
            // A domain may satisfy several of the K conditions; it still counts once.
            for (const Domain& p : enumerate_positive_domains(gp.n, xs[xi], y, cap))
                if (detail::domain_is_k(p, rec.rc, rec.cc, DomainKind::K1) ||
                    detail::domain_is_k(p, rec.rc, rec.cc, DomainKind::K2) ||
                    detail::domain_is_k(p, rec.rc, rec.cc, DomainKind::K3))
                    f.add_entry(xi, gpidx.of(y), detail::domain_weight(p, ocol, rec.rc));
        }
    });
    return f;
}

/* *** Saddle maps *** */

struct SaddleMaps {
    DvrMatrix sigma;  // t-complex of g -> t-complex of g'
    DvrMatrix mu;     // t-complex of g' -> t-complex of g
    GradedDvrComplex src, dst;  // A'-graded t-complexes of g and g'
};

namespace detail {

inline SaddleMaps saddle_maps(const GridDiagram& g, const GridDiagram& gp, int r, int c,
                              const TParameter& t, MoveDescriptor::Kind kind, int wexp) {
    MoveDescriptor mv{kind, r, c};
    if (!(apply_move(g, mv) == gp)) throw invalid_input_error("saddle block pattern mismatch");

    SaddleMaps out;
    out.src = build_t_complex(g, t, AlexKind::prime);
    out.dst = build_t_complex(gp, t, AlexKind::prime);
    int rc = wrap(r + 1, g.n), cc = wrap(c + 1, g.n);

    int n = out.src.size();
    out.sigma.rows.resize(n);
    out.mu.rows.resize(n);
    std::vector<State> states = all_states(g.n);
    for (int i = 0; i < n; ++i) {
        bool has_c = states[i][rc] == cc;
        out.sigma.rows[i].emplace_back(i, has_c ? 0 : wexp);
        out.mu.rows[i].emplace_back(i, has_c ? wexp : 0);
    }
    return out;
}

}  // namespace detail

inline SaddleMaps x_saddle_maps(const GridDiagram& g, const GridDiagram& gp, int r, int c,
                                const TParameter& t) {
    return detail::saddle_maps(g, gp, r, c, t, MoveDescriptor::Kind::xsaddle, t.p);
}

inline SaddleMaps o_saddle_maps(const GridDiagram& g, const GridDiagram& gp, int r, int c,
                                const TParameter& t) {
    return detail::saddle_maps(g, gp, r, c, t, MoveDescriptor::Kind::osaddle, 2 * t.q - t.p);
}

}  // namespace gridups
