#pragma once

#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "gridups/complex.hpp"
#include "gridups/gf2.hpp"
#include "gridups/rational.hpp"

namespace gridups {

// Graded module over the one-variable valuation ring: free summands by
// grading, torsion summands (grading of the cycle, annihilator exponent).
struct ModuleDecomposition {
    std::multiset<Rational> free;
    std::multiset<std::pair<Rational, int>> torsion;

    friend bool operator==(const ModuleDecomposition& a, const ModuleDecomposition& b) = default;

    std::string str() const {
        std::ostringstream os;
        for (const Rational& g : free) os << "free " << g.str() << "\n";
        for (const auto& [g, k] : torsion) os << "tors " << g.str() << " " << k << "\n";
        return os.str();
    }
};

// Graded Morse cancellation over the valuation ring. Pivots are processed in
// order of increasing valuation (ties lexicographic); a pivot of valuation 0
// cancels outright, one of valuation k > 0 splits off a torsion summand of
// order k at the grading of its target. Minimality of the pivot keeps the
// basis change w^(-k)*dx integral, so each step is a direct-sum splitting.
inline ModuleDecomposition dvr_reduce(const GradedDvrComplex& c) {
    int n = c.size();
    std::vector<char> alive(n, 1);
    std::vector<std::set<int>> out(n), in(n);
    using Entry = std::tuple<int, int, int>;  // (valuation, source, target)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> pq;

    for (int x = 0; x < n; ++x)
        for (auto [y, k] : c.diff[x]) {
            if (k != c.entry_exponent(x, y))
                throw invariant_violation_error("entry valuation disagrees with gradings");
            out[x].insert(y);
            in[y].insert(x);
            pq.push({k, x, y});
        }

    ModuleDecomposition dec;
    while (!pq.empty()) {
        auto [k, x0, y0] = pq.top();
        pq.pop();
        if (x0 == y0) continue;  // self-entries always tie with a usable pivot
        if (!alive[x0] || !alive[y0] || !out[x0].count(y0)) continue;

        alive[x0] = alive[y0] = 0;
        if (k > 0) dec.torsion.insert({c.grading(y0), k});

        std::vector<int> ins, outs;
        for (int a : in[y0])
            if (a != x0 && a != y0) ins.push_back(a);
        for (int b : out[x0])
            if (b != x0 && b != y0) outs.push_back(b);

        for (int a : in[x0]) out[a].erase(x0);
        for (int b : out[y0]) in[b].erase(y0);
        for (int a : ins) out[a].erase(y0);
        for (int b : outs) in[b].erase(x0);
        out[x0].clear();
        out[y0].clear();
        in[x0].clear();
        in[y0].clear();

        for (int a : ins)
            for (int b : outs) {
                if (out[a].count(b)) {
                    out[a].erase(b);
                    in[b].erase(a);
                } else {
                    out[a].insert(b);
                    in[b].insert(a);
                    pq.push({c.entry_exponent(a, b), a, b});
                }
            }
    }

    for (int x = 0; x < n; ++x) {
        if (!alive[x]) continue;
        if (!out[x].empty() || !in[x].empty())
            throw invariant_violation_error("reduction terminated with live entries");
        dec.free.insert(c.grading(x));
    }
    return dec;
}

// Relabels generators; used to exercise pivot-order independence.
inline GradedDvrComplex permute_complex(const GradedDvrComplex& c, const std::vector<int>& perm) {
    GradedDvrComplex p;
    p.t = c.t;
    p.gr2q.resize(c.size());
    p.diff.resize(c.size());
    for (int i = 0; i < c.size(); ++i) p.gr2q[perm[i]] = c.gr2q[i];
    for (int x = 0; x < c.size(); ++x) {
        for (auto [y, k] : c.diff[x]) p.diff[perm[x]].emplace_back(perm[y], k);
        std::sort(p.diff[perm[x]].begin(), p.diff[perm[x]].end());
    }
    return p;
}

// Rank of the homology after inverting w: substitute w = 1 and count
// generators minus twice the GF(2) rank of the differential.
inline long long fraction_field_free_rank(const GradedDvrComplex& c) {
    BitMatrix mat(c.size(), c.size());
    for (int x = 0; x < c.size(); ++x)
        for (auto [y, k] : c.diff[x]) mat.set(x, y);
    return c.size() - 2 * gf2_rank(mat);
}

// Signed generator counts per grading class (gr2q mod 2q), sign alternating
// with the integer part. Cancelled valuation-0 pairs contribute zero, so the
// map agrees between a complex and its reduction.
inline std::map<long long, long long> euler_class_map(const std::vector<long long>& gr2q,
                                                      long long q) {
    std::map<long long, long long> cls;
    for (long long g : gr2q) {
        long long fl = g >= 0 ? g / (2 * q) : -((-g + 2 * q - 1) / (2 * q));
        long long res = g - 2 * q * fl;
        cls[res] += fl % 2 == 0 ? 1 : -1;
    }
    for (auto it = cls.begin(); it != cls.end();)
        it = it->second == 0 ? cls.erase(it) : std::next(it);
    return cls;
}

inline std::map<long long, long long> euler_class_map(const GradedDvrComplex& c) {
    return euler_class_map(c.gr2q, c.t.q);
}

inline std::map<long long, long long> euler_class_map(const ModuleDecomposition& dec, long long q) {
    std::vector<long long> gr2q;
    auto to2q = [&](const Rational& g) {
        Rational v = g * Rational(2 * q);
        if (!v.is_integer()) throw invariant_violation_error("grading outside the (1/2q)Z lattice");
        return v.num;
    };
    for (const Rational& g : dec.free) gr2q.push_back(to2q(g));
    for (const auto& [g, k] : dec.torsion) {
        gr2q.push_back(to2q(g));
        gr2q.push_back(to2q(g) + 2 * q - 2 * k);
    }
    return euler_class_map(gr2q, q);
}

}  // namespace gridups
