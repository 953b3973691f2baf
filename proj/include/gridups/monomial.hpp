#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "gridups/errors.hpp"

namespace gridups {

/* *** Monomials in U_1..U_n (variables indexed by grid row of their O) *** */

// Packed exponent vector, 4 bits per variable. Grid sizes here are <= 16 and
// every exponent this library produces stays in single digits.
struct UMonomial {
    uint64_t bits = 0;

    static UMonomial one() { return UMonomial{}; }
    static UMonomial var(int i, int e = 1) {
        UMonomial m;
        m.bits = static_cast<uint64_t>(e) << (4 * i);
        return m;
    }

    int exp(int i) const { return static_cast<int>((bits >> (4 * i)) & 0xF); }

    UMonomial times(const UMonomial& o) const {
        UMonomial r;
        r.bits = bits + o.bits;
        if ((bits | o.bits | r.bits) & 0x8888888888888888ULL)
            throw invariant_violation_error("monomial exponent overflow");
        return r;
    }

    UMonomial times_var(int i, int e = 1) const { return times(var(i, e)); }

    bool is_one() const { return bits == 0; }

    // Total degree weighted per variable (weights[i] multiplies exp(i)).
    long long weighted_degree(const std::vector<int>& weights) const {
        long long d = 0;
        for (size_t i = 0; i < weights.size(); ++i) d += static_cast<long long>(exp(static_cast<int>(i))) * weights[i];
        return d;
    }

    int total_degree(int nvars) const {
        int d = 0;
        for (int i = 0; i < nvars; ++i) d += exp(i);
        return d;
    }

    bool uses_any(const std::vector<int>& vars) const {
        for (int i : vars)
            if (exp(i) > 0) return true;
        return false;
    }

    friend bool operator==(const UMonomial& a, const UMonomial& b) { return a.bits == b.bits; }
    friend bool operator<(const UMonomial& a, const UMonomial& b) { return a.bits < b.bits; }

    std::string str(int nvars) const {
        std::string s;
        for (int i = 0; i < nvars; ++i) {
            int e = exp(i);
            if (e == 0) continue;
            if (!s.empty()) s += "*";
            s += "U" + std::to_string(i + 1);
            if (e > 1) s += "^" + std::to_string(e);
        }
        return s.empty() ? "1" : s;
    }
};

// GF(2) sum of monomials: a sorted set with symmetric-difference addition.
struct MonomialSum {
    std::vector<UMonomial> terms; // sorted, no duplicates

    static MonomialSum zero() { return MonomialSum{}; }
    static MonomialSum of(const UMonomial& m) { return MonomialSum{{m}}; }

    bool is_zero() const { return terms.empty(); }

    void add(const UMonomial& m) {
        auto it = std::lower_bound(terms.begin(), terms.end(), m);
        if (it != terms.end() && *it == m)
            terms.erase(it);
        else
            terms.insert(it, m);
    }

    void add(const MonomialSum& o) {
        for (const auto& m : o.terms) add(m);
    }

    MonomialSum times(const UMonomial& m) const {
        MonomialSum r;
        for (const auto& t : terms) r.add(t.times(m));
        return r;
    }

    MonomialSum times(const MonomialSum& o) const {
        MonomialSum r;
        for (const auto& a : terms)
            for (const auto& b : o.terms) r.add(a.times(b));
        return r;
    }

    friend bool operator==(const MonomialSum& a, const MonomialSum& b) {
        return a.terms == b.terms;
    }

    std::string str(int nvars) const {
        if (terms.empty()) return "0";
        std::string s;
        for (const auto& t : terms) {
            if (!s.empty()) s += " + ";
            s += t.str(nvars);
        }
        return s;
    }
};

/* *** GF(2) sums of powers of the single valuation variable w *** */

struct WSum {
    std::vector<int> exps; // sorted, no duplicates

    static WSum zero() { return WSum{}; }
    static WSum of(int e) { return WSum{{e}}; }

    bool is_zero() const { return exps.empty(); }

    void add(int e) {
        auto it = std::lower_bound(exps.begin(), exps.end(), e);
        if (it != exps.end() && *it == e)
            exps.erase(it);
        else
            exps.insert(it, e);
    }

    void add(const WSum& o) {
        for (int e : o.exps) add(e);
    }

    WSum shifted(int e) const {
        WSum r;
        r.exps.reserve(exps.size());
        for (int x : exps) r.exps.push_back(x + e);
        return r;
    }

    WSum times(const WSum& o) const {
        WSum r;
        for (int a : exps)
            for (int b : o.exps) r.add(a + b);
        return r;
    }

    friend bool operator==(const WSum& a, const WSum& b) { return a.exps == b.exps; }

    std::string str() const {
        if (exps.empty()) return "0";
        std::string s;
        for (int e : exps) {
            if (!s.empty()) s += " + ";
            s += e == 0 ? std::string("1") : "w^" + std::to_string(e);
        }
        return s;
    }
};

} // namespace gridups
