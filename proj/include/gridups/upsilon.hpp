#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "gridups/complex.hpp"
#include "gridups/diagram.hpp"
#include "gridups/homology.hpp"
#include "gridups/parallel.hpp"
#include "gridups/rational.hpp"

namespace gridups {

// Upsilon at one parameter: the maximal grading carrying a free summand of
// the reduced t-complex. Values on (1,2] are defined by the reflection
// Y(t) = Y(2-t), available only when every m_i = 1 (otherwise the admissible
// range stops at 2/max m_i and the reflection would mask the restriction).
inline Rational upsilon_at(const GridDiagram& g, TParameter t,
                           AlexKind kind = AlexKind::symmetrized) {
    if (Rational(1) < t.as_rational()) {
        int max_m = 1;
        for (int w : m_weights(g)) max_m = std::max(max_m, w);
        if (max_m > 1)
            throw inadmissible_parameter_error("t = " + t.str() +
                                               " inadmissible: some m_i = " + std::to_string(max_m) +
                                               "; t <= " + Rational(2, max_m).str() + " required");
        t = t.reflected();
    }
    ModuleDecomposition dec = dvr_reduce(build_t_complex(g, t, kind));
    if (dec.free.empty())
        throw invariant_violation_error("reduced t-complex has no free summand");
    return *dec.free.rbegin();
}

// Upsilon' of a tight link diagram: same extraction over the A'-graded
// complex; satisfies Y = Y' - (l-1)t/2.
inline Rational upsilon_prime_at(const GridDiagram& g, const TParameter& t) {
    return upsilon_at(g, t, AlexKind::prime);
}

struct UpsilonProfile {
    long long q = 1;
    std::vector<std::pair<Rational, Rational>> samples;  // (t, value), t = 0, 1/q, ..., 1

    // Value at a sampled parameter; parameters in (1,2] reflect onto [0,1).
    Rational value_at(Rational t) const {
        if (Rational(1) < t) t = Rational(2) - t;
        for (const auto& [s, v] : samples)
            if (s == t) return v;
        throw invalid_input_error("t = " + t.str() + " is not on the sample lattice");
    }

    // Interior sample points where the slope changes.
    std::vector<Rational> breakpoints() const {
        std::vector<Rational> out;
        for (size_t i = 1; i + 1 < samples.size(); ++i) {
            Rational left = samples[i].second - samples[i - 1].second;
            Rational right = samples[i + 1].second - samples[i].second;
            if (!(left == right)) out.push_back(samples[i].first);
        }
        return out;
    }
};

inline UpsilonProfile upsilon_profile(const GridDiagram& g, long long q, long long max_q = 12) {
    if (q < 1) throw invalid_input_error("profile denominator must be positive");
    if (q > max_q)
        throw invalid_input_error("profile denominator " + std::to_string(q) +
                                  " exceeds the configured maximum " + std::to_string(max_q));
    UpsilonProfile prof;
    prof.q = q;
    prof.samples.resize(static_cast<size_t>(q) + 1);
    parallel_for(static_cast<int>(q) + 1, [&](int k) {
        TParameter t(k, q);
        prof.samples[k] = {Rational(k, q), upsilon_at(g, t)};
    });
    return prof;
}

// Tensoring with W_t sends a summand at grading y to summands at y and
// y-(1-t); k copies double the summand count k times.
inline ModuleDecomposition tensor_Wt(ModuleDecomposition d, int k, const TParameter& t) {
    Rational shift = Rational(1) - t.as_rational();
    for (int i = 0; i < k; ++i) {
        ModuleDecomposition next;
        for (const Rational& g : d.free) {
            next.free.insert(g);
            next.free.insert(g - shift);
        }
        for (const auto& [g, c] : d.torsion) {
            next.torsion.insert({g, c});
            next.torsion.insert({g - shift, c});
        }
        d = std::move(next);
    }
    return d;
}

// True iff d1 equals d2 tensored with (n1-n2) copies of W_t.
inline bool compare_mod_Wt(const ModuleDecomposition& d1, int n1, const ModuleDecomposition& d2,
                           int n2, const TParameter& t) {
    if (n1 < n2) throw invalid_input_error("compare_mod_Wt requires n1 >= n2");
    return tensor_Wt(d2, n1 - n2, t) == d1;
}

// Slope of the first linear segment of the profile; near t = 0 this recovers
// the tau invariant up to the orientation convention, which is reported by
// callers rather than normalized here.
inline Rational tau_slope_estimate(const UpsilonProfile& profile) {
    if (profile.samples.size() < 2)
        throw invalid_input_error("slope estimate needs at least two samples");
    const auto& [t0, v0] = profile.samples[0];
    const auto& [t1, v1] = profile.samples[1];
    return (v1 - v0) / (t1 - t0);
}

}  // namespace gridups
