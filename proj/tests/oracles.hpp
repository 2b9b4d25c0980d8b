#pragma once
// Test-side helpers that are deliberately independent of the library
// implementations they check: plain evaluation, convolution, and brute-force
// multiset matching.
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "choreo/geometry.hpp"
#include "choreo/poly.hpp"
#include "choreo/rng.hpp"
#include "choreo/roots.hpp"

namespace oracle {

using choreo::cplx;

// |a - s*b| minimized over a complex scalar s (projective comparison of
// coefficient vectors); returns the residual relative to |a|.
inline double scale_match_residual(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx num = 0;
    double den = 0, na = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        num += a[i] * std::conj(b[i]);
        den += std::norm(b[i]);
        na += std::norm(a[i]);
    }
    if (den == 0) return std::sqrt(na);
    cplx s = num / den;
    double r = 0;
    for (size_t i = 0; i < a.size(); ++i) r += std::norm(a[i] - s * b[i]);
    return std::sqrt(r / (na > 0 ? na : 1.0));
}

// greedy multiset match; returns the largest matched distance (or +inf on size mismatch)
template <typename T, typename Dist>
double multiset_match(std::vector<T> a, std::vector<T> b, Dist dist) {
    if (a.size() != b.size()) return 1e300;
    double worst = 0;
    std::vector<bool> used(b.size(), false);
    for (const auto& p : a) {
        int best = -1;
        double bd = 1e300;
        for (size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            double d = dist(p, b[j]);
            if (d < bd) { bd = d; best = static_cast<int>(j); }
        }
        used[best] = true;
        worst = std::max(worst, bd);
    }
    return worst;
}

inline choreo::HomPoly3 random_poly(int degree, choreo::Rng& rng) {
    std::vector<double> c(choreo::HomPoly3::term_count(degree));
    for (auto& v : c) v = rng.uniform(-1.0, 1.0);
    return choreo::HomPoly3(degree, c);
}

inline choreo::Vec3 random_vec(choreo::Rng& rng) {
    return {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
}

} // namespace oracle
