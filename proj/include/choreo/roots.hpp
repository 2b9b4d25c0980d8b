#pragma once
#include <utility>
#include <vector>

#include "choreo/geometry.hpp"
#include "choreo/poly.hpp"

namespace choreo {

// Point of CP^1, kept with unit norm. `canonical()` fixes the phase so the
// larger coordinate is real positive (used only for output/comparison).
struct CP1 {
    cplx a = 0, b = 0;
    static CP1 make(cplx a, cplx b);
    CP1 canonical() const;
};

inline CP1 conjugate(CP1 p) { return CP1::make(std::conj(p.a), std::conj(p.b)); }

// Chordal distance on CP^1 for unit representatives.
double chordal_cp1(CP1 p, CP1 q);

// All roots of a univariate polynomial sum c[k] t^k (c.back() != 0 expected)
// by simultaneous Aberth-Ehrlich iteration. Deterministic.
std::vector<cplx> aberth_roots(std::vector<cplx> c);

struct BinaryRoot {
    CP1 pt;
    int mult = 1;
};

// All deg(B) projective roots of a binary form, with multiplicity estimated by
// chordal clustering at radius `cluster_tol`. Solves both dehomogenizations
// and merges across charts at chordal radius 1e-8.
std::vector<BinaryRoot> binary_roots(const BinaryForm& b, double cluster_tol = 1e-6);

// Synthetic division: returns B' of degree deg-1 with B = L * B' up to scale,
// where L is a linear form vanishing at `root`. Throws AlgebraError("not_a_root")
// if |B(root)| > tol * |B|_inf.
BinaryForm deflate(const BinaryForm& b, CP1 root, double tol = 1e-8);

// Conjugation-closed partition of a projective point multiset.
struct ConjPartition {
    std::vector<Vec3> real_points;                 // snapped, canonical sign
    std::vector<std::pair<CVec3, CVec3>> pairs;    // (representative, conjugate)
};

// Splits points into near-real ones (reality defect <= tol, snapped to RP^2)
// and conjugate pairs (greedy chordal matching at tolerance tol). The pair
// representative is the half whose first significantly complex affine
// coordinate (z=1 chart, falling back by magnitude) has positive imaginary
// part. Throws AlgebraError("unpaired_point") on failure.
ConjPartition conj_partition(const std::vector<CVec3>& points, double tol = 1e-8);

} // namespace choreo
