#pragma once
#include <vector>

#include "choreo/geometry.hpp"
#include "choreo/poly.hpp"

namespace choreo {

// One point of the intersection X_f cap X_g, unit-normalized with canonical
// phase. `mult` is the local intersection multiplicity inferred from the
// clustering of the eliminant roots.
struct IntersectionPoint {
    CVec3 p;
    int mult = 1;
};

// All complex projective intersection points of two plane curves, counted with
// multiplicity (their total equals deg f * deg g). Eliminates y through a
// sampled Sylvester resultant (evaluated at roots of unity, interpolated by an
// inverse DFT), back-substitutes, and polishes every point by a projective
// Newton step on (f, g). Coordinate charts are rotated deterministically when
// a chart is degenerate for the input pair. Throws AlgebraError on curves
// sharing a component or unresolvable multiplicity splits.
std::vector<IntersectionPoint> intersect_curves(const HomPoly3& f, const HomPoly3& g);

// Largest-|coordinate| chart Newton iteration for the square system
// f = g = 0 near p; returns the polished point (unit, canonical phase).
// Used standalone by the tracker's curve-system corrector.
CVec3 polish_intersection(const HomPoly3& f, const HomPoly3& g, CVec3 p, int iters = 25);

} // namespace choreo
