#pragma once
#include <optional>
#include <string>
#include <vector>
#include <nlohmann/json_fwd.hpp>

#include "choreo/geometry.hpp"
#include "choreo/poly.hpp"

namespace choreo {

enum class CurveType { TypeI, TypeII, Unknown };

// One connected component of the real locus, stored as a polyline of unit
// sphere points. Ovals close back to the first vertex; one-sided components
// end near the antipode of the first vertex (the projective closure). The
// cyclic parameter phi in [0,1) measures normalized arc length along the
// stored order, including the closing segment.
struct CurveComponent {
    enum class Kind { Oval, OneSided };

    int id = -1;
    Kind kind = Kind::Oval;
    std::vector<Vec3> verts;
    std::vector<double> cum;   // cum[i] = arc length up to vertex i
    double total_len = 0;      // includes the closing segment
    int orientation = +1;      // fixed orientation relative to stored order

    Vec3 closing_target() const { return kind == Kind::Oval ? verts.front() : -verts.front(); }
    // position of the (possibly virtual closing) segment endpoint i+1
    Vec3 seg_end(size_t i) const { return i + 1 < verts.size() ? verts[i + 1] : closing_target(); }
    size_t seg_count() const { return verts.size(); }
    // point on the polyline at parameter phi (mod 1), in stored order
    Vec3 at_phi(double phi) const;
};

struct CurveTopology {
    HomPoly3 curve;
    double step = 1e-3;
    std::vector<CurveComponent> comps;
    CurveType cubic_type = CurveType::Unknown;
    bool orientations_fixed = false;  // true once complex orientations were assigned

    const CurveComponent* oval() const;       // first oval, or null
    const CurveComponent* one_sided() const;  // first one-sided, or null
};

// Traces the real locus on the unit sphere by predictor-corrector marching
// from great-circle scan seeds. Throws TopologyError("singular_curve") when a
// gradient nearly vanishes on the locus, TopologyError("seed_miss") when the
// line-parity audit contradicts the component set.
CurveTopology trace_real_locus(const HomPoly3& f, double step = 1e-3, double tol = 1e-9);

struct LocateResult {
    int comp = -1;
    double phi = 0;      // in [0,1)
    double dist = 0;     // chordal distance to the polyline
    int segment = -1;    // nearest segment index (hint for subsequent queries)
};

// Nearest component point for a real projective point (tries both sphere
// lifts). Throws TopologyError("off_curve") if nothing is within tol.
LocateResult locate_on_component(Vec3 p, const CurveTopology& topo, double tol);

// Same, restricted to one component with a segment hint (amortized O(1) for
// slowly moving queries). Returns nullopt if nothing is within tol.
std::optional<LocateResult> locate_near(Vec3 p, const CurveComponent& comp, int hint_segment,
                                        double tol);

// Even-odd ray test in an affine chart containing the oval.
// Throws TopologyError("ambiguous") if repeated ray perturbations stay degenerate,
// TopologyError("no_oval") if the component is not an oval.
bool point_in_oval(Vec3 p, const CurveComponent& comp);

// Type I for two-component cubics (M-cubic), Type II for one, Unknown otherwise.
CurveType classify_cubic_type(const CurveTopology& topo);

// Fixes the complex orientation pair on a two-component cubic: orients the
// oval counterclockwise in the affine chart that contains it (preferring
// z=1, then x=1, then y=1) and the one-sided component so that the covering
// "oval point -> third real intersection of the line through c" has degree +2.
// `c` must lie strictly inside the oval. Sets topo.orientations_fixed.
// Throws TopologyError("not_interior") or TopologyError("covering_degree").
void complex_orientation_cubic(CurveTopology& topo, Vec3 c);

nlohmann::json topology_to_json(const CurveTopology& topo);

// Parity audit helper (also used by tests): counts real intersections of the
// traced locus with the projective line of coefficient vector n.
int line_crossings(const CurveComponent& comp, Vec3 n);
int line_crossings(const CurveTopology& topo, Vec3 n);

} // namespace choreo
