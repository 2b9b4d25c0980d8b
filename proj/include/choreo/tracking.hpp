#pragma once
#include <vector>

#include "choreo/family.hpp"
#include "choreo/geometry.hpp"
#include "choreo/poly.hpp"
#include "choreo/topology.hpp"

namespace choreo {

struct TrackerConfig {
    int steps = 2000;
    double corrector_tol = 1e-11;
    double collision_tol = 1e-6;  // chordal distance in CP^2
    int max_retries = 8;          // step-halving depth per grid interval
};

// Intersection divisor of the curve with one cutting system.
struct Divisor {
    struct Entry {
        CVec3 p;       // unit, canonical phase
        int mult = 1;
        int line = -1;  // owning line for line systems, -1 for curve systems
    };
    std::vector<Entry> points;
    int degree() const {
        int d = 0;
        for (const auto& e : points) d += e.mult;
        return d;
    }
};

// One tracked point over the whole loop. Conjugate pairs are tracked as two
// independent tracks (rep/mirror); their agreement under conjugation is a
// measured diagnostic, not an enforced identity.
struct Track {
    enum class Class { Real, PairRep, PairMirror };
    Class cls = Class::Real;
    int partner = -1;            // the other half of a conjugate pair
    int line = -1;               // owning line for line systems
    int component = -1;          // real-locus component id (real tracks)
    std::vector<CVec3> pos;      // unit, phase-continuous, one per grid value
    std::vector<double> lift;    // unwrapped arc position phi (real tracks)
};

struct DivisorPath {
    std::vector<double> grid;    // N+1 parameter values, 0 .. period
    std::vector<Track> tracks;
    double max_residual = 0;       // worst on-system residual over the grid
    double min_separation = 1e9;   // transversality margin
    double closure_defect = 0;     // start-vs-end multiset distance
};

// Solve the cut divisor of one cutting system (line restrictions with base
// points deflated, or the full curve-curve intersection).
Divisor solve_divisor(const HomPoly3& f, const CuttingSystem& sys);

// Divisor at t = 0, required simple: multiplicities 1 and pairwise chordal
// separation above the collision tolerance. Throws TrackerError("non_simple_start").
Divisor initial_divisor(const HomPoly3& f, const LoopFamily& fam,
                        double collision_tol = 1e-6);

// Predictor-corrector continuation of the cut divisor around the loop.
// Throws DiscriminantHit / CorrectorDiverged / MatchAmbiguity.
DivisorPath track_loop(const HomPoly3& f, const CurveTopology& topo, const LoopFamily& fam,
                       const TrackerConfig& cfg = {});

// Minimum pairwise separation over the whole grid.
double transversality_margin(const DivisorPath& path);

// Max over the grid of |sum over divisor points of omega(velocity)|, where
// omega is the holomorphic differential of the cubic, normalized by the
// velocity scale. Constant paths give 0. Throws ChoreographyError("not_cubic").
double abel_jacobi_residual(const HomPoly3& f, const DivisorPath& path);

// Independent full re-solve every `stride` grid values; worst multiset
// mismatch against the tracked positions.
double oracle_mismatch(const HomPoly3& f, const LoopFamily& fam, const DivisorPath& path,
                       int stride = 50);

// Line systems: rebuild each deflated restriction from the tracked roots and
// compare with the polynomial coefficients (projective Vieta residual).
// Returns 0 for curve systems.
double vieta_residual(const HomPoly3& f, const LoopFamily& fam, const DivisorPath& path,
                      int stride = 50);

// Worst chordal distance between a mirror track and the conjugate of its rep.
double conj_pair_drift(const DivisorPath& path);

} // namespace choreo
