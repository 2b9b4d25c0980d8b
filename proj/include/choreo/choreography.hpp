#pragma once
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "choreo/topology.hpp"
#include "choreo/tracking.hpp"

namespace choreo {

// Per-component winding integers of the real divisor points around a loop,
// signed by the fixed component orientations.
struct TracingVector {
    std::vector<int> c;  // indexed by component id
    std::string basis;   // "complex_orientation" once orientations were fixed, else "marching"
};

// Restriction of the end-to-start permutation to one component, in the cyclic
// order induced by the component orientation.
struct ComponentCycle {
    int component = -1;
    std::vector<int> members;  // real-slot indices, sorted along the orientation
    bool is_power = false;     // whether the restriction is a power of the cyclic shift
    int power = 0;             // the exponent when is_power
};

struct MonodromyPermutation {
    std::vector<int> real_tracks;  // track index behind each real slot
    std::vector<int> perm;         // slot j ends where slot perm[j] started
    std::vector<ComponentCycle> cycles;
};

struct TheoremVerdict {
    std::string id;  // Th1a | Th1b | Th1c | Th2a | Th2b | Th3-consistency | Sec3_3
    bool applicable = false;
    bool satisfied = false;
    std::string detail;
};

enum class Realness { PurelyReal, Mixed };

// Winding integers from the angle lifts; each component sum must sit within
// 0.01 of an integer, else ChoreographyError("non_integer_winding").
TracingVector real_tracing(const DivisorPath& path, const CurveTopology& topo);

// Nearest-neighbor end-to-start matching of the real tracks (tolerance 1e-6,
// ChoreographyError("match_failure") otherwise, also when a point switched
// components) plus the per-component cyclic normal form.
MonodromyPermutation monodromy(const DivisorPath& path, const CurveTopology& topo);

// The compatibility law: on every component the monodromy restriction equals
// the c-th power of the canonical cyclic generator.
TheoremVerdict check_tracing_monodromy(const TracingVector& tv, const MonodromyPermutation& mp);

// Inclusion checks for the tracing theorems; never asserts their converses.
std::vector<TheoremVerdict> check_theorems(const TracingVector& tv, Realness realness,
                                           CurveType curve_type,
                                           const std::set<int>& occupied);

// A purely synthetic path: point j of component k glides at constant phi-speed
// to the start position of the (j + shift)-th point so the winding sums to
// c[k]. No algebraic content; exercises the two analyses above independently
// of the tracker. Throws ChoreographyError("unoccupied_nonzero") when c[k] != 0
// for a component without start points.
DivisorPath synthetic_loop(const CurveTopology& topo,
                           const std::vector<std::pair<int, double>>& starts,
                           const std::vector<int>& c, int steps = 400);

// Path homomorphism helpers. Concatenation requires q to start on p's end
// divisor (ChoreographyError("endpoint_mismatch") otherwise).
DivisorPath loop_concat(const DivisorPath& p, const DivisorPath& q);
DivisorPath loop_reverse(const DivisorPath& p);

} // namespace choreo
