#pragma once
#include <string>

#include "choreo/topology.hpp"
#include "choreo/tracking.hpp"

namespace choreo {

// Renders the affine z=1 chart: curve components in black, colored real
// trajectories with an end arrowhead, and the start divisor as filled dots.
// Points too close to the line at infinity or outside the fixed window are
// clipped by breaking the polyline. Output bytes are deterministic.
std::string render_plot(const DivisorPath& path, const CurveTopology& topo);

void export_plot(const DivisorPath& path, const CurveTopology& topo, const std::string& file);

} // namespace choreo
