#pragma once
#include <functional>
#include <optional>
#include <vector>
#include <nlohmann/json_fwd.hpp>

#include "choreo/geometry.hpp"
#include "choreo/poly.hpp"

namespace choreo {

// One cutting line with the orthonormal restriction basis (u, v). Both basis
// points lie on the line, so B(alpha, beta) = F(alpha*u + beta*v) parameterizes
// the cut divisor. When `deflate` is set, u is a base point on the curve and
// the root (1:0) is removed from the cut.
struct CutLine {
    Vec3 n;  // unit line coordinates
    Vec3 u, v;
    bool deflate = false;
};

// Cutting system at one loop parameter: a finite set of lines or one curve.
struct CuttingSystem {
    std::vector<CutLine> lines;
    std::optional<HomPoly3> curve;
    bool is_curve() const { return curve.has_value(); }
};

// Closed one-parameter family of cutting systems. Samplers are pure functions
// of t in [0, period]; at(0) and at(period) agree up to projective scale and
// line reordering (verified on construction).
struct LoopFamily {
    enum class Kind { LinePencil, LineProduct, BinaryPencil, SampledLineLoop, PerturbationLoop };
    Kind kind = Kind::LinePencil;
    double period = 0;
    std::function<CuttingSystem(double)> sampler;
    int deflations_per_system = 0;
    nlohmann::json descriptor;  // constructor parameters, echoed into reports

    CuttingSystem at(double t) const { return sampler(t); }
};

// Pencil of lines through the affine point (cx, cy), parameterized by the
// normal angle theta0 + t in the chart z = 1; period pi.
LoopFamily line_pencil(double cx, double cy, double theta0 = 0);

// Pencil about a point of the curve; that point is deflated from every cut,
// so the tracked divisor has degree deg(f) - 1.
LoopFamily line_pencil_with_base_point(const HomPoly3& f, double cx, double cy,
                                       double theta0 = 0);

// k pencil lines at mutual angle pi/k rotating together; period pi/k.
LoopFamily line_product(double cx, double cy, int k, double theta0 = 0);

// G_t = cos(t) f0 + sin(t) f1, t in [0, pi]; closes projectively.
LoopFamily binary_curve_pencil(const HomPoly3& f0, const HomPoly3& f1);

// Contractible loop around g0: G_s = g0 + eps*(cos(2 pi s) r1 + sin(2 pi s) r2),
// s in [0, 1]; the combination is taken on the normalized coefficient vectors.
LoopFamily curve_perturbation_loop(const HomPoly3& g0, const HomPoly3& r1, const HomPoly3& r2,
                                   double eps);

// Piecewise spherical interpolation through a closed list of line coordinate
// vectors (first == last up to scale); period = segment count. An optional
// base point on the curve turns every sample into a deflated cut; all samples
// must pass through it.
LoopFamily sampled_line_loop(std::vector<Vec3> samples,
                             std::optional<std::pair<double, double>> base_point = std::nullopt,
                             const HomPoly3* curve = nullptr);

// Strict-key JSON constructor; the curve is needed to validate base points.
LoopFamily family_from_json(const nlohmann::json& j, const HomPoly3& curve);

} // namespace choreo
