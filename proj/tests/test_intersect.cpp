#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>
#include <vector>

#include "choreo/errors.hpp"
#include "choreo/intersect.hpp"
#include "choreo/poly.hpp"
#include "choreo/roots.hpp"
#include "oracles.hpp"

using namespace choreo;

namespace {

HomPoly3 circle() {
    return HomPoly3::from_json(nlohmann::json{
        {"degree", 2}, {"coeffs", {{"x^2", 1.0}, {"y^2", 1.0}, {"z^2", -1.0}}}});
}

HomPoly3 cubic_two_comp() {
    return HomPoly3::from_json(nlohmann::json{
        {"degree", 3}, {"coeffs", {{"y^2 z", 1.0}, {"x^3", -1.0}, {"x z^2", 1.0}}}});
}

double chordal_pt(const CVec3& a, const CVec3& b) { return chordal_cp2(a, b); }

// worst chordal distance of a multiset match (greedy; fine for well-separated sets)
double match_sets(std::vector<CVec3> got, std::vector<CVec3> want) {
    if (got.size() != want.size()) return 1e300;
    double worst = 0;
    for (const auto& w : want) {
        size_t bi = 0;
        double bd = 1e300;
        for (size_t i = 0; i < got.size(); ++i) {
            double d = chordal_pt(got[i], w);
            if (d < bd) { bd = d; bi = i; }
        }
        worst = std::max(worst, bd);
        got.erase(got.begin() + bi);
    }
    return worst;
}

std::vector<CVec3> expand(const std::vector<IntersectionPoint>& pts) {
    std::vector<CVec3> out;
    for (const auto& p : pts)
        for (int k = 0; k < p.mult; ++k) out.push_back(p.p);
    return out;
}

} // namespace

TEST_CASE("circle meets a vertical line pair in four known points") {
    double a = 0.6;
    HomPoly3 g = HomPoly3::multiply(HomPoly3::linear_form(Vec3{1, 0, -a}),
                                    HomPoly3::linear_form(Vec3{1, 0, a}));
    auto pts = intersect_curves(circle(), g);
    double b = std::sqrt(1 - a * a);
    std::vector<CVec3> want;
    for (double sx : {-1.0, 1.0})
        for (double sy : {-1.0, 1.0})
            want.push_back(canonical_phase(cnormalized(CVec3{sx * a, sy * b, 1.0})));
    CHECK(match_sets(expand(pts), want) < 1e-9);
    for (const auto& p : pts) CHECK(p.mult == 1);
}

TEST_CASE("tangent line pair gives two double points") {
    HomPoly3 g = HomPoly3::multiply(HomPoly3::linear_form(Vec3{0, 1, -1}),
                                    HomPoly3::linear_form(Vec3{0, 1, 1}));
    auto pts = intersect_curves(circle(), g);
    REQUIRE(pts.size() == 2);
    std::vector<CVec3> want = {canonical_phase(cnormalized(CVec3{0, 1, 1})),
                               canonical_phase(cnormalized(CVec3{0, -1, 1}))};
    std::vector<CVec3> got = {pts[0].p, pts[1].p};
    CHECK(match_sets(got, want) < 1e-6);
    CHECK(pts[0].mult == 2);
    CHECK(pts[1].mult == 2);
}

TEST_CASE("cubic meets a line through its infinity point") {
    // x = -z/2 meets y^2 z = x^3 - x z^2 at two affine points and at (0:1:0)
    HomPoly3 l = HomPoly3::linear_form(Vec3{1, 0, 0.5});
    auto pts = intersect_curves(cubic_two_comp(), l);
    double y = std::sqrt(0.375);
    std::vector<CVec3> want = {canonical_phase(cnormalized(CVec3{-0.5, y, 1.0})),
                               canonical_phase(cnormalized(CVec3{-0.5, -y, 1.0})),
                               CVec3{0, 1, 0}};
    CHECK(match_sets(expand(pts), want) < 1e-9);
}

TEST_CASE("cubic meets a triple of concurrent lines in nine points") {
    // three lines through (-0.5, 0), cross-validated against per-line restriction
    Vec3 c = normalized(Vec3{-0.5, 0.0, 1.0});
    HomPoly3 f = cubic_two_comp();
    std::vector<Vec3> normals;
    for (int j = 0; j < 3; ++j) {
        double th = 0.4 + j * std::numbers::pi / 3;
        // line through c with normal direction (cos th, sin th) in the z=1 chart
        Vec3 n{std::cos(th), std::sin(th), 0.0};
        n.z = -(n.x * c.x + n.y * c.y) / c.z;
        normals.push_back(normalized(n));
    }
    HomPoly3 g = HomPoly3::multiply(HomPoly3::multiply(HomPoly3::linear_form(normals[0]),
                                                       HomPoly3::linear_form(normals[1])),
                                    HomPoly3::linear_form(normals[2]));

    std::vector<CVec3> want;
    for (const auto& n : normals) {
        // line basis: two orthonormal points spanning the line n . p = 0
        Vec3 u = normalized(cross(n, std::abs(n.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0}));
        Vec3 v = normalized(cross(n, u));
        BinaryForm b = restrict_to_line(f, u, v);
        for (const auto& r : binary_roots(b)) {
            CVec3 uu{u.x, u.y, u.z}, vv{v.x, v.y, v.z};
            want.push_back(canonical_phase(cnormalized(r.pt.a * uu + r.pt.b * vv)));
            REQUIRE(r.mult == 1);
        }
    }
    REQUIRE(want.size() == 9);
    auto pts = intersect_curves(f, g);
    CHECK(match_sets(expand(pts), want) < 1e-8);
}

TEST_CASE("random conic pairs: Bezout count, residuals, conjugation closure") {
    Rng rng(77);
    int done = 0;
    while (done < 12) {
        HomPoly3 f = oracle::random_poly(2, rng);
        HomPoly3 g = oracle::random_poly(2, rng);
        std::vector<IntersectionPoint> pts;
        try {
            pts = intersect_curves(f, g);
        } catch (const AlgebraError&) {
            continue;  // randomly degenerate pair; draw another
        }
        int total = 0;
        for (const auto& p : pts) total += p.mult;
        CHECK(total == 4);
        for (const auto& p : pts) {
            CHECK(std::abs(f.eval(p.p)) < 1e-6);
            CHECK(std::abs(g.eval(p.p)) < 1e-6);
        }
        // conjugation closure: the conjugate of every point is in the set
        for (const auto& p : pts) {
            CVec3 cj = canonical_phase(cnormalized(
                CVec3{std::conj(p.p.x), std::conj(p.p.y), std::conj(p.p.z)}));
            double best = 1e300;
            for (const auto& q : pts) best = std::min(best, chordal_pt(q.p, cj));
            CHECK(best < 1e-6);
        }
        ++done;
    }
}

TEST_CASE("intersection is equivariant under a coordinate rotation") {
    HomPoly3 f = cubic_two_comp();
    HomPoly3 g = HomPoly3::multiply(HomPoly3::linear_form(Vec3{1, 0.2, -0.3}),
                                    HomPoly3::linear_form(Vec3{-0.4, 1, 0.1}));
    auto base = intersect_curves(f, g);

    double t = 0.83;
    std::array<std::array<double, 3>, 3> m{{{std::cos(t), 0, std::sin(t)},
                                            {0, 1, 0},
                                            {-std::sin(t), 0, std::cos(t)}}};
    auto rot = intersect_curves(f.compose_linear(m), g.compose_linear(m));
    // points q of the rotated problem satisfy p = M q
    std::vector<CVec3> mapped;
    for (const auto& q : rot)
        for (int k = 0; k < q.mult; ++k)
            mapped.push_back(canonical_phase(cnormalized(
                CVec3{m[0][0] * q.p.x + m[0][1] * q.p.y + m[0][2] * q.p.z,
                      m[1][0] * q.p.x + m[1][1] * q.p.y + m[1][2] * q.p.z,
                      m[2][0] * q.p.x + m[2][1] * q.p.y + m[2][2] * q.p.z})));
    CHECK(match_sets(expand(base), mapped) < 1e-7);
}

TEST_CASE("curves sharing a component are rejected") {
    HomPoly3 l = HomPoly3::linear_form(Vec3{1, 1, -1});
    HomPoly3 f = HomPoly3::multiply(l, HomPoly3::linear_form(Vec3{1, -1, 0}));
    HomPoly3 g = HomPoly3::multiply(l, HomPoly3::linear_form(Vec3{0, 1, 1}));
    CHECK_THROWS_AS(intersect_curves(f, g), AlgebraError);
}
