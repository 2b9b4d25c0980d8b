#include "choreo/tracking.hpp"

#include <cmath>
#include <numbers>

#include "choreo/errors.hpp"
#include "choreo/family.hpp"
#include "choreo/rng.hpp"
#include "choreo/topology.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace choreo;
namespace {

const double kPi = std::numbers::pi;

HomPoly3 two_component_cubic() {
    return HomPoly3::from_json(nlohmann::json{
        {"degree", 3}, {"coeffs", {{"y^2 z", 1.0}, {"x^3", -1.0}, {"x z^2", 1.0}}}});
}

HomPoly3 one_component_cubic() {
    return HomPoly3::from_json(nlohmann::json{
        {"degree", 3}, {"coeffs", {{"y^2 z", 1.0}, {"x^3", -1.0}, {"x z^2", -1.0}}}});
}

const CurveTopology& etopo() {
    static CurveTopology topo = trace_real_locus(two_component_cubic());
    return topo;
}

CVec3 real_pt(double x, double y, double z = 1.0) {
    return to_complex(normalized(Vec3{x, y, z}));
}

double match_points(const std::vector<CVec3>& a, const std::vector<CVec3>& b) {
    return oracle::multiset_match(a, b, [](const CVec3& p, const CVec3& q) {
        return chordal_cp2(p, q);
    });
}

std::vector<CVec3> divisor_points(const Divisor& d) {
    std::vector<CVec3> out;
    for (const auto& e : d.points)
        for (int k = 0; k < e.mult; ++k) out.push_back(e.p);
    return out;
}

double winding(const Track& tr) { return tr.lift.back() - tr.lift.front(); }

} // namespace

TEST_CASE("horizontal pencil line cuts the cubic in its three axis points") {
    HomPoly3 f = two_component_cubic();
    LoopFamily fam = line_pencil(-0.5, 0.0, kPi / 2);  // starting line y = 0
    Divisor d = initial_divisor(f, fam);
    REQUIRE(d.degree() == 3);
    for (const auto& e : d.points) CHECK(e.line == 0);
    std::vector<CVec3> expected{real_pt(-1, 0), real_pt(0, 0), real_pt(1, 0)};
    CHECK(match_points(divisor_points(d), expected) < 1e-9);
}

TEST_CASE("a line missing the oval yields one real point and a conjugate pair") {
    HomPoly3 f = two_component_cubic();
    LoopFamily fam = line_pencil(0.3, 0.0, 0.0);  // starting line x = 0.3
    Divisor d = solve_divisor(f, fam.at(0.0));
    REQUIRE(d.degree() == 3);
    int n_real = 0, n_complex = 0;
    for (const auto& e : d.points) {
        if (chordal_cp2(e.p, conjugate(e.p)) < 1e-9) {
            ++n_real;
            CHECK(chordal_cp2(e.p, real_pt(0, 1, 0)) < 1e-9);
        } else {
            ++n_complex;
            CHECK(std::abs(f.eval(e.p)) < 1e-9);
        }
    }
    CHECK(n_real == 1);
    CHECK(n_complex == 2);
}

TEST_CASE("tangent starting line is rejected as a non-simple start") {
    HomPoly3 f = two_component_cubic();
    double xt = -1.0 / std::sqrt(3.0);
    double yt = std::sqrt(xt * xt * xt - xt);  // oval's topmost point
    LoopFamily fam = line_pencil(0.7, yt, kPi / 2);
    try {
        initial_divisor(f, fam);
        FAIL("expected a non-simple start");
    } catch (const TrackerError& e) {
        CHECK(e.kind() == "non_simple_start");
    }
}

TEST_CASE("full pencil about an oval-interior point: windings, closure, invariants") {
    HomPoly3 f = two_component_cubic();
    const CurveTopology& topo = etopo();
    LoopFamily fam = line_pencil(-0.5, 0.0, kPi / 2);
    TrackerConfig cfg;
    cfg.steps = 2000;
    DivisorPath path = track_loop(f, topo, fam, cfg);

    REQUIRE(path.tracks.size() == 3);
    for (const auto& tr : path.tracks) CHECK(tr.cls == Track::Class::Real);
    CHECK(path.max_residual <= 1e-9);
    CHECK(path.closure_defect <= 1e-8);
    CHECK(transversality_margin(path) > 1e-3);
    CHECK(oracle_mismatch(f, fam, path, 50) < 1e-7);
    CHECK(vieta_residual(f, fam, path, 50) < 1e-8);
    CHECK(conj_pair_drift(path) == 0.0);  // no conjugate pairs on this loop

    int oval_id = topo.oval()->id;
    double oval_sum = 0, odd_sum = 0;
    int n_oval = 0;
    for (const auto& tr : path.tracks) {
        if (tr.component == oval_id) {
            oval_sum += winding(tr);
            ++n_oval;
        } else {
            odd_sum += winding(tr);
            CHECK(std::abs(winding(tr) - std::round(winding(tr))) < 1e-3);
        }
    }
    CHECK(n_oval == 2);
    CHECK(std::abs(std::abs(oval_sum) - 1.0) < 1e-3);  // the oval pair swaps, one net turn
    CHECK(std::abs(std::abs(odd_sum) - 1.0) < 1e-3);

    // end positions are a permutation of the start positions
    std::vector<CVec3> s0, s1;
    for (const auto& tr : path.tracks) {
        s0.push_back(tr.pos.front());
        s1.push_back(tr.pos.back());
    }
    CHECK(match_points(s0, s1) < 1e-8);

    CHECK(abel_jacobi_residual(f, path) < 1e-4);

    // grid refinement changes no winding beyond tolerance
    TrackerConfig cfg2;
    cfg2.steps = 1000;
    DivisorPath half = track_loop(f, topo, fam, cfg2);
    REQUIRE(half.tracks.size() == 3);
    for (size_t j = 0; j < 3; ++j)
        CHECK(std::abs(winding(path.tracks[j]) - winding(half.tracks[j])) < 1e-3);
}

TEST_CASE("base-pointed pencil moves a point on each component once around") {
    HomPoly3 f = two_component_cubic();
    const CurveTopology& topo = etopo();
    LoopFamily fam = line_pencil_with_base_point(f, -0.5, std::sqrt(0.375), 0.0);
    TrackerConfig cfg;
    cfg.steps = 2000;
    DivisorPath path = track_loop(f, topo, fam, cfg);

    REQUIRE(path.tracks.size() == 2);
    int oval_id = topo.oval()->id, odd_id = topo.one_sided()->id;
    bool saw_oval = false, saw_odd = false;
    for (const auto& tr : path.tracks) {
        CHECK(tr.cls == Track::Class::Real);
        double w = winding(tr);
        CHECK(std::abs(std::abs(w) - 1.0) < 1e-3);
        if (tr.component == oval_id) saw_oval = true;
        if (tr.component == odd_id) saw_odd = true;
    }
    CHECK(saw_oval);
    CHECK(saw_odd);
    CHECK(path.max_residual <= 1e-9);
    CHECK(path.closure_defect <= 1e-8);
    CHECK(oracle_mismatch(f, fam, path, 50) < 1e-7);
    CHECK(vieta_residual(f, fam, path, 50) < 1e-8);
    CHECK(abel_jacobi_residual(f, path) < 1e-4);
}

TEST_CASE("triple line product: degree-9 purely real divisor, one net turn per component") {
    HomPoly3 f = two_component_cubic();
    const CurveTopology& topo = etopo();
    LoopFamily fam = line_product(-0.5, 0.0, 3, kPi / 2);
    TrackerConfig cfg;
    cfg.steps = 1000;
    DivisorPath path = track_loop(f, topo, fam, cfg);

    REQUIRE(path.tracks.size() == 9);
    int oval_id = topo.oval()->id;
    int per_line[3] = {0, 0, 0};
    double oval_sum = 0, odd_sum = 0;
    int n_oval = 0;
    for (const auto& tr : path.tracks) {
        CHECK(tr.cls == Track::Class::Real);
        REQUIRE(tr.line >= 0);
        REQUIRE(tr.line < 3);
        ++per_line[tr.line];
        if (tr.component == oval_id) {
            oval_sum += winding(tr);
            ++n_oval;
        } else {
            odd_sum += winding(tr);
        }
    }
    for (int l = 0; l < 3; ++l) CHECK(per_line[l] == 3);
    CHECK(n_oval == 6);
    CHECK(std::abs(std::abs(oval_sum) - 1.0) < 1e-2);
    CHECK(std::abs(std::abs(odd_sum) - 1.0) < 1e-2);
    CHECK(path.max_residual <= 1e-9);
    CHECK(path.closure_defect <= 1e-8);
    CHECK(oracle_mismatch(f, fam, path, 100) < 1e-7);
    CHECK(vieta_residual(f, fam, path, 100) < 1e-8);
}

TEST_CASE("ellipse-tangent loop: conjugate pair stays an exact mirror, real point winds twice") {
    HomPoly3 f = two_component_cubic();
    const CurveTopology& topo = etopo();
    // tangent lines of the circle centered at (-0.5, 0) with radius 0.8; it
    // encloses the oval, so every member line misses it
    const int M = 240;
    std::vector<Vec3> samples;
    for (int i = 0; i <= M; ++i) {
        double s = 2 * kPi * i / M;
        samples.push_back(Vec3{std::cos(s), std::sin(s), 0.5 * std::cos(s) - 0.8});
    }
    samples.back() = samples.front();
    LoopFamily fam = sampled_line_loop(samples, std::nullopt, &f);
    TrackerConfig cfg;
    cfg.steps = 2000;
    DivisorPath path = track_loop(f, topo, fam, cfg);

    REQUIRE(path.tracks.size() == 3);
    int n_real = 0, n_rep = 0, n_mirror = 0;
    for (const auto& tr : path.tracks) {
        if (tr.cls == Track::Class::Real) {
            ++n_real;
            CHECK(tr.component == topo.one_sided()->id);
            CHECK(std::abs(std::abs(winding(tr)) - 2.0) < 1e-3);
        }
        if (tr.cls == Track::Class::PairRep) ++n_rep;
        if (tr.cls == Track::Class::PairMirror) ++n_mirror;
    }
    CHECK(n_real == 1);
    CHECK(n_rep == 1);
    CHECK(n_mirror == 1);
    CHECK(conj_pair_drift(path) < 1e-9);
    CHECK(path.max_residual <= 1e-9);
    CHECK(path.closure_defect <= 1e-8);
    CHECK(oracle_mismatch(f, fam, path, 50) < 1e-7);
    CHECK(vieta_residual(f, fam, path, 50) < 1e-8);
}

TEST_CASE("perturbed triple-line cubic system: nine real points barely move") {
    HomPoly3 f = two_component_cubic();
    const CurveTopology& topo = etopo();
    HomPoly3 g0 = HomPoly3::linear_form(Vec3{std::cos(0.4), std::sin(0.4), 0.5 * std::cos(0.4)});
    for (int j = 1; j < 3; ++j) {
        double a = 0.4 + j * kPi / 3;
        g0 = HomPoly3::multiply(g0, HomPoly3::linear_form(Vec3{std::cos(a), std::sin(a), 0.5 * std::cos(a)}));
    }
    Rng rng(2024);
    HomPoly3 r1 = oracle::random_poly(3, rng), r2 = oracle::random_poly(3, rng);
    LoopFamily fam = curve_perturbation_loop(g0, r1, r2, 0.01);
    TrackerConfig cfg;
    cfg.steps = 400;
    DivisorPath path = track_loop(f, topo, fam, cfg);

    REQUIRE(path.tracks.size() == 9);
    for (const auto& tr : path.tracks) {
        CHECK(tr.cls == Track::Class::Real);
        CHECK(tr.line == -1);
        CHECK(std::abs(winding(tr)) < 0.01);
    }
    CHECK(path.max_residual <= 1e-9);
    CHECK(path.closure_defect <= 1e-8);
    CHECK(oracle_mismatch(f, fam, path, 50) < 1e-7);
    CHECK(vieta_residual(f, fam, path, 50) == 0.0);
}

TEST_CASE("pencil about an outside point of the one-component cubic hits the discriminant") {
    HomPoly3 f = one_component_cubic();
    CurveTopology topo = trace_real_locus(f);
    LoopFamily fam = line_pencil(2.0, 0.0, 0.0);  // starts at x = 2: three real points
    TrackerConfig cfg;
    cfg.steps = 500;
    CHECK_THROWS_AS(track_loop(f, topo, fam, cfg), DiscriminantHit);
}

TEST_CASE("velocity criterion: conserved for pencils, zero for frozen, large for one-point motion") {
    HomPoly3 f = two_component_cubic();
    const CurveTopology& topo = etopo();

    DivisorPath frozen;
    const int N = 400;
    frozen.grid.resize(N + 1);
    Track a;
    a.cls = Track::Class::Real;
    a.pos.resize(N + 1);
    for (int i = 0; i <= N; ++i) {
        frozen.grid[i] = double(i) / N;
        a.pos[i] = real_pt(1, 0);
    }
    frozen.tracks = {a};
    CHECK(abel_jacobi_residual(f, frozen) == 0.0);

    // one point sweeps the oval while the other stands still: the sum of
    // velocities cannot cancel
    DivisorPath sweep = frozen;
    Track b;
    b.cls = Track::Class::Real;
    b.pos.resize(N + 1);
    for (int i = 0; i <= N; ++i)
        b.pos[i] = to_complex(topo.oval()->at_phi(double(i) / N));
    sweep.tracks = {a, b};
    CHECK(abel_jacobi_residual(f, sweep) > 1e-2);

    HomPoly3 circle = HomPoly3::from_json(nlohmann::json{
        {"degree", 2}, {"coeffs", {{"x^2", 1.0}, {"y^2", 1.0}, {"z^2", -1.0}}}});
    CHECK_THROWS_AS(abel_jacobi_residual(circle, frozen), ChoreographyError);
}
