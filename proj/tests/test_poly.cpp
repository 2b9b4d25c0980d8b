#include <doctest.h>
#include <nlohmann/json.hpp>

#include "choreo/errors.hpp"
#include "choreo/poly.hpp"
#include "oracles.hpp"

using namespace choreo;

namespace {
HomPoly3 weierstrass_minus() {
    // y^2 z - x^3 + x z^2
    return HomPoly3::from_json(nlohmann::json{
        {"degree", 3},
        {"coeffs", {{"y^2 z", 1.0}, {"x^3", -1.0}, {"x z^2", 1.0}}}});
}
} // namespace

TEST_CASE("graded-lex indexing round-trips") {
    for (int d = 1; d <= 6; ++d) {
        int idx = 0;
        for (int a = d; a >= 0; --a)
            for (int b = d - a; b >= 0; --b, ++idx) {
                CHECK(HomPoly3::index_of(d, a, b) == idx);
                int aa, bb, cc;
                HomPoly3::exponents_at(d, idx, aa, bb, cc);
                CHECK(aa == a);
                CHECK(bb == b);
                CHECK(cc == d - a - b);
            }
        CHECK(idx == HomPoly3::term_count(d));
    }
}

TEST_CASE("evaluation and normalization") {
    HomPoly3 f = weierstrass_minus();
    CHECK(f.degree() == 3);
    // max-coefficient normalization keeps the signs
    CHECK(f.coeff(3, 0) == doctest::Approx(-1.0));
    CHECK(f.coeff(0, 2) == doctest::Approx(1.0));
    // on-curve points
    CHECK(f.eval(Vec3{0, 0, 1}) == doctest::Approx(0.0));
    CHECK(f.eval(Vec3{1, 0, 1}) == doctest::Approx(0.0));
    CHECK(f.eval(Vec3{-1, 0, 1}) == doctest::Approx(0.0));
    CHECK(f.eval(Vec3{0, 1, 0}) == doctest::Approx(0.0));
    // off-curve value: F(2,1,1) = 1 - 8 + 2 = -5
    CHECK(f.eval(Vec3{2, 1, 1}) == doctest::Approx(-5.0));
}

TEST_CASE("gradient matches finite differences and the Euler identity") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        int d = 1 + int(rng.below(5));
        HomPoly3 f = oracle::random_poly(d, rng);
        Vec3 p = oracle::random_vec(rng);
        Vec3 g = f.gradient(p);
        double h = 1e-6;
        for (int i = 0; i < 3; ++i) {
            Vec3 pp = p, pm = p;
            pp[i] += h;
            pm[i] -= h;
            double fd = (f.eval(pp) - f.eval(pm)) / (2 * h);
            CHECK(g[i] == doctest::Approx(fd).epsilon(1e-5));
        }
        // Euler: <grad F, p> = d * F(p)
        CHECK(dot(g, p) == doctest::Approx(d * f.eval(p)).epsilon(1e-10));
    }
}

TEST_CASE("restriction of the cubic to the line y=0 gives -a^3 + a b^2") {
    HomPoly3 f = weierstrass_minus();
    // line y=0 spanned by (1,0,0) and (0,0,1)
    BinaryForm b = restrict_to_line(f, Vec3{1, 0, 0}, Vec3{0, 0, 1});
    REQUIRE(b.deg == 3);
    CHECK(std::abs(b.c[3] - cplx(-1)) < 1e-14);
    CHECK(std::abs(b.c[1] - cplx(1)) < 1e-14);
    CHECK(std::abs(b.c[0]) < 1e-14);
    CHECK(std::abs(b.c[2]) < 1e-14);
}

TEST_CASE("restriction agrees with direct substitution at sample points") {
    Rng rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        int d = 1 + int(rng.below(6));
        HomPoly3 f = oracle::random_poly(d, rng);
        Vec3 u = oracle::random_vec(rng), v = oracle::random_vec(rng);
        BinaryForm b = restrict_to_line(f, u, v);
        for (int s = 0; s < 8; ++s) {
            cplx al(rng.uniform(-1, 1), rng.uniform(-1, 1));
            cplx be(rng.uniform(-1, 1), rng.uniform(-1, 1));
            CVec3 p{al * u.x + be * v.x, al * u.y + be * v.y, al * u.z + be * v.z};
            CHECK(std::abs(b.eval(al, be) - f.eval(p)) < 1e-9);
        }
    }
}

TEST_CASE("restriction to a degenerate line is rejected") {
    HomPoly3 f = weierstrass_minus();
    Vec3 u{0.3, 0.4, 0.5};
    CHECK_THROWS_AS(restrict_to_line(f, u, 2.0 * u), AlgebraError);
}

TEST_CASE("polynomial JSON round-trip") {
    HomPoly3 f = weierstrass_minus();
    HomPoly3 g = HomPoly3::from_json(f.to_json());
    CHECK(f == g);
    // tolerant key forms
    HomPoly3 h = HomPoly3::from_json(nlohmann::json{
        {"degree", 2}, {"coeffs", {{"x^1 y^1", 2.0}, {"z^2", -2.0}}}});
    CHECK(h.coeff(1, 1) == doctest::Approx(1.0));  // normalized by max
    CHECK(h.coeff(0, 0) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(HomPoly3::from_json(nlohmann::json{
        {"degree", 2}, {"coeffs", {{"x^3", 1.0}}}}), ConfigError);
}

TEST_CASE("compose_linear matches evaluation after substitution") {
    Rng rng(23);
    std::array<std::array<double, 3>, 3> m{{{0.2, -1.0, 0.4}, {1.1, 0.3, -0.2}, {0.0, 0.7, 1.0}}};
    for (int trial = 0; trial < 10; ++trial) {
        int d = 1 + int(rng.below(4));
        HomPoly3 f = oracle::random_poly(d, rng);
        HomPoly3 g = f.compose_linear(m);
        for (int s = 0; s < 6; ++s) {
            Vec3 q = oracle::random_vec(rng);
            Vec3 mq{m[0][0] * q.x + m[0][1] * q.y + m[0][2] * q.z,
                    m[1][0] * q.x + m[1][1] * q.y + m[1][2] * q.z,
                    m[2][0] * q.x + m[2][1] * q.y + m[2][2] * q.z};
            // compose_linear renormalizes; compare projectively via ratios
            double lhs = g.eval(q), rhs = f.eval(mq);
            Vec3 q2 = oracle::random_vec(rng);
            Vec3 mq2{m[0][0] * q2.x + m[0][1] * q2.y + m[0][2] * q2.z,
                     m[1][0] * q2.x + m[1][1] * q2.y + m[1][2] * q2.z,
                     m[2][0] * q2.x + m[2][1] * q2.y + m[2][2] * q2.z};
            double lhs2 = g.eval(q2), rhs2 = f.eval(mq2);
            CHECK(lhs * rhs2 == doctest::Approx(rhs * lhs2).epsilon(1e-9));
        }
    }
}

TEST_CASE("product of linear forms expands correctly") {
    // (x+z)(x-z)(y) = (x^2 - z^2) y = x^2 y - y z^2
    HomPoly3 p = HomPoly3::multiply(
        HomPoly3::multiply(HomPoly3::linear_form({1, 0, 1}), HomPoly3::linear_form({1, 0, -1})),
        HomPoly3::linear_form({0, 1, 0}));
    CHECK(p.degree() == 3);
    CHECK(p.coeff(2, 1) == doctest::Approx(1.0));
    CHECK(p.coeff(0, 1) == doctest::Approx(-1.0));
    CHECK(p.coeff(3, 0) == doctest::Approx(0.0));
}
