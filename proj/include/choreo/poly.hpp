#pragma once
#include <string>
#include <vector>
#include <nlohmann/json_fwd.hpp>

#include "choreo/geometry.hpp"

namespace choreo {

// Dense homogeneous trivariate polynomial over the reals, graded-lex monomial
// order (x > y > z): exponent triples (a,b,c), a+b+c = deg, sorted by
// descending a then descending b. Coefficients are normalized to max |c| = 1
// on construction (zero polynomials are rejected).
class HomPoly3 {
public:
    HomPoly3() = default;
    HomPoly3(int degree, std::vector<double> coeffs);  // normalizes

    int degree() const { return deg_; }
    int n_terms() const { return static_cast<int>(c_.size()); }
    const std::vector<double>& coeffs() const { return c_; }

    static int index_of(int degree, int a, int b);        // (a,b,deg-a-b) -> flat index
    static void exponents_at(int degree, int idx, int& a, int& b, int& c);
    static int term_count(int degree) { return (degree + 1) * (degree + 2) / 2; }

    double coeff(int a, int b) const { return c_[index_of(deg_, a, b)]; }

    cplx eval(const CVec3& p) const;
    double eval(const Vec3& p) const;
    CVec3 gradient(const CVec3& p) const;
    Vec3 gradient(const Vec3& p) const;

    // F(M q) for a real 3x3 matrix M acting on coordinates (rows of m are the
    // linear forms substituted for x, y, z).
    HomPoly3 compose_linear(const std::array<std::array<double, 3>, 3>& m) const;

    // Raw (pre-normalization) linear combination helper for pencils.
    static HomPoly3 combine(double s0, const HomPoly3& f0, double s1, const HomPoly3& f1);

    // Product of homogeneous polynomials (used to build totally reducible forms).
    static HomPoly3 multiply(const HomPoly3& f, const HomPoly3& g);
    static HomPoly3 linear_form(Vec3 l);  // l.x*x + l.y*y + l.z*z

    nlohmann::json to_json() const;
    static HomPoly3 from_json(const nlohmann::json& j);

    bool operator==(const HomPoly3& o) const { return deg_ == o.deg_ && c_ == o.c_; }

private:
    int deg_ = -1;
    std::vector<double> c_;
};

// Binary form B(alpha, beta) = sum_k c[k] alpha^k beta^(deg-k), complex coefficients.
struct BinaryForm {
    int deg = -1;
    std::vector<cplx> c;  // size deg+1, c[k] multiplies alpha^k

    cplx eval(cplx alpha, cplx beta) const;
    double norm_inf() const;
    BinaryForm normalized() const;
};

// Restriction of F to the projective line spanned by real points u, v:
// B(alpha,beta) = F(alpha*u + beta*v). Throws AlgebraError("degenerate_line")
// if the restriction vanishes identically (u, v projectively equal or F
// contains the line).
BinaryForm restrict_to_line(const HomPoly3& f, Vec3 u, Vec3 v);

// Multiplication of binary forms (convolution); used by tests and Vieta checks.
BinaryForm binary_multiply(const BinaryForm& a, const BinaryForm& b);

} // namespace choreo
