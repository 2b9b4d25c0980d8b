#pragma once
#include <array>
#include <cmath>
#include <complex>
#include <algorithm>

namespace choreo {

using cplx = std::complex<double>;

struct Vec3 {
    double x = 0, y = 0, z = 0;
    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(Vec3 a) { double n = norm(a); return {a.x / n, a.y / n, a.z / n}; }

struct CVec3 {
    cplx x = 0, y = 0, z = 0;
    cplx& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    cplx operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline CVec3 operator+(CVec3 a, CVec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline CVec3 operator-(CVec3 a, CVec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline CVec3 operator*(cplx s, CVec3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline CVec3 to_complex(Vec3 a) { return {a.x, a.y, a.z}; }
inline CVec3 conjugate(CVec3 a) { return {std::conj(a.x), std::conj(a.y), std::conj(a.z)}; }
// Hermitian inner product <a,b> = sum a_i * conj(b_i)
inline cplx hdot(CVec3 a, CVec3 b) {
    return a.x * std::conj(b.x) + a.y * std::conj(b.y) + a.z * std::conj(b.z);
}
inline double cnorm(CVec3 a) { return std::sqrt(std::real(hdot(a, a))); }
inline CVec3 cnormalized(CVec3 a) { cplx s = 1.0 / cnorm(a); return s * a; }
inline double max_abs(CVec3 a) {
    return std::max({std::abs(a.x), std::abs(a.y), std::abs(a.z)});
}

// Chordal distance on CP^2 for unit vectors: sin of the Fubini-Study angle,
// computed as the orthogonal remainder of b against a. The naive form
// sqrt(1 - |<a,b>|^2) loses half the mantissa near zero; this one stays
// accurate down to machine precision for nearby points.
inline double chordal_cp2(CVec3 a, CVec3 b) {
    const cplx c = hdot(b, a);  // projection coefficient of b on unit a
    const CVec3 r = b - c * a;
    return std::min(1.0, cnorm(r));
}

// Chordal distance on RP^2 via the sphere double cover (unit inputs).
inline double chordal_rp2(Vec3 a, Vec3 b) {
    return std::min(norm(a - b), norm(a + b));
}

// Phase-canonical representative: first non-negligible coordinate real positive.
inline CVec3 canonical_phase(CVec3 p) {
    p = cnormalized(p);
    double m = max_abs(p);
    for (int i = 0; i < 3; ++i) {
        if (std::abs(p[i]) > 1e-9 * m) {
            cplx ph = std::conj(p[i]) / std::abs(p[i]);
            return ph * p;
        }
    }
    return p;
}

// Sign-canonical representative of a real projective point (unit input).
inline Vec3 canonical_sign(Vec3 p) {
    p = normalized(p);
    double m = std::max({std::abs(p.x), std::abs(p.y), std::abs(p.z)});
    for (int i = 0; i < 3; ++i) {
        if (std::abs(p[i]) > 1e-9 * m) return p[i] > 0 ? p : -p;
    }
    return p;
}

// Deviation of a projective point from being real: chordal distance to its conjugate.
inline double reality_defect(CVec3 p) {
    return chordal_cp2(cnormalized(p), cnormalized(conjugate(p)));
}

// Nearest real representative of a phase-canonical, nearly-real point.
inline Vec3 snap_real(CVec3 p) {
    p = canonical_phase(p);
    return normalized(Vec3{std::real(p.x), std::real(p.y), std::real(p.z)});
}

// Affine (x/z, y/z) helpers for the z=1 chart.
inline Vec3 lift_affine(double x, double y) { return normalized(Vec3{x, y, 1.0}); }

} // namespace choreo
