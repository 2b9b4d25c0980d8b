#include "choreo/intersect.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "choreo/errors.hpp"
#include "choreo/roots.hpp"

namespace choreo {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 rot_xz(double tx, double tz) {
    // R = Rx(tx) * Rz(tz), rows act on (x, y, z)
    double cx = std::cos(tx), sx = std::sin(tx);
    double cz = std::cos(tz), sz = std::sin(tz);
    Mat3 rx{{{1, 0, 0}, {0, cx, -sx}, {0, sx, cx}}};
    Mat3 rz{{{cz, -sz, 0}, {sz, cz, 0}, {0, 0, 1}}};
    Mat3 m{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            m[i][j] = 0;
            for (int k = 0; k < 3; ++k) m[i][j] += rx[i][k] * rz[k][j];
        }
    return m;
}

CVec3 mat_apply(const Mat3& m, const CVec3& q) {
    return CVec3{m[0][0] * q.x + m[0][1] * q.y + m[0][2] * q.z,
                 m[1][0] * q.x + m[1][1] * q.y + m[1][2] * q.z,
                 m[2][0] * q.x + m[2][1] * q.y + m[2][2] * q.z};
}

// univariate coefficients in y of F(x0, y, z0)
std::vector<cplx> y_slice(const HomPoly3& f, cplx x0, cplx z0) {
    int d = f.degree();
    std::vector<cplx> xp(d + 1, 1.0), zp(d + 1, 1.0);
    for (int i = 1; i <= d; ++i) {
        xp[i] = xp[i - 1] * x0;
        zp[i] = zp[i - 1] * z0;
    }
    std::vector<cplx> out(d + 1, 0.0);
    const auto& c = f.coeffs();
    for (int idx = 0; idx < f.n_terms(); ++idx) {
        if (c[idx] == 0.0) continue;
        int a, b, cc;
        HomPoly3::exponents_at(d, idx, a, b, cc);
        out[b] += c[idx] * xp[a] * zp[cc];
    }
    return out;
}

cplx sylvester_det(const std::vector<cplx>& p, const std::vector<cplx>& q) {
    int m = static_cast<int>(p.size()) - 1;
    int n = static_cast<int>(q.size()) - 1;
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(m + n, m + n);
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) s(r, r + k) = p[m - k];
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) s(n + r, r + k) = q[n - k];
    return s.determinant();
}

struct Attempt {
    std::vector<IntersectionPoint> pts;
    bool ok = false;
};

Attempt try_chart(const HomPoly3& f, const HomPoly3& g, const Mat3& m) {
    Attempt res;
    HomPoly3 fr = f.compose_linear(m);
    HomPoly3 gr = g.compose_linear(m);
    int dm = fr.degree(), dn = gr.degree();
    // need full y-degree so no intersection escapes through (0:1:0)
    if (std::abs(fr.coeff(0, dm)) < 1e-6 || std::abs(gr.coeff(0, dn)) < 1e-6) return res;

    const int mn = dm * dn;
    int K = 16;
    while (K < mn + 1) K *= 2;
    const double two_pi = 2 * std::numbers::pi;

    std::vector<cplx> det(K);
    for (int j = 0; j < K; ++j) {
        cplx xj = std::polar(1.0, two_pi * j / K);
        det[j] = sylvester_det(y_slice(fr, xj, 1.0), y_slice(gr, xj, 1.0));
    }
    std::vector<cplx> r(K, 0.0);
    for (int k = 0; k < K; ++k) {
        for (int j = 0; j < K; ++j) r[k] += det[j] * std::polar(1.0, -two_pi * j * k / K);
        r[k] /= double(K);
    }
    double rmax = 0;
    for (const auto& v : r) rmax = std::max(rmax, std::abs(v));
    if (rmax < 1e-12) return res;  // curves share a component
    for (int k = mn + 1; k < K; ++k)
        if (std::abs(r[k]) > 1e-7 * rmax) return res;  // inconsistent interpolation

    BinaryForm elim;
    elim.deg = mn;
    elim.c.assign(r.begin(), r.begin() + mn + 1);
    std::vector<BinaryRoot> xz;
    try {
        xz = binary_roots(elim);
    } catch (const AlgebraError&) {
        return res;
    }

    for (const auto& root : xz) {
        cplx x0 = root.pt.a, z0 = root.pt.b;
        auto fy = y_slice(fr, x0, z0);
        auto gy = y_slice(gr, x0, z0);
        std::vector<cplx> ys = aberth_roots(fy);
        double gscale = 0;
        for (const auto& c : gy) gscale += std::abs(c);
        std::vector<cplx> common;
        for (const auto& y : ys) {
            // Horner evaluation of the g-slice at y
            cplx val = 0;
            for (int i = dn; i >= 0; --i) val = val * y + gy[i];
            double ptscale = std::pow(std::max(1.0, std::abs(y)), dn);
            if (std::abs(val) <= 1e-6 * gscale * ptscale) common.push_back(y);
        }
        if (common.empty()) return res;
        if (common.size() > 1) {
            // distinct intersection points aligned over one eliminant root:
            // only the all-transversal split is unambiguous
            if (static_cast<int>(common.size()) != root.mult) return res;
        }
        int each = common.size() > 1 ? 1 : root.mult;
        for (const auto& y : common) {
            // (x0, y, z0) is homogeneous: y was solved for the unit (x0, z0) reps
            CVec3 q = polish_intersection(fr, gr, cnormalized(CVec3{x0, y, z0}));
            res.pts.push_back({canonical_phase(cnormalized(mat_apply(m, q))), each});
        }
    }
    int total = 0;
    for (const auto& p : res.pts) total += p.mult;
    if (total != mn) return res;
    for (const auto& p : res.pts) {
        double scale = std::pow(max_abs(p.p), dm);
        if (std::abs(f.eval(p.p)) > 1e-7 * std::max(scale, 1e-30)) return res;
        scale = std::pow(max_abs(p.p), dn);
        if (std::abs(g.eval(p.p)) > 1e-7 * std::max(scale, 1e-30)) return res;
    }
    res.ok = true;
    return res;
}

} // namespace

CVec3 polish_intersection(const HomPoly3& f, const HomPoly3& g, CVec3 p, int iters) {
    p = cnormalized(p);
    // chart: freeze the largest coordinate, solve the 2x2 system in the others
    int fix = 0;
    double best = std::abs(p.x);
    if (std::abs(p.y) > best) { fix = 1; best = std::abs(p.y); }
    if (std::abs(p.z) > best) fix = 2;
    int u = (fix + 1) % 3, v = (fix + 2) % 3;
    for (int it = 0; it < iters; ++it) {
        cplx fv = f.eval(p), gv = g.eval(p);
        if (std::abs(fv) + std::abs(gv) < 1e-15) break;
        CVec3 gf = f.gradient(p), gg = g.gradient(p);
        cplx a = gf[u], b = gf[v], c = gg[u], d = gg[v];
        cplx det = a * d - b * c;
        if (std::abs(det) < 1e-14) break;
        cplx du = (d * fv - b * gv) / det;
        cplx dv = (a * gv - c * fv) / det;
        p[u] -= du;
        p[v] -= dv;
        if (std::abs(du) + std::abs(dv) < 1e-16 * max_abs(p)) break;
    }
    return canonical_phase(cnormalized(p));
}

std::vector<IntersectionPoint> intersect_curves(const HomPoly3& f, const HomPoly3& g) {
    const Mat3 charts[] = {
        rot_xz(0.0, 0.0),  rot_xz(0.9, 0.4), rot_xz(2.1, 1.3),
        rot_xz(0.35, 2.6), rot_xz(1.7, 0.8), rot_xz(2.8, 2.2),
    };
    for (const auto& m : charts) {
        Attempt a = try_chart(f, g, m);
        if (!a.ok) continue;
        std::sort(a.pts.begin(), a.pts.end(), [](const IntersectionPoint& l, const IntersectionPoint& r) {
            auto key = [](const IntersectionPoint& q) {
                return std::array<double, 6>{q.p.x.real(), q.p.x.imag(), q.p.y.real(),
                                             q.p.y.imag(), q.p.z.real(), q.p.z.imag()};
            };
            return key(l) < key(r);
        });
        return a.pts;
    }
    throw AlgebraError("solver_stall",
                       "intersection solve failed in every chart (shared component or "
                       "unresolvable multiplicity)");
}

} // namespace choreo
