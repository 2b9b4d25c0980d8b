#include "choreo/roots.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <tuple>

#include "choreo/errors.hpp"

namespace choreo {

CP1 CP1::make(cplx a, cplx b) {
    double n = std::sqrt(std::norm(a) + std::norm(b));
    return {a / n, b / n};
}

CP1 CP1::canonical() const {
    cplx anchor = std::abs(a) >= std::abs(b) ? a : b;
    cplx ph = std::conj(anchor) / std::abs(anchor);
    return {ph * a, ph * b};
}

double chordal_cp1(CP1 p, CP1 q) {
    return std::abs(p.a * q.b - p.b * q.a);
}

std::vector<cplx> aberth_roots(std::vector<cplx> c) {
    int n = static_cast<int>(c.size()) - 1;
    while (n > 0 && std::abs(c[n]) == 0.0) --n;  // caller should trim; be safe
    c.resize(n + 1);
    if (n <= 0) return {};
    if (n == 1) return {-c[0] / c[1]};

    // strip roots at the origin
    int zeros = 0;
    while (zeros < n && std::abs(c[zeros]) == 0.0) ++zeros;
    std::vector<cplx> roots(zeros, cplx(0, 0));
    if (zeros) c.erase(c.begin(), c.begin() + zeros);
    int m = n - zeros;
    if (m == 0) return roots;
    if (m == 1) { roots.push_back(-c[0] / c[1]); return roots; }

    // Cauchy-style inclusion radius
    double r = 0;
    for (int k = 0; k < m; ++k)
        r = std::max(r, std::pow(std::abs(c[k] / c[m]), 1.0 / (m - k)));
    r = 2.0 * std::max(r, 0.5);

    std::vector<cplx> z(m);
    for (int j = 0; j < m; ++j) {
        double ang = 2.0 * M_PI * j / m + 0.4;  // fixed offset avoids symmetry stalls
        z[j] = 0.7 * r * cplx(std::cos(ang), std::sin(ang));
    }

    auto horner = [&](cplx t, cplx& p, cplx& dp) {
        p = c[m]; dp = 0;
        for (int k = m - 1; k >= 0; --k) { dp = dp * t + p; p = p * t + c[k]; }
    };

    for (int iter = 0; iter < 300; ++iter) {
        double worst = 0;
        for (int j = 0; j < m; ++j) {
            cplx p, dp;
            horner(z[j], p, dp);
            if (std::abs(p) == 0.0) continue;
            if (std::abs(dp) == 0.0) { z[j] += 1e-8 * (1.0 + std::abs(z[j])); continue; }
            cplx nj = p / dp;
            cplx s = 0;
            for (int i = 0; i < m; ++i)
                if (i != j) s += 1.0 / (z[j] - z[i]);
            cplx denom = 1.0 - nj * s;
            cplx step = std::abs(denom) < 1e-300 ? nj : nj / denom;
            z[j] -= step;
            worst = std::max(worst, std::abs(step) / (1.0 + std::abs(z[j])));
        }
        if (worst < 1e-15) break;
    }
    roots.insert(roots.end(), z.begin(), z.end());
    return roots;
}

namespace {

// hierarchical single-link clustering of CP1 points at the given radius
std::vector<std::vector<int>> cluster_cp1(const std::vector<CP1>& pts, double radius) {
    int n = static_cast<int>(pts.size());
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (chordal_cp1(pts[i], pts[j]) <= radius) parent[find(i)] = find(j);
    std::vector<std::vector<int>> groups;
    std::vector<int> slot(n, -1);
    for (int i = 0; i < n; ++i) {
        int root = find(i);
        if (slot[root] < 0) { slot[root] = static_cast<int>(groups.size()); groups.emplace_back(); }
        groups[slot[root]].push_back(i);
    }
    return groups;
}

} // namespace

std::vector<BinaryRoot> binary_roots(const BinaryForm& b_in, double cluster_tol) {
    if (b_in.deg < 0) throw AlgebraError("degenerate_line", "empty binary form");
    BinaryForm b = b_in.normalized();
    int d = b.deg;
    if (b.norm_inf() == 0.0)
        throw AlgebraError("degenerate_line", "zero binary form has no root set");
    if (d == 0) return {};

    const double lead_tol = 1e-12;
    const double merge_tol = 1e-8;

    // chart beta = 1: p(t) = sum c[k] t^k
    std::vector<cplx> pc = b.c;
    int m1 = d;
    while (m1 > 0 && std::abs(pc[m1]) <= lead_tol) --m1;
    pc.resize(m1 + 1);
    std::vector<cplx> tb = aberth_roots(pc);

    // chart alpha = 1: q(s) = sum c[d-j] s^j
    std::vector<cplx> qc(d + 1);
    for (int j = 0; j <= d; ++j) qc[j] = b.c[d - j];
    int m2 = d;
    while (m2 > 0 && std::abs(qc[m2]) <= lead_tol) --m2;
    qc.resize(m2 + 1);
    std::vector<cplx> sa = aberth_roots(qc);

    // keep the chart in which each root is best conditioned
    std::vector<CP1> cand;
    for (cplx t : tb)
        if (std::abs(t) <= 1.0) cand.push_back(CP1::make(t, 1.0));
    for (cplx s : sa)
        if (std::abs(s) < 1.0) cand.push_back(CP1::make(1.0, s));

    // boundary repair: solver noise at |t| ~ 1 can double-count or drop a root
    if (static_cast<int>(cand.size()) != d) {
        if (static_cast<int>(cand.size()) > d) {
            while (static_cast<int>(cand.size()) > d) {
                double best = 1e9;
                int bj = -1;
                for (size_t i = 0; i < cand.size(); ++i)
                    for (size_t j = i + 1; j < cand.size(); ++j) {
                        double dd = chordal_cp1(cand[i], cand[j]);
                        if (dd < best) { best = dd; bj = int(j); }
                    }
                if (best > merge_tol) break;
                cand.erase(cand.begin() + bj);
            }
        } else {
            std::vector<CP1> rejected;
            for (cplx t : tb) if (std::abs(t) > 1.0) rejected.push_back(CP1::make(t, 1.0));
            for (cplx s : sa) if (std::abs(s) >= 1.0) rejected.push_back(CP1::make(1.0, s));
            while (static_cast<int>(cand.size()) < d && !rejected.empty()) {
                // re-admit the rejected candidate farthest from all accepted ones
                size_t pick = 0;
                double best = -1;
                for (size_t i = 0; i < rejected.size(); ++i) {
                    double mind = 1e9;
                    for (auto& c : cand) mind = std::min(mind, chordal_cp1(rejected[i], c));
                    if (mind > best) { best = mind; pick = i; }
                }
                cand.push_back(rejected[pick]);
                rejected.erase(rejected.begin() + pick);
            }
        }
        if (static_cast<int>(cand.size()) != d)
            throw AlgebraError("solver_stall", "binary root count mismatch after chart merge");
    }

    auto groups = cluster_cp1(cand, cluster_tol);
    std::vector<BinaryRoot> out;
    for (auto& g : groups) {
        // phase-aligned centroid of the cluster as the representative
        cplx aa = 0, bb = 0;
        CP1 ref = cand[g[0]].canonical();
        for (int i : g) {
            CP1 p = cand[i].canonical();
            // align to ref to avoid phase cancellation
            cplx ip = p.a * std::conj(ref.a) + p.b * std::conj(ref.b);
            cplx ph = std::abs(ip) > 0 ? std::conj(ip) / std::abs(ip) : cplx(1, 0);
            aa += ph * p.a;
            bb += ph * p.b;
        }
        out.push_back({CP1::make(aa, bb).canonical(), static_cast<int>(g.size())});
    }
    std::sort(out.begin(), out.end(), [](const BinaryRoot& x, const BinaryRoot& y) {
        auto kx = std::make_tuple(std::real(x.pt.a), std::imag(x.pt.a), std::real(x.pt.b), std::imag(x.pt.b));
        auto ky = std::make_tuple(std::real(y.pt.a), std::imag(y.pt.a), std::real(y.pt.b), std::imag(y.pt.b));
        return kx < ky;
    });
    return out;
}

BinaryForm deflate(const BinaryForm& b_in, CP1 root, double tol) {
    BinaryForm b = b_in.normalized();
    int d = b.deg;
    if (d < 1) throw AlgebraError("not_a_root", "cannot deflate a constant form");
    if (std::abs(b.eval(root.a, root.b)) > tol)
        throw AlgebraError("not_a_root", "deflation point is not a root of the form");
    BinaryForm out;
    out.deg = d - 1;
    out.c.assign(d, 0.0);
    if (std::abs(root.b) >= std::abs(root.a)) {
        // divide p(t) by (t - t0), ascending synthetic division
        cplx t0 = root.a / root.b;
        // quotient q with p(t) = (t - t0) q(t) + r ; q[k] for k = d-1..0
        cplx carry = b.c[d];
        for (int k = d - 1; k >= 0; --k) {
            out.c[k] = carry;
            carry = b.c[k] + carry * t0;
        }
    } else {
        // work in the alpha chart on q(s) = sum c[d-j] s^j, divide by (s - s0)
        cplx s0 = root.b / root.a;
        std::vector<cplx> rc(d + 1);
        for (int j = 0; j <= d; ++j) rc[j] = b.c[d - j];
        std::vector<cplx> q(d, 0.0);
        cplx carry = rc[d];
        for (int j = d - 1; j >= 0; --j) {
            q[j] = carry;
            carry = rc[j] + carry * s0;
        }
        // q corresponds to the reversed coefficients of the deflated form
        for (int k = 0; k <= d - 1; ++k) out.c[k] = q[d - 1 - k];
    }
    return out.normalized();
}

ConjPartition conj_partition(const std::vector<CVec3>& points, double tol) {
    ConjPartition out;
    std::vector<CVec3> leftovers;
    for (const auto& p : points) {
        CVec3 q = cnormalized(p);
        if (reality_defect(q) <= tol)
            out.real_points.push_back(canonical_sign(snap_real(q)));
        else
            leftovers.push_back(q);
    }
    std::vector<bool> used(leftovers.size(), false);
    for (size_t i = 0; i < leftovers.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        CVec3 want = conjugate(leftovers[i]);
        int best = -1;
        double bd = 1e9;
        for (size_t j = i + 1; j < leftovers.size(); ++j) {
            if (used[j]) continue;
            double dd = chordal_cp2(cnormalized(want), leftovers[j]);
            if (dd < bd) { bd = dd; best = static_cast<int>(j); }
        }
        if (best < 0 || bd > tol)
            throw AlgebraError("unpaired_point", "complex point has no conjugate partner in the multiset");
        used[best] = true;
        CVec3 a = canonical_phase(leftovers[i]);
        CVec3 bpt = canonical_phase(leftovers[best]);
        // pick representative: first significantly complex coordinate ratio with
        // positive imaginary part in the z chart (fall back x, then y anchor)
        auto imag_signature = [](const CVec3& v) {
            int anchor = 2;
            double m = max_abs(v);
            if (std::abs(v.z) < 1e-6 * m) anchor = std::abs(v.x) >= std::abs(v.y) ? 0 : 1;
            for (int i = 0; i < 3; ++i) {
                if (i == anchor) continue;
                cplx ratio = v[i] / v[anchor];
                if (std::abs(std::imag(ratio)) > 1e-12) return std::imag(ratio);
            }
            return 0.0;
        };
        if (imag_signature(a) >= 0)
            out.pairs.emplace_back(a, bpt);
        else
            out.pairs.emplace_back(bpt, a);
    }
    return out;
}

} // namespace choreo
