#include "choreo/topology.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "choreo/errors.hpp"
#include "choreo/rng.hpp"
#include "choreo/roots.hpp"

namespace choreo {

namespace {

constexpr double kGradFloor = 1e-6;

// Newton correction onto {F=0} within the sphere tangent plane.
bool correct_to_curve(const HomPoly3& f, Vec3& p, double target) {
    for (int it = 0; it < 25; ++it) {
        double val = f.eval(p);
        if (std::abs(val) <= target) return true;
        Vec3 g = f.gradient(p);
        Vec3 gt = g - dot(g, p) * p;
        double n2 = dot(gt, gt);
        if (n2 < kGradFloor * kGradFloor)
            throw TopologyError("singular_curve", "vanishing tangential gradient during correction");
        p = normalized(p - (val / n2) * gt);
    }
    return std::abs(f.eval(p)) <= target * 10;
}

Vec3 curve_tangent(const HomPoly3& f, Vec3 p) {
    Vec3 g = f.gradient(p);
    Vec3 t = cross(g, p);
    double n = norm(t);
    if (n < kGradFloor)
        throw TopologyError("singular_curve", "vanishing gradient on the locus");
    return (1.0 / n) * t;
}

double dist_point_segment(Vec3 p, Vec3 a, Vec3 b) {
    Vec3 ab = b - a;
    double len2 = dot(ab, ab);
    double s = len2 > 0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    return norm(p - (a + s * ab));
}

// directed Hausdorff distance from polyline A's vertices to polyline B
double hausdorff_verts(const std::vector<Vec3>& a, const CurveComponent& b, bool flip) {
    double worst = 0;
    for (size_t i = 0; i < a.size(); i += 7) {  // subsample; plenty for dedup
        Vec3 p = flip ? -a[i] : a[i];
        double best = 1e9;
        for (size_t j = 0; j < b.seg_count(); ++j)
            best = std::min(best, dist_point_segment(p, b.verts[j], b.seg_end(j)));
        worst = std::max(worst, best);
        if (worst > 1e8) break;
    }
    return worst;
}

std::vector<Vec3> scan_seeds(const HomPoly3& f, double tol) {
    const int n_circles = 64;
    const int n_samples = 1024;
    std::vector<Vec3> seeds;
    for (int ci = 0; ci < n_circles; ++ci) {
        // Fibonacci-distributed circle normals
        double zc = 1.0 - 2.0 * (ci + 0.5) / n_circles;
        double rr = std::sqrt(std::max(0.0, 1.0 - zc * zc));
        double ang = M_PI * (1.0 + std::sqrt(5.0)) * (ci + 0.5);
        Vec3 n{rr * std::cos(ang), rr * std::sin(ang), zc};
        Vec3 e1 = normalized(std::abs(n.z) < 0.9 ? cross(n, Vec3{0, 0, 1}) : cross(n, Vec3{1, 0, 0}));
        Vec3 e2 = cross(n, e1);
        double prev_val = 0;
        Vec3 prev_pt;
        for (int si = 0; si <= n_samples; ++si) {
            double th = 2.0 * M_PI * si / n_samples;
            Vec3 pt = std::cos(th) * e1 + std::sin(th) * e2;
            double val = f.eval(pt);
            if (si > 0 && prev_val * val < 0) {
                // bisection on the circle arc
                double lo = 2.0 * M_PI * (si - 1) / n_samples, hi = th;
                double flo = prev_val;
                for (int b = 0; b < 40; ++b) {
                    double mid = 0.5 * (lo + hi);
                    Vec3 pm = std::cos(mid) * e1 + std::sin(mid) * e2;
                    double fm = f.eval(pm);
                    if (flo * fm <= 0) hi = mid;
                    else { lo = mid; flo = fm; }
                }
                Vec3 seed = std::cos(0.5 * (lo + hi)) * e1 + std::sin(0.5 * (lo + hi)) * e2;
                if (correct_to_curve(f, seed, tol)) seeds.push_back(seed);
            }
            prev_val = val;
            prev_pt = pt;
        }
    }
    return seeds;
}

CurveComponent march_component(const HomPoly3& f, Vec3 seed, double step, double tol) {
    CurveComponent comp;
    Vec3 p = seed;
    correct_to_curve(f, p, tol);
    Vec3 dir = curve_tangent(f, p);
    comp.verts.push_back(p);
    const Vec3 start = p;
    const size_t max_steps = static_cast<size_t>(64.0 / step);
    for (size_t k = 0; k < max_steps; ++k) {
        Vec3 q = normalized(p + step * dir);
        if (!correct_to_curve(f, q, tol))
            throw TopologyError("singular_curve", "marching corrector failed to converge");
        Vec3 t = curve_tangent(f, q);
        if (dot(t, dir) < 0) t = -t;
        // closure tests against both the start and its antipode
        if (comp.verts.size() > 10) {
            double d_start = norm(q - start), d_anti = norm(q + start);
            if (d_start < 1.4 * step || d_anti < 1.4 * step) {
                bool anti = d_anti < d_start;
                Vec3 target = anti ? -start : start;
                // land adaptively so the final gap is below one step
                Vec3 cur = q;
                int guard = 0;
                while (norm(cur - target) >= 0.9 * step && guard++ < 60) {
                    double sub = 0.5 * norm(cur - target);
                    Vec3 tt = curve_tangent(f, cur);
                    if (dot(tt, dir) < 0) tt = -tt;
                    cur = normalized(cur + sub * tt);
                    correct_to_curve(f, cur, tol);
                }
                if (norm(cur - target) < 0.9 * step) {
                    if (norm(cur - comp.verts.back()) > 0.05 * step) comp.verts.push_back(cur);
                    comp.kind = anti ? CurveComponent::Kind::OneSided : CurveComponent::Kind::Oval;
                    // arc table
                    comp.cum.resize(comp.verts.size());
                    comp.cum[0] = 0;
                    for (size_t i = 1; i < comp.verts.size(); ++i)
                        comp.cum[i] = comp.cum[i - 1] + norm(comp.verts[i] - comp.verts[i - 1]);
                    comp.total_len = comp.cum.back() + norm(comp.closing_target() - comp.verts.back());
                    return comp;
                }
            }
        }
        comp.verts.push_back(q);
        p = q;
        dir = t;
    }
    throw TopologyError("seed_miss", "marching failed to close a component");
}

} // namespace

Vec3 CurveComponent::at_phi(double phi) const {
    phi -= std::floor(phi);
    double s = phi * total_len;
    // binary search in cum
    size_t lo = 0, hi = verts.size();
    while (lo + 1 < hi) {
        size_t mid = (lo + hi) / 2;
        if (cum[mid] <= s) lo = mid;
        else hi = mid;
    }
    Vec3 a = verts[lo], b = seg_end(lo);
    double seg = norm(b - a);
    double frac = seg > 0 ? std::clamp((s - cum[lo]) / seg, 0.0, 1.0) : 0.0;
    return normalized(a + frac * (b - a));
}

const CurveComponent* CurveTopology::oval() const {
    for (auto& c : comps)
        if (c.kind == CurveComponent::Kind::Oval) return &c;
    return nullptr;
}

const CurveComponent* CurveTopology::one_sided() const {
    for (auto& c : comps)
        if (c.kind == CurveComponent::Kind::OneSided) return &c;
    return nullptr;
}

int line_crossings(const CurveComponent& comp, Vec3 n) {
    n = normalized(n);
    // cyclic sign sequence; one-sided components close antipodally, which
    // flips the sign of the wrapped sample
    std::vector<double> s;
    s.reserve(comp.verts.size() + 1);
    for (const auto& v : comp.verts) s.push_back(dot(n, v));
    double wrap = dot(n, comp.verts.front());
    s.push_back(comp.kind == CurveComponent::Kind::OneSided ? -wrap : wrap);
    int total = 0;
    for (size_t i = 0; i + 1 < s.size(); ++i)
        if (s[i] * s[i + 1] < 0) ++total;
    return total;
}

int line_crossings(const CurveTopology& topo, Vec3 n) {
    int total = 0;
    for (const auto& comp : topo.comps) total += line_crossings(comp, n);
    return total;
}

CurveTopology trace_real_locus(const HomPoly3& f, double step, double tol) {
    CurveTopology topo;
    topo.curve = f;
    topo.step = step;
    auto seeds = scan_seeds(f, tol);
    if (seeds.empty())
        throw TopologyError("seed_miss", "no real points found on any scanning circle");

    std::vector<bool> used(seeds.size(), false);
    for (size_t si = 0; si < seeds.size(); ++si) {
        if (used[si]) continue;
        CurveComponent comp = march_component(f, seeds[si], step, tol);
        // consume seeds covered by this component (either sphere lift)
        for (size_t sj = si; sj < seeds.size(); ++sj) {
            if (used[sj]) continue;
            double best = 1e9;
            for (size_t k = 0; k < comp.seg_count(); ++k) {
                best = std::min(best, dist_point_segment(seeds[sj], comp.verts[k], comp.seg_end(k)));
                best = std::min(best, dist_point_segment(-seeds[sj], comp.verts[k], comp.seg_end(k)));
                if (best < 3 * step) break;
            }
            if (best < 3 * step) used[sj] = true;
        }
        // deduplicate against already traced components (projective identity)
        bool dup = false;
        for (const auto& prev : topo.comps)
            if (hausdorff_verts(comp.verts, prev, false) < 3 * step ||
                hausdorff_verts(comp.verts, prev, true) < 3 * step) {
                dup = true;
                break;
            }
        if (!dup) {
            comp.id = static_cast<int>(topo.comps.size());
            topo.comps.push_back(std::move(comp));
        }
    }

    // gradient audit on all vertices
    for (const auto& comp : topo.comps)
        for (const auto& v : comp.verts)
            if (norm(f.gradient(v)) < kGradFloor)
                throw TopologyError("singular_curve", "gradient below threshold on traced locus");

    // parity audit: a generic line meets a degree-d curve in d mod 2 points
    Rng rng(1234);
    int done = 0;
    while (done < 20) {
        Vec3 n{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        if (norm(n) < 0.1) continue;
        n = normalized(n);
        bool degenerate = false;
        for (const auto& comp : topo.comps) {
            for (const auto& v : comp.verts)
                if (std::abs(dot(n, v)) < 1e-9) { degenerate = true; break; }
            if (degenerate) break;
        }
        if (degenerate) continue;
        if ((line_crossings(topo, n) - f.degree()) % 2 != 0)
            throw TopologyError("seed_miss", "line parity audit contradicts traced components");
        ++done;
    }

    topo.cubic_type = classify_cubic_type(topo);
    return topo;
}

std::optional<LocateResult> locate_near(Vec3 p, const CurveComponent& comp, int hint_segment,
                                        double tol) {
    const int n = static_cast<int>(comp.seg_count());
    auto eval_seg = [&](int i, LocateResult& best) {
        Vec3 a = comp.verts[i], b = comp.seg_end(i);
        for (int sgn = 0; sgn < 2; ++sgn) {
            Vec3 q = sgn ? -p : p;
            Vec3 ab = b - a;
            double len2 = dot(ab, ab);
            double s = len2 > 0 ? std::clamp(dot(q - a, ab) / len2, 0.0, 1.0) : 0.0;
            double d = norm(q - (a + s * ab));
            if (d < best.dist) {
                best.dist = d;
                best.segment = i;
                double along = comp.cum[i] + s * std::sqrt(len2);
                best.phi = along / comp.total_len;
                if (best.phi >= 1.0) best.phi -= 1.0;
            }
        }
    };
    LocateResult best;
    best.dist = 1e9;
    if (hint_segment >= 0 && n > 0) {
        for (int window = 32; 2 * window + 1 < n; window *= 4) {
            best.dist = 1e9;
            for (int off = -window; off <= window; ++off)
                eval_seg(((hint_segment + off) % n + n) % n, best);
            if (best.dist <= tol) return best;
        }
    }
    best.dist = 1e9;
    for (int i = 0; i < n; ++i) eval_seg(i, best);
    if (best.dist <= tol) return best;
    return std::nullopt;
}

LocateResult locate_on_component(Vec3 p, const CurveTopology& topo, double tol) {
    p = normalized(p);
    LocateResult best;
    best.dist = 1e9;
    for (const auto& comp : topo.comps) {
        auto r = locate_near(p, comp, -1, 1e9);
        if (r && r->dist < best.dist) {
            best = *r;
            best.comp = comp.id;
        }
    }
    if (best.comp < 0 || best.dist > tol)
        throw TopologyError("off_curve", "point is not on the traced locus within tolerance");
    return best;
}

namespace {

// affine chart containing the oval: returns chart pole m and in-plane basis
// (a,b) with (m,a,b) right-handed; prefers the standard charts
struct OvalChart {
    Vec3 m, a, b;
};

OvalChart oval_chart(const CurveComponent& comp) {
    if (comp.kind != CurveComponent::Kind::Oval)
        throw TopologyError("no_oval", "interiority is defined for ovals only");
    auto visible = [&](Vec3 mm) {
        for (const auto& v : comp.verts)
            if (dot(mm, v) < 0.05) return false;
        return true;
    };
    // Standard coordinate charts first, with fixed planar bases so the induced
    // orientation is the standard one of that affine chart. Projection through
    // the negative pole rotates coordinates by pi, which keeps orientation, so
    // the basis does not depend on the pole sign.
    struct Cand { Vec3 pole, a, b; };
    const Cand charts[] = {
        {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}},   // chart z: (x, y)
        {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},   // chart x: (y, z)
        {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}},   // chart y: (z, x)
    };
    for (const auto& cand : charts) {
        double sgn = dot(cand.pole, comp.verts.front()) >= 0 ? 1.0 : -1.0;
        Vec3 mm = sgn * cand.pole;
        if (visible(mm)) return {mm, cand.a, cand.b};
    }
    // fallback: mean direction with any right-handed in-plane basis
    Vec3 mean{0, 0, 0};
    for (const auto& v : comp.verts) mean = mean + v;
    if (norm(mean) > 1e-6) {
        Vec3 mm = normalized(mean);
        if (visible(mm)) {
            Vec3 a = normalized(std::abs(mm.z) < 0.9 ? cross(Vec3{0, 0, 1}, mm)
                                                     : cross(Vec3{1, 0, 0}, mm));
            return {mm, a, cross(mm, a)};
        }
    }
    throw TopologyError("ambiguous", "no affine chart contains the oval");
}

} // namespace

bool point_in_oval(Vec3 p, const CurveComponent& comp) {
    OvalChart ch = oval_chart(comp);
    p = normalized(p);
    double pm = dot(ch.m, p);
    if (std::abs(pm) < 1e-9) return false;  // on the chart's line at infinity
    if (pm < 0) { p = -p; pm = -pm; }
    double px = dot(ch.a, p) / pm, py = dot(ch.b, p) / pm;

    // project oval to the chart
    std::vector<std::pair<double, double>> poly;
    poly.reserve(comp.verts.size());
    for (const auto& v : comp.verts) {
        double vm = dot(ch.m, v);
        poly.emplace_back(dot(ch.a, v) / vm, dot(ch.b, v) / vm);
    }

    for (int attempt = 0; attempt < 5; ++attempt) {
        double ang = 0.7308 + attempt * 1.222;  // fixed, irrational-ish spread
        double dx = std::cos(ang), dy = std::sin(ang);
        int crossings = 0;
        bool bad = false;
        size_t n = poly.size();
        for (size_t i = 0; i < n; ++i) {
            auto [x1, y1] = poly[i];
            auto [x2, y2] = poly[(i + 1) % n];
            // signed position of the endpoints across the ray line
            double s1 = (x1 - px) * dy - (y1 - py) * dx;
            double s2 = (x2 - px) * dy - (y2 - py) * dx;
            if (std::abs(s1) < 1e-12 || std::abs(s2) < 1e-12) { bad = true; break; }
            if (s1 * s2 < 0) {
                double t = s1 / (s1 - s2);
                double fx = x1 + t * (x2 - x1), fy = y1 + t * (y2 - y1);
                double fwd = (fx - px) * dx + (fy - py) * dy;
                if (std::abs(fwd) < 1e-12) { bad = true; break; }
                if (fwd > 0) ++crossings;
            }
        }
        if (!bad) return crossings % 2 == 1;
    }
    throw TopologyError("ambiguous", "ray parity test degenerate in all retry directions");
}

CurveType classify_cubic_type(const CurveTopology& topo) {
    if (topo.curve.degree() != 3) return CurveType::Unknown;
    size_t n = topo.comps.size();
    if (n == 2) return CurveType::TypeI;
    if (n == 1) return CurveType::TypeII;
    return CurveType::Unknown;
}

void complex_orientation_cubic(CurveTopology& topo, Vec3 c) {
    if (topo.curve.degree() != 3 || topo.comps.size() != 2)
        throw TopologyError("covering_degree",
                            "complex orientations require a two-component cubic");
    CurveComponent* oval = nullptr;
    CurveComponent* side = nullptr;
    for (auto& comp : topo.comps) {
        if (comp.kind == CurveComponent::Kind::Oval) oval = &comp;
        else side = &comp;
    }
    if (!oval || !side)
        throw TopologyError("covering_degree", "expected one oval and one one-sided component");
    if (!point_in_oval(c, *oval))
        throw TopologyError("not_interior", "orientation base point must lie inside the oval");

    // 1) orient the oval counterclockwise in its affine chart
    OvalChart ch = oval_chart(*oval);
    double area2 = 0;
    size_t n = oval->verts.size();
    std::vector<std::pair<double, double>> poly(n);
    for (size_t i = 0; i < n; ++i) {
        double vm = dot(ch.m, oval->verts[i]);
        poly[i] = {dot(ch.a, oval->verts[i]) / vm, dot(ch.b, oval->verts[i]) / vm};
    }
    for (size_t i = 0; i < n; ++i) {
        auto [x1, y1] = poly[i];
        auto [x2, y2] = poly[(i + 1) % n];
        area2 += x1 * y2 - x2 * y1;
    }
    oval->orientation = area2 > 0 ? +1 : -1;

    // 2) measure the covering degree of "oval point -> one-sided intersection of
    //    the line through c" in stored orders
    Vec3 cc = normalized(c);
    size_t stride = std::max<size_t>(1, n / 512);
    std::vector<size_t> sample_idx;
    for (size_t i = 0; i < n; i += stride) sample_idx.push_back(i);
    sample_idx.push_back(0);  // full cycle back to the first vertex
    double lift = 0, first_phi = 0;
    bool have_first = false;
    int hint = -1;
    for (size_t k : sample_idx) {
        Vec3 q = oval->verts[k];
        Vec3 lcoef = cross(cc, q);
        if (norm(lcoef) < 1e-12) continue;  // q projectively equal to c; cannot happen
        // basis points on the line: c itself and an orthonormal companion
        Vec3 u = cc;
        Vec3 v = normalized(cross(normalized(lcoef), u));
        BinaryForm b = restrict_to_line(topo.curve, u, v);
        auto roots = binary_roots(b);
        // find the root on the one-sided component
        double best_d = 1e9, phi = 0;
        int best_seg = -1;
        for (const auto& r : roots) {
            if (chordal_cp1(r.pt, conjugate(r.pt)) > 1e-6) continue;  // complex root
            CP1 cp = r.pt.canonical();
            Vec3 w = normalized(Vec3{std::real(cp.a) * u.x + std::real(cp.b) * v.x,
                                     std::real(cp.a) * u.y + std::real(cp.b) * v.y,
                                     std::real(cp.a) * u.z + std::real(cp.b) * v.z});
            auto loc = locate_near(w, *side, hint, 6 * topo.step);
            if (loc && loc->dist < best_d) {
                best_d = loc->dist;
                phi = loc->phi;
                best_seg = loc->segment;
            }
        }
        if (best_seg < 0)
            throw TopologyError("covering_degree",
                                "line through the interior point missed the one-sided component");
        hint = best_seg;
        if (!have_first) {
            first_phi = phi;
            lift = phi;
            have_first = true;
        } else {
            double delta = phi - (lift - std::floor(lift));
            delta -= std::round(delta);
            lift += delta;
        }
    }
    double winding = lift - first_phi;
    double w = winding * oval->orientation;  // degree against the fixed oval orientation
    long wi = std::lround(w);
    if (std::abs(w - wi) > 0.05 || std::abs(wi) != 2)
        throw TopologyError("covering_degree",
                            "pencil covering degree is not +-2: " + std::to_string(w));
    // demand degree +2 with respect to the fixed orientations
    side->orientation = wi > 0 ? +1 : -1;
    topo.orientations_fixed = true;
}

nlohmann::json topology_to_json(const CurveTopology& topo) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : topo.comps) {
        nlohmann::json verts = nlohmann::json::array();
        for (const auto& v : c.verts) verts.push_back({v.x, v.y, v.z});
        comps.push_back({{"id", c.id},
                         {"kind", c.kind == CurveComponent::Kind::Oval ? "oval" : "one_sided"},
                         {"orientation", c.orientation},
                         {"length", c.total_len},
                         {"vertices", verts}});
    }
    std::string type = topo.cubic_type == CurveType::TypeI
                           ? "type_i"
                           : (topo.cubic_type == CurveType::TypeII ? "type_ii" : "unknown");
    return {{"curve", topo.curve.to_json()},
            {"marching_step", topo.step},
            {"cubic_type", type},
            {"orientations_fixed", topo.orientations_fixed},
            {"components", comps}};
}

} // namespace choreo
