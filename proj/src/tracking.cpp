#include "choreo/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "choreo/errors.hpp"
#include "choreo/intersect.hpp"
#include "choreo/roots.hpp"

namespace choreo {

namespace {

cplx unit_phase(cplx z) {
    double m = std::abs(z);
    return m > 1e-300 ? z / m : cplx(1.0);
}

// rotate p's phase so it matches ref (exact +-1 for real inputs)
CVec3 align_to(const CVec3& ref, const CVec3& p) { return unit_phase(hdot(ref, p)) * p; }

// complex-bilinear contraction (no conjugation): directional derivatives etc.
cplx bil(const CVec3& u, const CVec3& v) { return u.x * v.x + u.y * v.y + u.z * v.z; }

CVec3 line_point(const CutLine& l, cplx alpha, cplx beta) {
    return cnormalized(alpha * to_complex(l.u) + beta * to_complex(l.v));
}

// coordinates of p in the line's orthonormal basis (drops the normal part)
std::pair<cplx, cplx> line_coords(const CutLine& l, const CVec3& p) {
    return {bil(to_complex(l.u), p), bil(to_complex(l.v), p)};
}

// restriction of f to the line, deflated at the base point when flagged
BinaryForm cut_form(const HomPoly3& f, const CutLine& l) {
    BinaryForm b = restrict_to_line(f, l.u, l.v).normalized();
    if (l.deflate) b = deflate(b, CP1::make(1.0, 0.0), 1e-6).normalized();
    return b;
}

// Newton on the dehomogenized binary form in the chart where the start root
// has modulus <= 1. Real coefficient vectors keep real iterates exactly real.
CP1 newton_root(const BinaryForm& b, CP1 start, double tol, bool& ok) {
    const int D = b.deg;
    bool beta_chart = std::abs(start.a) <= std::abs(start.b);
    cplx w = beta_chart ? start.a / start.b : start.b / start.a;
    std::vector<cplx> p(D + 1);
    for (int k = 0; k <= D; ++k) p[k] = beta_chart ? b.c[k] : b.c[D - k];
    ok = false;
    auto residual = [&](cplx w0, cplx& v, cplx& dv) {
        v = 0;
        dv = 0;
        for (int k = D; k >= 0; --k) {
            dv = dv * w0 + v;
            v = v * w0 + p[k];
        }
        double aw = std::max(1.0, std::abs(w0)), pw = 1, scale = 0;
        for (int k = 0; k <= D; ++k) {
            scale += std::abs(p[k]) * pw;
            pw *= aw;
        }
        return tol * std::max(scale, 1e-30);
    };
    for (int it = 0; it < 40; ++it) {
        cplx v, dv;
        const double bound = residual(w, v, dv);
        if (std::abs(v) <= bound) {
            ok = true;
            // One more step past the tolerance: position jitter at the bare
            // tolerance level becomes visible when trajectories are
            // differentiated, so sharpen the root to (near) machine accuracy.
            if (std::abs(dv) > 1e-300) {
                cplx dw = v / dv;
                if (std::isfinite(std::abs(dw)) && std::abs(dw) <= 1.0) {
                    cplx v2, dv2;
                    residual(w - dw, v2, dv2);
                    if (std::abs(v2) <= std::abs(v)) w -= dw;
                }
            }
            break;
        }
        if (std::abs(dv) < 1e-300) break;
        cplx dw = v / dv;
        if (!std::isfinite(std::abs(dw)) || std::abs(dw) > 1.0) break;
        w -= dw;
    }
    if (!ok) return start;
    return beta_chart ? CP1::make(w, 1.0) : CP1::make(1.0, w);
}

// 2x2 Newton for {f = 0, g = 0} in the affine chart orthogonal to p.
CVec3 correct_on_system(const HomPoly3& f, const HomPoly3& g, CVec3 p, double tol, bool& ok) {
    p = cnormalized(p);
    int skip = 0;
    double m = std::abs(p.x);
    if (std::abs(p.y) > m) { skip = 1; m = std::abs(p.y); }
    if (std::abs(p.z) > m) skip = 2;
    CVec3 e1{}, e2{};
    e1[(skip + 1) % 3] = 1.0;
    e2[(skip + 2) % 3] = 1.0;
    CVec3 a = e1 - hdot(e1, p) * p;
    a = cnormalized(a);
    CVec3 b = e2 - hdot(e2, p) * p - hdot(e2, a) * a;
    b = cnormalized(b);

    double sf = 0, sg = 0;
    for (double c : f.coeffs()) sf += std::abs(c);
    for (double c : g.coeffs()) sg += std::abs(c);

    CVec3 q = p;
    ok = false;
    for (int it = 0; it < 40; ++it) {
        cplx fv = f.eval(q), gv = g.eval(q);
        const bool within = std::abs(fv) <= tol * sf && std::abs(gv) <= tol * sg;
        CVec3 gf = f.gradient(q), gg = g.gradient(q);
        cplx ja = bil(gf, a), jb = bil(gf, b);
        cplx jc = bil(gg, a), jd = bil(gg, b);
        cplx det = ja * jd - jb * jc;
        if (std::abs(det) < 1e-300) {
            ok = within;
            break;
        }
        cplx dxi = (jd * fv - jb * gv) / det;
        cplx deta = (ja * gv - jc * fv) / det;
        if (!std::isfinite(std::abs(dxi) + std::abs(deta)) ||
            std::abs(dxi) + std::abs(deta) > 0.5) {
            ok = within;
            break;
        }
        if (within) {
            ok = true;
            // Sharpen past the tolerance (see newton_root); keep the extra
            // step only if it actually reduces the residual.
            CVec3 q2 = cnormalized(q - dxi * a - deta * b);
            if (std::abs(f.eval(q2)) + std::abs(g.eval(q2)) <= std::abs(fv) + std::abs(gv))
                q = q2;
            break;
        }
        q = cnormalized(q - dxi * a - deta * b);
    }
    return q;
}

struct TrackMeta {
    Track::Class cls = Track::Class::Real;
    int line = -1;
    int partner = -1;
};

struct StepState {
    std::vector<CVec3> pos;
    std::vector<CVec3> prev_pos;
    double t = 0, t_prev = 0;
    bool has_prev = false;
    double min_sep = 1e9;
};

double min_separation(const std::vector<CVec3>& pts) {
    double m = 1e9;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            m = std::min(m, chordal_cp2(pts[i], pts[j]));
    return m;
}

enum class StepFail { None, Corrector, Match };

StepFail try_step(const HomPoly3& f, const std::vector<TrackMeta>& meta,
                  const CuttingSystem& sys1, const TrackerConfig& cfg, const StepState& s0,
                  double t1, StepState& out) {
    const size_t n = s0.pos.size();
    out.pos.resize(n);

    std::vector<std::optional<BinaryForm>> forms;
    if (!sys1.is_curve()) forms.resize(sys1.lines.size());

    for (size_t j = 0; j < n; ++j) {
        CVec3 pred = s0.pos[j];
        if (s0.has_prev && s0.t != s0.t_prev) {
            double r = (t1 - s0.t) / (s0.t - s0.t_prev);
            CVec3 prev = align_to(s0.pos[j], s0.prev_pos[j]);
            pred = cnormalized(s0.pos[j] + cplx(r) * (s0.pos[j] - prev));
        }
        bool ok = false;
        CVec3 corrected;
        if (sys1.is_curve()) {
            corrected = correct_on_system(f, *sys1.curve, pred, cfg.corrector_tol, ok);
        } else {
            const CutLine& l = sys1.lines[meta[j].line];
            if (!forms[meta[j].line]) forms[meta[j].line] = cut_form(f, l);
            auto [alpha, beta] = line_coords(l, pred);
            CP1 root = newton_root(*forms[meta[j].line], CP1::make(alpha, beta),
                                   cfg.corrector_tol, ok);
            corrected = line_point(l, root.a, root.b);
        }
        if (!ok) return StepFail::Corrector;
        out.pos[j] = align_to(s0.pos[j], corrected);
    }

    // step-to-step identity: each corrected point must still be nearest to its
    // own predecessor and must not move more than half the previous separation
    for (size_t j = 0; j < n; ++j) {
        double move = chordal_cp2(out.pos[j], s0.pos[j]);
        if (n > 1 && move > 0.5 * s0.min_sep) return StepFail::Match;
        for (size_t k = 0; k < n; ++k)
            if (k != j && chordal_cp2(out.pos[j], s0.pos[k]) < move) return StepFail::Match;
    }

    out.prev_pos = s0.pos;
    out.t_prev = s0.t;
    out.t = t1;
    out.has_prev = true;
    out.min_sep = min_separation(out.pos);
    return StepFail::None;
}

StepState advance(const HomPoly3& f, const std::vector<TrackMeta>& meta, const LoopFamily& fam,
                  const TrackerConfig& cfg, const StepState& s0, double t1, int depth) {
    CuttingSystem sys1 = fam.at(t1);
    StepState out;
    StepFail r = try_step(f, meta, sys1, cfg, s0, t1, out);
    if (r == StepFail::None) {
        if (out.pos.size() > 1 && out.min_sep < cfg.collision_tol)
            throw DiscriminantHit("divisor points collided (tangency with the cutting system)",
                                  t1);
        const double snap_tol = cfg.corrector_tol * 100;
        for (size_t j = 0; j < out.pos.size(); ++j) {
            if (meta[j].cls != Track::Class::Real) continue;
            double defect = reality_defect(out.pos[j]);
            if (defect > snap_tol)
                throw DiscriminantHit("a real divisor point left the real locus", t1);
            if (defect > 0) out.pos[j] = align_to(s0.pos[j], to_complex(snap_real(out.pos[j])));
        }
        return out;
    }
    if (depth >= cfg.max_retries) {
        // Decide whether the stall is a discriminant crossing: the committed
        // state got squeezed, or a fresh solve past the stall shows the divisor
        // went non-simple or changed its real/complex split (a tangency is the
        // only way a real pair can become a conjugate pair).
        bool disc = s0.min_sep < 100 * cfg.collision_tol;
        if (!disc) {
            try {
                Divisor fresh = solve_divisor(f, sys1);
                std::vector<CVec3> pts;
                int fresh_real = 0;
                for (const auto& e : fresh.points) {
                    if (e.mult != 1) disc = true;
                    for (int k = 0; k < e.mult; ++k) pts.push_back(e.p);
                    if (chordal_cp2(e.p, conjugate(e.p)) < 1e-6) fresh_real += e.mult;
                }
                if (min_separation(pts) < cfg.collision_tol) disc = true;
                int tracked_real = 0;
                for (const auto& mj : meta)
                    if (mj.cls == Track::Class::Real) ++tracked_real;
                if (fresh_real != tracked_real) disc = true;
            } catch (const AlgebraError&) {
                disc = true;  // the solver itself stalls right at a degeneracy
            }
        }
        if (disc)
            throw DiscriminantHit("transversality lost while approaching the discriminant", t1);
        if (r == StepFail::Corrector)
            throw CorrectorDiverged("corrector failed to converge after step halving", t1);
        throw MatchAmbiguity("could not continue tracks unambiguously", t1);
    }
    double tm = 0.5 * (s0.t + t1);
    StepState mid = advance(f, meta, fam, cfg, s0, tm, depth + 1);
    return advance(f, meta, fam, cfg, mid, t1, depth + 1);
}

double greedy_multiset_distance(std::vector<CVec3> a, const std::vector<CVec3>& b) {
    if (a.size() != b.size()) return 1e300;
    double worst = 0;
    for (const auto& q : b) {
        size_t bi = 0;
        double bd = 1e300;
        for (size_t i = 0; i < a.size(); ++i) {
            double d = chordal_cp2(a[i], q);
            if (d < bd) { bd = d; bi = i; }
        }
        worst = std::max(worst, bd);
        a.erase(a.begin() + bi);
    }
    return worst;
}

} // namespace

Divisor solve_divisor(const HomPoly3& f, const CuttingSystem& sys) {
    Divisor d;
    if (sys.is_curve()) {
        for (const auto& ip : intersect_curves(f, *sys.curve))
            d.points.push_back({ip.p, ip.mult, -1});
        return d;
    }
    for (size_t li = 0; li < sys.lines.size(); ++li) {
        BinaryForm b = cut_form(f, sys.lines[li]);
        for (const auto& r : binary_roots(b))
            d.points.push_back({canonical_phase(line_point(sys.lines[li], r.pt.a, r.pt.b)),
                                r.mult, static_cast<int>(li)});
    }
    return d;
}

Divisor initial_divisor(const HomPoly3& f, const LoopFamily& fam, double collision_tol) {
    Divisor d = solve_divisor(f, fam.at(0.0));
    for (const auto& e : d.points)
        if (e.mult != 1)
            throw TrackerError("non_simple_start", "initial divisor has a multiple point", 0.0);
    for (size_t i = 0; i < d.points.size(); ++i)
        for (size_t j = i + 1; j < d.points.size(); ++j)
            if (chordal_cp2(d.points[i].p, d.points[j].p) < collision_tol)
                throw TrackerError("non_simple_start", "initial divisor points collide", 0.0);
    return d;
}

DivisorPath track_loop(const HomPoly3& f, const CurveTopology& topo, const LoopFamily& fam,
                       const TrackerConfig& cfg) {
    if (cfg.steps < 8) throw ConfigError("tracker needs at least 8 steps");
    Divisor d0 = initial_divisor(f, fam, cfg.collision_tol);

    // group by owning line; conjugation pairing is per group
    std::vector<TrackMeta> meta;
    std::vector<CVec3> start;
    int max_line = -1;
    for (const auto& e : d0.points) max_line = std::max(max_line, e.line);
    for (int li = (max_line < 0 ? -1 : 0); li <= max_line; ++li) {
        std::vector<CVec3> group;
        for (const auto& e : d0.points)
            if (e.line == li) group.push_back(e.p);
        if (group.empty()) continue;
        ConjPartition cp = conj_partition(group, 1e-8);
        for (const auto& v : cp.real_points) {
            meta.push_back({Track::Class::Real, li, -1});
            start.push_back(to_complex(v));
        }
        for (const auto& pr : cp.pairs) {
            int ir = static_cast<int>(start.size()), im = ir + 1;
            meta.push_back({Track::Class::PairRep, li, im});
            start.push_back(cnormalized(pr.first));
            meta.push_back({Track::Class::PairMirror, li, ir});
            start.push_back(cnormalized(pr.second));
        }
    }

    const int N = cfg.steps;
    const size_t n = start.size();
    DivisorPath path;
    path.grid.resize(N + 1);
    path.tracks.resize(n);
    std::vector<int> hint(n, -1);
    for (size_t j = 0; j < n; ++j) {
        Track& tr = path.tracks[j];
        tr.cls = meta[j].cls;
        tr.partner = meta[j].partner;
        tr.line = meta[j].line;
        tr.pos.resize(N + 1);
        tr.pos[0] = start[j];
        if (tr.cls == Track::Class::Real) {
            Vec3 v{std::real(start[j].x), std::real(start[j].y), std::real(start[j].z)};
            LocateResult loc = locate_on_component(v, topo, 0.01);
            tr.component = loc.comp;
            tr.lift.resize(N + 1);
            tr.lift[0] = loc.phi;
            hint[j] = loc.segment;
        }
    }

    StepState s;
    s.pos = start;
    s.t = 0;
    s.min_sep = min_separation(start);
    path.grid[0] = 0;
    path.min_separation = s.min_sep;
    for (size_t j = 0; j < n; ++j)
        path.max_residual = std::max(path.max_residual, std::abs(f.eval(s.pos[j])));

    for (int i = 1; i <= N; ++i) {
        double t1 = fam.period * i / N;
        s = advance(f, meta, fam, cfg, s, t1, 0);
        path.grid[i] = t1;
        path.min_separation = std::min(path.min_separation, s.min_sep);
        CuttingSystem sys = fam.at(t1);
        for (size_t j = 0; j < n; ++j) {
            path.tracks[j].pos[i] = s.pos[j];
            double res = std::abs(f.eval(s.pos[j]));
            if (sys.is_curve()) res = std::max(res, std::abs(sys.curve->eval(s.pos[j])));
            path.max_residual = std::max(path.max_residual, res);
            if (meta[j].cls == Track::Class::Real) {
                Track& tr = path.tracks[j];
                Vec3 v{std::real(s.pos[j].x), std::real(s.pos[j].y), std::real(s.pos[j].z)};
                auto loc = locate_near(normalized(v), topo.comps[tr.component], hint[j], 0.01);
                if (!loc)
                    throw MatchAmbiguity("real point left its component", t1);
                double prev = tr.lift[i - 1];
                double delta = loc->phi - (prev - std::floor(prev));
                delta -= std::round(delta);
                tr.lift[i] = prev + delta;
                hint[j] = loc->segment;
            }
        }
    }

    std::vector<CVec3> endpos(n);
    for (size_t j = 0; j < n; ++j) endpos[j] = path.tracks[j].pos[N];
    path.closure_defect = greedy_multiset_distance(start, endpos);
    if (path.closure_defect > 1e-8)
        throw MatchAmbiguity("loop failed to close onto the start divisor", fam.period);
    return path;
}

double transversality_margin(const DivisorPath& path) {
    double m = 1e9;
    const size_t n = path.tracks.size();
    for (size_t i = 0; i < path.grid.size(); ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t k = j + 1; k < n; ++k)
                m = std::min(m, chordal_cp2(path.tracks[j].pos[i], path.tracks[k].pos[i]));
    return m;
}

namespace {

// value of the cubic's holomorphic differential on a homogeneous velocity;
// invariant under rescaling p(t) -> lambda(t) p(t)
cplx omega_on_velocity(const HomPoly3& f, const CVec3& p, const CVec3& v) {
    CVec3 g = f.gradient(p);
    double ax = std::abs(g.x), ay = std::abs(g.y), az = std::abs(g.z);
    if (ax >= ay && ax >= az) return (p.y * v.z - p.z * v.y) / g.x;
    if (ay >= az) return (p.z * v.x - p.x * v.z) / g.y;
    return (p.x * v.y - p.y * v.x) / g.z;
}

} // namespace

double abel_jacobi_residual(const HomPoly3& f, const DivisorPath& path) {
    if (f.degree() != 3)
        throw ChoreographyError("not_cubic", "the velocity criterion needs a cubic curve");
    const int N = static_cast<int>(path.grid.size()) - 1;
    if (N < 2 || path.tracks.empty()) return 0;
    const double dt = path.grid[1] - path.grid[0];
    double worst = 0, scale = 0;
    for (int i = 0; i <= N; ++i) {
        cplx total = 0;
        double tscale = 0;
        for (const auto& tr : path.tracks) {
            CVec3 v;
            if (i == 0)
                v = (1.0 / (2 * dt)) *
                    (cplx(-3.0) * tr.pos[0] + cplx(4.0) * tr.pos[1] - tr.pos[2]);
            else if (i == N)
                v = (1.0 / (2 * dt)) *
                    (cplx(3.0) * tr.pos[N] - cplx(4.0) * tr.pos[N - 1] + tr.pos[N - 2]);
            else
                v = (1.0 / (2 * dt)) * (tr.pos[i + 1] - tr.pos[i - 1]);
            cplx w = omega_on_velocity(f, tr.pos[i], v);
            total += w;
            tscale += std::abs(w);
        }
        worst = std::max(worst, std::abs(total));
        scale = std::max(scale, tscale);
    }
    return scale > 1e-300 ? worst / scale : 0.0;
}

double oracle_mismatch(const HomPoly3& f, const LoopFamily& fam, const DivisorPath& path,
                       int stride) {
    double worst = 0;
    const size_t n = path.tracks.size();
    for (size_t i = 0; i < path.grid.size(); i += stride) {
        Divisor d = solve_divisor(f, fam.at(path.grid[i]));
        std::vector<CVec3> fresh;
        for (const auto& e : d.points)
            for (int k = 0; k < e.mult; ++k) fresh.push_back(e.p);
        std::vector<CVec3> tracked(n);
        for (size_t j = 0; j < n; ++j) tracked[j] = path.tracks[j].pos[i];
        worst = std::max(worst, greedy_multiset_distance(fresh, tracked));
    }
    return worst;
}

double vieta_residual(const HomPoly3& f, const LoopFamily& fam, const DivisorPath& path,
                      int stride) {
    double worst = 0;
    for (size_t i = 0; i < path.grid.size(); i += stride) {
        CuttingSystem sys = fam.at(path.grid[i]);
        if (sys.is_curve()) return 0.0;
        for (size_t li = 0; li < sys.lines.size(); ++li) {
            BinaryForm b = cut_form(f, sys.lines[li]);
            BinaryForm r;
            r.deg = 0;
            r.c = {1.0};
            for (const auto& tr : path.tracks) {
                if (tr.line != static_cast<int>(li)) continue;
                auto [alpha, beta] = line_coords(sys.lines[li], tr.pos[i]);
                BinaryForm lin;
                lin.deg = 1;
                lin.c = {-alpha, beta};  // root at (alpha : beta)
                r = binary_multiply(r, lin);
            }
            if (r.deg != b.deg) return 1e300;
            // best complex scale lambda: least squares of r - lambda b
            cplx num = 0;
            double den = 0;
            for (int k = 0; k <= b.deg; ++k) {
                num += r.c[k] * std::conj(b.c[k]);
                den += std::norm(b.c[k]);
            }
            cplx lam = den > 0 ? num / den : cplx(0.0);
            double diff = 0, rmax = 0;
            for (int k = 0; k <= b.deg; ++k) {
                diff = std::max(diff, std::abs(r.c[k] - lam * b.c[k]));
                rmax = std::max(rmax, std::abs(r.c[k]));
            }
            worst = std::max(worst, diff / std::max(rmax, 1e-30));
        }
    }
    return worst;
}

double conj_pair_drift(const DivisorPath& path) {
    double worst = 0;
    for (const auto& tr : path.tracks) {
        if (tr.cls != Track::Class::PairRep) continue;
        const Track& mirror = path.tracks[tr.partner];
        for (size_t i = 0; i < tr.pos.size(); ++i)
            worst = std::max(worst, chordal_cp2(conjugate(tr.pos[i]), mirror.pos[i]));
    }
    return worst;
}

} // namespace choreo
