#include "choreo/choreography.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "choreo/errors.hpp"

namespace choreo {

namespace {

std::string c_str(const std::vector<int>& c) {
    std::ostringstream os;
    os << "c = (";
    for (size_t i = 0; i < c.size(); ++i) os << (i ? ", " : "") << c[i];
    os << ")";
    return os.str();
}

double frac(double x) { return x - std::floor(x); }

int floor_div(int a, int b) {
    int q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

} // namespace

TracingVector real_tracing(const DivisorPath& path, const CurveTopology& topo) {
    TracingVector tv;
    tv.basis = topo.orientations_fixed ? "complex_orientation" : "marching";
    tv.c.assign(topo.comps.size(), 0);
    std::vector<double> sums(topo.comps.size(), 0.0);
    for (const auto& tr : path.tracks) {
        if (tr.cls != Track::Class::Real) continue;
        sums[tr.component] += tr.lift.back() - tr.lift.front();
    }
    for (size_t k = 0; k < sums.size(); ++k) {
        double w = sums[k] * topo.comps[k].orientation;
        double r = std::round(w);
        if (std::abs(w - r) > 0.01) {
            std::ostringstream os;
            os << "component " << k << " winding " << w << " is not an integer";
            throw ChoreographyError("non_integer_winding", os.str());
        }
        tv.c[k] = static_cast<int>(r);
    }
    return tv;
}

MonodromyPermutation monodromy(const DivisorPath& path, const CurveTopology& topo) {
    MonodromyPermutation mp;
    for (size_t j = 0; j < path.tracks.size(); ++j)
        if (path.tracks[j].cls == Track::Class::Real) mp.real_tracks.push_back(static_cast<int>(j));
    const size_t m = mp.real_tracks.size();
    mp.perm.assign(m, -1);
    std::vector<bool> used(m, false);
    for (size_t a = 0; a < m; ++a) {
        const Track& ta = path.tracks[mp.real_tracks[a]];
        int best = -1;
        double bd = 1e300;
        for (size_t b = 0; b < m; ++b) {
            double d = chordal_cp2(ta.pos.back(), path.tracks[mp.real_tracks[b]].pos.front());
            if (d < bd) {
                bd = d;
                best = static_cast<int>(b);
            }
        }
        if (best < 0 || bd > 1e-6)
            throw ChoreographyError("match_failure",
                                    "a real end point landed on no start point");
        if (used[best])
            throw ChoreographyError("match_failure", "two end points claim one start point");
        if (path.tracks[mp.real_tracks[best]].component != ta.component)
            throw ChoreographyError("match_failure", "monodromy crossed components");
        used[best] = true;
        mp.perm[a] = best;
    }

    for (size_t k = 0; k < topo.comps.size(); ++k) {
        std::vector<int> slots;
        for (size_t a = 0; a < m; ++a)
            if (path.tracks[mp.real_tracks[a]].component == static_cast<int>(k))
                slots.push_back(static_cast<int>(a));
        if (slots.empty()) continue;
        std::sort(slots.begin(), slots.end(), [&](int a, int b) {
            return frac(path.tracks[mp.real_tracks[a]].lift.front()) <
                   frac(path.tracks[mp.real_tracks[b]].lift.front());
        });
        if (topo.comps[k].orientation < 0) std::reverse(slots.begin(), slots.end());
        ComponentCycle cc;
        cc.component = static_cast<int>(k);
        cc.members = slots;
        const int mm = static_cast<int>(slots.size());
        std::vector<int> at(m, -1);
        for (int l = 0; l < mm; ++l) at[slots[l]] = l;
        cc.is_power = true;
        int e = at[mp.perm[slots[0]]];
        for (int l = 0; l < mm; ++l)
            if (at[mp.perm[slots[l]]] != (l + e) % mm) {
                cc.is_power = false;
                break;
            }
        cc.power = cc.is_power ? e : 0;
        mp.cycles.push_back(cc);
    }
    return mp;
}

TheoremVerdict check_tracing_monodromy(const TracingVector& tv, const MonodromyPermutation& mp) {
    TheoremVerdict v;
    v.id = "Sec3_3";
    v.applicable = true;
    v.satisfied = true;
    std::ostringstream os;
    for (const auto& cc : mp.cycles) {
        const int mm = static_cast<int>(cc.members.size());
        int want = ((tv.c[cc.component] % mm) + mm) % mm;
        bool good = cc.is_power && cc.power == want;
        if (!good) {
            v.satisfied = false;
            os << "component " << cc.component << ": monodromy is "
               << (cc.is_power ? "shift^" + std::to_string(cc.power) : "not a cyclic power")
               << " but tracing demands shift^" << want << "; ";
        }
    }
    v.detail = v.satisfied
                   ? "on every occupied component the monodromy is the tracing power of the cyclic shift"
                   : os.str();
    return v;
}

std::vector<TheoremVerdict> check_theorems(const TracingVector& tv, Realness realness,
                                           CurveType curve_type, const std::set<int>& occupied) {
    const bool purely = realness == Realness::PurelyReal;
    const bool t1 = curve_type == CurveType::TypeI;
    const bool t2 = curve_type == CurveType::TypeII;
    const bool some_unocc = occupied.size() < tv.c.size();
    bool all_equal = true, all_zero = true, all_even = true, parity_equal = true;
    for (size_t k = 0; k < tv.c.size(); ++k) {
        if (tv.c[k] != tv.c[0]) all_equal = false;
        if (tv.c[k] != 0) all_zero = false;
        if (tv.c[k] % 2 != 0) all_even = false;
        if (((tv.c[k] % 2) + 2) % 2 != ((tv.c[0] % 2) + 2) % 2) parity_equal = false;
    }
    const std::string cs = c_str(tv.c);
    std::vector<TheoremVerdict> out;
    out.push_back({"Th1a", t1 && purely, all_equal,
                   cs + (all_equal ? ": a multiple of the complex-orientation class"
                                   : ": components differ")});
    out.push_back({"Th1b", t1 && purely && some_unocc, all_zero,
                   cs + (all_zero ? ": trivial, as an unoccupied component demands"
                                  : ": nonzero despite an unoccupied component")});
    out.push_back({"Th1c", t2 && purely, all_zero,
                   cs + (all_zero ? ": trivial, as a non-dividing curve demands"
                                  : ": nonzero on a non-dividing curve")});
    out.push_back({"Th2a", t1, parity_equal,
                   cs + (parity_equal ? ": equal parity on all components"
                                      : ": parity differs between components")});
    out.push_back({"Th2b", t1 && some_unocc, all_even,
                   cs + (all_even ? ": all components even" : ": an odd component")});
    return out;
}

DivisorPath synthetic_loop(const CurveTopology& topo,
                           const std::vector<std::pair<int, double>>& starts,
                           const std::vector<int>& c, int steps) {
    if (c.size() != topo.comps.size())
        throw ChoreographyError("unoccupied_nonzero",
                                "winding list does not match the component count");
    DivisorPath path;
    const int N = std::max(steps, 8);
    path.grid.resize(N + 1);
    for (int i = 0; i <= N; ++i) path.grid[i] = static_cast<double>(i) / N;

    for (size_t k = 0; k < topo.comps.size(); ++k) {
        std::vector<double> phis;
        for (const auto& s : starts)
            if (s.first == static_cast<int>(k)) phis.push_back(frac(s.second));
        if (phis.empty()) {
            if (c[k] != 0)
                throw ChoreographyError("unoccupied_nonzero",
                                        "nonzero winding on a component with no points");
            continue;
        }
        std::sort(phis.begin(), phis.end());
        const int mm = static_cast<int>(phis.size());
        const int shift = c[k] * topo.comps[k].orientation;
        for (int j = 0; j < mm; ++j) {
            int turns = floor_div(j + shift, mm);
            int tgt = j + shift - turns * mm;
            double end_lift = phis[tgt] + turns;
            Track tr;
            tr.cls = Track::Class::Real;
            tr.component = static_cast<int>(k);
            tr.pos.resize(N + 1);
            tr.lift.resize(N + 1);
            for (int i = 0; i <= N; ++i) {
                double l = phis[j] + (end_lift - phis[j]) * i / N;
                tr.lift[i] = l;
                tr.pos[i] = to_complex(topo.comps[k].at_phi(l));
            }
            path.tracks.push_back(std::move(tr));
        }
    }
    return path;
}

DivisorPath loop_concat(const DivisorPath& p, const DivisorPath& q) {
    const size_t n = p.tracks.size();
    if (q.tracks.size() != n)
        throw ChoreographyError("endpoint_mismatch", "track counts differ");
    std::vector<int> qof(n, -1);
    std::vector<bool> used(n, false);
    for (size_t j = 0; j < n; ++j) {
        int best = -1;
        double bd = 1e300;
        for (size_t b = 0; b < n; ++b) {
            if (used[b]) continue;
            double d = chordal_cp2(p.tracks[j].pos.back(), q.tracks[b].pos.front());
            if (d < bd) {
                bd = d;
                best = static_cast<int>(b);
            }
        }
        if (best < 0 || bd > 1e-6 ||
            (q.tracks[best].cls == Track::Class::Real) != (p.tracks[j].cls == Track::Class::Real))
            throw ChoreographyError("endpoint_mismatch",
                                    "second loop does not start on the first loop's end divisor");
        used[best] = true;
        qof[j] = best;
    }

    DivisorPath out;
    const size_t nq = q.grid.size();
    out.grid = p.grid;
    double t0 = p.grid.back();
    for (size_t i = 1; i < nq; ++i) out.grid.push_back(t0 + q.grid[i]);
    out.tracks.resize(n);
    for (size_t j = 0; j < n; ++j) {
        const Track& a = p.tracks[j];
        const Track& b = q.tracks[qof[j]];
        Track tr;
        tr.cls = a.cls;
        tr.partner = a.partner;
        tr.line = a.line;
        tr.component = a.component;
        tr.pos = a.pos;
        for (size_t i = 1; i < b.pos.size(); ++i) tr.pos.push_back(b.pos[i]);
        if (a.cls == Track::Class::Real) {
            tr.lift = a.lift;
            double base = a.lift.back() - b.lift.front();
            for (size_t i = 1; i < b.lift.size(); ++i) tr.lift.push_back(b.lift[i] + base);
        }
        out.tracks[j] = std::move(tr);
    }
    out.max_residual = std::max(p.max_residual, q.max_residual);
    out.min_separation = std::min(p.min_separation, q.min_separation);
    std::vector<CVec3> s0, s1;
    for (const auto& tr : out.tracks) {
        s0.push_back(tr.pos.front());
        s1.push_back(tr.pos.back());
    }
    double worst = 0;
    std::vector<bool> taken(n, false);
    for (const auto& e : s1) {
        int bi = -1;
        double bd = 1e300;
        for (size_t i = 0; i < n; ++i) {
            if (taken[i]) continue;
            double d = chordal_cp2(s0[i], e);
            if (d < bd) {
                bd = d;
                bi = static_cast<int>(i);
            }
        }
        taken[bi] = true;
        worst = std::max(worst, bd);
    }
    out.closure_defect = worst;
    return out;
}

DivisorPath loop_reverse(const DivisorPath& p) {
    DivisorPath out = p;
    for (auto& tr : out.tracks) {
        std::reverse(tr.pos.begin(), tr.pos.end());
        std::reverse(tr.lift.begin(), tr.lift.end());
    }
    return out;
}

} // namespace choreo
