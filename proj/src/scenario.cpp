#include "choreo/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "choreo/choreography.hpp"
#include "choreo/errors.hpp"
#include "choreo/family.hpp"
#include "choreo/poly.hpp"
#include "choreo/rng.hpp"
#include "choreo/svg.hpp"
#include "choreo/topology.hpp"
#include "choreo/tracking.hpp"

namespace choreo {

namespace {

constexpr const char* kVersion = "0.1.0";
const double kPi = std::acos(-1.0);

// ---------------------------------------------------------------------------
// config plumbing

void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_hash(nlohmann::json config) {
    config.erase("outputs");  // output paths must not change the identity
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(config.dump())));
    return buf;
}

TrackerConfig parse_tracker(const nlohmann::json& j) {
    TrackerConfig cfg;
    if (j.is_null()) return cfg;
    check_keys(j, {"steps", "corrector_tol", "collision_tol", "max_retries"}, "tracker");
    if (j.contains("steps")) {
        if (!j["steps"].is_number_integer()) throw ConfigError("tracker.steps must be an integer");
        cfg.steps = j["steps"].get<int>();
    }
    if (j.contains("corrector_tol")) cfg.corrector_tol = j["corrector_tol"].get<double>();
    if (j.contains("collision_tol")) cfg.collision_tol = j["collision_tol"].get<double>();
    if (j.contains("max_retries")) {
        if (!j["max_retries"].is_number_integer())
            throw ConfigError("tracker.max_retries must be an integer");
        cfg.max_retries = j["max_retries"].get<int>();
    }
    if (cfg.corrector_tol <= 0 || cfg.collision_tol <= 0 || cfg.max_retries < 0)
        throw ConfigError("tracker tolerances must be positive");
    return cfg;
}

struct Outputs {
    std::string report, trajectory, plot;
};

Outputs parse_outputs(const nlohmann::json& j) {
    Outputs out;
    if (j.is_null()) return out;
    check_keys(j, {"report", "trajectory", "plot"}, "outputs");
    if (j.contains("report")) out.report = j["report"].get<std::string>();
    if (j.contains("trajectory")) out.trajectory = j["trajectory"].get<std::string>();
    if (j.contains("plot")) out.plot = j["plot"].get<std::string>();
    return out;
}

const std::set<std::string>& known_verdicts() {
    static const std::set<std::string> ids = {"Sec3_3", "Th1a",  "Th1b",
                                              "Th1c",   "Th2a",  "Th2b",
                                              "Th3-consistency"};
    return ids;
}

std::vector<std::string> parse_checks(const nlohmann::json& j) {
    std::vector<std::string> ids;
    if (j.is_null()) return ids;
    if (!j.is_array()) throw ConfigError("checks must be an array of verdict ids");
    for (const auto& e : j) {
        std::string id = e.get<std::string>();
        if (!known_verdicts().count(id)) throw ConfigError("unknown verdict id \"" + id + "\"");
        ids.push_back(id);
    }
    return ids;
}

// ---------------------------------------------------------------------------
// orientation fixing

// A point inside the oval: mean of the oval polyline in an affine chart whose
// horizon the oval stays away from. Ovals bound convex affine regions for the
// curves handled here, so the chart mean is interior; point_in_oval confirms.
Vec3 oval_interior(const CurveTopology& topo) {
    const CurveComponent* ov = topo.oval();
    if (!ov) throw TopologyError("no_oval", "curve has no oval component");
    for (int axis : {2, 0, 1}) {
        double minabs = 1e300;
        for (const auto& v : ov->verts) {
            const double w = axis == 0 ? v.x : (axis == 1 ? v.y : v.z);
            minabs = std::min(minabs, std::abs(w));
        }
        if (minabs < 1e-3) continue;
        Vec3 mean{0, 0, 0};
        for (const auto& v : ov->verts) {
            const double w = axis == 0 ? v.x : (axis == 1 ? v.y : v.z);
            mean.x += v.x / w;
            mean.y += v.y / w;
            mean.z += v.z / w;
        }
        const double n = static_cast<double>(ov->verts.size());
        Vec3 cand = normalized(Vec3{mean.x / n, mean.y / n, mean.z / n});
        try {
            if (point_in_oval(cand, *ov)) return cand;
        } catch (const TopologyError&) {
        }
    }
    throw TopologyError("no_interior", "could not find a point inside the oval");
}

// ---------------------------------------------------------------------------
// report assembly helpers

nlohmann::json components_json(const CurveTopology& topo) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : topo.comps)
        arr.push_back({{"id", c.id},
                       {"kind", c.kind == CurveComponent::Kind::Oval ? "oval" : "one_sided"},
                       {"orientation", c.orientation},
                       {"length", c.total_len}});
    return arr;
}

std::string type_name(CurveType t) {
    return t == CurveType::TypeI ? "type_i" : (t == CurveType::TypeII ? "type_ii" : "unknown");
}

nlohmann::json cplx_json(const cplx& z) { return {z.real(), z.imag()}; }

nlohmann::json divisor_json(const Divisor& d) {
    nlohmann::json pts = nlohmann::json::array();
    int n_real = 0;
    for (const auto& e : d.points) {
        const CVec3 c = conjugate(e.p);
        const bool real = chordal_cp2(e.p, c) < 1e-6;
        if (real) ++n_real;
        pts.push_back({{"point", {cplx_json(e.p.x), cplx_json(e.p.y), cplx_json(e.p.z)}},
                       {"mult", e.mult},
                       {"line", e.line},
                       {"real", real}});
    }
    return {{"degree", d.degree()},
            {"n_real", n_real},
            {"purely_real", n_real == d.degree()},
            {"points", pts}};
}

nlohmann::json verdict_json(const TheoremVerdict& v) {
    return {{"id", v.id},
            {"applicable", v.applicable},
            {"satisfied", v.satisfied},
            {"detail", v.detail}};
}

void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << body;
}

std::string trajectory_csv(const DivisorPath& path) {
    std::ostringstream os;
    os << "t,point_id,class,x_re,x_im,y_re,y_im,z_re,z_im,component_id,angle_lift\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
    };
    for (std::size_t k = 0; k < path.tracks.size(); ++k) {
        const Track& tr = path.tracks[k];
        const char* cls = tr.cls == Track::Class::Real
                              ? "real"
                              : (tr.cls == Track::Class::PairRep ? "pair_rep" : "pair_mirror");
        for (std::size_t i = 0; i < path.grid.size(); ++i) {
            num(path.grid[i]);
            os << ',' << k << ',' << cls << ',';
            const CVec3& p = tr.pos[i];
            num(p.x.real()); os << ','; num(p.x.imag()); os << ',';
            num(p.y.real()); os << ','; num(p.y.imag()); os << ',';
            num(p.z.real()); os << ','; num(p.z.imag()); os << ',';
            if (tr.cls == Track::Class::Real) {
                os << tr.component << ',';
                num(tr.lift[i]);
            } else {
                os << -1 << ',';
            }
            os << '\n';
        }
    }
    return os.str();
}

nlohmann::json error_json(const std::string& kind, const std::string& msg, double t,
                          bool has_t) {
    nlohmann::json e = {{"kind", kind}, {"message", msg}};
    if (has_t)
        e["t"] = t;
    else
        e["t"] = nullptr;
    return e;
}

}  // namespace

// ---------------------------------------------------------------------------

ScenarioResult run_scenario(const nlohmann::json& config) {
    ScenarioResult res;
    nlohmann::json& rep = res.report;
    rep["version"] = kVersion;
    rep["error"] = nullptr;

    Outputs outputs;
    try {
        check_keys(config,
                   {"curve", "curve_type_override", "family", "tracker", "checks", "outputs",
                    "seed"},
                   "config");
        if (!config.contains("curve")) throw ConfigError("config requires \"curve\"");
        if (!config.contains("family")) throw ConfigError("config requires \"family\"");
        rep["config_hash"] = config_hash(config);

        outputs = parse_outputs(config.contains("outputs") ? config["outputs"]
                                                           : nlohmann::json());
        const TrackerConfig tcfg =
            parse_tracker(config.contains("tracker") ? config["tracker"] : nlohmann::json());
        const std::vector<std::string> checks =
            parse_checks(config.contains("checks") ? config["checks"] : nlohmann::json());
        unsigned seed = 0;
        if (config.contains("seed")) {
            if (!config["seed"].is_number_integer())
                throw ConfigError("seed must be an integer");
            seed = config["seed"].get<unsigned>();
        }
        rep["seed"] = seed;
        rep["tolerances"] = {{"corrector", tcfg.corrector_tol},
                             {"collision", tcfg.collision_tol},
                             {"winding_integrality", 0.01},
                             {"monodromy_match", 1e-6},
                             {"loop_closure", 1e-8}};

        HomPoly3 f = HomPoly3::from_json(config["curve"]);
        rep["curve"] = f.to_json();

        CurveTopology topo = trace_real_locus(f);
        CurveType ctype = topo.cubic_type;
        if (config.contains("curve_type_override")) {
            const std::string o = config["curve_type_override"].get<std::string>();
            if (o == "type_i")
                ctype = CurveType::TypeI;
            else if (o == "type_ii")
                ctype = CurveType::TypeII;
            else
                throw ConfigError("curve_type_override must be \"type_i\" or \"type_ii\"");
            topo.cubic_type = ctype;
        }
        // Complex orientations exist for type I curves; for the two-component
        // cubic they are pinned through the degree-two covering seen from an
        // interior point of the oval. Everything else reports in the marching
        // basis.
        if (ctype == CurveType::TypeI && f.degree() == 3 && topo.oval())
            complex_orientation_cubic(topo, oval_interior(topo));
        rep["curve_type"] = type_name(ctype);
        rep["components"] = components_json(topo);

        LoopFamily fam = family_from_json(config["family"], f);
        rep["family"] = fam.descriptor;

        rep["divisor"] = divisor_json(initial_divisor(f, fam, tcfg.collision_tol));

        const DivisorPath path = track_loop(f, topo, fam, tcfg);

        const TracingVector tv = real_tracing(path, topo);
        const MonodromyPermutation mp = monodromy(path, topo);

        int n_real = 0;
        std::set<int> occupied;
        for (const auto& tr : path.tracks)
            if (tr.cls == Track::Class::Real) {
                ++n_real;
                occupied.insert(tr.component);
            }
        const Realness realness = n_real == static_cast<int>(path.tracks.size())
                                      ? Realness::PurelyReal
                                      : Realness::Mixed;

        std::vector<TheoremVerdict> verdicts;
        verdicts.push_back(check_tracing_monodromy(tv, mp));
        for (auto& v : check_theorems(tv, realness, ctype, occupied)) verdicts.push_back(v);
        {
            // Null-homotopic loops must act trivially; perturbation loops are
            // contractible by construction, so their verdict is applicable.
            TheoremVerdict th3;
            th3.id = "Th3-consistency";
            th3.applicable = fam.kind == LoopFamily::Kind::PerturbationLoop;
            bool zero = true;
            for (int c : tv.c) zero = zero && c == 0;
            bool ident = true;
            for (std::size_t j = 0; j < mp.perm.size(); ++j)
                ident = ident && mp.perm[j] == static_cast<int>(j);
            th3.satisfied = zero && ident;
            th3.detail = zero && ident ? "contractible loop acted trivially"
                                       : "contractible loop moved the divisor";
            verdicts.push_back(th3);
        }
        if (!checks.empty()) {
            std::vector<TheoremVerdict> keep;
            for (const auto& v : verdicts)
                if (std::find(checks.begin(), checks.end(), v.id) != checks.end())
                    keep.push_back(v);
            verdicts = keep;
        }

        nlohmann::json cj = nlohmann::json::object();
        for (std::size_t k = 0; k < tv.c.size(); ++k) cj[std::to_string(k)] = tv.c[k];
        rep["c"] = cj;
        rep["basis"] = tv.basis;
        rep["monodromy"] = mp.perm;
        nlohmann::json powers = nlohmann::json::object();
        for (const auto& cyc : mp.cycles)
            powers[std::to_string(cyc.component)] =
                cyc.is_power ? nlohmann::json(cyc.power) : nlohmann::json(nullptr);
        rep["cyclic_powers"] = powers;
        nlohmann::json vj = nlohmann::json::array();
        for (const auto& v : verdicts) vj.push_back(verdict_json(v));
        rep["verdicts"] = vj;

        double aj = -1.0;
        if (f.degree() == 3) aj = abel_jacobi_residual(f, path);
        rep["abel_jacobi_residual"] =
            f.degree() == 3 ? nlohmann::json(aj) : nlohmann::json(nullptr);
        rep["transversality_margin"] = transversality_margin(path);
        rep["diagnostics"] = {{"max_residual", path.max_residual},
                              {"closure_defect", path.closure_defect},
                              {"min_separation", path.min_separation},
                              {"conj_pair_drift", conj_pair_drift(path)},
                              {"oracle_mismatch", oracle_mismatch(f, fam, path)},
                              {"vieta_residual", vieta_residual(f, fam, path)}};

        if (!outputs.trajectory.empty()) write_text_file(outputs.trajectory, trajectory_csv(path));
        if (!outputs.plot.empty()) export_plot(path, topo, outputs.plot);

        bool all_ok = true;
        for (const auto& v : verdicts)
            if (v.applicable && !v.satisfied) all_ok = false;
        rep["all_applicable_satisfied"] = all_ok;
        res.exit_code = 0;
    } catch (const DiscriminantHit& e) {
        rep["error"] = error_json(e.kind(), e.what(), e.t, true);
        res.exit_code = 2;
    } catch (const TrackerError& e) {
        rep["error"] = error_json(e.kind(), e.what(), e.t, true);
        res.exit_code = 3;
    } catch (const ChoreographyError& e) {
        rep["error"] = error_json(e.kind(), e.what(), 0.0, false);
        res.exit_code = 3;
    } catch (const AlgebraError& e) {
        rep["error"] = error_json(e.kind(), e.what(), 0.0, false);
        res.exit_code = 3;
    } catch (const ConfigError& e) {
        rep["error"] = error_json(e.kind(), e.what(), 0.0, false);
        res.exit_code = 4;
    } catch (const FamilyError& e) {
        rep["error"] = error_json(e.kind(), e.what(), 0.0, false);
        res.exit_code = 4;
    } catch (const TopologyError& e) {
        rep["error"] = error_json(e.kind(), e.what(), 0.0, false);
        res.exit_code = 4;
    }

    if (!outputs.report.empty()) {
        try {
            write_text_file(outputs.report, rep.dump(2) + "\n");
        } catch (const ConfigError& e) {
            if (res.exit_code == 0) {
                rep["error"] = error_json(e.kind(), e.what(), 0.0, false);
                res.exit_code = 4;
            }
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// presets

namespace {

nlohmann::json two_component_cubic_json() {
    return {{"degree", 3}, {"coeffs", {{"y^2 z", 1.0}, {"x^3", -1.0}, {"x z^2", 1.0}}}};
}

nlohmann::json one_component_cubic_json() {
    return {{"degree", 3}, {"coeffs", {{"y^2 z", 1.0}, {"x^3", -1.0}, {"x z^2", -1.0}}}};
}

// y > 0 branch over the oval x-range [-1, 0] of y^2 = x^3 - x.
double oval_height(double x) { return std::sqrt(x * x * x - x); }

// Third intersection of the secant through (ax, ay) and (bx, by) with the
// cubic y^2 = x^3 - x, by the group-law coordinates.
void third_point(double ax, double ay, double bx, double by, double& cx, double& cy,
                 double& slope) {
    slope = (by - ay) / (bx - ax);
    cx = slope * slope - ax - bx;
    cy = ay + slope * (cx - ax);
}

nlohmann::json base_config(const nlohmann::json& curve, const nlohmann::json& family,
                           unsigned seed) {
    return {{"curve", curve},
            {"family", family},
            {"tracker", {{"steps", 2000}}},
            {"seed", seed}};
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"sec7-1",    "sec7-1b",  "sec7-2",
                                                   "sec7-3",    "thm2-oval", "thm3-null",
                                                   "typeII-pencil"};
    return names;
}

nlohmann::json preset_config(const std::string& name, unsigned seed) {
    const nlohmann::json E = two_component_cubic_json();
    if (name == "sec7-1") {
        // Pencil about the third collinear point of one oval point and one
        // point of the one-sided branch; the center lies on the curve, so the
        // family deflates it and moves the residual divisor {A, B}.
        const double ax = -0.04, bx = 1.17;
        const double ay = oval_height(ax), by = std::sqrt(bx * bx * bx - bx);
        double cx, cy, m;
        third_point(ax, ay, bx, by, cx, cy, m);
        nlohmann::json fam = {{"kind", "line_pencil"},
                              {"center", {cx, cy}},
                              {"theta0", std::atan2(1.0, -m)}};
        return base_config(E, fam, seed);
    }
    if (name == "sec7-1b") {
        // Both moving points on the oval. A full half-turn of the pencil
        // would cross the two oval tangents through the base point, so the
        // loop swings the secant to one side and back, staying transversal.
        const double a1 = -0.8, a2 = -0.3;
        const double y1 = oval_height(a1), y2 = oval_height(a2);
        double cx, cy, m;
        third_point(a1, y1, a2, y2, cx, cy, m);
        const double th0 = std::atan2(1.0, -m);
        const double amp = 0.35;
        // Sample densely: the loop interpolates linearly between samples, so
        // the swing's angular velocity has small jumps at sample boundaries.
        // A fine sampling keeps those jumps below the smooth discretization
        // error of downstream velocity estimates.
        const int M = 8192;
        nlohmann::json samples = nlohmann::json::array();
        for (int i = 0; i <= M; ++i) {
            const double s = static_cast<double>(i) / M;
            const double th = th0 + amp * (1.0 - std::cos(2.0 * kPi * s)) / 2.0;
            samples.push_back(
                {std::cos(th), std::sin(th), -(cx * std::cos(th) + cy * std::sin(th))});
        }
        nlohmann::json fam = {{"kind", "sampled_lines"},
                              {"samples", samples},
                              {"base_point", {cx, cy}}};
        return base_config(E, fam, seed);
    }
    if (name == "sec7-2") {
        nlohmann::json fam = {{"kind", "line_pencil"},
                              {"center", {-0.5, 0.0}},
                              {"theta0", kPi / 2.0}};
        return base_config(E, fam, seed);
    }
    if (name == "sec7-3") {
        nlohmann::json fam = {{"kind", "line_product"},
                              {"center", {-0.5, 0.0}},
                              {"k", 3},
                              {"theta0", kPi / 2.0}};
        return base_config(E, fam, seed);
    }
    if (name == "thm2-oval") {
        // Tangent lines of the circle x^2 + y^2 = 0.64 shifted by z -> the
        // family n(s) = (cos s, sin s, 0.5 cos s - 0.8): every line misses
        // the oval, so the oval stays unoccupied while the line turns twice
        // around the one-sided branch per full loop.
        const int M = 720;
        nlohmann::json samples = nlohmann::json::array();
        for (int i = 0; i <= M; ++i) {
            const double s = 2.0 * kPi * i / M;
            samples.push_back({std::cos(s), std::sin(s), 0.5 * std::cos(s) - 0.8});
        }
        nlohmann::json fam = {{"kind", "sampled_lines"}, {"samples", samples}};
        return base_config(E, fam, seed);
    }
    if (name == "thm3-null") {
        // Contractible loop in the space of cubics around a product of three
        // real lines; the perturbation directions are seeded random cubics.
        HomPoly3 g0 = HomPoly3::linear_form(Vec3{std::cos(0.4), std::sin(0.4),
                                                 0.5 * std::cos(0.4)});
        for (int j = 1; j < 3; ++j) {
            const double a = 0.4 + j * kPi / 3.0;
            g0 = HomPoly3::multiply(
                g0, HomPoly3::linear_form(Vec3{std::cos(a), std::sin(a), 0.5 * std::cos(a)}));
        }
        Rng rng(seed == 0 ? 2026u : seed);
        auto random_cubic = [&rng]() {
            std::vector<double> cs(HomPoly3::term_count(3));
            for (auto& c : cs) c = rng.uniform(-1.0, 1.0);
            return HomPoly3(3, cs);
        };
        nlohmann::json fam = {{"kind", "perturbation_loop"},
                              {"G0", g0.to_json()},
                              {"R1", random_cubic().to_json()},
                              {"R2", random_cubic().to_json()},
                              {"eps", 0.01}};
        nlohmann::json cfg = base_config(E, fam, seed);
        cfg["tracker"]["steps"] = 400;
        return cfg;
    }
    if (name == "typeII-pencil") {
        // One-component cubic; a full pencil about (2, 0) must sweep through
        // a tangent line, so tracking ends in a discriminant hit.
        nlohmann::json fam = {{"kind", "line_pencil"}, {"center", {2.0, 0.0}}, {"theta0", 0.0}};
        return base_config(one_component_cubic_json(), fam, seed);
    }
    throw ConfigError("unknown preset \"" + name + "\"");
}

VerifyAllResult verify_all() {
    VerifyAllResult out;
    for (const auto& name : preset_names()) {
        const ScenarioResult r = run_scenario(preset_config(name));
        std::ostringstream line;
        line << name << ": ";
        bool failed = false;
        if (r.exit_code == 0) {
            bool all_ok = r.report.value("all_applicable_satisfied", false);
            failed = !all_ok;
            line << (all_ok ? "ok" : "verdict failed");
            line << "  c=" << r.report["c"].dump();
            for (const auto& v : r.report["verdicts"]) {
                if (!v["applicable"].get<bool>()) continue;
                line << "  " << v["id"].get<std::string>()
                     << (v["satisfied"].get<bool>() ? "+" : "-");
            }
        } else if (r.exit_code == 2) {
            line << "discriminant hit (legitimate ending) at t="
                 << r.report["error"]["t"].dump();
        } else {
            failed = true;
            line << "FAILED exit " << r.exit_code << " ("
                 << r.report["error"]["kind"].get<std::string>() << ": "
                 << r.report["error"]["message"].get<std::string>() << ")";
        }
        if (failed) ++out.failures;
        out.lines.push_back(line.str());
    }
    return out;
}

}  // namespace choreo
