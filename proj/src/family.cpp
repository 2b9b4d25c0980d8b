#include "choreo/family.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>
#include <set>
#include <string>

#include "choreo/errors.hpp"

namespace choreo {

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 pencil_normal(double cx, double cy, double th) {
    // line through (cx, cy) whose normal in the chart z = 1 points at angle th
    double c = std::cos(th), s = std::sin(th);
    return normalized(Vec3{c, s, -(cx * c + cy * s)});
}

CutLine pencil_line(const Vec3& center_unit, double cx, double cy, double th, bool deflate) {
    CutLine l;
    l.n = pencil_normal(cx, cy, th);
    l.u = center_unit;
    l.v = normalized(cross(l.n, l.u));
    l.deflate = deflate;
    return l;
}

bool systems_match(const CuttingSystem& a, const CuttingSystem& b, double tol) {
    if (a.is_curve() != b.is_curve()) return false;
    if (a.is_curve()) {
        const auto& ca = a.curve->coeffs();
        const auto& cb = b.curve->coeffs();
        if (a.curve->degree() != b.curve->degree()) return false;
        double dplus = 0, dminus = 0;
        for (size_t i = 0; i < ca.size(); ++i) {
            dplus = std::max(dplus, std::abs(ca[i] - cb[i]));
            dminus = std::max(dminus, std::abs(ca[i] + cb[i]));
        }
        return std::min(dplus, dminus) < tol;
    }
    if (a.lines.size() != b.lines.size()) return false;
    std::vector<bool> used(b.lines.size(), false);
    for (const auto& la : a.lines) {
        bool found = false;
        for (size_t j = 0; j < b.lines.size(); ++j) {
            if (used[j]) continue;
            if (chordal_rp2(la.n, b.lines[j].n) < tol && la.deflate == b.lines[j].deflate) {
                used[j] = true;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

void verify_closure(const LoopFamily& fam) {
    if (!systems_match(fam.at(0.0), fam.at(fam.period), 1e-10))
        throw FamilyError("not_closed", "family does not return to its initial cutting system");
}

Vec3 slerp(const Vec3& a, const Vec3& b, double t) {
    double c = std::clamp(dot(a, b), -1.0, 1.0);
    double w = std::acos(c);
    if (w < 1e-9) return normalized(a + t * (b - a));
    return normalized((std::sin((1 - t) * w) / std::sin(w)) * a +
                      (std::sin(t * w) / std::sin(w)) * b);
}

void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed) {
    for (const auto& item : j.items())
        if (!allowed.count(item.key()))
            throw ConfigError("unknown family key: " + item.key());
}

std::pair<double, double> parse_center(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError("family center must be [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

LoopFamily line_pencil(double cx, double cy, double theta0) {
    Vec3 center = normalized(Vec3{cx, cy, 1.0});
    LoopFamily fam;
    fam.kind = LoopFamily::Kind::LinePencil;
    fam.period = kPi;
    fam.sampler = [center, cx, cy, theta0](double t) {
        CuttingSystem sys;
        sys.lines.push_back(pencil_line(center, cx, cy, theta0 + t, false));
        return sys;
    };
    fam.descriptor = {{"kind", "line_pencil"}, {"center", {cx, cy}}, {"theta0", theta0}};
    verify_closure(fam);
    return fam;
}

LoopFamily line_pencil_with_base_point(const HomPoly3& f, double cx, double cy, double theta0) {
    Vec3 center = normalized(Vec3{cx, cy, 1.0});
    if (std::abs(f.eval(center)) > 1e-9)
        throw FamilyError("not_on_curve", "pencil base point does not lie on the curve");
    LoopFamily fam;
    fam.kind = LoopFamily::Kind::LinePencil;
    fam.period = kPi;
    fam.sampler = [center, cx, cy, theta0](double t) {
        CuttingSystem sys;
        sys.lines.push_back(pencil_line(center, cx, cy, theta0 + t, true));
        return sys;
    };
    fam.deflations_per_system = 1;
    fam.descriptor = {{"kind", "line_pencil"},
                      {"center", {cx, cy}},
                      {"theta0", theta0},
                      {"base_point", true}};
    verify_closure(fam);
    return fam;
}

LoopFamily line_product(double cx, double cy, int k, double theta0) {
    if (k < 2) throw FamilyError("bad_family", "line_product needs k >= 2");
    Vec3 center = normalized(Vec3{cx, cy, 1.0});
    LoopFamily fam;
    fam.kind = LoopFamily::Kind::LineProduct;
    fam.period = kPi / k;
    fam.sampler = [center, cx, cy, theta0, k](double t) {
        CuttingSystem sys;
        for (int j = 0; j < k; ++j)
            sys.lines.push_back(pencil_line(center, cx, cy, theta0 + t + j * kPi / k, false));
        return sys;
    };
    fam.descriptor = {{"kind", "line_product"}, {"center", {cx, cy}}, {"k", k}, {"theta0", theta0}};
    verify_closure(fam);
    return fam;
}

LoopFamily binary_curve_pencil(const HomPoly3& f0, const HomPoly3& f1) {
    if (f0.degree() != f1.degree())
        throw FamilyError("bad_family", "pencil end forms must have equal degree");
    const auto& c0 = f0.coeffs();
    const auto& c1 = f1.coeffs();
    double dplus = 0, dminus = 0;
    for (size_t i = 0; i < c0.size(); ++i) {
        dplus = std::max(dplus, std::abs(c0[i] - c1[i]));
        dminus = std::max(dminus, std::abs(c0[i] + c1[i]));
    }
    if (std::min(dplus, dminus) < 1e-9)
        throw FamilyError("bad_family", "pencil end forms are proportional");
    LoopFamily fam;
    fam.kind = LoopFamily::Kind::BinaryPencil;
    fam.period = kPi;
    fam.sampler = [f0, f1](double t) {
        CuttingSystem sys;
        sys.curve = HomPoly3::combine(std::cos(t), f0, std::sin(t), f1);
        return sys;
    };
    fam.descriptor = {{"kind", "binary_pencil"}, {"F0", f0.to_json()}, {"F1", f1.to_json()}};
    verify_closure(fam);
    return fam;
}

LoopFamily curve_perturbation_loop(const HomPoly3& g0, const HomPoly3& r1, const HomPoly3& r2,
                                   double eps) {
    if (g0.degree() != r1.degree() || g0.degree() != r2.degree())
        throw FamilyError("bad_family", "perturbation forms must match the base degree");
    if (!(eps > 0) || eps >= 1)
        throw FamilyError("bad_family", "perturbation size must lie in (0, 1)");
    LoopFamily fam;
    fam.kind = LoopFamily::Kind::PerturbationLoop;
    fam.period = 1.0;
    fam.sampler = [g0, r1, r2, eps](double s) {
        const auto& c0 = g0.coeffs();
        const auto& c1 = r1.coeffs();
        const auto& c2 = r2.coeffs();
        double cs = std::cos(2 * kPi * s), sn = std::sin(2 * kPi * s);
        std::vector<double> c(c0.size());
        for (size_t i = 0; i < c0.size(); ++i) c[i] = c0[i] + eps * (cs * c1[i] + sn * c2[i]);
        CuttingSystem sys;
        sys.curve = HomPoly3(g0.degree(), c);
        return sys;
    };
    fam.descriptor = {{"kind", "perturbation_loop"},
                      {"G0", g0.to_json()},
                      {"R1", r1.to_json()},
                      {"R2", r2.to_json()},
                      {"eps", eps}};
    verify_closure(fam);
    return fam;
}

LoopFamily sampled_line_loop(std::vector<Vec3> samples,
                             std::optional<std::pair<double, double>> base_point,
                             const HomPoly3* curve) {
    if (samples.size() < 3)
        throw FamilyError("not_closed", "a sampled loop needs at least three entries");
    std::vector<Vec3> s;
    s.reserve(samples.size());
    s.push_back(normalized(samples[0]));
    for (size_t i = 1; i < samples.size(); ++i) {
        Vec3 n = normalized(samples[i]);
        if (dot(n, s.back()) < 0) n = -1.0 * n;
        s.push_back(n);
    }
    if (norm(s.front() - s.back()) > 1e-9)
        throw FamilyError("not_closed", "first and last sampled lines differ");
    s.back() = s.front();
    for (size_t i = 0; i + 1 < s.size(); ++i)
        if (chordal_rp2(s[i], s[i + 1]) > 0.1)
            throw FamilyError("too_coarse", "consecutive sampled lines are too far apart");

    bool deflate = base_point.has_value();
    Vec3 base{0, 0, 0};
    if (deflate) {
        base = normalized(Vec3{base_point->first, base_point->second, 1.0});
        if (curve && std::abs(curve->eval(base)) > 1e-9)
            throw FamilyError("not_on_curve", "sampled-loop base point does not lie on the curve");
        for (const auto& n : s)
            if (std::abs(dot(n, base)) > 1e-9)
                throw FamilyError("bad_family", "a sampled line misses the base point");
    }
    // fixed axis defining the in-line basis for loops without a base point
    Vec3 axis{0, 0, 1};
    double margin = 0;
    for (Vec3 cand : {Vec3{0, 0, 1}, Vec3{1, 0, 0}, Vec3{0, 1, 0}}) {
        double m = 1e9;
        for (const auto& n : s) m = std::min(m, norm(cross(n, cand)));
        if (m > margin) {
            margin = m;
            axis = cand;
        }
    }
    if (!deflate && margin < 0.05)
        throw FamilyError("bad_family", "no stable basis axis for the sampled loop");

    double T = static_cast<double>(s.size() - 1);
    LoopFamily fam;
    fam.kind = LoopFamily::Kind::SampledLineLoop;
    fam.period = T;
    fam.sampler = [s, deflate, base, axis](double t) {
        double tt = std::clamp(t, 0.0, static_cast<double>(s.size() - 1));
        size_t i = std::min(static_cast<size_t>(tt), s.size() - 2);
        CutLine l;
        l.n = slerp(s[i], s[i + 1], tt - i);
        if (deflate) {
            l.u = base;
            l.deflate = true;
        } else {
            l.u = normalized(cross(l.n, axis));
        }
        l.v = normalized(cross(l.n, l.u));
        CuttingSystem sys;
        sys.lines.push_back(l);
        return sys;
    };
    fam.deflations_per_system = deflate ? 1 : 0;
    fam.descriptor = {{"kind", "sampled_lines"}, {"samples", s.size()}};
    if (deflate) fam.descriptor["base_point"] = {base_point->first, base_point->second};
    verify_closure(fam);
    return fam;
}

LoopFamily family_from_json(const nlohmann::json& j, const HomPoly3& curve) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw ConfigError("family spec needs a string `kind`");
    std::string kind = j["kind"].get<std::string>();

    if (kind == "line_pencil") {
        check_keys(j, {"kind", "center", "theta0"});
        if (!j.contains("center")) throw ConfigError("line_pencil needs `center`");
        auto [cx, cy] = parse_center(j["center"]);
        double th0 = j.value("theta0", 0.0);
        Vec3 c = normalized(Vec3{cx, cy, 1.0});
        if (std::abs(curve.eval(c)) <= 1e-9)
            return line_pencil_with_base_point(curve, cx, cy, th0);
        return line_pencil(cx, cy, th0);
    }
    if (kind == "line_product") {
        check_keys(j, {"kind", "center", "k", "theta0"});
        if (!j.contains("center") || !j.contains("k"))
            throw ConfigError("line_product needs `center` and `k`");
        auto [cx, cy] = parse_center(j["center"]);
        if (!j["k"].is_number_integer()) throw ConfigError("line_product `k` must be an integer");
        return line_product(cx, cy, j["k"].get<int>(), j.value("theta0", 0.0));
    }
    if (kind == "binary_pencil") {
        check_keys(j, {"kind", "F0", "F1"});
        if (!j.contains("F0") || !j.contains("F1"))
            throw ConfigError("binary_pencil needs `F0` and `F1`");
        return binary_curve_pencil(HomPoly3::from_json(j["F0"]), HomPoly3::from_json(j["F1"]));
    }
    if (kind == "perturbation_loop") {
        check_keys(j, {"kind", "G0", "R1", "R2", "eps"});
        for (const char* key : {"G0", "R1", "R2", "eps"})
            if (!j.contains(key))
                throw ConfigError(std::string("perturbation_loop needs `") + key + "`");
        if (!j["eps"].is_number()) throw ConfigError("perturbation_loop `eps` must be a number");
        return curve_perturbation_loop(HomPoly3::from_json(j["G0"]), HomPoly3::from_json(j["R1"]),
                                       HomPoly3::from_json(j["R2"]), j["eps"].get<double>());
    }
    if (kind == "sampled_lines") {
        check_keys(j, {"kind", "samples", "base_point"});
        if (!j.contains("samples") || !j["samples"].is_array())
            throw ConfigError("sampled_lines needs a `samples` array");
        std::vector<Vec3> samples;
        for (const auto& row : j["samples"]) {
            if (!row.is_array() || row.size() != 3)
                throw ConfigError("each sampled line must be [a, b, c]");
            samples.push_back(Vec3{row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
        }
        std::optional<std::pair<double, double>> base;
        if (j.contains("base_point")) {
            auto [bx, by] = parse_center(j["base_point"]);
            base = {bx, by};
        }
        return sampled_line_loop(std::move(samples), base, &curve);
    }
    throw ConfigError("unknown family kind: " + kind);
}

} // namespace choreo
