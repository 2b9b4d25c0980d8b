#include "choreo/poly.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <nlohmann/json.hpp>

#include "choreo/errors.hpp"

namespace choreo {

HomPoly3::HomPoly3(int degree, std::vector<double> coeffs) : deg_(degree), c_(std::move(coeffs)) {
    if (deg_ < 0 || static_cast<int>(c_.size()) != term_count(deg_))
        throw ConfigError("homogeneous polynomial has wrong coefficient count");
    double m = 0;
    for (double v : c_) m = std::max(m, std::abs(v));
    if (m == 0) throw ConfigError("zero polynomial");
    for (double& v : c_) v /= m;
}

int HomPoly3::index_of(int degree, int a, int b) {
    int k = degree - a;                 // block of fixed a has k+1 entries
    return k * (k + 1) / 2 + (k - b);
}

void HomPoly3::exponents_at(int degree, int idx, int& a, int& b, int& c) {
    int k = 0;
    while ((k + 1) * (k + 2) / 2 <= idx) ++k;
    a = degree - k;
    b = k - (idx - k * (k + 1) / 2);
    c = degree - a - b;
}

namespace {

template <typename S>
S eval_impl(int deg, const std::vector<double>& c, S x, S y, S z) {
    // power tables
    std::vector<S> xp(deg + 1), yp(deg + 1), zp(deg + 1);
    xp[0] = yp[0] = zp[0] = S(1);
    for (int i = 1; i <= deg; ++i) { xp[i] = xp[i-1]*x; yp[i] = yp[i-1]*y; zp[i] = zp[i-1]*z; }
    S acc(0);
    int idx = 0;
    for (int a = deg; a >= 0; --a)
        for (int b = deg - a; b >= 0; --b, ++idx)
            if (c[idx] != 0.0) acc += c[idx] * xp[a] * yp[b] * zp[deg - a - b];
    return acc;
}

} // namespace

cplx HomPoly3::eval(const CVec3& p) const { return eval_impl<cplx>(deg_, c_, p.x, p.y, p.z); }
double HomPoly3::eval(const Vec3& p) const { return eval_impl<double>(deg_, c_, p.x, p.y, p.z); }

CVec3 HomPoly3::gradient(const CVec3& p) const {
    CVec3 g;
    int idx = 0;
    std::vector<cplx> xp(deg_ + 1), yp(deg_ + 1), zp(deg_ + 1);
    xp[0] = yp[0] = zp[0] = 1;
    for (int i = 1; i <= deg_; ++i) { xp[i] = xp[i-1]*p.x; yp[i] = yp[i-1]*p.y; zp[i] = zp[i-1]*p.z; }
    for (int a = deg_; a >= 0; --a)
        for (int b = deg_ - a; b >= 0; --b, ++idx) {
            double cv = c_[idx];
            if (cv == 0.0) continue;
            int cc = deg_ - a - b;
            if (a > 0) g.x += cv * double(a) * xp[a-1] * yp[b] * zp[cc];
            if (b > 0) g.y += cv * double(b) * xp[a] * yp[b-1] * zp[cc];
            if (cc > 0) g.z += cv * double(cc) * xp[a] * yp[b] * zp[cc-1];
        }
    return g;
}

Vec3 HomPoly3::gradient(const Vec3& p) const {
    CVec3 g = gradient(to_complex(p));
    return {std::real(g.x), std::real(g.y), std::real(g.z)};
}

namespace {

// coefficients of (s*t + u)^n as a vector over t-degree, scalar coefficients s,u
std::vector<double> binomial_pow(double s, double u, int n) {
    std::vector<double> out(n + 1, 0.0);
    // out[i] = C(n,i) s^i u^(n-i)
    double c = 1.0;
    for (int i = 0; i <= n; ++i) {
        out[i] = c * std::pow(s, i) * std::pow(u, n - i);
        c = c * (n - i) / (i + 1.0);
    }
    return out;
}

std::vector<double> conv(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

} // namespace

BinaryForm restrict_to_line(const HomPoly3& f, Vec3 u, Vec3 v) {
    if (norm(cross(u, v)) <= 1e-12 * norm(u) * norm(v))
        throw AlgebraError("degenerate_line", "spanning vectors are collinear");
    int d = f.degree();
    BinaryForm b;
    b.deg = d;
    b.c.assign(d + 1, 0.0);
    std::vector<double> acc(d + 1, 0.0);
    const auto& cs = f.coeffs();
    int idx = 0;
    for (int a = d; a >= 0; --a)
        for (int bb = d - a; bb >= 0; --bb, ++idx) {
            double cv = cs[idx];
            if (cv == 0.0) continue;
            int cc = d - a - bb;
            // (alpha u.x + beta v.x)^a * (... y ...)^bb * (... z ...)^cc, expanded over alpha-degree
            std::vector<double> t = binomial_pow(u.x, v.x, a);
            t = conv(t, binomial_pow(u.y, v.y, bb));
            t = conv(t, binomial_pow(u.z, v.z, cc));
            for (int k = 0; k <= d; ++k) acc[k] += cv * t[k];
        }
    double scale = std::max(1.0, std::pow(std::max(norm(u), norm(v)), d));
    double m = 0;
    for (double x : acc) m = std::max(m, std::abs(x));
    if (m <= 1e-12 * scale)
        throw AlgebraError("degenerate_line", "restriction of the form to the line vanishes");
    for (int k = 0; k <= d; ++k) b.c[k] = acc[k];
    return b;
}

HomPoly3 HomPoly3::compose_linear(const std::array<std::array<double, 3>, 3>& m) const {
    // substitute x_i <- sum_j m[i][j] q_j and re-expand by multiplying linear forms
    int d = deg_;
    std::map<std::pair<int,int>, double> out;
    int idx = 0;
    for (int a = d; a >= 0; --a)
        for (int b = d - a; b >= 0; --b, ++idx) {
            double cv = c_[idx];
            if (cv == 0.0) continue;
            int cc = d - a - b;
            // expand product of a copies of row0, b of row1, cc of row2
            std::map<std::pair<int,int>, double> term;
            term[{0, 0}] = cv;  // monomial q-exponents (A, B), C implied
            auto mul_row = [&](const std::array<double,3>& r) {
                std::map<std::pair<int,int>, double> nxt;
                for (auto& [e, w] : term) {
                    auto [A, B] = e;
                    if (r[0] != 0) nxt[{A+1, B}] += w * r[0];
                    if (r[1] != 0) nxt[{A, B+1}] += w * r[1];
                    if (r[2] != 0) nxt[{A, B}] += w * r[2];
                }
                term.swap(nxt);
            };
            for (int i = 0; i < a; ++i) mul_row(m[0]);
            for (int i = 0; i < b; ++i) mul_row(m[1]);
            for (int i = 0; i < cc; ++i) mul_row(m[2]);
            for (auto& [e, w] : term) out[e] += w;
        }
    std::vector<double> cs(term_count(d), 0.0);
    for (auto& [e, w] : out) cs[index_of(d, e.first, e.second)] = w;
    return HomPoly3(d, std::move(cs));
}

HomPoly3 HomPoly3::combine(double s0, const HomPoly3& f0, double s1, const HomPoly3& f1) {
    if (f0.degree() != f1.degree()) throw ConfigError("pencil forms must share the degree");
    std::vector<double> cs(f0.coeffs().size());
    for (size_t i = 0; i < cs.size(); ++i) cs[i] = s0 * f0.coeffs()[i] + s1 * f1.coeffs()[i];
    return HomPoly3(f0.degree(), std::move(cs));
}

HomPoly3 HomPoly3::multiply(const HomPoly3& f, const HomPoly3& g) {
    int d = f.degree() + g.degree();
    std::vector<double> cs(term_count(d), 0.0);
    int i1 = 0;
    for (int a1 = f.degree(); a1 >= 0; --a1)
        for (int b1 = f.degree() - a1; b1 >= 0; --b1, ++i1) {
            double v1 = f.coeffs()[i1];
            if (v1 == 0.0) continue;
            int i2 = 0;
            for (int a2 = g.degree(); a2 >= 0; --a2)
                for (int b2 = g.degree() - a2; b2 >= 0; --b2, ++i2) {
                    double v2 = g.coeffs()[i2];
                    if (v2 == 0.0) continue;
                    cs[index_of(d, a1 + a2, b1 + b2)] += v1 * v2;
                }
        }
    return HomPoly3(d, std::move(cs));
}

HomPoly3 HomPoly3::linear_form(Vec3 l) {
    return HomPoly3(1, {l.x, l.y, l.z});
}

namespace {

std::string monomial_key(int a, int b, int c) {
    std::ostringstream os;
    auto put = [&](const char* v, int e) {
        if (e == 0) return;
        if (os.tellp() > 0) os << ' ';
        os << v;
        if (e > 1) os << '^' << e;
    };
    put("x", a); put("y", b); put("z", c);
    std::string s = os.str();
    return s.empty() ? "1" : s;
}

void parse_monomial_key(const std::string& key, int& a, int& b, int& c) {
    a = b = c = 0;
    std::istringstream is(key);
    std::string tok;
    while (is >> tok) {
        if (tok == "1") continue;
        char var = tok[0];
        int e = 1;
        size_t caret = tok.find('^');
        if (caret != std::string::npos) e = std::stoi(tok.substr(caret + 1));
        switch (var) {
            case 'x': a += e; break;
            case 'y': b += e; break;
            case 'z': c += e; break;
            default: throw ConfigError("bad monomial key: " + key);
        }
    }
}

} // namespace

nlohmann::json HomPoly3::to_json() const {
    nlohmann::json coeffs = nlohmann::json::object();
    int idx = 0;
    for (int a = deg_; a >= 0; --a)
        for (int b = deg_ - a; b >= 0; --b, ++idx)
            if (c_[idx] != 0.0) coeffs[monomial_key(a, b, deg_ - a - b)] = c_[idx];
    return nlohmann::json{{"degree", deg_}, {"coeffs", coeffs}};
}

HomPoly3 HomPoly3::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("degree") || !j.contains("coeffs"))
        throw ConfigError("polynomial JSON needs \"degree\" and \"coeffs\"");
    int d = j.at("degree").get<int>();
    if (d < 1 || d > 12) throw ConfigError("unsupported polynomial degree");
    std::vector<double> cs(term_count(d), 0.0);
    for (auto& [key, val] : j.at("coeffs").items()) {
        int a, b, c;
        parse_monomial_key(key, a, b, c);
        if (a + b + c != d)
            throw ConfigError("monomial " + key + " does not have total degree " + std::to_string(d));
        cs[index_of(d, a, b)] += val.get<double>();
    }
    return HomPoly3(d, std::move(cs));
}

cplx BinaryForm::eval(cplx alpha, cplx beta) const {
    cplx acc = 0, ap = 1;
    std::vector<cplx> betas(deg + 1);
    betas[0] = 1;
    for (int k = 1; k <= deg; ++k) betas[k] = betas[k - 1] * beta;
    for (int k = 0; k <= deg; ++k) { acc += c[k] * ap * betas[deg - k]; ap *= alpha; }
    return acc;
}

double BinaryForm::norm_inf() const {
    double m = 0;
    for (auto& v : c) m = std::max(m, std::abs(v));
    return m;
}

BinaryForm BinaryForm::normalized() const {
    BinaryForm out = *this;
    double m = norm_inf();
    if (m > 0)
        for (auto& v : out.c) v /= m;
    return out;
}

BinaryForm binary_multiply(const BinaryForm& a, const BinaryForm& b) {
    BinaryForm out;
    out.deg = a.deg + b.deg;
    out.c.assign(out.deg + 1, 0.0);
    for (int i = 0; i <= a.deg; ++i)
        for (int j = 0; j <= b.deg; ++j) out.c[i + j] += a.c[i] * b.c[j];
    return out;
}

} // namespace choreo
