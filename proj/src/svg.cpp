#include "choreo/svg.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "choreo/errors.hpp"

namespace choreo {

namespace {

constexpr double kWindow = 2.2;   // affine half-width of the view
constexpr double kSize = 800.0;   // pixels

const char* kPalette[] = {"#c62828", "#1565c0", "#2e7d32", "#6a1b9a", "#ef6c00",
                          "#00838f", "#ad1457", "#4e342e", "#9e9d24"};

struct Px {
    double x, y;
};

std::optional<Px> chart_point(double x, double y, double z) {
    double scale = std::max({std::abs(x), std::abs(y), std::abs(z)});
    if (scale == 0 || std::abs(z) < 1e-3 * scale) return std::nullopt;
    double cx = x / z, cy = y / z;
    if (std::abs(cx) > kWindow || std::abs(cy) > kWindow) return std::nullopt;
    return Px{(cx + kWindow) / (2 * kWindow) * kSize, (kWindow - cy) / (2 * kWindow) * kSize};
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

// emits one <polyline> per maximal run of drawable points
void emit_runs(std::ostringstream& os, const std::vector<std::optional<Px>>& pts,
               const std::string& style, bool arrow_on_last_run) {
    std::vector<std::string> runs;
    std::string cur;
    int count = 0;
    auto flush = [&] {
        if (count >= 2) runs.push_back(cur);
        cur.clear();
        count = 0;
    };
    for (const auto& p : pts) {
        if (!p) {
            flush();
            continue;
        }
        cur += (count ? " " : "") + fmt(p->x) + "," + fmt(p->y);
        ++count;
    }
    flush();
    for (size_t r = 0; r < runs.size(); ++r) {
        os << "<polyline fill=\"none\" " << style;
        if (arrow_on_last_run && r + 1 == runs.size()) os << " marker-end=\"url(#arrow)\"";
        os << " points=\"" << runs[r] << "\"/>\n";
    }
}

} // namespace

std::string render_plot(const DivisorPath& path, const CurveTopology& topo) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << (int)kSize << "\" height=\""
       << (int)kSize << "\" viewBox=\"0 0 " << (int)kSize << " " << (int)kSize << "\">\n"
       << "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"8\" refY=\"5\" "
          "markerWidth=\"7\" markerHeight=\"7\" orient=\"auto\">"
          "<path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"context-stroke\"/></marker></defs>\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (const auto& comp : topo.comps) {
        size_t n = comp.verts.size();
        size_t stride = std::max<size_t>(1, n / 1500);
        std::vector<std::optional<Px>> pts;
        for (size_t i = 0; i < n; i += stride) {
            const Vec3& v = comp.verts[i];
            pts.push_back(chart_point(v.x, v.y, v.z));
        }
        Vec3 last = comp.closing_target();
        pts.push_back(chart_point(last.x, last.y, last.z));
        emit_runs(os, pts, "stroke=\"#222222\" stroke-width=\"2\"", false);
    }

    int color = 0;
    for (const auto& tr : path.tracks) {
        if (tr.cls != Track::Class::Real) continue;
        const std::string col = kPalette[color % 9];
        ++color;
        size_t n = tr.pos.size();
        size_t stride = std::max<size_t>(1, n / 400);
        std::vector<std::optional<Px>> pts;
        for (size_t i = 0; i < n; i += stride)
            pts.push_back(chart_point(std::real(tr.pos[i].x), std::real(tr.pos[i].y),
                                      std::real(tr.pos[i].z)));
        if ((n - 1) % stride != 0)
            pts.push_back(chart_point(std::real(tr.pos.back().x), std::real(tr.pos.back().y),
                                      std::real(tr.pos.back().z)));
        emit_runs(os, pts, "stroke=\"" + col + "\" stroke-width=\"1.5\"", true);
        if (auto p0 = chart_point(std::real(tr.pos[0].x), std::real(tr.pos[0].y),
                                  std::real(tr.pos[0].z)))
            os << "<circle cx=\"" << fmt(p0->x) << "\" cy=\"" << fmt(p0->y)
               << "\" r=\"5\" fill=\"" << col << "\" stroke=\"white\" stroke-width=\"1.5\"/>\n";
    }

    os << "</svg>\n";
    return os.str();
}

void export_plot(const DivisorPath& path, const CurveTopology& topo, const std::string& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw ConfigError("cannot write plot file: " + file);
    out << render_plot(path, topo);
}

} // namespace choreo
