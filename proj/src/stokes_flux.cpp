#include <algorithm>
#include <cmath>
#include <vector>

#include "isoflux/domain.hpp"
#include "isoflux/polyline.hpp"

namespace isoflux {

namespace {

struct Crossing {
    double x;
    int sign;  // +1 upward edge, -1 downward edge
};

}  // namespace

double stokes_flux(const MeridianScalarField& w, const MeridianCurve& c, const MeridianSection& section,
                   int quad_rows) {
    if (c.vertices.size() < 2) throw std::invalid_argument("stokes_flux: curve needs >= 2 vertices");
    if (quad_rows < 8) quad_rows = 8;

    std::vector<Vec2> poly = c.vertices;
    if (!c.closed) {
        const double tol = 1e-6 * std::max(section.z_max - section.z_min, 1e-300);
        double s_begin, d_begin, s_end, d_end;
        section.nearest_arc_point(poly.front(), s_begin, d_begin);
        section.nearest_arc_point(poly.back(), s_end, d_end);
        if (d_begin > tol || d_end > tol)
            throw OpenCurve("stokes_flux: open curve endpoints must lie on the section boundary");
        // close along the outer arc from the end point back to the begin point
        double s = 0.0;
        std::vector<double> breaks;  // cumulative arc parameters of arc vertices
        breaks.push_back(0.0);
        for (std::size_t k = 0; k + 1 < section.outer_arc.size(); ++k) {
            s += dist(section.outer_arc[k], section.outer_arc[k + 1]);
            breaks.push_back(s);
        }
        poly.push_back(section.arc_point(s_end));
        if (s_end > s_begin) {
            for (std::size_t k = breaks.size(); k-- > 0;) {
                if (breaks[k] < s_end && breaks[k] > s_begin) poly.push_back(section.outer_arc[k]);
            }
        } else {
            for (std::size_t k = 0; k < breaks.size(); ++k) {
                if (breaks[k] > s_end && breaks[k] < s_begin) poly.push_back(section.outer_arc[k]);
            }
        }
        poly.push_back(section.arc_point(s_begin));
    }

    double z_lo = poly.front().z, z_hi = poly.front().z;
    for (const Vec2& v : poly) {
        z_lo = std::min(z_lo, v.z);
        z_hi = std::max(z_hi, v.z);
    }
    if (!(z_hi > z_lo)) return 0.0;

    const auto& gl = gauss_legendre_01(5);
    const double h = (z_hi - z_lo) / quad_rows;
    const std::size_t n = poly.size();
    std::vector<Crossing> crossings;
    double total = 0.0;
    for (int row = 0; row < quad_rows; ++row) {
        const double zk = z_lo + (row + 0.5) * h;
        crossings.clear();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2& a = poly[i];
            const Vec2& b = poly[(i + 1) % n];
            if (a.z <= zk && zk < b.z) {
                crossings.push_back({a.x + (zk - a.z) / (b.z - a.z) * (b.x - a.x), +1});
            } else if (b.z <= zk && zk < a.z) {
                crossings.push_back({a.x + (zk - a.z) / (b.z - a.z) * (b.x - a.x), -1});
            }
        }
        if (crossings.size() < 2) continue;
        std::sort(crossings.begin(), crossings.end(),
                  [](const Crossing& p, const Crossing& q) { return p.x < q.x; });
        // winding number to the right of the last crossing is zero; walk left
        int winding = 0;
        double row_sum = 0.0;
        for (std::size_t i = crossings.size(); i-- > 1;) {
            winding += crossings[i].sign;
            if (winding == 0) continue;
            const double xa = crossings[i - 1].x;
            const double xb = crossings[i].x;
            if (!(xb > xa)) continue;
            double seg = 0.0;
            for (const auto& [t, wt] : gl) seg += wt * w(xa + t * (xb - xa), zk);
            // the paper's surface normal makes the +z-oriented axis curve
            // enclose the section with negative crossing winding
            row_sum += -winding * seg * (xb - xa);
        }
        total += row_sum;
    }
    return c.multiplicity * total * h;
}

double enclosed_area_abs(const std::vector<Vec2>& closed_polygon, int quad_rows) {
    if (closed_polygon.size() < 3) return 0.0;
    if (quad_rows < 8) quad_rows = 8;
    double z_lo = closed_polygon.front().z, z_hi = z_lo;
    for (const Vec2& v : closed_polygon) {
        z_lo = std::min(z_lo, v.z);
        z_hi = std::max(z_hi, v.z);
    }
    if (!(z_hi > z_lo)) return 0.0;
    const double h = (z_hi - z_lo) / quad_rows;
    const std::size_t n = closed_polygon.size();
    std::vector<Crossing> crossings;
    double total = 0.0;
    for (int row = 0; row < quad_rows; ++row) {
        const double zk = z_lo + (row + 0.5) * h;
        crossings.clear();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2& a = closed_polygon[i];
            const Vec2& b = closed_polygon[(i + 1) % n];
            if (a.z <= zk && zk < b.z) {
                crossings.push_back({a.x + (zk - a.z) / (b.z - a.z) * (b.x - a.x), +1});
            } else if (b.z <= zk && zk < a.z) {
                crossings.push_back({a.x + (zk - a.z) / (b.z - a.z) * (b.x - a.x), -1});
            }
        }
        if (crossings.size() < 2) continue;
        std::sort(crossings.begin(), crossings.end(),
                  [](const Crossing& p, const Crossing& q) { return p.x < q.x; });
        int winding = 0;
        for (std::size_t i = crossings.size(); i-- > 1;) {
            winding += crossings[i].sign;
            if (winding == 0) continue;
            total += std::abs(winding) * (crossings[i].x - crossings[i - 1].x);
        }
    }
    return total * h;
}

}  // namespace isoflux
