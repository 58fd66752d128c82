#include "isoflux/star_norm.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace isoflux {

namespace {

bool same_curve(const Polyline3& a, const Polyline3& b) {
    if (a.closed != b.closed || a.multiplicity != b.multiplicity) return false;
    if (a.vertices.size() != b.vertices.size()) return false;
    for (std::size_t k = 0; k < a.vertices.size(); ++k) {
        const Vec3 d = a.vertices[k] - b.vertices[k];
        if (d.x != 0.0 || d.y != 0.0 || d.z != 0.0) return false;
    }
    return true;
}

bool meridian_planar(const Polyline3& c, double tol) {
    for (const Vec3& v : c.vertices) {
        if (std::abs(v.y) > tol || v.x < -tol) return false;
    }
    return true;
}

struct QuadPoint {
    Vec3 point;
    Vec3 weighted_tangent;  // multiplicity * weight * segment vector
};

// Quadrature trace with segments subdivided to at most max_len.
std::vector<QuadPoint> quadrature_trace(const Polyline3& c, double max_len) {
    const auto& gl = gauss_legendre_01(4);
    std::vector<QuadPoint> pts;
    const std::size_t n = c.vertices.size();
    if (n < 2) return pts;
    const std::size_t nseg = c.closed ? n : n - 1;
    for (std::size_t s = 0; s < nseg; ++s) {
        const Vec3& a = c.vertices[s];
        const Vec3& b = c.vertices[(s + 1) % n];
        const Vec3 d = b - a;
        const int parts = std::max(1, static_cast<int>(std::ceil(d.norm() / max_len)));
        const Vec3 step = d / parts;
        for (int p = 0; p < parts; ++p) {
            const Vec3 base = a + step * static_cast<double>(p);
            for (const auto& [t, w] : gl)
                pts.push_back({base + step * t, step * (w * c.multiplicity)});
        }
    }
    return pts;
}

void bounding_box(const Domain& dom, Vec3& lo, Vec3& hi) {
    const double r = dom.max_profile_radius() > 0.0 ? dom.max_profile_radius() : dom.radius();
    lo = {-r, -r, dom.z_min()};
    hi = {r, r, dom.z_max()};
}

}  // namespace

StarNormEstimate star_distance(const Polyline3& c1, const Polyline3& c2, const Domain& domain,
                               int dictionary_size) {
    StarNormEstimate est;
    if (same_curve(c1, c2)) {
        est.lower_method = "identical";
        est.upper_method = "identical";
        return est;
    }
    const double diam = domain.diameter();

    // upper bound
    const double tol = 1e-9 * diam;
    const bool planar = meridian_planar(c1, tol) && meridian_planar(c2, tol);
    bool area_applicable = false;
    if (planar && c1.multiplicity == c2.multiplicity && std::abs(c1.multiplicity) == 1) {
        if (c1.closed && c2.closed) {
            area_applicable = true;
        } else if (!c1.closed && !c2.closed) {
            area_applicable = dist(c1.vertices.front(), c2.vertices.front()) <= tol &&
                              dist(c1.vertices.back(), c2.vertices.back()) <= tol;
        }
    }
    if (area_applicable) {
        std::vector<Vec2> poly;
        poly.reserve(c1.vertices.size() + c2.vertices.size());
        for (const Vec3& v : c1.vertices) poly.push_back({v.x, v.z});
        for (std::size_t k = c2.vertices.size(); k-- > 0;) poly.push_back({c2.vertices[k].x, c2.vertices[k].z});
        est.upper = enclosed_area_abs(poly);
        est.upper_method = "area-between";
    } else {
        est.upper = (length(c1) + length(c2)) * diam;
        est.upper_method = "mass-diameter";
    }

    // dictionary lower bound
    Vec3 lo, hi;
    bounding_box(domain, lo, hi);
    int n_axis = std::max(2, static_cast<int>(std::lround(std::cbrt(static_cast<double>(dictionary_size)))));
    const Vec3 span = hi - lo;
    const double spacing = std::max({span.x, span.y, span.z}) / n_axis;
    const double sigma = 0.75 * spacing;
    const double cutoff_width = sigma;
    // admissibility: divide by an upper bound for max(sup, Lip) of the bump
    const double norm_bound = std::max(1.0, std::exp(-0.5) / sigma + 1.0 / cutoff_width);

    const auto trace1 = quadrature_trace(c1, 0.5 * sigma);
    const auto trace2 = quadrature_trace(c2, 0.5 * sigma);

    double best = 0.0;
    for (int i = 0; i < n_axis; ++i) {
        for (int j = 0; j < n_axis; ++j) {
            for (int k = 0; k < n_axis; ++k) {
                const Vec3 center{lo.x + (i + 0.5) / n_axis * span.x, lo.y + (j + 0.5) / n_axis * span.y,
                                  lo.z + (k + 0.5) / n_axis * span.z};
                if (!domain.contains(center)) continue;
                if (domain.boundary_distance(center) < 0.1 * spacing) continue;
                double pair_x = 0.0, pair_y = 0.0, pair_z = 0.0;
                auto accumulate = [&](const std::vector<QuadPoint>& trace, double sign) {
                    for (const QuadPoint& q : trace) {
                        const Vec3 d = q.point - center;
                        const double amp = std::exp(-0.5 * d.norm2() / (sigma * sigma)) *
                                           std::min(1.0, domain.boundary_distance(q.point) / cutoff_width);
                        pair_x += sign * amp * q.weighted_tangent.x;
                        pair_y += sign * amp * q.weighted_tangent.y;
                        pair_z += sign * amp * q.weighted_tangent.z;
                    }
                };
                accumulate(trace1, 1.0);
                accumulate(trace2, -1.0);
                best = std::max({best, std::abs(pair_x), std::abs(pair_y), std::abs(pair_z)});
            }
        }
    }
    est.lower = std::min(best / norm_bound, est.upper);
    est.lower_method = "bump-dictionary";
    return est;
}

double field_c01_norm(const VectorField& field, const Domain& domain, int lattice_n) {
    Vec3 lo, hi;
    bounding_box(domain, lo, hi);
    const Vec3 span = hi - lo;
    const double h = 1e-4 * domain.diameter();
    double sup = 0.0, lip = 0.0;
    for (int i = 0; i < lattice_n; ++i) {
        for (int j = 0; j < lattice_n; ++j) {
            for (int k = 0; k < lattice_n; ++k) {
                const Vec3 p{lo.x + (i + 0.5) / lattice_n * span.x, lo.y + (j + 0.5) / lattice_n * span.y,
                             lo.z + (k + 0.5) / lattice_n * span.z};
                if (!domain.contains(p)) continue;
                sup = std::max(sup, field(p).norm());
                if (domain.boundary_distance(p) < 2.0 * h) continue;
                // columns of the Jacobian by central differences
                Vec3 col[3];
                const Vec3 ex{h, 0, 0}, ey{0, h, 0}, ez{0, 0, h};
                col[0] = (field(p + ex) - field(p - ex)) / (2.0 * h);
                col[1] = (field(p + ey) - field(p - ey)) / (2.0 * h);
                col[2] = (field(p + ez) - field(p - ez)) / (2.0 * h);
                // spectral norm via power iteration on J^T J
                Vec3 v{1.0, 1.0, 1.0};
                double s = 0.0;
                for (int it = 0; it < 25; ++it) {
                    const Vec3 jv{col[0].x * v.x + col[1].x * v.y + col[2].x * v.z,
                                  col[0].y * v.x + col[1].y * v.y + col[2].y * v.z,
                                  col[0].z * v.x + col[1].z * v.y + col[2].z * v.z};
                    const Vec3 jtjv{col[0].dot(jv), col[1].dot(jv), col[2].dot(jv)};
                    const double n = jtjv.norm();
                    if (n == 0.0) break;
                    v = jtjv / n;
                    s = n;
                }
                lip = std::max(lip, std::sqrt(s));
            }
        }
    }
    return std::max(sup, lip);
}

}  // namespace isoflux
