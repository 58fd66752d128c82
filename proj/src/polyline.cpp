#include "isoflux/polyline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "isoflux/domain.hpp"

namespace isoflux {

void validate(const Polyline3& c) {
    if (c.vertices.size() < 2) throw std::invalid_argument("polyline needs >= 2 vertices");
    if (c.multiplicity == 0) throw std::invalid_argument("polyline multiplicity must be nonzero");
    const std::size_t n = c.vertices.size();
    const std::size_t nseg = c.closed ? n : n - 1;
    for (std::size_t s = 0; s < nseg; ++s) {
        if (dist(c.vertices[s], c.vertices[(s + 1) % n]) <= 1e-12)
            throw std::invalid_argument("polyline has coincident consecutive vertices");
    }
}

double length(const Polyline3& c) {
    const std::size_t n = c.vertices.size();
    if (n < 2) return 0.0;
    double len = 0.0;
    const std::size_t nseg = c.closed ? n : n - 1;
    for (std::size_t s = 0; s < nseg; ++s) len += dist(c.vertices[s], c.vertices[(s + 1) % n]);
    return std::abs(c.multiplicity) * len;
}

double length(const MeridianCurve& c) {
    const std::size_t n = c.vertices.size();
    if (n < 2) return 0.0;
    double len = 0.0;
    const std::size_t nseg = c.closed ? n : n - 1;
    for (std::size_t s = 0; s < nseg; ++s) len += dist(c.vertices[s], c.vertices[(s + 1) % n]);
    return std::abs(c.multiplicity) * len;
}

Polyline3 subdivided(const Polyline3& c, int factor) {
    if (factor < 1) throw std::invalid_argument("subdivided: factor must be >= 1");
    Polyline3 out;
    out.closed = c.closed;
    out.multiplicity = c.multiplicity;
    const std::size_t n = c.vertices.size();
    const std::size_t nseg = c.closed ? n : n - 1;
    for (std::size_t s = 0; s < nseg; ++s) {
        const Vec3& a = c.vertices[s];
        const Vec3& b = c.vertices[(s + 1) % n];
        for (int k = 0; k < factor; ++k)
            out.vertices.push_back(a + (b - a) * (static_cast<double>(k) / factor));
    }
    if (!c.closed) out.vertices.push_back(c.vertices.back());
    return out;
}

Polyline3 resample_arclength(const Polyline3& c, int n) {
    if (n < 2) throw std::invalid_argument("resample_arclength: need n >= 2");
    const std::size_t nv = c.vertices.size();
    const std::size_t nseg = c.closed ? nv : nv - 1;
    std::vector<double> cum(nseg + 1, 0.0);
    for (std::size_t s = 0; s < nseg; ++s)
        cum[s + 1] = cum[s] + dist(c.vertices[s], c.vertices[(s + 1) % nv]);
    const double total = cum.back();
    Polyline3 out;
    out.closed = c.closed;
    out.multiplicity = c.multiplicity;
    const int n_out = c.closed ? n : n;
    const int steps = c.closed ? n : n - 1;
    out.vertices.reserve(n_out);
    std::size_t seg = 0;
    for (int k = 0; k < n_out; ++k) {
        const double target = total * static_cast<double>(k) / steps;
        while (seg + 1 < nseg && cum[seg + 1] < target) ++seg;
        const double seg_len = cum[seg + 1] - cum[seg];
        const double t = seg_len > 0.0 ? (target - cum[seg]) / seg_len : 0.0;
        const Vec3& a = c.vertices[seg];
        const Vec3& b = c.vertices[(seg + 1) % nv];
        out.vertices.push_back(a + (b - a) * std::clamp(t, 0.0, 1.0));
    }
    if (!c.closed) out.vertices.back() = c.vertices.back();
    return out;
}

Polyline3 reversed(const Polyline3& c) {
    Polyline3 out = c;
    std::reverse(out.vertices.begin(), out.vertices.end());
    return out;
}

namespace {

double one_sided_hausdorff(const Polyline3& a, const Polyline3& b, int samples) {
    const std::size_t na = a.vertices.size();
    const std::size_t nsa = a.closed ? na : na - 1;
    double worst = 0.0;
    for (std::size_t s = 0; s < nsa; ++s) {
        const Vec3& p = a.vertices[s];
        const Vec3& q = a.vertices[(s + 1) % na];
        for (int k = 0; k <= samples; ++k) {
            const Vec3 x = p + (q - p) * (static_cast<double>(k) / samples);
            double best = 1e300;
            const std::size_t nb = b.vertices.size();
            const std::size_t nsb = b.closed ? nb : nb - 1;
            for (std::size_t t = 0; t < nsb; ++t)
                best = std::min(best, dist_to_segment(x, b.vertices[t], b.vertices[(t + 1) % nb]));
            worst = std::max(worst, best);
        }
    }
    return worst;
}

}  // namespace

double hausdorff_distance(const Polyline3& a, const Polyline3& b, int samples_per_segment) {
    return std::max(one_sided_hausdorff(a, b, samples_per_segment),
                    one_sided_hausdorff(b, a, samples_per_segment));
}

const std::vector<std::pair<double, double>>& gauss_legendre_01(int order) {
    if (order < 1) throw std::invalid_argument("gauss_legendre_01: order must be >= 1");
    static std::map<int, std::vector<std::pair<double, double>>> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;

    // Newton iteration on P_n with the usual Chebyshev-based initial guess.
    std::vector<std::pair<double, double>> rule(order);
    const int n = order;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule[i] = {0.5 * (1.0 - x), 0.5 * w};          // map [-1,1] -> [0,1]
        rule[n - 1 - i] = {0.5 * (1.0 + x), 0.5 * w};
    }
    auto [pos, ok] = cache.emplace(order, std::move(rule));
    return pos->second;
}

MeridianCurve project_meridian(const Polyline3& c) {
    MeridianCurve out;
    out.closed = c.closed;
    out.multiplicity = c.multiplicity;
    out.vertices.reserve(c.vertices.size());
    for (const Vec3& v : c.vertices) out.vertices.push_back({v.rho(), v.z});
    return out;
}

MeridianCurve project_meridian(const Polyline3& c, const MeridianSection& section, double boundary_tol) {
    MeridianCurve out = project_meridian(c);
    if (!out.closed && !out.vertices.empty()) {
        double s, d;
        section.nearest_arc_point(out.vertices.front(), s, d);
        out.begin_on_boundary = d <= boundary_tol;
        section.nearest_arc_point(out.vertices.back(), s, d);
        out.end_on_boundary = d <= boundary_tol;
    }
    return out;
}

Polyline3 lift_meridian(const MeridianCurve& c) {
    Polyline3 out;
    out.closed = c.closed;
    out.multiplicity = c.multiplicity;
    out.vertices.reserve(c.vertices.size());
    for (const Vec2& v : c.vertices) out.vertices.push_back({v.x, 0.0, v.z});
    return out;
}

}  // namespace isoflux
