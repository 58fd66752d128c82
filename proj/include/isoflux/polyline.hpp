#ifndef ISOFLUX_POLYLINE_HPP_
#define ISOFLUX_POLYLINE_HPP_

#include <functional>
#include <string>
#include <vector>

#include "isoflux/errors.hpp"
#include "isoflux/geometry.hpp"

namespace isoflux {

/// Oriented polygonal 1-current with integer multiplicity. A loop is flagged
/// closed; its closing segment is implicit.
struct Polyline3 {
    std::vector<Vec3> vertices;
    bool closed{false};
    int multiplicity{1};
};

/// Checks the polyline invariants: >= 2 vertices, consecutive vertices
/// distinct (segment length > 1e-12), nonzero multiplicity.
void validate(const Polyline3& c);

/// Azimuthal projection q(x,y,z) = (sqrt(x^2+y^2), z) of a curve, vertexwise.
struct MeridianCurve {
    std::vector<Vec2> vertices;
    bool closed{false};
    int multiplicity{1};
    bool begin_on_boundary{false};
    bool end_on_boundary{false};
};

struct MeridianSection;  // domain.hpp

/// Mass of the current: |multiplicity| x total segment length.
double length(const Polyline3& c);
double length(const MeridianCurve& c);

/// Each segment split into `factor` equal parts; the polygonal trace (and
/// hence length and circulation) is preserved exactly.
Polyline3 subdivided(const Polyline3& c, int factor);

/// Redistributes n vertices at uniform arclength along the polygonal trace.
/// Endpoints of open curves are kept; the trace may change slightly.
Polyline3 resample_arclength(const Polyline3& c, int n);

Polyline3 reversed(const Polyline3& c);

/// Symmetric Hausdorff distance between the polygonal traces, measured from
/// points sampled along each segment to the other polyline.
double hausdorff_distance(const Polyline3& a, const Polyline3& b, int samples_per_segment = 8);

using VectorField = std::function<Vec3(const Vec3&)>;

/// Gauss-Legendre nodes/weights on [0,1]; cached per order, deterministic.
const std::vector<std::pair<double, double>>& gauss_legendre_01(int order);

/// Circulation <B,Gamma>: multiplicity x sum over segments of a
/// Gauss-Legendre(quad_order) approximation of int B(x(t)).x'(t) dt.
/// Field failures rethrow as FieldEvaluation tagged with the segment index.
template <typename Field>
double circulation(Field&& field, const Polyline3& c, int quad_order = 16) {
    const auto& qr = gauss_legendre_01(quad_order);
    const std::size_t n = c.vertices.size();
    if (n < 2) return 0.0;
    const std::size_t nseg = c.closed ? n : n - 1;
    double total = 0.0;
    for (std::size_t s = 0; s < nseg; ++s) {
        const Vec3& a = c.vertices[s];
        const Vec3& b = c.vertices[(s + 1) % n];
        const Vec3 d = b - a;
        double seg = 0.0;
        for (const auto& [t, w] : qr) {
            Vec3 bv;
            try {
                bv = field(a + d * t);
            } catch (const FieldEvaluation&) {
                throw;
            } catch (const std::exception& e) {
                throw FieldEvaluation("field evaluation failed on segment " + std::to_string(s) + ": " +
                                      e.what());
            }
            seg += w * bv.dot(d);
        }
        total += seg;
    }
    return c.multiplicity * total;
}

/// R(Gamma) = <B,Gamma>/|Gamma|. Throws ZeroLength on degenerate curves.
template <typename Field>
double ratio(Field&& field, const Polyline3& c, int quad_order = 16) {
    const double len = length(c);
    if (!(len > 1e-12)) throw ZeroLength("ratio: curve has zero length");
    return circulation(std::forward<Field>(field), c, quad_order) / len;
}

MeridianCurve project_meridian(const Polyline3& c);
MeridianCurve project_meridian(const Polyline3& c, const MeridianSection& section,
                               double boundary_tol);

/// Lift a meridian curve into the y = 0 half-plane of R^3.
Polyline3 lift_meridian(const MeridianCurve& c);

using MeridianScalarField = std::function<double(double, double)>;

/// Flux int_S w dx dz over the region S enclosed by the meridian curve closed
/// by the section's outer boundary arc (or by the loop itself). Regions are
/// resolved by winding number on `quad_rows` horizontal scan rows with exact
/// crossing intervals; signs follow the curve orientation so that the axis
/// curve oriented toward +z encloses the section positively.
/// Throws OpenCurve when an open curve's endpoints are not on the outer arc.
double stokes_flux(const MeridianScalarField& w, const MeridianCurve& c, const MeridianSection& section,
                   int quad_rows = 2048);

/// Area covered by a closed polygon counted with |winding| multiplicity,
/// by the same scan-row construction as stokes_flux.
double enclosed_area_abs(const std::vector<Vec2>& closed_polygon, int quad_rows = 2048);

}  // namespace isoflux

#endif  // ISOFLUX_POLYLINE_HPP_
