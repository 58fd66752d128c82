#ifndef ISOFLUX_OPTIMIZE_HPP_
#define ISOFLUX_OPTIMIZE_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "isoflux/domain.hpp"
#include "isoflux/polyline.hpp"

namespace isoflux {

struct CurveCandidate {
    enum class Provenance { Generator, Ascent, Annealing };

    Polyline3 curve;
    double flux{0.0};
    double len{0.0};
    double ratio{0.0};
    Provenance provenance{Provenance::Generator};
};

struct OptimizerConfig {
    int n_vertices{64};
    double step{0.05};            // initial vertex displacement per accepted move
    int max_iters{400};
    double tol_rel{1e-10};        // relative ratio-improvement stop
    int n_starts{32};
    std::uint64_t seed{1};
    double anneal_schedule{0.7};  // geometric cooling factor in (0,1)
    int anneal_rounds{6};
    int quad_order{8};
    double fd_step{1e-5};
};

void validate(const OptimizerConfig& config);

/// Vertical diameter of a ball, oriented toward +z, multiplicity 1. For a
/// solid of revolution this is the axis segment.
Polyline3 diameter_curve(const Domain& domain);

/// Sector boundary competitor (two radii (R,phi2) -> origin -> (R,phi1) in
/// the y = 0 meridian plane) and the chord connecting (R,phi2) to (R,phi1).
/// Angles are polar (from +z), 0 <= phi1 <= phi2 <= pi.
std::pair<Polyline3, Polyline3> sector_competitors(const Domain& ball, double phi1, double phi2);

/// Gradient of circulation with respect to each vertex position: exact
/// segment-endpoint calculus with the field Jacobian evaluated by central
/// differences of width fd_step.
std::vector<Vec3> flux_gradient(const VectorField& field, const Polyline3& c, double fd_step,
                                int quad_order = 8);

std::vector<Vec3> length_gradient(const Polyline3& c);

/// Projected gradient ascent on R(Gamma). Endpoints are re-projected to the
/// boundary each step (open curves); all vertices are clamped to the closure
/// of Omega. Backtracking step control; accepted ratios are nondecreasing.
CurveCandidate ratio_ascent(const VectorField& field, const Domain& domain, const Polyline3& init,
                            const OptimizerConfig& config);

struct MultistartResult {
    CurveCandidate best;
    double r0{0.0};
    std::vector<CurveCandidate> all_starts;
};

/// Ascent from n_starts random boundary-to-boundary chords plus the generator
/// curves, each followed by annealed perturbation rounds; deterministic for a
/// fixed seed, independent of the worker count.
MultistartResult multistart_maximize(const VectorField& field, const Domain& domain,
                                     const OptimizerConfig& config);

/// Same machinery restricted to closed polylines (no boundary projection);
/// probes sup over loops for comparison against the open-curve supremum.
MultistartResult loop_supremum_probe(const VectorField& field, const Domain& domain,
                                     const OptimizerConfig& config);

/// Unit-magnitude field tangent to the nested tori around the circle
/// {rho = major, z = 0} with the given rotation number, decayed below
/// magnitude one outside the solid torus of thickness `minor`.
VectorField torus_field(double major, double minor, double winding, double decay);

class BallField;  // ball_field.hpp

/// Ball Meissner field extended by radial retraction onto the closed ball,
/// so that finite-difference probes just past the boundary stay evaluable.
/// Identical to the closed form on the closure of Omega.
VectorField retracted_ball_field(const BallField& field);

}  // namespace isoflux

#endif  // ISOFLUX_OPTIMIZE_HPP_
