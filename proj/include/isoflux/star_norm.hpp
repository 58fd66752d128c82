#ifndef ISOFLUX_STAR_NORM_HPP_
#define ISOFLUX_STAR_NORM_HPP_

#include <string>

#include "isoflux/domain.hpp"
#include "isoflux/polyline.hpp"

namespace isoflux {

/// Two-sided estimate of ||c1 - c2||_* under the convention
/// ||B|| = max(sup |B|, Lip(B)) on fields with vanishing tangential part.
struct StarNormEstimate {
    double lower{0.0};
    double upper{0.0};
    std::string lower_method;
    std::string upper_method;
};

/// Lower bound: best pairing against a deterministic dictionary of compactly
/// cut-off Gaussian bump fields on a lattice in Omega (3 axis orientations
/// per center, admissibly normalized). Upper bound: area between the curves
/// when both are meridian-planar with common endpoints, else mass of c1 - c2
/// times the domain diameter; identical curves give (0, 0).
StarNormEstimate star_distance(const Polyline3& c1, const Polyline3& c2, const Domain& domain,
                               int dictionary_size = 125);

/// max(sup |B|, Lipschitz seminorm) of a field estimated by lattice sampling
/// over Omega's bounding box (central differences for the gradient).
double field_c01_norm(const VectorField& field, const Domain& domain, int lattice_n = 17);

}  // namespace isoflux

#endif  // ISOFLUX_STAR_NORM_HPP_
