#ifndef ISOFLUX_AXISYM_HPP_
#define ISOFLUX_AXISYM_HPP_

#include <cstdint>
#include <vector>

#include "isoflux/domain.hpp"

namespace isoflux {

/// Sampled azimuthal component u = A0 . theta-hat on the truncated meridian
/// half-plane [0, r_box] x [-z_box, z_box]; inside Omega it equals
/// curl B0 . theta-hat.
struct AxisymField {
    Domain domain{Domain::ball(1.0)};
    double r_box{0.0};
    double z_box{0.0};
    int n_r{0};
    int n_z{0};
    double h_r{0.0};
    double h_z{0.0};
    std::vector<double> u;         // u[j * n_r + i], i indexes r
    std::vector<std::uint8_t> inside;
    double tol{0.0};
    double residual{0.0};
    int iterations{0};

    double node_r(int i) const { return i * h_r; }
    double node_z(int j) const { return -z_box + j * h_z; }
    double at(int i, int j) const { return u[static_cast<std::size_t>(j) * n_r + i]; }

    /// Bilinear interpolation anywhere in the box; throws OutsideDomain
    /// beyond the truncation box.
    double value_at(double x, double z) const;
    /// curl B0 . theta-hat at the meridian point; requires (x,0,z) in Omega.
    double curl_theta(double x, double z) const;
};

/// Second-order finite-difference solve of
///   -(u_rr + u_r/r - u/r^2 + u_zz) + u 1_Omega = 0
/// with u(0,z) = 0 and u = r/2 on the truncation boundary (z_box = r_box).
/// The 1/r terms use staggered half-index radii in flux form; the linear
/// system is solved iteratively to the requested relative residual.
AxisymField solve_axisym_meissner(const Domain& domain, double r_box, int n_r, int n_z, double tol);

struct MeissnerSummary {
    double j0{0.0};               // (1/2)int_Omega |curl B0|^2 + (1/2)int |H0 - z|^2
    double j0_tail_estimate{0.0}; // dipole-fit estimate of the energy beyond the box
    double field_term{0.0};       // (1/2)int_Omega u^2 dV
    double exterior_term{0.0};    // (1/2)int_box |H0 - z|^2 dV
    double r0_hint{0.0};          // flux of the axis curve / axis length
};

/// 2 pi r weighted trapezoid quadrature of the energy with H0 = curl(u theta-hat)
/// evaluated by centered differences.
MeissnerSummary meissner_summary(const AxisymField& field);

inline double j0(const AxisymField& field) { return meissner_summary(field).j0; }

}  // namespace isoflux

#endif  // ISOFLUX_AXISYM_HPP_
