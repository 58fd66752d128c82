#ifndef ISOFLUX_BALL_FIELD_HPP_
#define ISOFLUX_BALL_FIELD_HPP_

#include "isoflux/geometry.hpp"

namespace isoflux {

/// Closed-form Meissner field B0 of the ball B(0,R) under a unit vertical
/// applied field, together with the azimuthal component of curl B0 on the
/// meridian half-plane.
class BallField {
  public:
    explicit BallField(double radius);

    double radius() const { return radius_; }
    /// C(R) = 3/(2 R sinh R) * ((1+R^2)/R * sinh R - cosh R).
    double c_r() const { return c_r_; }

    /// B0 at p in Cartesian components. Throws OutsideDomain for |p| beyond
    /// R(1 + 1e-9); the on-axis and origin limits are evaluated by series.
    Vec3 operator()(const Vec3& p) const;

    /// curl B0 . theta-hat at the meridian point (x, z), x >= 0; equals
    /// (3R / (2 sinh R)) (cosh rho - sinh rho / rho) x / rho^2, rho = |(x,z)|.
    /// Zero on the axis; nonnegative throughout the half-disk.
    double curl_meridian(double x, double z) const;

    /// B0 . z-hat on the axis: C(R) - 3R (cosh z - sinh z / z) / (z^2 sinh R).
    double axis_bz(double z) const;

  private:
    double radius_;
    double c_r_;
    double scale_;  // 3R / sinh R
};

/// (cosh r - sinh r / r) / r^2, series-stabilized near r = 0 (limit 1/3).
double coshm_sinhc_over_r2(double r);
/// ((1+r^2)/r sinh r - cosh r) / r^2, series-stabilized near r = 0 (limit 2/3).
double meissner_phi_coeff_over_r2(double r);

}  // namespace isoflux

#endif  // ISOFLUX_BALL_FIELD_HPP_
