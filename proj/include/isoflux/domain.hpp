#ifndef ISOFLUX_DOMAIN_HPP_
#define ISOFLUX_DOMAIN_HPP_

#include <optional>
#include <string>
#include <vector>

#include "isoflux/geometry.hpp"

namespace isoflux {

/// Half-plane cross-section {(x,z) : 0 <= x < r(z)} of an axisymmetric domain.
/// The outer arc runs along the profile from the bottom pole (0, z_min) to the
/// top pole (0, z_max); it excludes the axis segment.
struct MeridianSection {
    double z_min{0.0};
    double z_max{0.0};
    std::vector<Vec2> outer_arc;

    bool contains(double x, double z) const;
    double radius_at(double z) const;
    /// Area of the half-plane section by trapezoid quadrature of the profile.
    double area() const;
    double arc_length() const;
    /// Arc-length parameter of the nearest point of the outer arc, together
    /// with the squared distance to it.
    void nearest_arc_point(const Vec2& p, double& s_out, double& dist_out) const;
    /// Point of the outer arc at arc-length parameter s (clamped).
    Vec2 arc_point(double s) const;
};

/// Sample Omega: either a ball or a solid of revolution about the z axis with
/// a piecewise-linear profile r(z) >= 0 on [z_min, z_max].
class Domain {
  public:
    enum class Kind { Ball, SolidOfRevolution };

    static Domain ball(double radius);
    static Domain solid_of_revolution(std::vector<double> z, std::vector<double> r);
    /// Two-column CSV `z,r` with strictly increasing z; header line required.
    static Domain solid_of_revolution_from_csv(const std::string& path);
    /// Spheroid x^2/a^2 + y^2/a^2 + z^2/c^2 < 1, profile sampled at n points.
    static Domain spheroid(double a, double c, int n_samples = 129);
    /// Ball profile sampled as a solid of revolution (discretization checks).
    static Domain ball_as_profile(double radius, int n_samples = 129);

    Kind kind() const { return kind_; }
    bool is_ball() const { return kind_ == Kind::Ball; }
    double radius() const { return radius_; }

    double z_min() const { return z_min_; }
    double z_max() const { return z_max_; }
    double max_profile_radius() const { return r_max_; }
    double diameter() const;
    /// Profile radius r(z); zero outside [z_min, z_max].
    double profile_radius(double z) const;

    /// True iff p is interior to Omega (boundary points are not interior).
    bool contains(const Vec3& p) const;
    /// Nearest point of the boundary. Throws AmbiguousProjection when the
    /// nearest point is non-unique within tolerance; a direction hint breaks
    /// the tie by nudging p along it.
    Vec3 project_to_boundary(const Vec3& p) const;
    Vec3 project_to_boundary(const Vec3& p, const Vec3& hint) const;
    /// Unsigned distance from p to the boundary surface.
    double boundary_distance(const Vec3& p) const;

    MeridianSection meridian_section(int arc_samples = 2048) const;

    const std::vector<double>& profile_z() const { return prof_z_; }
    const std::vector<double>& profile_r() const { return prof_r_; }

  private:
    Domain() = default;

    Kind kind_{Kind::Ball};
    double radius_{0.0};
    std::vector<double> prof_z_;
    std::vector<double> prof_r_;
    double z_min_{0.0}, z_max_{0.0}, r_max_{0.0};
};

}  // namespace isoflux

#endif  // ISOFLUX_DOMAIN_HPP_
