#include "isoflux/ball_field.hpp"

#include <cmath>
#include <stdexcept>

#include "isoflux/errors.hpp"

namespace isoflux {

double coshm_sinhc_over_r2(double r) {
    r = std::abs(r);
    if (r < 0.5) {
        // cosh r - sinh r / r = sum_{k>=1} r^{2k} * 2k / (2k+1)!
        const double r2 = r * r;
        double term = 1.0 / 3.0;  // k = 1 coefficient, 2/3! = 1/3
        double sum = term;
        double pow = 1.0;
        for (int k = 2; k <= 8; ++k) {
            pow *= r2;
            double fact = 1.0;
            for (int m = 2; m <= 2 * k + 1; ++m) fact *= m;
            sum += pow * (2.0 * k) / fact;
        }
        return sum;
    }
    return (std::cosh(r) - std::sinh(r) / r) / (r * r);
}

double meissner_phi_coeff_over_r2(double r) {
    r = std::abs(r);
    if (r < 0.5) {
        // (1+r^2)/r sinh r - cosh r
        //   = sum_{k>=0} r^{2k} [ 1/(2k+1)! + 1/(2k-1)! - 1/(2k)! ]  (k>=1 terms)
        // leading term (k=1): 2/3 r^2
        const double r2 = r * r;
        double sum = 0.0;
        double pow = 1.0;
        double fact2k = 2.0;  // (2k)! at k=1
        for (int k = 1; k <= 8; ++k) {
            if (k > 1) {
                pow *= r2;
                fact2k *= (2.0 * k - 1.0) * (2.0 * k);
            }
            const double f2k1 = fact2k * (2.0 * k + 1.0);   // (2k+1)!
            const double f2km1 = fact2k / (2.0 * k);        // (2k-1)!
            sum += pow * (1.0 / f2k1 + 1.0 / f2km1 - 1.0 / fact2k);
        }
        return sum;
    }
    return ((1.0 + r * r) / r * std::sinh(r) - std::cosh(r)) / (r * r);
}

BallField::BallField(double radius) : radius_(radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("BallField: radius must be positive");
    const double sh = std::sinh(radius);
    c_r_ = 3.0 / (2.0 * radius * sh) * ((1.0 + radius * radius) / radius * sh - std::cosh(radius));
    scale_ = 3.0 * radius / sh;
}

Vec3 BallField::operator()(const Vec3& p) const {
    const double r = p.norm();
    if (r > radius_ * (1.0 + 1e-9)) throw OutsideDomain("BallField: point outside B(0,R)");
    if (r < 1e-14) return {0.0, 0.0, c_r_ - radius_ / std::sinh(radius_)};
    // a = 3R/sinh(R) * (cosh r - sinh r / r)/r^2,   radial coefficient
    // b = a-analogue for the polar term, both finite at r -> 0
    const double a = scale_ * coshm_sinhc_over_r2(r);
    const double b = 0.5 * scale_ * meissner_phi_coeff_over_r2(r);
    // cos(phi) r-hat   = z p / r^2
    // sin(phi) phi-hat = (z x, z y, -(x^2+y^2)) / r^2
    const double inv_r2 = 1.0 / (r * r);
    const double rho2 = p.x * p.x + p.y * p.y;
    Vec3 out{0.0, 0.0, c_r_};
    out.x += (b - a) * p.z * p.x * inv_r2;
    out.y += (b - a) * p.z * p.y * inv_r2;
    out.z += -a * p.z * p.z * inv_r2 - b * rho2 * inv_r2;
    return out;
}

double BallField::curl_meridian(double x, double z) const {
    const double rho = std::hypot(x, z);
    if (rho > radius_ * (1.0 + 1e-9)) throw OutsideDomain("BallField: meridian point outside the half-disk");
    return 0.5 * scale_ * coshm_sinhc_over_r2(rho) * x;
}

double BallField::axis_bz(double z) const {
    return c_r_ - scale_ * coshm_sinhc_over_r2(z);
}

}  // namespace isoflux
