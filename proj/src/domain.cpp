#include "isoflux/domain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "isoflux/errors.hpp"

namespace isoflux {

namespace {

constexpr double kAmbiguityRel = 1e-9;

// Nearest point on segment [a,b] to p, returned with its squared distance.
Vec2 nearest_on_segment(const Vec2& p, const Vec2& a, const Vec2& b, double& d2) {
    const Vec2 d = b - a;
    const double len2 = d.dot(d);
    double t = len2 > 0.0 ? (p - a).dot(d) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Vec2 q = a + d * t;
    const Vec2 r = p - q;
    d2 = r.dot(r);
    return q;
}

}  // namespace

bool MeridianSection::contains(double x, double z) const {
    if (x < 0.0) return false;
    if (z <= z_min || z >= z_max) return false;
    return x < radius_at(z);
}

double MeridianSection::radius_at(double z) const {
    if (outer_arc.empty() || z < z_min || z > z_max) return 0.0;
    // outer_arc z-coordinates are nondecreasing from z_min to z_max for
    // single-valued profiles; for the ball arc they are monotone as well.
    double best = 0.0;
    for (std::size_t k = 0; k + 1 < outer_arc.size(); ++k) {
        const Vec2& a = outer_arc[k];
        const Vec2& b = outer_arc[k + 1];
        const double lo = std::min(a.z, b.z), hi = std::max(a.z, b.z);
        if (z < lo || z > hi) continue;
        double x;
        if (hi - lo < 1e-300) {
            x = std::max(a.x, b.x);
        } else {
            const double t = (z - a.z) / (b.z - a.z);
            x = a.x + t * (b.x - a.x);
        }
        best = std::max(best, x);
    }
    return best;
}

double MeridianSection::area() const {
    double a = 0.0;
    for (std::size_t k = 0; k + 1 < outer_arc.size(); ++k) {
        a += 0.5 * (outer_arc[k].x + outer_arc[k + 1].x) * (outer_arc[k + 1].z - outer_arc[k].z);
    }
    return std::abs(a);
}

double MeridianSection::arc_length() const {
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < outer_arc.size(); ++k) s += dist(outer_arc[k], outer_arc[k + 1]);
    return s;
}

void MeridianSection::nearest_arc_point(const Vec2& p, double& s_out, double& dist_out) const {
    double best_d2 = std::numeric_limits<double>::max();
    double best_s = 0.0;
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < outer_arc.size(); ++k) {
        const Vec2& a = outer_arc[k];
        const Vec2& b = outer_arc[k + 1];
        const double seg = dist(a, b);
        double d2;
        const Vec2 q = nearest_on_segment(p, a, b, d2);
        if (d2 < best_d2) {
            best_d2 = d2;
            best_s = s + dist(a, q);
        }
        s += seg;
    }
    s_out = best_s;
    dist_out = std::sqrt(best_d2);
}

Vec2 MeridianSection::arc_point(double s) const {
    if (outer_arc.empty()) return {};
    if (s <= 0.0) return outer_arc.front();
    for (std::size_t k = 0; k + 1 < outer_arc.size(); ++k) {
        const double seg = dist(outer_arc[k], outer_arc[k + 1]);
        if (s <= seg) {
            const double t = seg > 0.0 ? s / seg : 0.0;
            return outer_arc[k] + (outer_arc[k + 1] - outer_arc[k]) * t;
        }
        s -= seg;
    }
    return outer_arc.back();
}

Domain Domain::ball(double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("Domain::ball: radius must be positive");
    Domain d;
    d.kind_ = Kind::Ball;
    d.radius_ = radius;
    d.z_min_ = -radius;
    d.z_max_ = radius;
    d.r_max_ = radius;
    return d;
}

Domain Domain::solid_of_revolution(std::vector<double> z, std::vector<double> r) {
    if (z.size() != r.size() || z.size() < 2)
        throw std::invalid_argument("Domain::solid_of_revolution: need >= 2 profile samples");
    for (std::size_t k = 0; k + 1 < z.size(); ++k) {
        if (!(z[k] < z[k + 1]))
            throw std::invalid_argument("Domain::solid_of_revolution: z must be strictly increasing");
    }
    for (std::size_t k = 0; k < r.size(); ++k) {
        if (!(r[k] >= 0.0) || !std::isfinite(r[k]))
            throw std::invalid_argument("Domain::solid_of_revolution: r must be finite and >= 0");
        const bool interior = k > 0 && k + 1 < r.size();
        if (interior && !(r[k] > 0.0))
            throw std::invalid_argument("Domain::solid_of_revolution: r must be positive on the open interval");
    }
    Domain d;
    d.kind_ = Kind::SolidOfRevolution;
    d.prof_z_ = std::move(z);
    d.prof_r_ = std::move(r);
    d.z_min_ = d.prof_z_.front();
    d.z_max_ = d.prof_z_.back();
    d.r_max_ = *std::max_element(d.prof_r_.begin(), d.prof_r_.end());
    if (!(d.r_max_ > 0.0)) throw std::invalid_argument("Domain::solid_of_revolution: empty profile");
    return d;
}

Domain Domain::solid_of_revolution_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open profile file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty profile file: " + path);
    // strip whitespace/BOM-ish noise before checking the header
    std::string header;
    for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) header += c;
    if (header != "z,r") throw std::runtime_error("profile file must start with header 'z,r': " + path);
    std::vector<double> zs, rs;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b)) {
            throw std::runtime_error("malformed profile row " + std::to_string(lineno) + " in " + path);
        }
        zs.push_back(std::stod(a));
        rs.push_back(std::stod(b));
    }
    return solid_of_revolution(std::move(zs), std::move(rs));
}

Domain Domain::spheroid(double a, double c, int n_samples) {
    if (!(a > 0.0) || !(c > 0.0)) throw std::invalid_argument("Domain::spheroid: semi-axes must be positive");
    if (n_samples < 64) n_samples = 64;
    std::vector<double> zs(n_samples), rs(n_samples);
    for (int k = 0; k < n_samples; ++k) {
        // uniform in the polar angle keeps corners away from the poles
        const double phi = M_PI * (1.0 - static_cast<double>(k) / (n_samples - 1));
        zs[k] = c * std::cos(phi);
        rs[k] = a * std::sin(phi);
    }
    zs.front() = -c;
    rs.front() = 0.0;
    zs.back() = c;
    rs.back() = 0.0;
    return solid_of_revolution(std::move(zs), std::move(rs));
}

Domain Domain::ball_as_profile(double radius, int n_samples) { return spheroid(radius, radius, n_samples); }

double Domain::diameter() const {
    if (kind_ == Kind::Ball) return 2.0 * radius_;
    return std::max(z_max_ - z_min_, 2.0 * r_max_);
}

double Domain::profile_radius(double z) const {
    if (kind_ == Kind::Ball) {
        const double s = radius_ * radius_ - z * z;
        return s > 0.0 ? std::sqrt(s) : 0.0;
    }
    if (z < z_min_ || z > z_max_) return 0.0;
    const auto it = std::upper_bound(prof_z_.begin(), prof_z_.end(), z);
    std::size_t hi = static_cast<std::size_t>(it - prof_z_.begin());
    if (hi == 0) return prof_r_.front();
    if (hi >= prof_z_.size()) return prof_r_.back();
    const std::size_t lo = hi - 1;
    const double t = (z - prof_z_[lo]) / (prof_z_[hi] - prof_z_[lo]);
    return prof_r_[lo] + t * (prof_r_[hi] - prof_r_[lo]);
}

bool Domain::contains(const Vec3& p) const {
    if (kind_ == Kind::Ball) return p.norm2() < radius_ * radius_;
    if (p.z <= z_min_ || p.z >= z_max_) return false;
    return p.rho() < profile_radius(p.z);
}

double Domain::boundary_distance(const Vec3& p) const {
    if (kind_ == Kind::Ball) return std::abs(radius_ - p.norm());
    const Vec2 q{p.rho(), p.z};
    double best = std::numeric_limits<double>::max();
    for (std::size_t k = 0; k + 1 < prof_z_.size(); ++k) {
        const Vec2 a{prof_r_[k], prof_z_[k]};
        const Vec2 b{prof_r_[k + 1], prof_z_[k + 1]};
        best = std::min(best, dist_to_segment(q, a, b));
    }
    return best;
}

Vec3 Domain::project_to_boundary(const Vec3& p) const {
    const double tol = kAmbiguityRel * diameter();
    if (kind_ == Kind::Ball) {
        const double n = p.norm();
        if (n < tol) throw AmbiguousProjection("projection from the center of a ball is ambiguous");
        return p * (radius_ / n);
    }
    const double rho = p.rho();
    const Vec2 q{rho, p.z};
    // nearest point on the profile polyline, and the runner-up among
    // candidates that are not neighbors of the best (tie detection)
    double best_d2 = std::numeric_limits<double>::max();
    Vec2 best{};
    double second_d2 = std::numeric_limits<double>::max();
    Vec2 second{};
    for (std::size_t k = 0; k + 1 < prof_z_.size(); ++k) {
        const Vec2 a{prof_r_[k], prof_z_[k]};
        const Vec2 b{prof_r_[k + 1], prof_z_[k + 1]};
        double d2;
        const Vec2 c = nearest_on_segment(q, a, b, d2);
        if (d2 < best_d2) {
            if (dist(best, c) > tol) {
                second_d2 = best_d2;
                second = best;
            }
            best_d2 = d2;
            best = c;
        } else if (d2 < second_d2 && dist(best, c) > tol) {
            second_d2 = d2;
            second = c;
        }
    }
    const double d_best = std::sqrt(best_d2);
    const double d_second = std::sqrt(second_d2);
    if (d_second - d_best <= tol && dist(best, second) > tol)
        throw AmbiguousProjection("nearest boundary point is non-unique");
    if (best.x > tol && rho < tol)
        throw AmbiguousProjection("projection from the axis to an off-axis boundary point is ambiguous");
    if (best.x <= tol) return {0.0, 0.0, best.z};
    const double scale = best.x / rho;
    return {p.x * scale, p.y * scale, best.z};
}

Vec3 Domain::project_to_boundary(const Vec3& p, const Vec3& hint) const {
    try {
        return project_to_boundary(p);
    } catch (const AmbiguousProjection&) {
        const Vec3 h = hint.normalized();
        if (h.norm() == 0.0) throw;
        return project_to_boundary(p + h * (1e-6 * diameter()));
    }
}

MeridianSection Domain::meridian_section(int arc_samples) const {
    MeridianSection s;
    s.z_min = z_min_;
    s.z_max = z_max_;
    if (kind_ == Kind::Ball) {
        if (arc_samples < 2) arc_samples = 2;
        s.outer_arc.reserve(arc_samples);
        for (int k = 0; k < arc_samples; ++k) {
            const double phi = M_PI * (1.0 - static_cast<double>(k) / (arc_samples - 1));
            s.outer_arc.push_back({radius_ * std::sin(phi), radius_ * std::cos(phi)});
        }
        s.outer_arc.front() = {0.0, -radius_};
        s.outer_arc.back() = {0.0, radius_};
    } else {
        s.outer_arc.reserve(prof_z_.size());
        for (std::size_t k = 0; k < prof_z_.size(); ++k) s.outer_arc.push_back({prof_r_[k], prof_z_[k]});
    }
    return s;
}

}  // namespace isoflux
