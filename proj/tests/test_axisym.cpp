#include <doctest.h>

#include <cmath>

#include "isoflux/axisym.hpp"
#include "isoflux/ball_field.hpp"
#include "isoflux/errors.hpp"
#include "oracles.hpp"

using namespace isoflux;

namespace {

double rel_l2_vs_ball(const AxisymField& f, const BallField& b) {
    double num = 0.0, den = 0.0;
    for (int j = 0; j < f.n_z; ++j) {
        for (int i = 0; i < f.n_r; ++i) {
            if (!f.inside[static_cast<std::size_t>(j) * f.n_r + i]) continue;
            const double exact = b.curl_meridian(f.node_r(i), f.node_z(j));
            const double e = f.at(i, j) - exact;
            num += e * e;
            den += exact * exact;
        }
    }
    return std::sqrt(num / den);
}

}  // namespace

TEST_SUITE("axisym") {

TEST_CASE("preconditions") {
    const Domain ball = Domain::ball(1.0);
    CHECK_THROWS_AS(solve_axisym_meissner(ball, 3.0, 128, 256, 1e-10), BoxTooSmall);
    CHECK_THROWS(solve_axisym_meissner(ball, 6.0, 32, 256, 1e-10));
    CHECK_THROWS(solve_axisym_meissner(ball, 6.0, 128, 256, 0.0));
}

TEST_CASE("axis condition, far field, and nonnegativity") {
    const Domain ball = Domain::ball(1.0);
    const AxisymField f = solve_axisym_meissner(ball, 6.0, 128, 256, 1e-11);
    CHECK(f.residual <= 1e-11);

    for (int j = 0; j < f.n_z; ++j) CHECK(f.at(0, j) == 0.0);

    // far from Omega (beyond 2x diameter) the far-field profile dominates
    int far_nodes = 0;
    for (int j = 0; j < f.n_z; ++j) {
        for (int i = 1; i < f.n_r; ++i) {
            const double r = f.node_r(i), z = f.node_z(j);
            if (std::hypot(r, z) < 4.0) continue;
            ++far_nodes;
            CHECK(std::abs(f.at(i, j) - 0.5 * r) <= 0.05 * (0.5 * r));
        }
    }
    CHECK(far_nodes > 1000);

    double umin = 1e300;
    for (double v : f.u) umin = std::min(umin, v);
    CHECK(umin >= -1e-10);
}

TEST_CASE("ball solve matches the closed form and converges at second order") {
    const Domain ball = Domain::ball(1.0);
    const BallField b(1.0);
    const AxisymField coarse = solve_axisym_meissner(ball, 6.0, 128, 256, 1e-12);
    const AxisymField fine = solve_axisym_meissner(ball, 6.0, 256, 512, 1e-12);
    const double e_coarse = rel_l2_vs_ball(coarse, b);
    const double e_fine = rel_l2_vs_ball(fine, b);
    CHECK(e_fine <= 0.02);
    CHECK(e_coarse >= 3.0 * e_fine);

    // interpolation consistency and domain guard
    CHECK(fine.curl_theta(0.5, 0.0) == doctest::Approx(b.curl_meridian(0.5, 0.0)).epsilon(5e-3));
    CHECK_THROWS_AS(fine.curl_theta(1.5, 0.0), OutsideDomain);
    CHECK_THROWS_AS(fine.value_at(7.0, 0.0), OutsideDomain);
}

TEST_CASE("uniform exterior field gives zero exterior energy") {
    AxisymField f;
    f.domain = Domain::ball(1.0);
    f.r_box = 6.0;
    f.z_box = 6.0;
    f.n_r = 97;
    f.n_z = 193;
    f.h_r = f.r_box / (f.n_r - 1);
    f.h_z = 2.0 * f.z_box / (f.n_z - 1);
    f.u.resize(static_cast<std::size_t>(f.n_r) * f.n_z);
    f.inside.assign(f.u.size(), 0);
    for (int j = 0; j < f.n_z; ++j)
        for (int i = 0; i < f.n_r; ++i) f.u[static_cast<std::size_t>(j) * f.n_r + i] = 0.5 * f.node_r(i);
    const MeissnerSummary s = meissner_summary(f);
    CHECK(std::abs(s.exterior_term) <= 1e-10);
    CHECK(s.field_term == 0.0);  // no interior nodes flagged
}

TEST_CASE("j0 positive and stable under refinement") {
    const Domain ball = Domain::ball(1.0);
    const AxisymField f1 = solve_axisym_meissner(ball, 6.0, 256, 512, 1e-11);
    const MeissnerSummary s1 = meissner_summary(f1);
    CHECK(s1.j0 > 0.0);
    CHECK(s1.field_term > 0.0);
    CHECK(s1.exterior_term > 0.0);
    CHECK(s1.j0_tail_estimate >= 0.0);
    CHECK(s1.j0_tail_estimate < 0.01 * s1.j0);

    const AxisymField f2 = solve_axisym_meissner(ball, 6.0, 512, 1024, 1e-11);
    const MeissnerSummary s2 = meissner_summary(f2);
    CHECK(std::abs(s2.j0 - s1.j0) <= 0.01 * s1.j0);

    // the section-flux ratio of the axis curve reproduces R0 for the ball
    const double r0_oracle = oracles::ball_axis_flux(1.0) / 2.0;
    CHECK(s1.r0_hint == doctest::Approx(r0_oracle).epsilon(0.02));
}

TEST_CASE("profile solve agrees with the ball solve") {
    const BallField b(1.0);
    const AxisymField f = solve_axisym_meissner(Domain::ball_as_profile(1.0, 257), 6.0, 128, 256, 1e-11);
    CHECK(rel_l2_vs_ball(f, b) <= 0.02);
}

}  // TEST_SUITE
