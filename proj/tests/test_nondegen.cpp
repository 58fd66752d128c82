#include <doctest.h>

#include <cmath>

#include "isoflux/ball_field.hpp"
#include "isoflux/domain.hpp"
#include "isoflux/errors.hpp"
#include "isoflux/nondegen.hpp"
#include "isoflux/optimize.hpp"
#include "oracles.hpp"

using namespace isoflux;

namespace {

const BallField& unit_ball_field() {
    static const BallField b(1.0);
    return b;
}

VectorField b0_field() {
    return [](const Vec3& p) { return unit_ball_field()(p); };
}

PerturbationSpec small_spec(int count) {
    PerturbationSpec spec;
    spec.count = count;
    spec.seed = 3;
    spec.n_vertices = 48;
    return spec;
}

}  // namespace

TEST_SUITE("nondegen") {

TEST_CASE("zero amplitude reproduces the maximizer") {
    const Domain ball = Domain::ball(1.0);
    const Polyline3 gamma0 = diameter_curve(ball);
    PerturbationSpec spec = small_spec(4);
    spec.amplitude_grid = {0.0};
    spec.families = {PerturbationFamily::PlanarArc};
    const auto samples = sample_perturbations(ball, gamma0, spec);
    REQUIRE(samples.size() == 4);
    for (const auto& s : samples) {
        REQUIRE(s.curve.vertices.size() == gamma0.vertices.size());
        for (std::size_t k = 0; k < gamma0.vertices.size(); ++k)
            CHECK(dist(s.curve.vertices[k], gamma0.vertices[k]) == 0.0);
    }
}

TEST_CASE("planar arcs match the circular-arc oracle") {
    const Domain ball = Domain::ball(1.0);
    const Polyline3 gamma0 = diameter_curve(ball);
    PerturbationSpec spec = small_spec(3);
    spec.amplitude_grid = {0.1};
    spec.families = {PerturbationFamily::PlanarArc};
    spec.n_vertices = 256;
    const auto samples = sample_perturbations(ball, gamma0, spec);
    REQUIRE(!samples.empty());
    const double len = length(samples[0].curve);
    const double oracle = oracles::circular_arc_length(1.0, 0.1);
    CHECK(len > 2.0);
    CHECK(len == doctest::Approx(oracle).epsilon(1e-4));
}

TEST_CASE("samples keep endpoints on the boundary") {
    const Domain ball = Domain::ball(1.0);
    const Polyline3 gamma0 = diameter_curve(ball);
    const auto samples = sample_perturbations(ball, gamma0, small_spec(60));
    REQUIRE(samples.size() == 60);
    for (const auto& s : samples) {
        if (s.curve.closed) continue;
        CHECK(ball.boundary_distance(s.curve.vertices.front()) <= 1e-9 * ball.diameter());
        CHECK(ball.boundary_distance(s.curve.vertices.back()) <= 1e-9 * ball.diameter());
        for (const Vec3& v : s.curve.vertices)
            CHECK(v.norm() <= 1.0 + 1e-9);
    }
}

TEST_CASE("nondegeneracy report on the ball") {
    const Domain ball = Domain::ball(1.0);
    const Polyline3 gamma0 = diameter_curve(ball);
    const auto samples = sample_perturbations(ball, gamma0, small_spec(120));
    const NondegenReport report = verify_nondegeneracy(b0_field(), ball, gamma0, samples, 2, 64);
    CHECK(report.samples == 120);
    CHECK(report.min_alpha >= -1e-9);
    CHECK(report.empirical_c0 > 0.0);
    CHECK(report.arc_loglog_slope >= 1.8);
    CHECK(report.worst_index >= 0);
    // flux-domination scan is informational; on the ball no sample gains flux
    CHECK(report.hypde_delta == doctest::Approx(0.5));
    CHECK(report.hypde_checked > 0);
    CHECK(report.hypde_violations == 0);

    // linearity: scaling the field doubles every deficit and the constant
    const VectorField doubled = [](const Vec3& p) { return unit_ball_field()(p) * 2.0; };
    const NondegenReport scaled = verify_nondegeneracy(doubled, ball, gamma0, samples, 2, 64);
    CHECK(scaled.empirical_c0 == doctest::Approx(2.0 * report.empirical_c0).epsilon(1e-9));
    for (std::size_t k = 0; k < report.records.size(); ++k)
        CHECK(scaled.records[k].alpha == doctest::Approx(2.0 * report.records[k].alpha).epsilon(1e-9));
}

TEST_CASE("maximality violation is reported") {
    const Domain ball = Domain::ball(1.0);
    // a deliberately suboptimal reference curve: a short off-axis chord
    Polyline3 fake;
    fake.vertices = {{std::sin(1.2), 0.0, -std::cos(1.2)}, {std::sin(1.2), 0.0, std::cos(1.2)}};
    std::vector<PerturbationSample> samples(1);
    samples[0].curve = diameter_curve(ball);
    samples[0].family = PerturbationFamily::TiltedChord;
    samples[0].amplitude = 0.0;
    CHECK_THROWS_AS(verify_nondegeneracy(b0_field(), ball, fake, samples, 2, 27), MaximalityViolated);
}

TEST_CASE("length control lemma holds on samples") {
    const Domain ball = Domain::ball(1.0);
    const Polyline3 gamma0 = diameter_curve(ball);
    const auto samples = sample_perturbations(ball, gamma0, small_spec(100));
    const NondegenReport report = verify_nondegeneracy(b0_field(), ball, gamma0, samples, 2, 64);
    const LengthControlReport lc = check_length_control(b0_field(), ball, gamma0, report, samples);
    CHECK(lc.samples == 100);
    CHECK(lc.violations == 0);
    CHECK(lc.max_slack <= 0.0);
    CHECK(lc.field_norm > 0.0);
}

TEST_CASE("tubular confinement constant is stable") {
    const Domain ball = Domain::ball(1.0);
    const Polyline3 gamma0 = diameter_curve(ball);
    PerturbationSpec spec = small_spec(120);
    spec.families = {PerturbationFamily::PlanarArc};
    spec.amplitude_grid = {0.005, 0.01, 0.02, 0.04, 0.08, 0.16};
    const auto samples = sample_perturbations(ball, gamma0, spec);
    const NondegenReport report = verify_nondegeneracy(b0_field(), ball, gamma0, samples, 2, 27);
    const double delta0 = length(gamma0) / 4.0;
    const TubularReport tub =
        check_tubular(gamma0, report, samples, {delta0, delta0 / 4.0, delta0 / 16.0});
    REQUIRE(tub.fitted_c.size() == 3);
    CHECK(tub.admitted[0] > 0);
    // admitted sets shrink as the hypotheses tighten
    CHECK(tub.admitted[1] <= tub.admitted[0]);
    CHECK(tub.admitted[2] <= tub.admitted[1]);
    for (std::size_t k = 0; k + 1 < tub.fitted_c.size(); ++k) {
        if (tub.admitted[k + 1] == 0) break;
        CHECK(tub.fitted_c[k + 1] <= 1.2 * tub.fitted_c[k]);
    }
    // the maximizer itself sits at distance zero
    std::vector<PerturbationSample> self(1);
    self[0].curve = gamma0;
    const NondegenReport rself = verify_nondegeneracy(b0_field(), ball, gamma0, self, 2, 27);
    CHECK(rself.records[0].max_tube_dist == 0.0);
}

TEST_CASE("positivity scan of the analytic ball") {
    const PositivityReport rep = positivity_scan(unit_ball_field());
    CHECK(rep.pass);
    CHECK(rep.min_curl_theta >= 0.0);
    CHECK(rep.min_curl_theta <= 1e-15);  // attained on the axis
    CHECK(unit_ball_field().curl_meridian(0.5, 0.0) > 0.0);
}

TEST_CASE("positivity scan of solved spheroids") {
    for (const auto& [a, c] : {std::pair{1.0, 1.5}, std::pair{1.5, 1.0}}) {
        const Domain dom = Domain::spheroid(a, c);
        const AxisymField f = solve_axisym_meissner(dom, 2.0 * dom.diameter() + 3.0, 128, 256, 1e-13);
        const PositivityReport rep = positivity_scan(f);
        CHECK(rep.min_curl_theta >= -1e-8);
        CHECK(rep.max_curl_h_theta <= 1e-8);
        CHECK(rep.pass);
    }
}

}  // TEST_SUITE
