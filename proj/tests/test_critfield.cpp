#include <doctest.h>

#include <cmath>
#include <random>

#include "isoflux/critfield.hpp"
#include "isoflux/errors.hpp"
#include "oracles.hpp"

using namespace isoflux;

namespace {

CurveCandidate gamma0_candidate(double r0, double len) {
    CurveCandidate c;
    c.len = len;
    c.flux = r0 * len;
    c.ratio = r0;
    return c;
}

}  // namespace

TEST_SUITE("critfield") {

TEST_CASE("hc1 zero formula") {
    CHECK(hc1_zero(std::exp(-10.0), 0.5) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(hc1_zero(1e-4, 0.5) < hc1_zero(5e-5, 0.5));  // halving epsilon increases it
    CHECK_THROWS_AS(hc1_zero(1.5, 0.5), InvalidEpsilon);
    CHECK_THROWS_AS(hc1_zero(0.0, 0.5), InvalidEpsilon);
    CHECK_THROWS(hc1_zero(1e-6, 0.0));

    // tabulated against the ball's quadrature-oracle R0
    const double r0 = oracles::ball_axis_flux(1.0) / 2.0;
    for (double eps : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8}) {
        CHECK(hc1_zero(eps, r0) == doctest::Approx(-std::log(eps) / (2.0 * r0)).epsilon(1e-14));
    }
}

TEST_CASE("model invariants") {
    CHECK_THROWS_AS(make_energy_model(1.5, 0.0, 0.0, 0.5, 2.0), InvalidEpsilon);
    CHECK_THROWS(make_energy_model(1e-6, 0.0, 0.0, -0.5, 2.0));
    EnergyModel broken = make_energy_model(1e-6, 0.0, 0.0, 0.5, 2.0);
    broken.flux_gamma0 = 1.5;
    CHECK_THROWS(validate(broken));
}

TEST_CASE("single line excess and the threshold balance") {
    const double r0 = 0.150549, len0 = 2.0;
    const double eps = 1e-6;
    const double h0 = hc1_zero(eps, r0);

    EnergyModel at = make_energy_model(eps, h0, 0.0, r0, len0, 0.0, 0.0);
    CHECK(line_excess_energy(at, {}) == 0.0);
    const double balanced = line_excess_energy(at, {gamma0_candidate(r0, len0)});
    CHECK(std::abs(balanced) <= 1e-12 * M_PI * len0 * std::abs(std::log(eps)));

    EnergyModel above = make_energy_model(eps, h0 + 1.0, 0.0, r0, len0, 0.0, 0.0);
    CHECK(line_excess_energy(above, {gamma0_candidate(r0, len0)}) ==
          doctest::Approx(-2.0 * M_PI * r0 * len0).epsilon(1e-12));

    // sign flips exactly at the threshold
    EnergyModel lo = make_energy_model(eps, h0 * (1.0 - 1e-12), 0.0, r0, len0, 0.0, 0.0);
    EnergyModel hi = make_energy_model(eps, h0 * (1.0 + 1e-12), 0.0, r0, len0, 0.0, 0.0);
    CHECK(line_excess_energy(lo, {gamma0_candidate(r0, len0)}) > 0.0);
    CHECK(line_excess_energy(hi, {gamma0_candidate(r0, len0)}) < 0.0);
}

TEST_CASE("optimal line count") {
    const double r0 = 0.150549, len0 = 2.0;
    // below threshold every line costs
    for (double eps : {1e-2, 1e-4, 1e-8}) {
        const double h0 = hc1_zero(eps, r0);
        EnergyModel m = make_energy_model(eps, std::max(0.0, h0 - 10.0), 0.0, r0, len0, 0.0, 1.0);
        const auto [n, energies] = optimal_line_count(m, 50);
        CHECK(n == 0);
        CHECK(energies[0] == 0.0);
    }

    // bounded vorticity: N* at h = H0 + K log log(1/eps) is epsilon-independent
    for (double k : {1.0, 3.0, 10.0}) {
        int n_ref = -1;
        for (double eps : {1e-3, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12}) {
            const double h0 = hc1_zero(eps, r0);
            const double h = h0 + k * std::log(std::log(1.0 / eps));
            EnergyModel m = make_energy_model(eps, h, 0.0, r0, len0, 1.0, 1.0);
            const auto [n, energies] = optimal_line_count(m, 400);
            if (n_ref < 0) n_ref = n;
            CHECK(n == n_ref);
            CHECK(n < 400);
        }
        CHECK(n_ref > 0);
    }

    // monotone in the applied field at fixed epsilon
    const double eps = 1e-6;
    const double h0 = hc1_zero(eps, r0);
    int prev = -1;
    for (double mult : {0.5, 0.9, 1.0, 1.05, 1.2, 1.6, 2.5}) {
        EnergyModel m = make_energy_model(eps, mult * h0, 0.0, r0, len0, 1.0, 1.0);
        const auto [n, energies] = optimal_line_count(m, 2000);
        CHECK(n >= prev);
        prev = n;
    }
}

TEST_CASE("quadratic vertex oracle agrees on random models") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const double eps = std::pow(10.0, -2.0 - 8.0 * unit(rng));
        const double r0 = 0.05 + unit(rng);
        const double len0 = 0.5 + 2.0 * unit(rng);
        const double h0 = hc1_zero(eps, r0);
        const double h = h0 * (0.8 + 0.6 * unit(rng));
        const double c_log = unit(rng);
        const double c_rep = 0.05 + unit(rng);
        EnergyModel m = make_energy_model(eps, h, 0.0, r0, len0, c_log, c_rep);
        const int n_max = 200;
        const auto [n_star, energies] = optimal_line_count(m, n_max);

        // closed-form vertex of the quadratic, rounded to the neighbors
        const double ll = std::log(std::log(1.0 / eps));
        const double lin = M_PI * len0 * (std::log(1.0 / eps) - c_log * ll) -
                           2.0 * M_PI * h * m.flux_gamma0;
        const double vertex = -lin / (2.0 * c_rep * ll);
        double best_e = 0.0;
        for (int cand : {0, n_max, (int)std::floor(vertex), (int)std::ceil(vertex)}) {
            if (cand < 0 || cand > n_max) continue;
            const double e = cand * lin + c_rep * double(cand) * cand * ll;
            best_e = std::min(best_e, e);
        }
        CHECK(energies[n_star] == doctest::Approx(best_e).epsilon(1e-12));
    }
}

TEST_CASE("bands and phase table") {
    const double r0 = 0.150549;
    EnergyModel m = make_energy_model(1e-6, 0.0, 0.0, r0, 2.0, 1.0, 1.0);
    const Hc1Band band = hc1_band(m, 5.0, 1.0);
    const double h0 = hc1_zero(1e-6, r0);
    CHECK(band.upper - band.lower == doctest::Approx(10.0));
    CHECK(band.lower < h0);
    CHECK(h0 < band.upper);
    CHECK(band.bounded_vorticity > h0);

    // with the pure threshold model no line appears below H0
    EnergyModel pure = make_energy_model(1e-6, 0.0, 0.0, r0, 2.0, 0.0, 1.0);
    const std::vector<double> eps_list{1e-3, 1e-6, 1e-9, 1e-12};
    const std::vector<double> mult{0.7, 0.9, 0.99, 1.0, 1.1, 1.5};
    const auto rows = phase_table(pure, eps_list, mult, 300);
    REQUIRE(rows.size() == eps_list.size() * mult.size());
    int n_star_col_max = 0;
    for (const PhaseRow& row : rows) {
        if (row.h_minus_hc10 < 0.0) CHECK(row.n_star == 0);
        n_star_col_max = std::max(n_star_col_max, row.n_star);
    }
    CHECK(n_star_col_max > 0);

    // doubling the repulsion never increases any N*
    EnergyModel stiff = pure;
    stiff.c_rep = 2.0;
    const auto rows2 = phase_table(stiff, eps_list, mult, 300);
    for (std::size_t k = 0; k < rows.size(); ++k) CHECK(rows2[k].n_star <= rows[k].n_star);

    const std::string csv = phase_table_csv(rows);
    CHECK(csv.rfind("epsilon,h_ex,h_minus_hc10,N_star,E_Nstar\n", 0) == 0);
}

}  // TEST_SUITE
