#ifndef ISOFLUX_NONDEGEN_HPP_
#define ISOFLUX_NONDEGEN_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "isoflux/axisym.hpp"
#include "isoflux/ball_field.hpp"
#include "isoflux/domain.hpp"
#include "isoflux/optimize.hpp"
#include "isoflux/polyline.hpp"

namespace isoflux {

enum class PerturbationFamily { PlanarArc, FourierNormal, TiltedChord, Loop };

const char* family_name(PerturbationFamily f);

struct PerturbationSpec {
    int mode_count{4};
    std::vector<double> amplitude_grid{0.01, 0.02, 0.05, 0.1, 0.2, 0.4};
    std::vector<PerturbationFamily> families{PerturbationFamily::PlanarArc, PerturbationFamily::FourierNormal,
                                             PerturbationFamily::TiltedChord, PerturbationFamily::Loop};
    std::uint64_t seed{1};
    int n_vertices{64};
    /// total sample budget; families and amplitudes are cycled to reach it
    int count{500};
};

struct PerturbationSample {
    Polyline3 curve;
    PerturbationFamily family{PerturbationFamily::PlanarArc};
    double amplitude{0.0};
};

/// Curves in X around Gamma0: planar circular arcs through Gamma0's endpoints,
/// normal-direction Fourier perturbations re-projected to the boundary,
/// rotated chords, and meridian loops. All stay in the closure of Omega.
std::vector<PerturbationSample> sample_perturbations(const Domain& domain, const Polyline3& gamma0,
                                                     const PerturbationSpec& spec);

struct SampleRecord {
    PerturbationFamily family{PerturbationFamily::PlanarArc};
    double amplitude{0.0};
    double alpha{0.0};
    double d_star_lower{0.0};
    double d_star_upper{0.0};
    double len{0.0};
    double flux{0.0};
    double max_tube_dist{0.0};
};

struct NondegenReport {
    int samples{0};
    double empirical_c0{0.0};  // min over samples of alpha / min(d*_upper^N, 1)
    int n_used{2};
    double min_alpha{0.0};
    double arc_loglog_slope{0.0};  // fit of log alpha vs log d* on the arc family
    int worst_index{-1};
    CurveCandidate worst_curve;
    std::vector<SampleRecord> records;
    // informational scan of the flux-domination hypothesis: among samples with
    // d* <= delta, how many carry more flux than Gamma0 (it need not be zero)
    double hypde_delta{0.0};
    int hypde_checked{0};
    int hypde_violations{0};
};

/// Ratio deficits against the maximizer plus conservative dual-norm distances.
/// Samples with alpha below -1e-9 contradict maximality: MaximalityViolated.
NondegenReport verify_nondegeneracy(const VectorField& field, const Domain& domain, const Polyline3& gamma0,
                                    const std::vector<PerturbationSample>& samples, int n_exponent = 2,
                                    int dictionary_size = 125, int quad_order = 16);

struct LengthControlReport {
    int samples{0};
    int violations{0};
    double max_slack{0.0};  // max over samples of lhs - rhs (<= 0 when the bound holds)
    double field_norm{0.0};
};

/// ||Gamma| - |Gamma0|| <= (alpha |Gamma| + ||B0|| d*_upper) / R(Gamma0).
LengthControlReport check_length_control(const VectorField& field, const Domain& domain,
                                         const Polyline3& gamma0, const NondegenReport& report,
                                         const std::vector<PerturbationSample>& samples);

struct TubularReport {
    std::vector<double> delta_grid;
    std::vector<double> fitted_c;  // max tube distance / sqrt(delta), per delta
    std::vector<int> admitted;     // samples satisfying both hypotheses, per delta
};

/// For samples with d* <= delta and ||Gamma|-|Gamma0|| <= delta, the fitted
/// constant of the sqrt(delta) tube bound.
TubularReport check_tubular(const Polyline3& gamma0, const NondegenReport& report,
                            const std::vector<PerturbationSample>& samples,
                            const std::vector<double>& delta_grid);

struct PositivityReport {
    double min_curl_theta{0.0};
    double min_x{0.0};
    double min_z{0.0};
    double max_curl_h_theta{0.0};  // complementary claim: <= 0 up to tolerance
    bool pass{false};
};

/// Scan of curl B0 . theta-hat over interior nodes (pass if >= -1e-8), plus
/// the finite-difference check that curl H0 . theta-hat stays nonpositive.
PositivityReport positivity_scan(const AxisymField& field);
/// Analytic variant on a polar sampling of the half-disk.
PositivityReport positivity_scan(const BallField& field, int n_rho = 200, int n_phi = 200);

}  // namespace isoflux

#endif  // ISOFLUX_NONDEGEN_HPP_
