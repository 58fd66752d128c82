#ifndef ISOFLUX_CRITFIELD_HPP_
#define ISOFLUX_CRITFIELD_HPP_

#include <string>
#include <utility>
#include <vector>

#include "isoflux/optimize.hpp"

namespace isoflux {

/// Scalar inputs of the N-line energy competition: per-line cost
/// pi |Gamma| (log 1/eps - c_log log log 1/eps), flux gain 2 pi h_ex <B0,Gamma>,
/// and pairwise repulsion c_rep N^2 log log(1/eps). Energies are measured
/// against the vortex-free baseline h_ex^2 J0.
struct EnergyModel {
    double epsilon{1e-6};
    double h_ex{0.0};
    double j0{0.0};
    double r0{0.0};
    double len_gamma0{0.0};
    double flux_gamma0{0.0};  // r0 * len_gamma0
    double c_log{1.0};
    double c_rep{1.0};
};

/// Builds a validated model; flux_gamma0 is derived as r0 * len_gamma0.
EnergyModel make_energy_model(double epsilon, double h_ex, double j0, double r0, double len_gamma0,
                              double c_log = 1.0, double c_rep = 1.0);
void validate(const EnergyModel& model);

/// H_c1^0 = |log eps| / (2 R0).
double hc1_zero(double epsilon, double r0);

/// Sum over curves of the per-line cost minus the flux gain (no repulsion).
double line_excess_energy(const EnergyModel& model, const std::vector<CurveCandidate>& curves);

/// E(N) with N identical copies of Gamma0 plus the N^2 repulsion; argmin over
/// 0..n_max with smallest-N tie-break.
std::pair<int, std::vector<double>> optimal_line_count(const EnergyModel& model, int n_max);

struct Hc1Band {
    double lower{0.0};            // H_c1^0 - K0
    double upper{0.0};            // H_c1^0 + K0
    double bounded_vorticity{0.0};  // H_c1^0 + K log log(1/eps)
};

Hc1Band hc1_band(const EnergyModel& model, double k0, double k);

struct PhaseRow {
    double epsilon{0.0};
    double h_ex{0.0};
    double h_minus_hc10{0.0};
    int n_star{0};
    double e_n_star{0.0};
};

/// One row per (epsilon, multiplier) with h_ex = multiplier * H_c1^0(epsilon);
/// deterministic ordering (epsilon outer, multiplier inner).
std::vector<PhaseRow> phase_table(const EnergyModel& base, const std::vector<double>& eps_list,
                                  const std::vector<double>& h_multipliers, int n_max);

std::string phase_table_csv(const std::vector<PhaseRow>& rows);

}  // namespace isoflux

#endif  // ISOFLUX_CRITFIELD_HPP_
