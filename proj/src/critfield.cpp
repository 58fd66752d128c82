#include "isoflux/critfield.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "isoflux/errors.hpp"
#include "isoflux/io.hpp"

namespace isoflux {

void validate(const EnergyModel& model) {
    if (!(model.epsilon > 0.0) || !(model.epsilon < 1.0))
        throw InvalidEpsilon("EnergyModel: epsilon must lie in (0,1)");
    if (!(model.r0 > 0.0)) throw std::invalid_argument("EnergyModel: R0 must be positive");
    if (!(model.len_gamma0 > 0.0)) throw std::invalid_argument("EnergyModel: |Gamma0| must be positive");
    if (std::abs(model.flux_gamma0 - model.r0 * model.len_gamma0) >
        1e-10 * std::max(1.0, std::abs(model.flux_gamma0)))
        throw std::invalid_argument("EnergyModel: flux_gamma0 must equal R0 * |Gamma0|");
    if (model.h_ex < 0.0) throw std::invalid_argument("EnergyModel: h_ex must be >= 0");
}

EnergyModel make_energy_model(double epsilon, double h_ex, double j0, double r0, double len_gamma0,
                              double c_log, double c_rep) {
    EnergyModel m;
    m.epsilon = epsilon;
    m.h_ex = h_ex;
    m.j0 = j0;
    m.r0 = r0;
    m.len_gamma0 = len_gamma0;
    m.flux_gamma0 = r0 * len_gamma0;
    m.c_log = c_log;
    m.c_rep = c_rep;
    validate(m);
    return m;
}

double hc1_zero(double epsilon, double r0) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0)) throw InvalidEpsilon("hc1_zero: epsilon must lie in (0,1)");
    if (!(r0 > 0.0)) throw std::invalid_argument("hc1_zero: R0 must be positive");
    return std::abs(std::log(epsilon)) / (2.0 * r0);
}

namespace {

double log_inv(double epsilon) { return std::log(1.0 / epsilon); }
double loglog_inv(double epsilon) { return std::log(std::log(1.0 / epsilon)); }

}  // namespace

double line_excess_energy(const EnergyModel& model, const std::vector<CurveCandidate>& curves) {
    validate(model);
    const double cost_per_unit = log_inv(model.epsilon) - model.c_log * loglog_inv(model.epsilon);
    double total = 0.0;
    for (const CurveCandidate& c : curves)
        total += M_PI * c.len * cost_per_unit - 2.0 * M_PI * model.h_ex * c.flux;
    return total;
}

std::pair<int, std::vector<double>> optimal_line_count(const EnergyModel& model, int n_max) {
    validate(model);
    if (n_max < 1) throw std::invalid_argument("optimal_line_count: n_max must be >= 1");
    const double cost_per_unit = log_inv(model.epsilon) - model.c_log * loglog_inv(model.epsilon);
    const double per_line = M_PI * model.len_gamma0 * cost_per_unit -
                            2.0 * M_PI * model.h_ex * model.flux_gamma0;
    const double ll = loglog_inv(model.epsilon);
    std::vector<double> energies(n_max + 1);
    int best = 0;
    for (int n = 0; n <= n_max; ++n) {
        energies[n] = n * per_line + model.c_rep * static_cast<double>(n) * n * ll;
        if (energies[n] < energies[best]) best = n;  // strict: ties keep the smaller N
    }
    return {best, std::move(energies)};
}

Hc1Band hc1_band(const EnergyModel& model, double k0, double k) {
    validate(model);
    const double h0 = hc1_zero(model.epsilon, model.r0);
    Hc1Band band;
    band.lower = h0 - k0;
    band.upper = h0 + k0;
    band.bounded_vorticity = h0 + k * loglog_inv(model.epsilon);
    return band;
}

std::vector<PhaseRow> phase_table(const EnergyModel& base, const std::vector<double>& eps_list,
                                  const std::vector<double>& h_multipliers, int n_max) {
    std::vector<PhaseRow> rows;
    rows.reserve(eps_list.size() * h_multipliers.size());
    for (double eps : eps_list) {
        const double h0 = hc1_zero(eps, base.r0);
        for (double mult : h_multipliers) {
            EnergyModel m = base;
            m.epsilon = eps;
            m.h_ex = mult * h0;
            const auto [n_star, energies] = optimal_line_count(m, n_max);
            rows.push_back({eps, m.h_ex, m.h_ex - h0, n_star, energies[n_star]});
        }
    }
    return rows;
}

std::string phase_table_csv(const std::vector<PhaseRow>& rows) {
    std::ostringstream out;
    out << "epsilon,h_ex,h_minus_hc10,N_star,E_Nstar\n";
    for (const PhaseRow& r : rows) {
        out << format_double(r.epsilon) << ',' << format_double(r.h_ex) << ','
            << format_double(r.h_minus_hc10) << ',' << r.n_star << ',' << format_double(r.e_n_star)
            << '\n';
    }
    return out.str();
}

}  // namespace isoflux
