#include "isoflux/axisym.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "isoflux/errors.hpp"

namespace isoflux {

double AxisymField::value_at(double x, double z) const {
    if (x < -1e-12 || x > r_box * (1.0 + 1e-12) || std::abs(z) > z_box * (1.0 + 1e-12))
        throw OutsideDomain("AxisymField: point outside the truncation box");
    const double fi = std::clamp(x / h_r, 0.0, static_cast<double>(n_r - 1));
    const double fj = std::clamp((z + z_box) / h_z, 0.0, static_cast<double>(n_z - 1));
    const int i0 = std::min(static_cast<int>(fi), n_r - 2);
    const int j0 = std::min(static_cast<int>(fj), n_z - 2);
    const double tx = fi - i0;
    const double tz = fj - j0;
    return (1 - tx) * (1 - tz) * at(i0, j0) + tx * (1 - tz) * at(i0 + 1, j0) +
           (1 - tx) * tz * at(i0, j0 + 1) + tx * tz * at(i0 + 1, j0 + 1);
}

double AxisymField::curl_theta(double x, double z) const {
    if (!domain.contains({x, 0.0, z})) throw OutsideDomain("curl_theta: meridian point not inside Omega");
    return value_at(x, z);
}

AxisymField solve_axisym_meissner(const Domain& domain, double r_box, int n_r, int n_z, double tol) {
    if (n_r < 64 || n_z < 64) throw std::invalid_argument("solve_axisym_meissner: need n_r, n_z >= 64");
    if (!(tol > 0.0)) throw std::invalid_argument("solve_axisym_meissner: tol must be positive");
    const double diam = domain.diameter();
    if (r_box < 2.0 * diam) throw BoxTooSmall("solve_axisym_meissner: R_box must be at least 2x the domain diameter");
    const double extent = std::max({std::abs(domain.z_min()), std::abs(domain.z_max()), domain.max_profile_radius(),
                                    domain.radius()});
    if (extent >= 0.9 * r_box) throw BoxTooSmall("solve_axisym_meissner: domain not well inside the box");

    AxisymField f;
    f.domain = domain;
    f.r_box = r_box;
    f.z_box = r_box;
    f.n_r = n_r;
    f.n_z = n_z;
    f.h_r = r_box / (n_r - 1);
    f.h_z = 2.0 * r_box / (n_z - 1);
    f.tol = tol;
    f.u.assign(static_cast<std::size_t>(n_r) * n_z, 0.0);
    f.inside.assign(static_cast<std::size_t>(n_r) * n_z, 0);

    for (int j = 0; j < n_z; ++j) {
        for (int i = 0; i < n_r; ++i) {
            const std::size_t idx = static_cast<std::size_t>(j) * n_r + i;
            f.inside[idx] = domain.contains({f.node_r(i), 0.0, f.node_z(j)}) ? 1 : 0;
            f.u[idx] = 0.5 * f.node_r(i);  // initial guess = far-field profile
        }
    }

    const int nr_i = n_r - 2;  // interior unknowns per row
    const int nz_i = n_z - 2;
    const std::size_t n_unknown = static_cast<std::size_t>(nr_i) * nz_i;
    const auto unknown = [&](int i, int j) -> long { return static_cast<long>(j - 1) * nr_i + (i - 1); };

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(5 * n_unknown);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<long>(n_unknown));
    Eigen::VectorXd guess(static_cast<long>(n_unknown));

    const double inv_hr2 = 1.0 / (f.h_r * f.h_r);
    const double inv_hz2 = 1.0 / (f.h_z * f.h_z);
    for (int j = 1; j <= nz_i; ++j) {
        for (int i = 1; i <= nr_i; ++i) {
            const double r = f.node_r(i);
            const double a_rp = (r + 0.5 * f.h_r) * inv_hr2;
            const double a_rm = (r - 0.5 * f.h_r) * inv_hr2;
            const double a_z = r * inv_hz2;
            const double chi = f.inside[static_cast<std::size_t>(j) * n_r + i] ? 1.0 : 0.0;
            const long m = unknown(i, j);
            trips.emplace_back(m, m, a_rp + a_rm + 2.0 * a_z + 1.0 / r + r * chi);
            if (i > 1)
                trips.emplace_back(m, unknown(i - 1, j), -a_rm);
            // i - 1 == 0 is the axis Dirichlet value u = 0: no rhs term
            if (i < nr_i)
                trips.emplace_back(m, unknown(i + 1, j), -a_rp);
            else
                rhs[m] += a_rp * (0.5 * r_box);
            if (j > 1)
                trips.emplace_back(m, unknown(i, j - 1), -a_z);
            else
                rhs[m] += a_z * (0.5 * r);
            if (j < nz_i)
                trips.emplace_back(m, unknown(i, j + 1), -a_z);
            else
                rhs[m] += a_z * (0.5 * r);
            guess[m] = 0.5 * r;
        }
    }

    Eigen::SparseMatrix<double> mat(static_cast<long>(n_unknown), static_cast<long>(n_unknown));
    mat.setFromTriplets(trips.begin(), trips.end());

    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::IncompleteCholesky<double>>
        cg;
    cg.setTolerance(tol);
    cg.setMaxIterations(50000);
    cg.compute(mat);
    if (cg.info() != Eigen::Success) throw SolverDiverged("solve_axisym_meissner: preconditioner setup failed");
    const Eigen::VectorXd sol = cg.solveWithGuess(rhs, guess);
    if (cg.info() != Eigen::Success)
        throw SolverDiverged("solve_axisym_meissner: residual target not reached within iteration budget");
    f.residual = cg.error();
    f.iterations = static_cast<int>(cg.iterations());

    for (int j = 1; j <= nz_i; ++j)
        for (int i = 1; i <= nr_i; ++i) f.u[static_cast<std::size_t>(j) * n_r + i] = sol[unknown(i, j)];
    // Dirichlet data on the box boundary and the axis
    for (int j = 0; j < n_z; ++j) {
        f.u[static_cast<std::size_t>(j) * n_r + 0] = 0.0;
        f.u[static_cast<std::size_t>(j) * n_r + (n_r - 1)] = 0.5 * r_box;
    }
    for (int i = 0; i < n_r; ++i) {
        f.u[static_cast<std::size_t>(0) * n_r + i] = 0.5 * f.node_r(i);
        f.u[static_cast<std::size_t>(n_z - 1) * n_r + i] = 0.5 * f.node_r(i);
    }
    return f;
}

MeissnerSummary meissner_summary(const AxisymField& f) {
    MeissnerSummary out;
    const int n_r = f.n_r, n_z = f.n_z;
    const auto at = [&](int i, int j) { return f.u[static_cast<std::size_t>(j) * n_r + i]; };
    const auto du_dr = [&](int i, int j) {
        if (i == 0) return (-3.0 * at(0, j) + 4.0 * at(1, j) - at(2, j)) / (2.0 * f.h_r);
        if (i == n_r - 1) return (3.0 * at(i, j) - 4.0 * at(i - 1, j) + at(i - 2, j)) / (2.0 * f.h_r);
        return (at(i + 1, j) - at(i - 1, j)) / (2.0 * f.h_r);
    };
    const auto du_dz = [&](int i, int j) {
        if (j == 0) return (-3.0 * at(i, 0) + 4.0 * at(i, 1) - at(i, 2)) / (2.0 * f.h_z);
        if (j == n_z - 1) return (3.0 * at(i, j) - 4.0 * at(i, j - 1) + at(i, j - 2)) / (2.0 * f.h_z);
        return (at(i, j + 1) - at(i, j - 1)) / (2.0 * f.h_z);
    };

    double field_term = 0.0, exterior_term = 0.0, section_flux = 0.0;
    for (int j = 0; j < n_z; ++j) {
        const double wz = (j == 0 || j == n_z - 1) ? 0.5 : 1.0;
        for (int i = 0; i < n_r; ++i) {
            const double wr = (i == 0 || i == n_r - 1) ? 0.5 : 1.0;
            const double r = f.node_r(i);
            const double cell = wr * wz * f.h_r * f.h_z;
            const double h_r_comp = -du_dz(i, j);
            const double h_z_comp = i == 0 ? 2.0 * du_dr(i, j) : du_dr(i, j) + at(i, j) / r;
            const double dev2 = h_r_comp * h_r_comp + (h_z_comp - 1.0) * (h_z_comp - 1.0);
            exterior_term += 0.5 * dev2 * 2.0 * M_PI * r * cell;
            if (f.inside[static_cast<std::size_t>(j) * n_r + i]) {
                field_term += 0.5 * at(i, j) * at(i, j) * 2.0 * M_PI * r * cell;
                section_flux += at(i, j) * cell;
            }
        }
    }
    out.field_term = field_term;
    out.exterior_term = exterior_term;
    out.j0 = field_term + exterior_term;

    // dipole fit of u - r/2 on a shell inside the box, tail energy beyond
    // the inscribed sphere of radius a
    const double a = std::min(f.r_box, f.z_box);
    double num = 0.0, den = 0.0;
    for (int j = 0; j < n_z; ++j) {
        for (int i = 1; i < n_r; ++i) {
            const double r = f.node_r(i), z = f.node_z(j);
            const double s = std::hypot(r, z);
            if (s < 0.70 * a || s > 0.85 * a) continue;
            const double phi = r / (s * s * s);
            num += (at(i, j) - 0.5 * r) * phi;
            den += phi * phi;
        }
    }
    const double m = den > 0.0 ? num / den : 0.0;
    out.j0_tail_estimate = 4.0 * M_PI * m * m / (3.0 * a * a * a);

    const double axis_len = f.domain.z_max() - f.domain.z_min();
    out.r0_hint = axis_len > 0.0 ? section_flux / axis_len : 0.0;
    return out;
}

}  // namespace isoflux
