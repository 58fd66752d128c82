// Acceptance suite: one line per criterion, nonzero exit on any failure.
// argv[1]: path to the isoflux CLI binary (criterion 9).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "isoflux/axisym.hpp"
#include "isoflux/ball_field.hpp"
#include "isoflux/critfield.hpp"
#include "isoflux/domain.hpp"
#include "isoflux/nondegen.hpp"
#include "isoflux/optimize.hpp"
#include "isoflux/polyline.hpp"
#include "oracles.hpp"

using namespace isoflux;
namespace fs = std::filesystem;

namespace {

int failures = 0;

class Timer {
  public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

void report(int index, const std::string& name, bool pass, const std::string& details, double seconds) {
    std::printf("[%s] %d. %s: %s (%.1f s)\n", pass ? "PASS" : "FAIL", index, name.c_str(), details.c_str(),
                seconds);
    std::fflush(stdout);
    if (!pass) ++failures;
}

Vec3 random_in_ball(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (;;) {
        const Vec3 p{unit(rng), unit(rng), unit(rng)};
        if (p.norm() < 1.0) return p * radius;
    }
}

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

void criterion_1_ball_identities() {
    Timer timer;
    const BallField b(1.0);
    std::mt19937_64 rng(101);
    const double h = 1e-4;

    double max_div = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const Vec3 p = random_in_ball(rng, 1.0 - 3.0 * h);
        const double div = (b({p.x + h, p.y, p.z}).x - b({p.x - h, p.y, p.z}).x +
                            b({p.x, p.y + h, p.z}).y - b({p.x, p.y - h, p.z}).y +
                            b({p.x, p.y, p.z + h}).z - b({p.x, p.y, p.z - h}).z) /
                           (2.0 * h);
        max_div = std::max(max_div, std::abs(div));
    }

    double max_tangential = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const Vec3 nu = random_in_ball(rng, 1.0).normalized();
        max_tangential = std::max(max_tangential, b(nu).cross(nu).norm());
    }

    double max_curl_err = 0.0;
    int checked = 0;
    while (checked < 1000) {
        const Vec3 p = random_in_ball(rng, 1.0 - 3.0 * h);
        const double rho = p.rho();
        if (rho < 0.05) continue;
        ++checked;
        const Vec3 dx_p = b({p.x + h, p.y, p.z}), dx_m = b({p.x - h, p.y, p.z});
        const Vec3 dy_p = b({p.x, p.y + h, p.z}), dy_m = b({p.x, p.y - h, p.z});
        const Vec3 dz_p = b({p.x, p.y, p.z + h}), dz_m = b({p.x, p.y, p.z - h});
        const Vec3 curl{(dy_p.z - dy_m.z - (dz_p.y - dz_m.y)) / (2.0 * h),
                        (dz_p.x - dz_m.x - (dx_p.z - dx_m.z)) / (2.0 * h),
                        (dx_p.y - dx_m.y - (dy_p.x - dy_m.x)) / (2.0 * h)};
        const Vec3 theta_hat{-p.y / rho, p.x / rho, 0.0};
        max_curl_err = std::max(max_curl_err, std::abs(curl.dot(theta_hat) - b.curl_meridian(rho, p.z)));
    }

    const double t = timer.seconds();
    const bool pass = max_div <= 1e-6 && max_tangential <= 1e-8 && max_curl_err <= 1e-4 && t < 5.0;
    std::ostringstream d;
    d << "max |div| = " << max_div << ", max |B0 x nu| = " << max_tangential
      << ", max curl mismatch = " << max_curl_err;
    report(1, "ball field identities", pass, d.str(), t);
}

void criterion_2_pde_vs_closed_form() {
    Timer timer;
    const Domain ball = Domain::ball(1.0);
    const BallField b(1.0);
    const AxisymField fine = solve_axisym_meissner(ball, 6.0, 256, 512, 1e-10);
    const AxisymField coarse = solve_axisym_meissner(ball, 6.0, 128, 256, 1e-10);
    const double e_fine = rel_l2_vs_ball(fine, b);
    const double e_coarse = rel_l2_vs_ball(coarse, b);
    const double t = timer.seconds();
    const bool pass = e_fine <= 0.02 && e_coarse >= 3.0 * e_fine && t < 60.0;
    std::ostringstream d;
    d << "relL2(256x512) = " << e_fine << ", relL2(128x256) = " << e_coarse
      << ", reduction x" << (e_coarse / e_fine);
    report(2, "PDE vs closed form", pass, d.str(), t);
}

void criterion_3_sector_identity() {
    Timer timer;
    const Domain ball = Domain::ball(1.0);
    const BallField b(1.0);
    const VectorField field = [&b](const Vec3& p) { return b(p); };
    const double r0 = oracles::ball_axis_flux(1.0) / 2.0;
    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    int done = 0;
    while (done < 20) {
        double phi1 = M_PI * unit(rng), phi2 = M_PI * unit(rng);
        if (phi1 > phi2) std::swap(phi1, phi2);
        if (phi2 - phi1 < 0.05) continue;
        ++done;
        const auto [sector, chord] = sector_competitors(ball, phi1, phi2);
        const double lhs = circulation(field, sector, 24) / length(chord);
        worst = std::max(worst, std::abs(lhs - std::sin(0.5 * (phi1 + phi2)) * r0));
    }
    const double t = timer.seconds();
    const bool pass = worst <= 1e-3 * r0 && t < 10.0;
    std::ostringstream d;
    d << "max |flux/len - sin((phi1+phi2)/2) R0| = " << worst << " (tolerance " << 1e-3 * r0 << ")";
    report(3, "sector identity", pass, d.str(), t);
}

void criterion_4_optimizer_ground_truth() {
    Timer timer;
    const Domain ball = Domain::ball(1.0);
    const BallField b(1.0);
    const VectorField field = retracted_ball_field(b);
    OptimizerConfig config;
    config.n_starts = 32;
    config.seed = 7;
    const MultistartResult open_result = multistart_maximize(field, ball, config);
    OptimizerConfig loop_config = config;
    loop_config.n_starts = 12;
    const MultistartResult loops = loop_supremum_probe(field, ball, loop_config);

    const double r0_oracle = oracles::ball_axis_flux(1.0) / 2.0;
    const double hausdorff = hausdorff_distance(open_result.best.curve, diameter_curve(ball));
    const double margin = open_result.r0 - loops.r0;
    const double t = timer.seconds();
    const bool pass = hausdorff <= 0.05 && std::abs(open_result.r0 - r0_oracle) <= 0.01 * r0_oracle &&
                      margin > 0.0 && t < 300.0;
    std::ostringstream d;
    d << "R0 = " << open_result.r0 << " (oracle " << r0_oracle << "), Hausdorff = " << hausdorff
      << ", loop margin = " << margin;
    report(4, "optimizer ground truth", pass, d.str(), t);
}

void criterion_5_nondegeneracy() {
    Timer timer;
    const Domain ball = Domain::ball(1.0);
    const BallField b(1.0);
    const VectorField field = [&b](const Vec3& p) { return b(p); };
    const Polyline3 gamma0 = diameter_curve(ball);
    PerturbationSpec spec;
    spec.count = 500;
    spec.seed = 11;
    const auto samples = sample_perturbations(ball, gamma0, spec);
    bool pass = true;
    std::ostringstream d;
    try {
        const NondegenReport report5 = verify_nondegeneracy(field, ball, gamma0, samples, 2, 125);
        pass = report5.min_alpha >= -1e-9 && report5.empirical_c0 > 0.0 && report5.arc_loglog_slope >= 1.8;
        d << "samples = " << report5.samples << ", min alpha = " << report5.min_alpha
          << ", empirical C0 = " << report5.empirical_c0 << ", arc slope = " << report5.arc_loglog_slope;
    } catch (const std::exception& e) {
        pass = false;
        d << "maximality violated: " << e.what();
    }
    const double t = timer.seconds();
    pass = pass && t < 600.0;
    report(5, "nondegeneracy with N=2", pass, d.str(), t);
}

void criterion_6_lemma_suite() {
    Timer timer;
    const Domain ball = Domain::ball(1.0);
    const BallField b(1.0);
    const VectorField field = [&b](const Vec3& p) { return b(p); };
    const Polyline3 gamma0 = diameter_curve(ball);
    PerturbationSpec spec;
    spec.count = 300;
    spec.seed = 13;
    const auto samples = sample_perturbations(ball, gamma0, spec);
    const NondegenReport report6 = verify_nondegeneracy(field, ball, gamma0, samples, 2, 125);
    const LengthControlReport lc = check_length_control(field, ball, gamma0, report6, samples);

    const double delta0 = length(gamma0) / 4.0;
    const TubularReport tub = check_tubular(gamma0, report6, samples, {delta0, delta0 / 4.0, delta0 / 16.0});
    bool tubular_ok = true;
    for (std::size_t k = 0; k + 1 < tub.fitted_c.size(); ++k) {
        if (tub.admitted[k + 1] == 0 || tub.admitted[k] == 0) continue;
        if (tub.fitted_c[k + 1] > 1.2 * tub.fitted_c[k] + 1e-12) tubular_ok = false;
    }

    const PositivityReport pos_ball = positivity_scan(b);
    const AxisymField prolate =
        solve_axisym_meissner(Domain::spheroid(1.0, 1.5), 9.0, 128, 256, 1e-13);
    const AxisymField oblate = solve_axisym_meissner(Domain::spheroid(1.5, 1.0), 9.0, 128, 256, 1e-13);
    const PositivityReport pos_pro = positivity_scan(prolate);
    const PositivityReport pos_ob = positivity_scan(oblate);

    const double t = timer.seconds();
    const bool pass = lc.violations == 0 && tubular_ok && pos_ball.min_curl_theta >= -1e-8 &&
                      pos_pro.min_curl_theta >= -1e-8 && pos_ob.min_curl_theta >= -1e-8;
    std::ostringstream d;
    d << "length-control violations = " << lc.violations << "/" << lc.samples << ", tubular C = {";
    for (std::size_t k = 0; k < tub.fitted_c.size(); ++k) d << (k ? ", " : "") << tub.fitted_c[k];
    d << "}, positivity mins = {" << pos_ball.min_curl_theta << ", " << pos_pro.min_curl_theta << ", "
      << pos_ob.min_curl_theta << "}";
    report(6, "length control, tubular confinement, positivity", pass, d.str(), t);
}

void criterion_7_critical_field_model() {
    Timer timer;
    const double r0 = oracles::ball_axis_flux(1.0) / 2.0;
    const double len0 = 2.0;
    bool pass = true;
    std::ostringstream d;

    // threshold exactness at c_log = c_rep = 0
    const double eps0 = 1e-6;
    const double h0 = hc1_zero(eps0, r0);
    CurveCandidate g;
    g.len = len0;
    g.flux = r0 * len0;
    const EnergyModel lo = make_energy_model(eps0, h0 * (1.0 - 1e-12), 0.0, r0, len0, 0.0, 0.0);
    const EnergyModel hi = make_energy_model(eps0, h0 * (1.0 + 1e-12), 0.0, r0, len0, 0.0, 0.0);
    const EnergyModel at = make_energy_model(eps0, h0, 0.0, r0, len0, 0.0, 0.0);
    const double scale = M_PI * len0 * std::abs(std::log(eps0));
    const bool flip = line_excess_energy(lo, {g}) > 0.0 && line_excess_energy(hi, {g}) < 0.0 &&
                      std::abs(line_excess_energy(at, {g})) <= 1e-12 * scale;
    pass = pass && flip;
    d << "threshold flip at H_c1^0 " << (flip ? "exact" : "BROKEN");

    // bounded vorticity across epsilon for K in {1,3,10}
    const std::vector<double> eps_list{1e-3, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12};
    for (double k : {1.0, 3.0, 10.0}) {
        int n_ref = -1;
        bool constant = true;
        for (double eps : eps_list) {
            const double h = hc1_zero(eps, r0) + k * std::log(std::log(1.0 / eps));
            const EnergyModel m = make_energy_model(eps, h, 0.0, r0, len0, 1.0, 1.0);
            const auto [n_star, energies] = optimal_line_count(m, 500);
            if (n_ref < 0) n_ref = n_star;
            if (n_star != n_ref) constant = false;
        }
        pass = pass && constant && n_ref >= 0;
        d << "; N*(K=" << k << ") = " << n_ref << (constant ? "" : " NOT constant");
    }

    // vortex-free regime below H_c1^0 - K0; the log log window widens as
    // epsilon shrinks, so the threshold comes from the smallest epsilon
    double ll_max = 0.0;
    for (double eps : eps_list) ll_max = std::max(ll_max, std::log(std::log(1.0 / eps)));
    const double k0_threshold = 1.0 * ll_max / (2.0 * r0);  // c_log = 1 default
    const double k0 = k0_threshold + 1.0;
    bool vortex_free = true;
    for (double eps : eps_list) {
        const double h = std::max(0.0, hc1_zero(eps, r0) - k0);
        const EnergyModel m = make_energy_model(eps, h, 0.0, r0, len0, 1.0, 1.0);
        const auto [n_star, energies] = optimal_line_count(m, 500);
        if (n_star != 0) vortex_free = false;
    }
    pass = pass && vortex_free;
    d << "; N* = 0 below H_c1^0 - K0 for K0 = " << k0 << (vortex_free ? "" : " BROKEN");

    const double t = timer.seconds();
    pass = pass && t < 1.0;
    report(7, "critical-field model", pass, d.str(), t);
}

void criterion_8_torus_stress() {
    Timer timer;
    const Domain ball = Domain::ball(1.0);
    const VectorField torus = torus_field(0.5, 0.15, std::sqrt(2.0), 30.0);

    OptimizerConfig c32;
    c32.n_vertices = 32;
    c32.n_starts = 6;
    c32.seed = 21;
    c32.max_iters = 300;
    const MultistartResult probe32 = loop_supremum_probe(torus, ball, c32);

    OptimizerConfig c128 = c32;
    c128.n_vertices = 128;
    const MultistartResult probe128 = loop_supremum_probe(torus, ball, c128);
    // refine the 32-vertex winner under the larger budget as an extra start
    const CurveCandidate refined =
        ratio_ascent(torus, ball, resample_arclength(probe32.best.curve, 128), c128);
    const double r32 = probe32.r0;
    const double r128 = std::max(probe128.r0, refined.ratio);

    const double t = timer.seconds();
    const bool pass = r32 < 1.0 && r128 < 1.0 && r128 > r32;
    std::ostringstream d;
    d << "best loop ratio: 32 vertices = " << r32 << ", 128 vertices = " << r128 << " (both < 1)";
    report(8, "torus stress field", pass, d.str(), t);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_9_cli_determinism(const std::string& binary) {
    Timer timer;
    bool pass = true;
    std::ostringstream d;
    if (binary.empty()) {
        report(9, "CLI determinism", false, "no CLI binary path given", timer.seconds());
        return;
    }
    const fs::path root = fs::temp_directory_path() / "isoflux_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);

    struct Run {
        std::string name;
        std::string args;
        std::vector<std::string> payloads;
    };
    const std::vector<Run> runs = {
        {"field", "--seed 3 field --domain ball:1 --rbox 6 --nr 64 --nz 128 --tol 1e-9",
         {"field.csv", "field_summary.json"}},
        {"optimize", "--seed 5 optimize --domain ball:1 --starts 3 --vertices 20 --iters 60",
         {"optimize_report.json", "best_curve.csv", "best_curve.json"}},
        {"verify", "--seed 7 verify --domain ball:1 --samples 40 --dict 27",
         {"verify_report.json", "verify_samples.csv"}},
        {"hc1", "hc1 --epsilon 4.54e-5 --r0 0.5", {}},
        {"phase", "--seed 9 phase --r0 0.15 --eps-list 1e-3,1e-6,1e-9 --h-mult 0.9,1.0,1.1 --c-log 0",
         {"phase.csv"}},
    };
    for (const Run& run : runs) {
        const fs::path dir_a = root / (run.name + "_a");
        const fs::path dir_b = root / (run.name + "_b");
        fs::create_directories(dir_a);
        fs::create_directories(dir_b);
        const std::string cmd_a = binary + " --out " + dir_a.string() + " " + run.args + " > " +
                                  (dir_a / "stdout.txt").string() + " 2>/dev/null";
        const std::string cmd_b = binary + " --out " + dir_b.string() + " " + run.args + " > " +
                                  (dir_b / "stdout.txt").string() + " 2>/dev/null";
        if (std::system(cmd_a.c_str()) != 0 || std::system(cmd_b.c_str()) != 0) {
            pass = false;
            d << run.name << " exited nonzero; ";
            continue;
        }
        std::vector<std::string> files = run.payloads;
        files.push_back("stdout.txt");
        for (const std::string& f : files) {
            const std::string a = slurp(dir_a / f), b = slurp(dir_b / f);
            if (a.empty() || a != b) {
                pass = false;
                d << run.name << "/" << f << " differs; ";
            }
        }
    }
    fs::remove_all(root);
    if (pass) d << "all payloads byte-identical across reruns";
    report(9, "CLI determinism", pass, d.str(), timer.seconds());
}

}  // namespace

int main(int argc, char** argv) {
    const std::string binary = argc > 1 ? argv[1] : "";
    criterion_1_ball_identities();
    criterion_2_pde_vs_closed_form();
    criterion_3_sector_identity();
    criterion_4_optimizer_ground_truth();
    criterion_5_nondegeneracy();
    criterion_6_lemma_suite();
    criterion_7_critical_field_model();
    criterion_8_torus_stress();
    criterion_9_cli_determinism(binary);
    std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                failures);
    return failures == 0 ? 0 : 1;
}
