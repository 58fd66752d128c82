#include "isoflux/cli.hpp"

#include <CLI11.hpp>
#include <cctype>
#include <cmath>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "isoflux/axisym.hpp"
#include "isoflux/ball_field.hpp"
#include "isoflux/critfield.hpp"
#include "isoflux/domain.hpp"
#include "isoflux/errors.hpp"
#include "isoflux/io.hpp"
#include "isoflux/nondegen.hpp"
#include "isoflux/optimize.hpp"
#include "isoflux/star_norm.hpp"

namespace isoflux {

namespace {

using json = nlohmann::ordered_json;

struct DomainSpec {
    std::string text{"ball:1"};

    Domain build() const {
        const auto colon = text.find(':');
        const std::string kind = text.substr(0, colon);
        const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
        if (kind == "ball") return Domain::ball(std::stod(rest));
        if (kind == "spheroid") {
            const auto comma = rest.find(',');
            if (comma == std::string::npos)
                throw std::invalid_argument("spheroid domain needs 'spheroid:a,c'");
            return Domain::spheroid(std::stod(rest.substr(0, comma)), std::stod(rest.substr(comma + 1)));
        }
        if (kind == "profile") return Domain::solid_of_revolution_from_csv(rest);
        throw std::invalid_argument("unknown domain spec '" + text + "' (ball:R | spheroid:a,c | profile:PATH)");
    }

    bool is_ball() const { return text.rfind("ball:", 0) == 0; }
};

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

std::string long_name(const CLI::Option* opt) {
    const auto& names = opt->get_lnames();
    return names.empty() ? std::string() : names.front();
}

// keys compare case-insensitively with '-' and '_' identified, so the model
// file keys (c_log, c_rep, N_max, ...) reach the corresponding flags
std::string normalize_key(const std::string& key) {
    std::string out;
    out.reserve(key.size());
    for (char c : key) out.push_back(c == '-' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

// flags that were not given on the command line fall back to config values
void merge_config(CLI::App* cmd, const std::map<std::string, std::string>& config) {
    std::map<std::string, std::string> normalized;
    for (const auto& [key, value] : config) normalized[normalize_key(key)] = value;
    for (CLI::Option* opt : cmd->get_options()) {
        if (opt->count() > 0) continue;
        const std::string name = long_name(opt);
        if (name.empty()) continue;
        const auto it = normalized.find(normalize_key(name));
        if (it == normalized.end()) continue;
        opt->add_result(it->second);
        opt->run_callback();
    }
}

std::string canonical_digest(const CLI::App* cmd, std::uint64_t seed) {
    std::ostringstream canon;
    canon << cmd->get_name() << '\n';
    for (const CLI::Option* opt : cmd->get_options()) {
        if (long_name(opt).empty()) continue;
        canon << long_name(opt) << '=';
        for (const auto& r : opt->results()) canon << r << ';';
        canon << '\n';
    }
    canon << "seed=" << seed << '\n';
    return fnv1a_hex(canon.str());
}

json curve_to_json(const Polyline3& c) {
    json arr = json::array();
    for (const Vec3& v : c.vertices) arr.push_back({v.x, v.y, v.z});
    return arr;
}

int cmd_field(const DomainSpec& dspec, double rbox, int nr, int nz, double tol, const std::string& out_dir,
              std::uint64_t seed, const std::string& digest) {
    const Domain domain = dspec.build();
    const AxisymField field = solve_axisym_meissner(domain, rbox, nr, nz, tol);
    const MeissnerSummary summary = meissner_summary(field);

    const std::string meta = "digest=" + digest + " seed=" + std::to_string(seed);
    atomic_write(out_dir + "/field.csv", axisym_field_csv(field, meta));

    json j;
    j["R_box"] = field.r_box;
    j["n_r"] = field.n_r;
    j["n_z"] = field.n_z;
    j["tol"] = field.tol;
    j["residual"] = field.residual;
    j["J0"] = summary.j0;
    j["J0_tail_estimate"] = summary.j0_tail_estimate;
    j["R0_hint"] = summary.r0_hint;
    j["config_digest"] = digest;
    j["seed"] = seed;
    atomic_write(out_dir + "/field_summary.json", j.dump(2) + "\n");
    std::cout << "J0 = " << format_double(summary.j0) << " (tail estimate "
              << format_double(summary.j0_tail_estimate) << "), residual " << format_double(field.residual)
              << "\n";
    return 0;
}

int cmd_optimize(const DomainSpec& dspec, const OptimizerConfig& config, const std::string& out_dir,
                 const std::string& digest) {
    if (!dspec.is_ball())
        throw std::invalid_argument(
            "optimize: only ball domains carry the closed-form Meissner field; see README");
    const Domain domain = dspec.build();
    const BallField b0(domain.radius());
    const VectorField field = retracted_ball_field(b0);

    const MultistartResult open_result = multistart_maximize(field, domain, config);
    OptimizerConfig loop_config = config;
    loop_config.n_starts = std::max(4, config.n_starts / 2);
    const MultistartResult loop_result = loop_supremum_probe(field, domain, loop_config);

    json j;
    j["R0"] = open_result.r0;
    j["best_curve"] = curve_to_json(open_result.best.curve);
    j["best_flux"] = open_result.best.flux;
    j["best_length"] = open_result.best.len;
    j["loop_best_ratio"] = loop_result.r0;
    j["margin_loops_vs_open"] = open_result.r0 - loop_result.r0;
    j["n_starts"] = config.n_starts;
    j["seed"] = config.seed;
    json ratios = json::array();
    for (const CurveCandidate& c : open_result.all_starts) ratios.push_back(c.ratio);
    j["per_start_ratios"] = ratios;
    j["config_digest"] = digest;
    atomic_write(out_dir + "/optimize_report.json", j.dump(2) + "\n");

    const std::string meta = "digest=" + digest + " seed=" + std::to_string(config.seed);
    atomic_write(out_dir + "/best_curve.csv", curve_csv(open_result.best.curve, meta));
    json sidecar;
    sidecar["closed"] = open_result.best.curve.closed;
    sidecar["multiplicity"] = open_result.best.curve.multiplicity;
    sidecar["config_digest"] = digest;
    sidecar["seed"] = config.seed;
    atomic_write(out_dir + "/best_curve.json", sidecar.dump(2) + "\n");
    std::cout << "R0 = " << format_double(open_result.r0) << ", loop margin "
              << format_double(open_result.r0 - loop_result.r0) << "\n";
    return 0;
}

int cmd_verify(const DomainSpec& dspec, int samples, int dict, int exponent, std::uint64_t seed,
               const std::string& out_dir, const std::string& digest) {
    if (!dspec.is_ball())
        throw std::invalid_argument(
            "verify: only ball domains carry the closed-form Meissner field; see README");
    const Domain domain = dspec.build();
    const BallField b0(domain.radius());
    const VectorField field = [&b0](const Vec3& p) { return b0(p); };
    const Polyline3 gamma0 = diameter_curve(domain);

    PerturbationSpec spec;
    spec.count = samples;
    spec.seed = seed;
    const auto perturbations = sample_perturbations(domain, gamma0, spec);
    const NondegenReport report = verify_nondegeneracy(field, domain, gamma0, perturbations, exponent, dict);
    const LengthControlReport lc = check_length_control(field, domain, gamma0, report, perturbations);
    const double delta0 = length(gamma0) / 4.0;
    const TubularReport tub =
        check_tubular(gamma0, report, perturbations, {delta0, delta0 / 4.0, delta0 / 16.0});
    const PositivityReport pos = positivity_scan(b0);

    json j;
    j["samples"] = report.samples;
    j["empirical_C0"] = report.empirical_c0;
    j["N_used"] = report.n_used;
    j["min_alpha"] = report.min_alpha;
    j["arc_loglog_slope"] = report.arc_loglog_slope;
    j["length_control"] = {{"violations", lc.violations},
                           {"max_slack", lc.max_slack},
                           {"field_norm", lc.field_norm}};
    j["tubular"] = {{"delta_grid", tub.delta_grid}, {"fitted_C", tub.fitted_c}, {"admitted", tub.admitted}};
    j["positivity"] = {{"min_curl_theta", pos.min_curl_theta}, {"pass", pos.pass}};
    j["hypde_scan"] = {{"delta", report.hypde_delta},
                       {"checked", report.hypde_checked},
                       {"violations", report.hypde_violations}};
    json families;
    for (const PerturbationFamily fam :
         {PerturbationFamily::PlanarArc, PerturbationFamily::FourierNormal, PerturbationFamily::TiltedChord,
          PerturbationFamily::Loop}) {
        json alpha = json::array(), dlo = json::array(), dhi = json::array(), len = json::array(),
             tube = json::array();
        for (const SampleRecord& rec : report.records) {
            if (rec.family != fam) continue;
            alpha.push_back(rec.alpha);
            dlo.push_back(rec.d_star_lower);
            dhi.push_back(rec.d_star_upper);
            len.push_back(rec.len);
            tube.push_back(rec.max_tube_dist);
        }
        families[family_name(fam)] = {{"alpha", alpha},
                                      {"d_star_lower", dlo},
                                      {"d_star_upper", dhi},
                                      {"length", len},
                                      {"max_tube_dist", tube}};
    }
    j["families"] = families;
    j["seed"] = seed;
    j["config_digest"] = digest;
    atomic_write(out_dir + "/verify_report.json", j.dump(2) + "\n");

    std::ostringstream csv;
    csv << "# digest=" << digest << " seed=" << seed << "\n";
    csv << "family,amplitude,alpha,d_star_lower,d_star_upper,length,flux,max_tube_dist\n";
    for (const SampleRecord& rec : report.records) {
        csv << family_name(rec.family) << ',' << format_double(rec.amplitude) << ','
            << format_double(rec.alpha) << ',' << format_double(rec.d_star_lower) << ','
            << format_double(rec.d_star_upper) << ',' << format_double(rec.len) << ','
            << format_double(rec.flux) << ',' << format_double(rec.max_tube_dist) << '\n';
    }
    atomic_write(out_dir + "/verify_samples.csv", csv.str());

    const bool pass = report.empirical_c0 > 0.0 && report.min_alpha >= -1e-9 &&
                      report.arc_loglog_slope >= 1.8 && lc.violations == 0 && pos.pass;
    std::cout << "empirical_C0 = " << format_double(report.empirical_c0) << ", min alpha "
              << format_double(report.min_alpha) << ", arc slope "
              << format_double(report.arc_loglog_slope) << ", length-control violations "
              << lc.violations << (pass ? " [ok]" : " [FAIL]") << "\n";
    return pass ? 0 : 2;
}

int cmd_hc1(double epsilon, double r0, double k0, double k, bool with_band, double h_ex, double len0,
            double c_log, double c_rep, int n_max) {
    const double h0 = hc1_zero(epsilon, r0);
    std::cout << format_double(h0) << "\n";
    if (with_band) {
        EnergyModel m = make_energy_model(epsilon, h0, 0.0, r0, len0, c_log, c_rep);
        const Hc1Band band = hc1_band(m, k0, k);
        std::cout << "band " << format_double(band.lower) << " .. " << format_double(band.upper)
                  << ", bounded-vorticity ceiling " << format_double(band.bounded_vorticity) << "\n";
    }
    if (h_ex >= 0.0) {
        const EnergyModel m = make_energy_model(epsilon, h_ex, 0.0, r0, len0, c_log, c_rep);
        CurveCandidate g;
        g.len = len0;
        g.flux = r0 * len0;
        const auto [n_star, energies] = optimal_line_count(m, n_max);
        std::cout << "excess of one line at h_ex = " << format_double(h_ex) << ": "
                  << format_double(line_excess_energy(m, {g})) << ", N* = " << n_star << "\n";
    }
    return 0;
}

int cmd_phase(const DomainSpec& dspec, double r0_arg, const std::vector<double>& eps_list,
              const std::vector<double>& h_mult, double c_log, double c_rep, int n_max,
              const std::string& out_dir, std::uint64_t seed, const std::string& digest) {
    double r0 = r0_arg;
    double len0 = 1.0;
    if (!(r0 > 0.0)) {
        if (!dspec.is_ball())
            throw std::invalid_argument("phase: pass --r0 explicitly for non-ball domains");
        const Domain domain = dspec.build();
        const BallField b0(domain.radius());
        const Polyline3 gamma0 = diameter_curve(domain);
        r0 = ratio([&b0](const Vec3& p) { return b0(p); }, gamma0);
        len0 = length(gamma0);
    }
    EnergyModel base = make_energy_model(eps_list.empty() ? 1e-6 : eps_list.front(), 0.0, 0.0, r0, len0,
                                         c_log, c_rep);
    const auto rows = phase_table(base, eps_list, h_mult, n_max);
    std::string csv = "# digest=" + digest + " seed=" + std::to_string(seed) + "\n" + phase_table_csv(rows);
    atomic_write(out_dir + "/phase.csv", csv);
    std::cout << rows.size() << " phase rows written\n";
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Meissner isoflux toolkit: fields, curve optimization, verification, critical-field tables"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "flat key=value config file; flags override");

    std::string out_dir = ".";
    std::uint64_t seed = 1;
    DomainSpec dspec;
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", seed, "RNG seed recorded in artifacts")->capture_default_str();

    auto* field_cmd = app.add_subcommand("field", "solve the azimuthal Meissner component and export it");
    std::string field_domain = "ball:1";
    double rbox = 6.0, tol = 1e-10;
    int nr = 256, nz = 512;
    field_cmd->add_option("--domain", field_domain, "ball:R | spheroid:a,c | profile:PATH")
        ->capture_default_str();
    field_cmd->add_option("--rbox", rbox, "truncation half-width")->capture_default_str();
    field_cmd->add_option("--nr", nr, "radial node count")->capture_default_str();
    field_cmd->add_option("--nz", nz, "axial node count")->capture_default_str();
    field_cmd->add_option("--tol", tol, "relative residual target")->capture_default_str();

    auto* opt_cmd = app.add_subcommand("optimize", "maximize the flux-to-length ratio over curves");
    std::string opt_domain = "ball:1";
    OptimizerConfig oc;
    opt_cmd->add_option("--domain", opt_domain, "ball:R")->capture_default_str();
    opt_cmd->add_option("--starts", oc.n_starts, "random chord starts")->capture_default_str();
    opt_cmd->add_option("--vertices", oc.n_vertices, "vertex budget")->capture_default_str();
    opt_cmd->add_option("--iters", oc.max_iters, "ascent iteration cap")->capture_default_str();
    opt_cmd->add_option("--step", oc.step, "initial step length")->capture_default_str();
    opt_cmd->add_option("--anneal", oc.anneal_schedule, "geometric cooling factor")->capture_default_str();

    auto* verify_cmd = app.add_subcommand("verify", "run the nondegeneracy and lemma suite");
    std::string verify_domain = "ball:1";
    int samples = 500, dict = 125, exponent = 2;
    verify_cmd->add_option("--domain", verify_domain, "ball:R")->capture_default_str();
    verify_cmd->add_option("--samples", samples, "perturbation sample count")->capture_default_str();
    verify_cmd->add_option("--dict", dict, "dual-norm dictionary size")->capture_default_str();
    verify_cmd->add_option("--exponent", exponent, "nondegeneracy exponent N")->capture_default_str();

    auto* hc1_cmd = app.add_subcommand("hc1", "print H_c1^0 = |log eps| / (2 R0)");
    double epsilon = 1e-6, r0_opt = 0.0, k0 = 5.0, kk = 1.0;
    double hc1_h_ex = -1.0, hc1_len0 = 2.0, hc1_c_log = 1.0, hc1_c_rep = 1.0;
    int hc1_n_max = 64;
    hc1_cmd->add_option("--epsilon", epsilon, "Ginzburg-Landau parameter")->capture_default_str();
    hc1_cmd->add_option("--r0", r0_opt, "isoflux supremum R0");
    auto* band_flag = hc1_cmd->add_flag("--band", "also print the O(1) band and ceiling");
    hc1_cmd->add_option("--k0", k0, "band half-width")->capture_default_str();
    hc1_cmd->add_option("--k", kk, "log log multiplier for the ceiling")->capture_default_str();
    hc1_cmd->add_option("--h-ex", hc1_h_ex, "also report the line excess and N* at this field");
    hc1_cmd->add_option("--len0", hc1_len0, "length of the maximizer")->capture_default_str();
    hc1_cmd->add_option("--c-log", hc1_c_log, "log log cost constant")->capture_default_str();
    hc1_cmd->add_option("--c-rep", hc1_c_rep, "repulsion constant")->capture_default_str();
    hc1_cmd->add_option("--n-max", hc1_n_max, "line-count search cap")->capture_default_str();

    auto* phase_cmd = app.add_subcommand("phase", "emit the (epsilon, h_ex) -> N* table");
    std::string phase_domain = "ball:1";
    std::string eps_text = "1e-3,1e-4,1e-6,1e-8,1e-10,1e-12";
    std::string mult_text = "0.8,0.9,1.0,1.1,1.25,1.5";
    double phase_r0 = 0.0, c_log = 1.0, c_rep = 1.0;
    int n_max = 64;
    phase_cmd->add_option("--domain", phase_domain, "ball:R (or pass --r0)")->capture_default_str();
    phase_cmd->add_option("--r0", phase_r0, "isoflux supremum R0 (overrides --domain)");
    phase_cmd->add_option("--eps-list", eps_text, "comma-separated epsilons")->capture_default_str();
    phase_cmd->add_option("--h-mult", mult_text, "h_ex as multiples of H_c1^0")->capture_default_str();
    phase_cmd->add_option("--c-log", c_log, "log log cost constant")->capture_default_str();
    phase_cmd->add_option("--c-rep", c_rep, "repulsion constant")->capture_default_str();
    phase_cmd->add_option("--n-max", n_max, "line-count search cap")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        std::map<std::string, std::string> config;
        if (!config_path.empty()) config = parse_flat_config(config_path);
        merge_config(&app, config);
        for (CLI::App* sub : app.get_subcommands()) merge_config(sub, config);

        CLI::App* active = app.get_subcommands().front();
        const std::string digest = canonical_digest(active, seed);

        if (active == field_cmd) {
            dspec.text = field_domain;
            return cmd_field(dspec, rbox, nr, nz, tol, out_dir, seed, digest);
        }
        if (active == opt_cmd) {
            dspec.text = opt_domain;
            oc.seed = seed;
            return cmd_optimize(dspec, oc, out_dir, digest);
        }
        if (active == verify_cmd) {
            dspec.text = verify_domain;
            return cmd_verify(dspec, samples, dict, exponent, seed, out_dir, digest);
        }
        if (active == hc1_cmd) {
            if (!(r0_opt > 0.0)) throw std::invalid_argument("hc1: --r0 must be given and positive");
            return cmd_hc1(epsilon, r0_opt, k0, kk, band_flag->count() > 0, hc1_h_ex, hc1_len0, hc1_c_log,
                           hc1_c_rep, hc1_n_max);
        }
        if (active == phase_cmd) {
            dspec.text = phase_domain;
            return cmd_phase(dspec, phase_r0, parse_list(eps_text), parse_list(mult_text), c_log, c_rep,
                             n_max, out_dir, seed, digest);
        }
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace isoflux
