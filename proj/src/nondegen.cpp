#include "isoflux/nondegen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <random>
#include <thread>

#include "isoflux/errors.hpp"
#include "isoflux/star_norm.hpp"

namespace isoflux {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

template <typename Fn>
void parallel_for(int n, Fn&& fn) {
    unsigned workers = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("ISOFLUX_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) workers = static_cast<unsigned>(v);
    }
    workers = std::max(1u, std::min(workers, static_cast<unsigned>(n)));
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (int i = static_cast<int>(w); i < n; i += static_cast<int>(workers)) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

Polyline3 planar_arc(const Polyline3& gamma0, double sagitta, int n_vertices) {
    const Vec3 bottom = gamma0.vertices.front();
    const Vec3 top = gamma0.vertices.back();
    if (sagitta < 1e-12) return gamma0;
    const double z_mid = 0.5 * (bottom.z + top.z);
    const double half_chord = 0.5 * std::abs(top.z - bottom.z);
    const double rad = (half_chord * half_chord + sagitta * sagitta) / (2.0 * sagitta);
    const double cx = sagitta - rad;  // circle center (cx, z_mid), apex at x = sagitta
    const double th_bottom = std::atan2(bottom.z - z_mid, -cx);
    const double th_top = std::atan2(top.z - z_mid, -cx);
    Polyline3 out;
    out.vertices.reserve(n_vertices);
    for (int k = 0; k < n_vertices; ++k) {
        const double th = th_bottom + (th_top - th_bottom) * k / (n_vertices - 1);
        out.vertices.push_back({cx + rad * std::cos(th), 0.0, z_mid + rad * std::sin(th)});
    }
    out.vertices.front() = bottom;
    out.vertices.back() = top;
    return out;
}

double max_distance_to_trace(const Polyline3& sample, const Polyline3& gamma0) {
    double worst = 0.0;
    const std::size_t n = sample.vertices.size();
    const std::size_t nseg = sample.closed ? n : n - 1;
    const std::size_t n0 = gamma0.vertices.size();
    const std::size_t nseg0 = gamma0.closed ? n0 : n0 - 1;
    for (std::size_t s = 0; s < nseg; ++s) {
        for (int half = 0; half < 2; ++half) {
            const Vec3 p = half == 0 ? sample.vertices[s]
                                     : (sample.vertices[s] + sample.vertices[(s + 1) % n]) * 0.5;
            double best = 1e300;
            for (std::size_t t = 0; t < nseg0; ++t)
                best = std::min(best,
                                dist_to_segment(p, gamma0.vertices[t], gamma0.vertices[(t + 1) % n0]));
            worst = std::max(worst, best);
        }
    }
    return worst;
}

}  // namespace

const char* family_name(PerturbationFamily f) {
    switch (f) {
        case PerturbationFamily::PlanarArc: return "planar_arc";
        case PerturbationFamily::FourierNormal: return "fourier_normal";
        case PerturbationFamily::TiltedChord: return "tilted_chord";
        case PerturbationFamily::Loop: return "loop";
    }
    return "unknown";
}

std::vector<PerturbationSample> sample_perturbations(const Domain& domain, const Polyline3& gamma0,
                                                     const PerturbationSpec& spec) {
    if (spec.amplitude_grid.empty() || spec.families.empty())
        throw std::invalid_argument("sample_perturbations: empty amplitude grid or family list");
    for (double a : spec.amplitude_grid)
        if (a < 0.0) throw std::invalid_argument("sample_perturbations: amplitudes must be >= 0");

    std::vector<PerturbationSample> out;
    out.reserve(spec.count);
    const int nv = spec.n_vertices;
    const double diam = domain.diameter();
    int produced = 0;
    for (int idx = 0; produced < spec.count; ++idx) {
        const PerturbationFamily family = spec.families[idx % spec.families.size()];
        const double amp = spec.amplitude_grid[(idx / spec.families.size()) % spec.amplitude_grid.size()];
        std::mt19937_64 rng(splitmix64(spec.seed ^ (0x7e57ULL + idx)));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::normal_distribution<double> normal(0.0, 1.0);
        PerturbationSample sample;
        sample.family = family;
        sample.amplitude = amp;
        switch (family) {
            case PerturbationFamily::PlanarArc: {
                sample.curve = planar_arc(gamma0, amp, nv);
                break;
            }
            case PerturbationFamily::FourierNormal: {
                Polyline3 c = resample_arclength(gamma0, nv);
                for (int k = 1; k + 1 < nv; ++k) {
                    const double t = static_cast<double>(k) / (nv - 1);
                    Vec3 d{};
                    for (int m = 1; m <= spec.mode_count; ++m) {
                        const double a_m = amp * (0.3 + 0.7 * unit(rng)) / m;
                        const double psi = 2.0 * M_PI * unit(rng);
                        d += Vec3{std::cos(psi), std::sin(psi), 0.0} * (a_m * std::sin(m * M_PI * t));
                    }
                    Vec3 p = c.vertices[k] + d;
                    if (!domain.contains(p)) p = domain.project_to_boundary(p, d.norm() > 0 ? d : Vec3{0, 0, 1});
                    c.vertices[k] = p;
                }
                c.vertices.front() = domain.project_to_boundary(c.vertices.front(), {0, 0, -1});
                c.vertices.back() = domain.project_to_boundary(c.vertices.back(), {0, 0, 1});
                sample.curve = std::move(c);
                break;
            }
            case PerturbationFamily::TiltedChord: {
                const double beta = amp;
                const double psi = 2.0 * M_PI * unit(rng);
                const Vec3 axis{std::cos(psi), std::sin(psi), 0.0};
                Polyline3 c = resample_arclength(gamma0, nv);
                for (Vec3& v : c.vertices) {
                    // Rodrigues rotation about the horizontal axis by beta
                    v = v * std::cos(beta) + axis.cross(v) * std::sin(beta) +
                        axis * (axis.dot(v) * (1.0 - std::cos(beta)));
                }
                for (std::size_t k = 0; k < c.vertices.size(); ++k) {
                    const bool endpoint = k == 0 || k + 1 == c.vertices.size();
                    if (endpoint) {
                        c.vertices[k] = domain.project_to_boundary(c.vertices[k], {0, 0, k == 0 ? -1.0 : 1.0});
                    } else if (!domain.contains(c.vertices[k])) {
                        c.vertices[k] = domain.project_to_boundary(c.vertices[k], {0, 0, 1});
                    }
                }
                sample.curve = std::move(c);
                break;
            }
            case PerturbationFamily::Loop: {
                const double z_span = domain.z_max() - domain.z_min();
                const double zc = 0.5 * (domain.z_min() + domain.z_max()) + 0.4 * z_span * (unit(rng) - 0.5);
                const double rmax = domain.profile_radius(zc);
                if (rmax < 0.05 * diam) continue;
                const double xc = (0.3 + 0.4 * unit(rng)) * rmax;
                double rad = std::max(0.02 * diam, amp * 0.5 * diam * unit(rng));
                rad = std::min(rad, 0.8 * std::min(xc, rmax - xc));
                if (rad < 1e-3 * diam) continue;
                Polyline3 c;
                c.closed = true;
                const int orient = (idx % 2 == 0) ? 1 : -1;
                for (int k = 0; k < nv; ++k) {
                    const double t = 2.0 * M_PI * k / nv * orient;
                    Vec3 p{xc + rad * std::cos(t), 0.0, zc + rad * std::sin(t)};
                    if (!domain.contains(p)) p = domain.project_to_boundary(p, {0, 0, 1});
                    c.vertices.push_back(p);
                }
                sample.curve = std::move(c);
                break;
            }
        }
        if (sample.curve.vertices.size() < 2) continue;
        out.push_back(std::move(sample));
        ++produced;
    }
    return out;
}

NondegenReport verify_nondegeneracy(const VectorField& field, const Domain& domain, const Polyline3& gamma0,
                                    const std::vector<PerturbationSample>& samples, int n_exponent,
                                    int dictionary_size, int quad_order) {
    NondegenReport report;
    report.n_used = n_exponent;
    report.samples = static_cast<int>(samples.size());
    report.records.resize(samples.size());
    const double r0 = ratio(field, gamma0, quad_order);

    parallel_for(static_cast<int>(samples.size()), [&](int i) {
        const PerturbationSample& s = samples[i];
        SampleRecord rec;
        rec.family = s.family;
        rec.amplitude = s.amplitude;
        rec.flux = circulation(field, s.curve, quad_order);
        rec.len = length(s.curve);
        rec.alpha = r0 - rec.flux / rec.len;
        const StarNormEstimate d = star_distance(s.curve, gamma0, domain, dictionary_size);
        rec.d_star_lower = d.lower;
        rec.d_star_upper = d.upper;
        rec.max_tube_dist = max_distance_to_trace(s.curve, gamma0);
        report.records[i] = rec;
    });

    double min_alpha = 1e300;
    double min_c0 = 1e300;
    int worst = -1;
    for (std::size_t i = 0; i < report.records.size(); ++i) {
        const SampleRecord& rec = report.records[i];
        if (rec.alpha < -1e-9) {
            throw MaximalityViolated("sample " + std::to_string(i) + " (" + family_name(rec.family) +
                                     ", amplitude " + std::to_string(rec.amplitude) + ") has ratio above R(Gamma0) by " +
                                     std::to_string(-rec.alpha));
        }
        min_alpha = std::min(min_alpha, rec.alpha);
        const double denom = std::min(std::pow(rec.d_star_upper, n_exponent), 1.0);
        if (denom <= 0.0) continue;  // exact copy of Gamma0: 0/0 excluded
        const double c0 = rec.alpha / denom;
        if (c0 < min_c0) {
            min_c0 = c0;
            worst = static_cast<int>(i);
        }
    }
    report.min_alpha = min_alpha == 1e300 ? 0.0 : min_alpha;
    report.empirical_c0 = min_c0 == 1e300 ? 0.0 : min_c0;
    report.worst_index = worst;
    if (worst >= 0) {
        report.worst_curve.curve = samples[worst].curve;
        report.worst_curve.flux = report.records[worst].flux;
        report.worst_curve.len = report.records[worst].len;
        report.worst_curve.ratio = report.records[worst].flux / report.records[worst].len;
    }

    // log-log slope over the planar-arc family
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n_fit = 0;
    for (const SampleRecord& rec : report.records) {
        if (rec.family != PerturbationFamily::PlanarArc) continue;
        if (!(rec.alpha > 0.0) || !(rec.d_star_upper > 0.0)) continue;
        const double x = std::log(rec.d_star_upper), y = std::log(rec.alpha);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n_fit;
    }
    report.arc_loglog_slope =
        n_fit >= 2 ? (n_fit * sxy - sx * sy) / std::max(n_fit * sxx - sx * sx, 1e-300) : 0.0;

    // informational: does small dual-norm distance imply no flux gain
    const double flux0 = circulation(field, gamma0, quad_order);
    report.hypde_delta = 0.25 * length(gamma0);
    for (const SampleRecord& rec : report.records) {
        if (rec.d_star_upper > report.hypde_delta) continue;
        ++report.hypde_checked;
        if (rec.flux > flux0 + 1e-9) ++report.hypde_violations;
    }
    return report;
}

LengthControlReport check_length_control(const VectorField& field, const Domain& domain,
                                         const Polyline3& gamma0, const NondegenReport& report,
                                         const std::vector<PerturbationSample>& samples) {
    LengthControlReport out;
    out.samples = static_cast<int>(samples.size());
    out.field_norm = field_c01_norm(field, domain);
    const double r0 = ratio(field, gamma0);
    const double len0 = length(gamma0);
    double max_slack = -1e300;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const SampleRecord& rec = report.records[i];
        const double lhs = std::abs(rec.len - len0);
        const double rhs = (rec.alpha * rec.len + out.field_norm * rec.d_star_upper) / r0;
        const double slack = lhs - rhs;
        max_slack = std::max(max_slack, slack);
        if (slack > 1e-9 * (1.0 + rhs)) ++out.violations;
    }
    out.max_slack = samples.empty() ? 0.0 : max_slack;
    return out;
}

TubularReport check_tubular(const Polyline3& gamma0, const NondegenReport& report,
                            const std::vector<PerturbationSample>& samples,
                            const std::vector<double>& delta_grid) {
    TubularReport out;
    const double len0 = length(gamma0);
    for (double delta : delta_grid) {
        double worst = 0.0;
        int admitted = 0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const SampleRecord& rec = report.records[i];
            if (rec.d_star_upper > delta) continue;
            if (std::abs(rec.len - len0) > delta) continue;
            ++admitted;
            worst = std::max(worst, rec.max_tube_dist);
        }
        out.delta_grid.push_back(delta);
        out.admitted.push_back(admitted);
        out.fitted_c.push_back(delta > 0.0 ? worst / std::sqrt(delta) : 0.0);
    }
    return out;
}

PositivityReport positivity_scan(const AxisymField& f) {
    PositivityReport out;
    double min_u = 1e300;
    for (int j = 0; j < f.n_z; ++j) {
        for (int i = 0; i < f.n_r; ++i) {
            if (!f.inside[static_cast<std::size_t>(j) * f.n_r + i]) continue;
            if (f.at(i, j) < min_u) {
                min_u = f.at(i, j);
                out.min_x = f.node_r(i);
                out.min_z = f.node_z(j);
            }
        }
    }
    out.min_curl_theta = min_u == 1e300 ? 0.0 : min_u;

    // curl H0 . theta-hat = -(Delta u)_theta evaluated with the same flux-form
    // stencil the solve uses: equals -u 1_Omega plus the algebraic residual
    double max_curl_h = -1e300;
    const double inv_hr2 = 1.0 / (f.h_r * f.h_r);
    const double inv_hz2 = 1.0 / (f.h_z * f.h_z);
    for (int j = 1; j + 1 < f.n_z; ++j) {
        for (int i = 1; i + 1 < f.n_r; ++i) {
            const double r = f.node_r(i);
            const double lap = ((r + 0.5 * f.h_r) * (f.at(i + 1, j) - f.at(i, j)) -
                                (r - 0.5 * f.h_r) * (f.at(i, j) - f.at(i - 1, j))) *
                                   inv_hr2 / r -
                               f.at(i, j) / (r * r) +
                               (f.at(i, j + 1) - 2.0 * f.at(i, j) + f.at(i, j - 1)) * inv_hz2;
            max_curl_h = std::max(max_curl_h, -lap);
        }
    }
    out.max_curl_h_theta = max_curl_h;
    out.pass = out.min_curl_theta >= -1e-8 && out.max_curl_h_theta <= 1e-8;
    return out;
}

PositivityReport positivity_scan(const BallField& field, int n_rho, int n_phi) {
    PositivityReport out;
    double min_v = 1e300;
    for (int a = 0; a <= n_phi; ++a) {
        const double phi = M_PI * a / n_phi;
        for (int b = 1; b <= n_rho; ++b) {
            const double rho = field.radius() * b / (n_rho + 1);
            const double x = rho * std::sin(phi), z = rho * std::cos(phi);
            const double v = field.curl_meridian(x, z);
            if (v < min_v) {
                min_v = v;
                out.min_x = x;
                out.min_z = z;
            }
        }
    }
    out.min_curl_theta = min_v;
    out.max_curl_h_theta = 0.0;
    out.pass = out.min_curl_theta >= -1e-8;
    return out;
}

}  // namespace isoflux
