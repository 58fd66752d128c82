#include "isoflux/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <thread>

#include "isoflux/ball_field.hpp"
#include "isoflux/errors.hpp"

namespace isoflux {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

int worker_count() {
    if (const char* env = std::getenv("ISOFLUX_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

// Interior vertices sit a Jacobian-probe width inside the boundary so field
// evaluations along adjacent segments stay in the field's domain.
Vec3 clamp_to_closure(const Domain& domain, const Vec3& p, const Vec3& hint, double inset) {
    Vec3 q = p;
    if (!domain.contains(q)) q = domain.project_to_boundary(q, hint);
    const double d = domain.contains(q) ? domain.boundary_distance(q) : 0.0;
    if (d >= inset) return q;
    const Vec3 axis_point{0.0, 0.0, std::clamp(q.z, domain.z_min() + inset, domain.z_max() - inset)};
    const Vec3 inward = (axis_point - q).normalized();
    const Vec3 pulled = q + inward * (inset - d);
    return domain.contains(pulled) && domain.boundary_distance(pulled) >= d ? pulled : q;
}

double clamp_inset(const OptimizerConfig& config) { return 3.0 * config.fd_step; }

CurveCandidate make_candidate(const VectorField& field, const Polyline3& c, int quad_order,
                              CurveCandidate::Provenance prov) {
    CurveCandidate cand;
    cand.curve = c;
    cand.flux = circulation(field, c, quad_order);
    cand.len = length(c);
    cand.ratio = cand.flux / cand.len;
    cand.provenance = prov;
    return cand;
}

// tie-break: larger ratio, then smaller length, then lexicographic first vertex
bool better_candidate(const CurveCandidate& a, const CurveCandidate& b) {
    if (std::abs(a.ratio - b.ratio) > 1e-12) return a.ratio > b.ratio;
    if (std::abs(a.len - b.len) > 1e-12) return a.len < b.len;
    const Vec3& va = a.curve.vertices.front();
    const Vec3& vb = b.curve.vertices.front();
    if (va.x != vb.x) return va.x < vb.x;
    if (va.y != vb.y) return va.y < vb.y;
    return va.z < vb.z;
}

Vec3 random_boundary_point(const Domain& domain, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int attempt = 0; attempt < 256; ++attempt) {
        const Vec3 dir{unit(rng), unit(rng), unit(rng)};
        if (dir.norm() < 1e-3 || dir.norm() > 1.0) continue;
        const double zc = 0.5 * (domain.z_min() + domain.z_max());
        try {
            return domain.project_to_boundary(Vec3{0.0, 0.0, zc} + dir * (2.0 * domain.diameter()), dir);
        } catch (const AmbiguousProjection&) {
            continue;
        }
    }
    return {0.0, 0.0, domain.z_max()};
}

Polyline3 chord_between(const Vec3& a, const Vec3& b, int n_vertices, const Domain& domain,
                        double inset) {
    Polyline3 c;
    c.vertices.reserve(n_vertices);
    for (int k = 0; k < n_vertices; ++k) {
        const double t = static_cast<double>(k) / (n_vertices - 1);
        Vec3 p = a + (b - a) * t;
        if (k > 0 && k + 1 < n_vertices) p = clamp_to_closure(domain, p, {0, 0, 1}, inset);
        c.vertices.push_back(p);
    }
    return c;
}

struct AscentEngine {
    const VectorField& field;
    const Domain& domain;
    const OptimizerConfig& config;
    bool loop_mode;

    void clamp(Polyline3& c, const std::vector<Vec3>& dirs) const {
        const std::size_t n = c.vertices.size();
        for (std::size_t k = 0; k < n; ++k) {
            const Vec3 hint = k < dirs.size() && dirs[k].norm() > 0 ? dirs[k] : Vec3{0, 0, 1};
            const bool endpoint = !loop_mode && (k == 0 || k + 1 == n);
            if (endpoint) {
                c.vertices[k] = domain.project_to_boundary(c.vertices[k], hint);
            } else {
                c.vertices[k] = clamp_to_closure(domain, c.vertices[k], hint, clamp_inset(config));
            }
        }
    }

    CurveCandidate run(Polyline3 curve, CurveCandidate::Provenance prov) const {
        curve.closed = loop_mode;
        if (static_cast<int>(curve.vertices.size()) != config.n_vertices)
            curve = resample_arclength(curve, config.n_vertices);
        clamp(curve, {});
        const double min_len = 1e-6 * domain.diameter();
        double len = length(curve);
        if (len < min_len) throw DegenerateCurve("ratio_ascent: initial curve is degenerate");
        double flux = circulation(field, curve, config.quad_order);
        double r = flux / len;

        double step = config.step;
        int stall = 0;
        for (int iter = 1; iter <= config.max_iters; ++iter) {
            const auto g_flux = flux_gradient(field, curve, config.fd_step, config.quad_order);
            const auto g_len = length_gradient(curve);
            std::vector<Vec3> grad(curve.vertices.size());
            double gmax = 0.0;
            for (std::size_t k = 0; k < grad.size(); ++k) {
                grad[k] = (g_flux[k] - g_len[k] * r) / len;
                gmax = std::max(gmax, grad[k].norm());
            }
            if (gmax < 1e-15) break;

            bool accepted = false;
            double trial_r = r, trial_flux = flux, trial_len = len;
            Polyline3 trial;
            while (step >= 1e-12) {
                trial = curve;
                for (std::size_t k = 0; k < grad.size(); ++k)
                    trial.vertices[k] += grad[k] * (step / gmax);
                clamp(trial, grad);
                trial_len = length(trial);
                if (trial_len < min_len) throw DegenerateCurve("ratio_ascent: curve length collapsed");
                trial_flux = circulation(field, trial, config.quad_order);
                trial_r = trial_flux / trial_len;
                if (trial_r > r) {
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) break;
            const double improvement = (trial_r - r) / std::max(std::abs(r), 1e-300);
            curve = std::move(trial);
            r = trial_r;
            flux = trial_flux;
            len = trial_len;
            step = std::min(step * 1.5, config.step);

            if (iter % 25 == 0) {
                Polyline3 res = resample_arclength(curve, config.n_vertices);
                clamp(res, {});
                const double res_len = length(res);
                const double res_flux = circulation(field, res, config.quad_order);
                if (res_len >= min_len && res_flux / res_len >= r - 1e-9) {
                    curve = std::move(res);
                    len = res_len;
                    flux = res_flux;
                    r = res_flux / res_len;
                }
            }
            if (improvement < config.tol_rel) {
                if (++stall >= 3) break;
            } else {
                stall = 0;
            }
        }
        CurveCandidate out = make_candidate(field, curve, config.quad_order, prov);
        return out;
    }

    CurveCandidate run_with_annealing(Polyline3 init, std::uint64_t rng_seed,
                                      CurveCandidate::Provenance prov) const {
        CurveCandidate best = run(std::move(init), prov);
        std::mt19937_64 rng(rng_seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        double amp = 0.1 * domain.diameter();
        OptimizerConfig quick = config;
        quick.max_iters = std::max(25, config.max_iters / 4);
        for (int round = 0; round < config.anneal_rounds; ++round) {
            Polyline3 pert = best.curve;
            for (std::size_t k = 0; k < pert.vertices.size(); ++k) {
                const bool endpoint = !loop_mode && (k == 0 || k + 1 == pert.vertices.size());
                pert.vertices[k] += Vec3{normal(rng), normal(rng), normal(rng)} * amp;
                if (endpoint) pert.vertices[k] = domain.project_to_boundary(pert.vertices[k], {0, 0, 1});
            }
            try {
                AscentEngine quick_engine{field, domain, quick, loop_mode};
                CurveCandidate cand = quick_engine.run(std::move(pert), CurveCandidate::Provenance::Annealing);
                if (better_candidate(cand, best)) best = cand;
            } catch (const Error&) {
                // perturbation collapsed or left the field's domain; skip the round
            }
            amp *= config.anneal_schedule;
        }
        return best;
    }
};

MultistartResult run_multistart(const VectorField& field, const Domain& domain,
                                const OptimizerConfig& config, bool loop_mode,
                                std::vector<Polyline3> roster) {
    validate(config);
    AscentEngine engine{field, domain, config, loop_mode};

    if (!loop_mode) {
        for (int s = 0; s < config.n_starts; ++s) {
            std::mt19937_64 rng(splitmix64(config.seed ^ (0x5151ULL + s)));
            Vec3 a = random_boundary_point(domain, rng);
            Vec3 b = random_boundary_point(domain, rng);
            for (int attempt = 0; attempt < 64 && dist(a, b) < 0.2 * domain.diameter(); ++attempt)
                b = random_boundary_point(domain, rng);
            roster.push_back(chord_between(a, b, config.n_vertices, domain, clamp_inset(config)));
        }
    } else {
        std::mt19937_64 rng(splitmix64(config.seed ^ 0x100bULL));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int s = 0; s < config.n_starts; ++s) {
            const double zc = domain.z_min() + (0.2 + 0.6 * unit(rng)) * (domain.z_max() - domain.z_min());
            const double rmax = domain.profile_radius(zc);
            const double xc = (0.25 + 0.5 * unit(rng)) * rmax;
            const double rad = std::min(0.35 * rmax, 0.8 * std::min(xc, rmax - xc));
            if (rad < 1e-3 * domain.diameter()) continue;
            Polyline3 c;
            c.closed = true;
            const int orient = (s % 2 == 0) ? 1 : -1;
            for (int k = 0; k < config.n_vertices; ++k) {
                const double t = 2.0 * M_PI * k / config.n_vertices * orient;
                c.vertices.push_back({xc + rad * std::cos(t), 0.0, zc + rad * std::sin(t)});
            }
            roster.push_back(std::move(c));
        }
    }

    const int n_tasks = static_cast<int>(roster.size());
    std::vector<CurveCandidate> results(n_tasks);
    std::vector<char> ok(n_tasks, 0);
    const int workers = std::min(worker_count(), std::max(1, n_tasks));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (int t = w; t < n_tasks; t += workers) {
                try {
                    results[t] = engine.run_with_annealing(roster[t], splitmix64(config.seed ^ (0xa11ULL + t)),
                                                           CurveCandidate::Provenance::Ascent);
                    ok[t] = 1;
                } catch (const Error&) {
                    ok[t] = 0;
                }
            }
        });
    }
    for (auto& th : pool) th.join();

    MultistartResult out;
    bool have = false;
    for (int t = 0; t < n_tasks; ++t) {
        if (!ok[t]) continue;
        out.all_starts.push_back(results[t]);
        if (!have || better_candidate(results[t], out.best)) {
            out.best = results[t];
            have = true;
        }
    }
    if (!have) throw DegenerateCurve("multistart: every start degenerated");
    out.r0 = out.best.ratio;
    return out;
}

}  // namespace

void validate(const OptimizerConfig& config) {
    if (config.n_vertices < 3) throw std::invalid_argument("OptimizerConfig: n_vertices must be >= 3");
    if (!(config.anneal_schedule > 0.0) || !(config.anneal_schedule < 1.0))
        throw std::invalid_argument("OptimizerConfig: anneal_schedule must lie in (0,1)");
    if (!(config.step > 0.0)) throw std::invalid_argument("OptimizerConfig: step must be positive");
    if (config.max_iters < 1 || config.n_starts < 0)
        throw std::invalid_argument("OptimizerConfig: iteration and start counts must be positive");
}

Polyline3 diameter_curve(const Domain& domain) {
    Polyline3 c;
    c.vertices = {{0.0, 0.0, domain.z_min()}, {0.0, 0.0, domain.z_max()}};
    return c;
}

std::pair<Polyline3, Polyline3> sector_competitors(const Domain& ball, double phi1, double phi2) {
    if (!ball.is_ball()) throw std::invalid_argument("sector_competitors: ball domain required");
    if (!(phi1 >= 0.0) || !(phi2 >= phi1) || !(phi2 <= M_PI))
        throw InvalidAngles("sector_competitors: need 0 <= phi1 <= phi2 <= pi");
    const double r = ball.radius();
    const Vec3 p1{r * std::sin(phi1), 0.0, r * std::cos(phi1)};
    const Vec3 p2{r * std::sin(phi2), 0.0, r * std::cos(phi2)};
    Polyline3 sector;
    sector.vertices = {p2, {0.0, 0.0, 0.0}, p1};
    Polyline3 chord;
    chord.vertices = {p2, p1};
    return {sector, chord};
}

std::vector<Vec3> flux_gradient(const VectorField& field, const Polyline3& c, double fd_step,
                                int quad_order) {
    if (!(fd_step > 0.0)) throw std::invalid_argument("flux_gradient: fd_step must be positive");
    const auto& gl = gauss_legendre_01(quad_order);
    const std::size_t n = c.vertices.size();
    std::vector<Vec3> grad(n);
    const std::size_t nseg = c.closed ? n : n - 1;
    const double h = fd_step;
    for (std::size_t s = 0; s < nseg; ++s) {
        const Vec3& a = c.vertices[s];
        const Vec3& b = c.vertices[(s + 1) % n];
        const Vec3 d = b - a;
        Vec3 ga{}, gb{};
        for (const auto& [t, w] : gl) {
            const Vec3 x = a + d * t;
            Vec3 bv, jtd;
            try {
                bv = field(x);
                const Vec3 ex{h, 0, 0}, ey{0, h, 0}, ez{0, 0, h};
                jtd = Vec3{(field(x + ex) - field(x - ex)).dot(d), (field(x + ey) - field(x - ey)).dot(d),
                           (field(x + ez) - field(x - ez)).dot(d)} /
                      (2.0 * h);
            } catch (const std::exception& e) {
                throw FieldEvaluation("flux_gradient: field evaluation failed on segment " +
                                      std::to_string(s) + ": " + e.what());
            }
            gb += (jtd * t + bv) * w;
            ga += (jtd * (1.0 - t) - bv) * w;
        }
        grad[s] += ga * static_cast<double>(c.multiplicity);
        grad[(s + 1) % n] += gb * static_cast<double>(c.multiplicity);
    }
    return grad;
}

std::vector<Vec3> length_gradient(const Polyline3& c) {
    const std::size_t n = c.vertices.size();
    std::vector<Vec3> grad(n);
    const std::size_t nseg = c.closed ? n : n - 1;
    const double m = std::abs(c.multiplicity);
    for (std::size_t s = 0; s < nseg; ++s) {
        const Vec3 u = (c.vertices[(s + 1) % n] - c.vertices[s]).normalized();
        grad[s] -= u * m;
        grad[(s + 1) % n] += u * m;
    }
    return grad;
}

CurveCandidate ratio_ascent(const VectorField& field, const Domain& domain, const Polyline3& init,
                            const OptimizerConfig& config) {
    validate(config);
    AscentEngine engine{field, domain, config, init.closed};
    return engine.run(init, CurveCandidate::Provenance::Ascent);
}

MultistartResult multistart_maximize(const VectorField& field, const Domain& domain,
                                     const OptimizerConfig& config) {
    std::vector<Polyline3> generators;
    generators.push_back(diameter_curve(domain));
    return run_multistart(field, domain, config, false, std::move(generators));
}

MultistartResult loop_supremum_probe(const VectorField& field, const Domain& domain,
                                     const OptimizerConfig& config) {
    // deterministic loop generators: meridian circles plus axis-encircling
    // horizontal circles at a few stations
    std::vector<Polyline3> generators;
    const double zc = 0.5 * (domain.z_min() + domain.z_max());
    const double zspan = domain.z_max() - domain.z_min();
    for (double fz : {0.0, 0.25, -0.25}) {
        const double z = zc + fz * zspan * 0.5;
        const double rmax = domain.profile_radius(z);
        if (rmax <= 0.0) continue;
        for (double fx : {0.5, 0.7}) {
            const double xc = fx * rmax;
            const double rad = 0.8 * std::min(xc, rmax - xc);
            if (rad < 1e-3 * domain.diameter()) continue;
            for (int orient : {1, -1}) {
                Polyline3 c;
                c.closed = true;
                for (int k = 0; k < config.n_vertices; ++k) {
                    const double t = 2.0 * M_PI * k / config.n_vertices * orient;
                    c.vertices.push_back({xc + rad * std::cos(t), 0.0, z + rad * std::sin(t)});
                }
                generators.push_back(std::move(c));
            }
        }
        for (double frho : {0.4, 0.7, 0.95}) {
            const double rho = frho * rmax;
            if (rho < 1e-3 * domain.diameter()) continue;
            for (int orient : {1, -1}) {
                Polyline3 c;
                c.closed = true;
                for (int k = 0; k < config.n_vertices; ++k) {
                    const double t = 2.0 * M_PI * k / config.n_vertices * orient;
                    c.vertices.push_back({rho * std::cos(t), rho * std::sin(t), z});
                }
                generators.push_back(std::move(c));
            }
        }
    }
    return run_multistart(field, domain, config, true, std::move(generators));
}

VectorField torus_field(double major, double minor, double winding, double decay) {
    if (!(major > 0.0) || !(minor > 0.0) || !(minor < major))
        throw std::invalid_argument("torus_field: need 0 < minor < major");
    return [=](const Vec3& p) -> Vec3 {
        const double rc = p.rho();
        const Vec3 tor = rc > 1e-300 ? Vec3{-p.y / rc, p.x / rc, 0.0} : Vec3{0.0, 1.0, 0.0};
        const double dr = rc - major;
        const double d = std::hypot(dr, p.z);
        Vec3 pol{0.0, 0.0, 1.0};
        if (d > 1e-300 && rc > 1e-300) {
            const Vec3 er{p.x / rc, p.y / rc, 0.0};
            pol = er * (-p.z / d) + Vec3{0.0, 0.0, dr / d};
        }
        // rotation number `winding` on every nested torus: the poloidal angle
        // advances by winding per toroidal turn, so integral curves are dense
        // and the core circle is the only closed one
        const Vec3 dir = (tor * rc + pol * (winding * d)) / std::hypot(rc, winding * d);
        double mag = d <= minor ? 1.0 : std::exp(-decay * (d - minor) * (d - minor));
        mag *= std::min(1.0, 2.0 * rc / major);
        return dir * mag;
    };
}

VectorField retracted_ball_field(const BallField& field) {
    return [f = field](const Vec3& p) {
        const double n = p.norm();
        return n > f.radius() ? f(p * (f.radius() / n)) : f(p);
    };
}

}  // namespace isoflux
