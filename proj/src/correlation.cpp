#include "molcool/correlation.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <random>
#include <string>
#include <thread>

#include "molcool/errors.hpp"

namespace molcool {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    // splitmix64 over the stream index
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<double> default_tau_grid(double tau_min, double tau_max, int n_points,
                                     double sample_interval) {
    std::vector<double> grid{0.0};
    if (tau_max < tau_min || n_points < 2) return grid;
    double last = 0.0;
    for (int i = 0; i < n_points; ++i) {
        const double tau = tau_min * std::pow(tau_max / tau_min, i / double(n_points - 1));
        // snap to the sampling grid, skip duplicates
        const double snapped = std::max(1.0, std::round(tau / sample_interval)) * sample_interval;
        if (snapped > last) {
            grid.push_back(snapped);
            last = snapped;
        }
    }
    return grid;
}

ParticleCorrelation correlate_samples(const std::vector<Vec3>& samples, double sample_interval,
                                      const std::vector<double>& tau_grid) {
    const long n = static_cast<long>(samples.size());
    ParticleCorrelation pc;
    pc.c_x.assign(tau_grid.size(), 0.0);
    pc.c_y.assign(tau_grid.size(), 0.0);
    pc.c_z.assign(tau_grid.size(), 0.0);
    for (size_t j = 0; j < tau_grid.size(); ++j) {
        const long lag = std::lround(tau_grid[j] / sample_interval);
        const long pairs = n - lag;
        if (lag < 0 || pairs < 8) {
            throw NumericError("correlate_samples: insufficient samples for lag " +
                               std::to_string(tau_grid[j]) + " s");
        }
        if (lag == 0) continue;  // c(0) = 0 identically
        double sx = 0.0, sy = 0.0, sz = 0.0;
        for (long i = 0; i < pairs; ++i) {
            const double dx = std::fabs(samples[i][0]) - std::fabs(samples[i + lag][0]);
            const double dy = std::fabs(samples[i][1]) - std::fabs(samples[i + lag][1]);
            const double dz = std::fabs(samples[i][2]) - std::fabs(samples[i + lag][2]);
            sx += dx * dx;
            sy += dy * dy;
            sz += dz * dz;
        }
        pc.c_x[j] = sx / pairs;
        pc.c_y[j] = sy / pairs;
        pc.c_z[j] = sz / pairs;
    }
    return pc;
}

namespace {

CorrelationSeries average_correlations(const std::vector<ParticleCorrelation>& per_particle,
                                       const std::vector<double>& tau_grid) {
    CorrelationSeries out;
    out.tau = tau_grid;
    out.c_x.assign(tau_grid.size(), 0.0);
    out.c_y.assign(tau_grid.size(), 0.0);
    out.c_z.assign(tau_grid.size(), 0.0);
    long n_used = 0;
    for (const auto& pc : per_particle) {
        if (pc.lost) continue;
        ++n_used;
        for (size_t j = 0; j < tau_grid.size(); ++j) {
            out.c_x[j] += pc.c_x[j];
            out.c_y[j] += pc.c_y[j];
            out.c_z[j] += pc.c_z[j];
        }
    }
    if (n_used == 0) throw NumericError("velocity_correlation: no surviving particles");
    for (size_t j = 0; j < tau_grid.size(); ++j) {
        out.c_x[j] /= n_used;
        out.c_y[j] /= n_used;
        out.c_z[j] /= n_used;
    }
    return out;
}

}  // namespace

CorrelationSeries velocity_correlation(const std::vector<std::vector<Vec3>>& samples,
                                       double sample_interval,
                                       const std::vector<double>& tau_grid) {
    std::vector<ParticleCorrelation> per;
    per.reserve(samples.size());
    for (const auto& s : samples) per.push_back(correlate_samples(s, sample_interval, tau_grid));
    return average_correlations(per, tau_grid);
}

MixingFit fit_mixing_probability(const CorrelationSeries& series) {
    if (series.collision_rate <= 0.0) {
        throw NumericError("fit_mixing_probability: collision rate must be positive");
    }
    const size_t n = series.tau.size();
    if (n < 4) throw NumericError("fit_mixing_probability: tau grid too short");
    const size_t lo = n / 2;  // large-tau half

    std::vector<double> taus, ys;
    for (size_t j = lo; j < n; ++j) {
        taus.push_back(series.tau[j]);
        ys.push_back(series.c_x[j]);
    }
    for (size_t j = lo; j < n; ++j) {
        taus.push_back(series.tau[j]);
        ys.push_back(series.c_y[j]);
    }

    const double nu = series.collision_rate;
    auto rss_for = [&](double q, double* c_inf_out) {
        // model linear in c_inf: g = 1 - (1-q)^(nu tau)
        double gg = 0.0, gy = 0.0;
        for (size_t i = 0; i < taus.size(); ++i) {
            const double g = 1.0 - std::pow(1.0 - q, nu * taus[i]);
            gg += g * g;
            gy += g * ys[i];
        }
        const double c_inf = gg > 0 ? std::max(0.0, gy / gg) : 0.0;
        double rss = 0.0;
        for (size_t i = 0; i < taus.size(); ++i) {
            const double g = 1.0 - std::pow(1.0 - q, nu * taus[i]);
            const double r = ys[i] - c_inf * g;
            rss += r * r;
        }
        if (c_inf_out) *c_inf_out = c_inf;
        return rss;
    };

    double best_q = 0.0, best_rss = -1.0;
    for (int i = 1; i < 500; ++i) {
        const double q = i / 500.0;
        const double rss = rss_for(q, nullptr);
        if (best_rss < 0 || rss < best_rss) {
            best_rss = rss;
            best_q = q;
        }
    }
    // golden-section refine around the grid minimum
    double a = std::max(1e-4, best_q - 1.0 / 500.0);
    double b = std::min(1.0 - 1e-4, best_q + 1.0 / 500.0);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = rss_for(x1, nullptr), f2 = rss_for(x2, nullptr);
    for (int it = 0; it < 60; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = rss_for(x1, nullptr);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = rss_for(x2, nullptr);
        }
    }
    MixingFit fit;
    fit.q = 0.5 * (a + b);
    fit.residual = std::sqrt(rss_for(fit.q, &fit.c_inf) / taus.size());
    if (!std::isfinite(fit.q) || !std::isfinite(fit.c_inf)) {
        throw NumericError("fit_mixing_probability: fit failed to converge");
    }
    return fit;
}

TrapStudyResult run_trap_study(const TrapStudyParams& params) {
    params.geometry.validate();
    if (params.n_particles <= 0) throw ConfigError("run_trap_study: n_particles must be positive");
    if (params.duration <= 0 || params.speed <= 0) {
        throw ConfigError("run_trap_study: duration and speed must be positive");
    }

    std::vector<double> tau_grid = params.tau_grid;
    if (tau_grid.empty()) {
        tau_grid = default_tau_grid(1e-3, 0.5 * params.duration, 25, params.sample_interval);
    }

    const int n = params.n_particles;
    std::vector<ParticleCorrelation> per(n);
    std::vector<long> colls(n, 0);
    std::vector<double> drifts(n, 0.0);

    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::string fail_msg;
    std::mutex fail_mutex;

    auto work = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n || failed.load()) break;
            try {
                std::mt19937_64 rng(derive_seed(params.seed, i));
                std::uniform_real_distribution<double> uni(0.0, 1.0);

                Particle p;
                p.state = params.state;
                p.rng_seed = derive_seed(params.seed, i);
                // launch inside the homogeneous-field core
                p.position[0] = (2.0 * uni(rng) - 1.0) * 0.7 * params.geometry.half_width;
                p.position[1] = (0.25 + 0.5 * uni(rng)) * params.geometry.plate_gap;
                p.position[2] = (2.0 * uni(rng) - 1.0) * 0.7 * params.geometry.half_width;
                const double cth = 2.0 * uni(rng) - 1.0;
                const double sth = std::sqrt(std::max(0.0, 1.0 - cth * cth));
                const double phi = 2.0 * M_PI * uni(rng);
                p.velocity = {params.speed * sth * std::cos(phi),
                              params.speed * sth * std::sin(phi), params.speed * cth};

                IntegratorOptions opt;
                opt.sample_interval = params.sample_interval;
                TrajectoryResult tr = integrate_trajectory(params.molecule, params.state,
                                                           params.geometry, p, params.duration, opt);
                drifts[i] = tr.energy_drift;
                colls[i] = tr.collisions;
                if (tr.lost) {
                    per[i].lost = true;
                    per[i].c_x.assign(tau_grid.size(), 0.0);
                    per[i].c_y.assign(tau_grid.size(), 0.0);
                    per[i].c_z.assign(tau_grid.size(), 0.0);
                } else {
                    per[i] = correlate_samples(tr.velocity_samples, params.sample_interval,
                                               tau_grid);
                }
                per[i].collisions = tr.collisions;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(fail_mutex);
                failed.store(true);
                if (fail_msg.empty()) fail_msg = e.what();
            }
        }
    };

    int n_threads = params.threads > 0 ? params.threads
                                       : static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads <= 0) n_threads = 1;
    n_threads = std::min(n_threads, n);
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (failed.load()) throw NumericError("run_trap_study: " + fail_msg);

    TrapStudyResult res;
    res.per_particle = std::move(per);
    res.collision_counts = colls;
    long total_colls = 0;
    long n_used = 0;
    for (int i = 0; i < n; ++i) {
        res.max_energy_drift = std::max(res.max_energy_drift, drifts[i]);
        if (res.per_particle[i].lost) {
            ++res.n_lost;
        } else {
            total_colls += colls[i];
            ++n_used;
        }
    }
    res.correlation = average_correlations(res.per_particle, tau_grid);
    res.correlation.collision_rate =
        n_used > 0 ? total_colls / (static_cast<double>(n_used) * params.duration) : 0.0;
    return res;
}

}  // namespace molcool
