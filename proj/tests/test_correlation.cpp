#include <doctest.h>

#include <cmath>
#include <random>

#include "molcool/correlation.hpp"

using namespace molcool;

namespace {

// Synthetic trajectories of the discrete Markov mixing model: fixed speed,
// near-regular collisions with random phase, complete isotropic direction
// re-randomization with probability q at each collision. This generator is
// the independent oracle for the fitter.
std::vector<std::vector<Vec3>> markov_samples(double q, double nu, double speed, int n_particles,
                                              double duration, double dt, std::uint64_t seed) {
    std::vector<std::vector<Vec3>> all;
    all.reserve(n_particles);
    const long n = static_cast<long>(std::floor(duration / dt)) + 1;
    for (int p = 0; p < n_particles; ++p) {
        std::mt19937_64 rng(derive_seed(seed, p));
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        auto isotropic = [&]() {
            const double c = 2 * uni(rng) - 1;
            const double s = std::sqrt(std::max(0.0, 1 - c * c));
            const double phi = 2 * M_PI * uni(rng);
            return Vec3{speed * s * std::cos(phi), speed * s * std::sin(phi), speed * c};
        };
        Vec3 v = isotropic();
        double next_coll = uni(rng) / nu;
        std::vector<Vec3> samples;
        samples.reserve(n);
        for (long i = 0; i < n; ++i) {
            const double t = i * dt;
            while (t >= next_coll) {
                if (uni(rng) < q) v = isotropic();
                next_coll += 1.0 / nu;
            }
            samples.push_back(v);
        }
        all.push_back(std::move(samples));
    }
    return all;
}

}  // namespace

TEST_CASE("correlation vanishes at zero lag and grows to the isotropic asymptote") {
    const double speed = 10.0;
    const auto samples = markov_samples(1.0, 800.0, speed, 60, 1.0, 1e-4, 2);
    const std::vector<double> tau = default_tau_grid(1e-3, 0.5, 20, 1e-4);
    const CorrelationSeries c = velocity_correlation(samples, 1e-4, tau);

    CHECK(c.tau[0] == 0.0);
    CHECK(c.c_x[0] == 0.0);
    CHECK(c.c_y[0] == 0.0);
    CHECK(c.c_z[0] == 0.0);

    // q = 1: fully mixed after one mean collision time
    const double c_inf = speed * speed / 6.0;
    for (size_t j = 0; j < tau.size(); ++j) {
        if (tau[j] < 2.0 / 800.0) continue;
        CHECK(c.c_x[j] == doctest::Approx(c_inf).epsilon(0.1));
        CHECK(c.c_y[j] == doctest::Approx(c_inf).epsilon(0.1));
        CHECK(c.c_z[j] == doctest::Approx(c_inf).epsilon(0.1));
    }
}

TEST_CASE("fitter recovers q = 0.2 from synthetic Markov data") {
    const double q_true = 0.2, nu = 800.0;
    const auto samples = markov_samples(q_true, nu, 10.0, 100, 2.0, 1e-4, 5);
    const std::vector<double> tau = default_tau_grid(1e-3, 1.0, 25, 1e-4);
    CorrelationSeries c = velocity_correlation(samples, 1e-4, tau);
    c.collision_rate = nu;

    const MixingFit fit = fit_mixing_probability(c);
    CHECK(fit.q == doctest::Approx(q_true).epsilon(0.1));
    CHECK(std::fabs(fit.q - q_true) < 0.02);
    CHECK(fit.c_inf == doctest::Approx(10.0 * 10.0 / 6.0).epsilon(0.1));
}

TEST_CASE("fitter error paths") {
    CorrelationSeries empty;
    empty.tau = {0.0, 0.1, 0.2, 0.3};
    empty.c_x = {0, 1, 2, 3};
    empty.c_y = {0, 1, 2, 3};
    empty.c_z = {0, 0, 0, 0};
    empty.collision_rate = 0.0;
    CHECK_THROWS(fit_mixing_probability(empty));
}

TEST_CASE("insufficient samples raise a statistics error") {
    std::vector<std::vector<Vec3>> samples(1, std::vector<Vec3>(50, Vec3{1, 2, 3}));
    CHECK_THROWS(velocity_correlation(samples, 1e-4, {0.0, 45 * 1e-4}));
}

TEST_CASE("seed derivation is deterministic and spread out") {
    CHECK(derive_seed(7, 0) == derive_seed(7, 0));
    CHECK(derive_seed(7, 0) != derive_seed(7, 1));
    CHECK(derive_seed(7, 0) != derive_seed(8, 0));
}
