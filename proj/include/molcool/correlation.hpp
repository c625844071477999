#ifndef MOLCOOL_CORRELATION_HPP
#define MOLCOOL_CORRELATION_HPP

#include <cstdint>
#include <vector>

#include "molcool/trajectory.hpp"

namespace molcool {

// Temporal correlation <(|v_i(t)| - |v_i(t+tau)|)^2> per Cartesian
// component, time-averaged per particle, ensemble-averaged over particles.
struct CorrelationSeries {
    std::vector<double> tau;  // s, tau[0] == 0 by convention
    std::vector<double> c_x;  // m^2/s^2
    std::vector<double> c_y;
    std::vector<double> c_z;
    double collision_rate = 0.0;  // plate collisions per particle per second
};

// Per-particle correlation contribution (equal-weight ensemble member).
struct ParticleCorrelation {
    std::vector<double> c_x, c_y, c_z;
    long collisions = 0;
    bool lost = false;
};

ParticleCorrelation correlate_samples(const std::vector<Vec3>& samples, double sample_interval,
                                      const std::vector<double>& tau_grid);

// Ensemble average over per-particle series (lost particles excluded).
CorrelationSeries velocity_correlation(const std::vector<std::vector<Vec3>>& samples,
                                       double sample_interval,
                                       const std::vector<double>& tau_grid);

// {0} followed by n_points log-spaced lags from tau_min to tau_max.
std::vector<double> default_tau_grid(double tau_min, double tau_max, int n_points,
                                     double sample_interval);

struct MixingFit {
    double q = 0.0;        // mixing probability per plate collision
    double c_inf = 0.0;    // fitted asymptote
    double residual = 0.0; // rms misfit over the fitted points
};

// Least-squares fit of c(tau) = c_inf (1 - (1-q)^(nu tau)) to c_x and c_y
// over the large-tau half of the grid; nu = series.collision_rate.
MixingFit fit_mixing_probability(const CorrelationSeries& series);

// Whole-ensemble trajectory study.
struct TrapStudyParams {
    MoleculeSpec molecule;
    RotationalState state{0, 2, 2, -2};
    TrapGeometry geometry;
    int n_particles = 200;
    double duration = 1.0;       // s per particle
    double speed = 10.0;         // m/s, launch speed
    double sample_interval = 1e-5;
    std::vector<double> tau_grid;  // empty = default grid up to duration/2
    std::uint64_t seed = 1;
    int threads = 0;             // 0 = hardware concurrency
};

struct TrapStudyResult {
    CorrelationSeries correlation;
    std::vector<ParticleCorrelation> per_particle;
    std::vector<long> collision_counts;   // all particles, launch order
    int n_lost = 0;
    double max_energy_drift = 0.0;
};

// Runs n_particles independent trajectories (parallel across particles,
// per-particle seeded RNG, deterministic ordered reduction).
TrapStudyResult run_trap_study(const TrapStudyParams& params);

// Deterministic per-particle RNG stream derivation.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace molcool

#endif
