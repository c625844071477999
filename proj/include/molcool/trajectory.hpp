#ifndef MOLCOOL_TRAJECTORY_HPP
#define MOLCOOL_TRAJECTORY_HPP

#include <cstdint>
#include <vector>

#include "molcool/molecule.hpp"
#include "molcool/state.hpp"
#include "molcool/trap.hpp"

namespace molcool {

struct Particle {
    Vec3 position{};
    Vec3 velocity{};
    RotationalState state{0, 2, 2, -2};  // fixed during a trajectory
    std::uint64_t rng_seed = 0;
};

struct IntegratorOptions {
    double sample_interval = 1e-5;    // s, uniform velocity-sampling grid
    double rel_tol = 1e-10;           // embedded-pair error control
    double abs_tol_pos = 1e-12;       // m
    double abs_tol_vel = 1e-9;        // m/s
    double energy_tol_per_step = 1e-9;// relative energy drift per step
};

struct TrajectoryResult {
    std::vector<Vec3> velocity_samples;  // one per sample-grid point, t = i * dt
    long collisions = 0;                 // plate approaches within p/2
    bool lost = false;                   // escaped through a boundary
    double lost_time = -1.0;
    double energy_drift = 0.0;           // max |E(t)-E(0)|/|E(0)| at accepted steps
    long n_steps = 0;
};

// Adaptive Dormand-Prince 5(4) integration with a per-step energy-drift
// check; velocities recorded on the uniform sample grid, plate-zone entries
// counted once per approach.
TrajectoryResult integrate_trajectory(const MoleculeSpec& spec, const RotationalState& state,
                                      const TrapGeometry& geom, const Particle& particle,
                                      double duration, const IntegratorOptions& opt = {});

}  // namespace molcool

#endif
