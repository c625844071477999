#ifndef MOLCOOL_RATESIM_HPP
#define MOLCOOL_RATESIM_HPP

#include <array>
#include <functional>
#include <vector>

#include "molcool/molecule.hpp"
#include "molcool/scheme.hpp"

namespace molcool {

// Two-region trap geometry of the rate model.
struct TrapConfig {
    double volume1 = 100e-9;           // m^3
    double volume2 = 100e-9;           // m^3
    double interface_area = 10e-6;     // m^2
    double field1 = 5e5;               // V/m, low-field region
    double field_step_initial = 1.5e6; // V/m, initial field difference

    void validate() const;
};

// Uniform kinetic-energy grid; bin k covers [k eps, (k+1) eps) with
// representative speed v_k = sqrt(2 (k+1/2) eps / m).
struct EnergyGrid {
    double bin_width = 0.0;  // J
    int n_bins = 0;
    double mass = 0.0;       // kg, of the simulated molecule

    double bin_energy(int k) const { return (k + 0.5) * bin_width; }
    double bin_speed(int k) const;
};

// Velocity(energy)-binned populations for 2 regions x 6 states.
struct Ensemble {
    EnergyGrid grid;
    // pops[region][state][bin]; region 0 = low field, 1 = high field
    std::array<std::array<std::vector<double>, kNumStates>, 2> pops;

    double total() const;
    double total_state(int region, int state) const;
    std::vector<double> energy_marginal() const;  // summed over regions/states
};

// populations ~ v^2 dv up to v_cutoff, equally split among the five v=0
// states and both regions; the excited state starts empty.
Ensemble init_ensemble(const EnergyGrid& grid, double n_total, double v_cutoff);

// Exact 6x6 exponential propagator of the transition generator, one matrix
// per region, built once per (rates, dt). apply() keeps internal scratch and
// is not safe for concurrent use on the same object.
class TransitionPropagator {
  public:
    TransitionPropagator(const RateMatrices& rates, double dt);
    void apply(Ensemble& ens) const;
    double dt() const { return dt_; }

  private:
    double dt_;
    std::array<std::array<double, kNumStates * kNumStates>, 2> exp_;
    mutable std::vector<double> scratch_;
};

void transition_substep(Ensemble& ens, const RateMatrices& rates, double dt);

// Explicit-Euler inter-region flux exchange on the energy grid. Every
// delta_e must be an integer multiple of the bin width.
void diffusion_substep(Ensemble& ens, const TrapConfig& trap, const PotentialSteps& steps,
                       double dt);

// q-quantile of the kinetic-energy distribution aggregated over both
// regions and all states (piecewise-linear through bin midpoints).
double percentile_kinetic(const Ensemble& ens, double q);

// Field-step ramp controller tracking the 80th percentile.
struct RampController {
    double kappa = 0.8;
    double percentile = 0.8;
    double update_interval = 0.01;  // s
    double min_step = 1e4;          // V/m (100 V/cm)
    double current_step = 0.0;      // V/m, non-increasing over a run
};

// Sets current_step so the largest per-state potential step equals
// kappa * E_q; clamped non-increasing, >= min_step, snapped to the grid.
double update_ramp(RampController& ctrl, const Ensemble& ens, const MoleculeSpec& spec,
                   const LevelScheme& scheme);

struct CoolingRecord {
    double time = 0.0;              // s
    double temperature_p80 = 0.0;   // K
    double field_step = 0.0;        // V/m
    double total_number = 0.0;
    double decays_cum = 0.0;        // spontaneous decays per molecule
    std::array<std::array<double, kNumStates>, 2> region_state_totals{};
};

struct CoolingParams {
    MoleculeSpec molecule;
    LevelScheme scheme;
    TrapConfig trap;
    RampController ramp;
    double bin_width = 0.0;       // J; 0 = default kB * 0.12 mK
    int n_bins = 0;               // 0 = auto-size to cover cutoff + initial step
    double duration = 10.0;       // s
    double dt = 1e-4;             // s
    double n_total = 1e6;
    double v_cutoff = 11.7;       // m/s
    double record_interval = 0.01;
    std::vector<double> snapshot_times;
};

using SnapshotFn = std::function<void(double time, const Ensemble&)>;

// Strang-split integration: half transition, full diffusion, half
// transition per dt; ramp updates every update_interval. Returns records at
// record_interval cadence; snapshot_fn is invoked at snapshot_times.
std::vector<CoolingRecord> run_cooling(const CoolingParams& params,
                                       const SnapshotFn& snapshot_fn = {});

// Auto-sized grid for the given parameters.
EnergyGrid make_grid(const CoolingParams& params);

}  // namespace molcool

#endif
