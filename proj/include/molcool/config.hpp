#ifndef MOLCOOL_CONFIG_HPP
#define MOLCOOL_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "molcool/scheme.hpp"
#include "molcool/state.hpp"

namespace molcool {

// One JSON run configuration; values kept in the documented config units
// and converted to SI when the physics objects are built.
struct RunConfig {
    std::string molecule_path;
    std::uint64_t seed = 1;
    std::string output_dir = "out";

    struct Grid {
        double bin_width_mK = 0.12;
        int n_bins = 0;  // 0 = auto
    } grid;

    struct Trap {
        double volume1_mm3 = 100.0;
        double volume2_mm3 = 100.0;
        double interface_area_mm2 = 10.0;
        double field1_kV_per_cm = 5.0;
        double field_step_initial_kV_per_cm = 15.0;
    } trap;

    struct Ramp {
        double kappa = 0.8;
        double percentile = 0.8;
        double update_interval_s = 0.01;
        double min_step_V_per_cm = 100.0;
    } ramp;

    struct Scheme {
        double drive_rate_hz = 1e4;
        std::vector<DriveSpec> drives;  // empty = default graph
        bool has_override = false;
    } scheme;

    struct Cooling {
        double duration_s = 10.0;
        double dt_s = 1e-4;
        double n_total = 1e6;
        double v_cutoff_m_per_s = 11.7;
        double record_interval_s = 0.01;
        std::vector<double> snapshot_times_s{0.0, 0.2, 1.0, 5.0, 10.0};
    } cooling;

    struct StarkMap {
        int k = 2;
        std::vector<int> m_values{-1, -2, -3};
        std::vector<double> fields_kV_per_cm{5.0, 20.0};
        int j_max = 32;
        int levels = 6;
    } stark_map;

    struct Branching {
        std::vector<double> fields_kV_per_cm{0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
        int j_max = 32;
    } branching;

    struct TrapGeometrySection {
        double plate_gap_mm = 3.0;
        double half_width_mm = 5.0;
        double micro_period_mm = 0.4;
        double micro_field_surface_kV_per_cm = 40.0;
        double homogeneous_field_kV_per_cm = 5.0;
        double perimeter_barrier_field_kV_per_cm = 100.0;  // W0 = dipole * this
        double perimeter_decay_length_mm = 0.1;
        bool top_plate_rotated = false;
    } trap_geometry;

    struct Trajectories {
        int n_particles = 200;
        double duration_s = 1.0;
        double speed_m_per_s = 10.0;
        double sample_interval_s = 1e-5;
        std::vector<double> tau_grid_s;  // empty = auto
        RotationalState state{0, 2, 2, -2};
        int threads = 0;
    } trajectories;
};

struct CliOverrides {
    std::optional<std::string> output_dir;
    std::optional<std::uint64_t> seed;
    std::optional<double> duration_s;
};

// Strict parse: unknown keys anywhere are a ConfigError; missing keys take
// the defaults above. The molecule path must exist.
RunConfig load_config(const std::string& path);

void apply_overrides(RunConfig& cfg, const CliOverrides& ov);

// Full round-trippable JSON of the resolved configuration.
std::string resolved_config_json(const RunConfig& cfg);

}  // namespace molcool

#endif
