#include "molcool/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "molcool/branching.hpp"
#include "molcool/constants.hpp"
#include "molcool/csv.hpp"
#include "molcool/errors.hpp"
#include "molcool/molecule.hpp"
#include "molcool/stark.hpp"

namespace molcool {

namespace {

constexpr double kV_cm = 1e5;  // kV/cm -> V/m

namespace fs = std::filesystem;

fs::path prepare_output(const RunConfig& cfg) {
    fs::path dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string());
    std::ofstream rc(dir / "resolved_config.json");
    if (!rc) throw IoError("cannot write resolved_config.json");
    rc << resolved_config_json(cfg);
    return dir;
}

std::string time_tag(double t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", t);
    return buf;
}

nlohmann::json state_json(const RotationalState& s) {
    return {{"v", s.v}, {"J", s.J}, {"K", s.K}, {"M", s.M}};
}

nlohmann::json channels_json(const BranchingTable& table) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : table.entries) {
        nlohmann::json c = state_json(e.lower);
        c["fraction"] = e.fraction;
        arr.push_back(c);
    }
    return arr;
}

}  // namespace

TrapConfig trap_config_si(const RunConfig& cfg) {
    TrapConfig t;
    t.volume1 = cfg.trap.volume1_mm3 * 1e-9;
    t.volume2 = cfg.trap.volume2_mm3 * 1e-9;
    t.interface_area = cfg.trap.interface_area_mm2 * 1e-6;
    t.field1 = cfg.trap.field1_kV_per_cm * kV_cm;
    t.field_step_initial = cfg.trap.field_step_initial_kV_per_cm * kV_cm;
    t.validate();
    return t;
}

TrapGeometry trap_geometry_si(const RunConfig& cfg, const MoleculeSpec& spec) {
    TrapGeometry g;
    g.plate_gap = cfg.trap_geometry.plate_gap_mm * 1e-3;
    g.half_width = cfg.trap_geometry.half_width_mm * 1e-3;
    g.micro_period = cfg.trap_geometry.micro_period_mm * 1e-3;
    g.micro_field_surface = cfg.trap_geometry.micro_field_surface_kV_per_cm * kV_cm;
    g.homogeneous_field = cfg.trap_geometry.homogeneous_field_kV_per_cm * kV_cm;
    g.perimeter_barrier_height =
        spec.dipole * cfg.trap_geometry.perimeter_barrier_field_kV_per_cm * kV_cm;
    g.perimeter_decay_length = cfg.trap_geometry.perimeter_decay_length_mm * 1e-3;
    g.top_plate_rotated = cfg.trap_geometry.top_plate_rotated;
    g.validate();
    return g;
}

CoolingParams cooling_params_si(const RunConfig& cfg, const MoleculeSpec& spec) {
    CoolingParams p;
    p.molecule = spec;
    p.scheme = cfg.scheme.has_override
                   ? build_scheme_with_drives(spec, cfg.scheme.drives)
                   : build_default_scheme(spec, cfg.scheme.drive_rate_hz);
    p.trap = trap_config_si(cfg);
    p.ramp.kappa = cfg.ramp.kappa;
    p.ramp.percentile = cfg.ramp.percentile;
    p.ramp.update_interval = cfg.ramp.update_interval_s;
    p.ramp.min_step = cfg.ramp.min_step_V_per_cm * 1e2;  // V/cm -> V/m
    p.ramp.current_step = p.trap.field_step_initial;
    p.bin_width = cfg.grid.bin_width_mK * 1e-3 * constants::boltzmann;
    p.n_bins = cfg.grid.n_bins;
    p.duration = cfg.cooling.duration_s;
    p.dt = cfg.cooling.dt_s;
    p.n_total = cfg.cooling.n_total;
    p.v_cutoff = cfg.cooling.v_cutoff_m_per_s;
    p.record_interval = cfg.cooling.record_interval_s;
    p.snapshot_times = cfg.cooling.snapshot_times_s;
    return p;
}

TrapStudyParams trap_study_params_si(const RunConfig& cfg, const MoleculeSpec& spec) {
    TrapStudyParams p;
    p.molecule = spec;
    p.state = cfg.trajectories.state;
    p.geometry = trap_geometry_si(cfg, spec);
    p.n_particles = cfg.trajectories.n_particles;
    p.duration = cfg.trajectories.duration_s;
    p.speed = cfg.trajectories.speed_m_per_s;
    p.sample_interval = cfg.trajectories.sample_interval_s;
    p.tau_grid = cfg.trajectories.tau_grid_s;
    p.seed = cfg.seed;
    p.threads = cfg.trajectories.threads;
    return p;
}

void cmd_stark_map(const RunConfig& cfg) {
    const MoleculeSpec spec = load_molecule(cfg.molecule_path);
    const fs::path dir = prepare_output(cfg);

    CsvWriter csv((dir / "starkmap.csv").string(),
                  {"field_V_per_m", "K", "M", "level_index", "energy_J"});
    for (double field_kv : cfg.stark_map.fields_kV_per_cm) {
        const double field = field_kv * kV_cm;
        for (int m : cfg.stark_map.m_values) {
            const StarkBlock block =
                stark_eigensystem(spec, cfg.stark_map.k, m, field, cfg.stark_map.j_max);
            const int levels =
                std::min<int>(cfg.stark_map.levels, static_cast<int>(block.eigenvalues.size()));
            for (int idx = 0; idx < levels; ++idx) {
                csv.cell(field);
                csv.cell(cfg.stark_map.k);
                csv.cell(m);
                csv.cell(idx);
                csv.cell(block.eigenvalues[idx]);
                csv.end_row();
            }
        }
    }
}

void cmd_branching(const RunConfig& cfg) {
    const MoleculeSpec spec = load_molecule(cfg.molecule_path);
    const fs::path dir = prepare_output(cfg);

    const RotationalState excited{1, 2, 2, -2};
    nlohmann::json report;
    report["molecule"] = spec.name;
    report["seed"] = cfg.seed;
    report["excited"] = state_json(excited);

    const BranchingTable zero = zero_field_branching(excited);
    report["zero_field"] = {{"channels", channels_json(zero)}, {"sum", zero.total()}};

    nlohmann::json dressed = nlohmann::json::array();
    for (double field_kv : cfg.branching.fields_kV_per_cm) {
        const double field = field_kv * kV_cm;
        const DressedBranching db = dressed_branching(spec, field, excited, cfg.branching.j_max);
        nlohmann::json entry;
        entry["field_V_per_m"] = field;
        entry["leak_high_j"] = db.leak_high_j;
        entry["sum"] = db.table.total();
        entry["channels"] = channels_json(db.table);
        dressed.push_back(entry);
    }
    report["dressed"] = dressed;

    std::ofstream out(dir / "branching.json");
    if (!out) throw IoError("cannot write branching.json");
    out << report.dump(2) << "\n";
}

void cmd_cool(const RunConfig& cfg) {
    const MoleculeSpec spec = load_molecule(cfg.molecule_path);
    const fs::path dir = prepare_output(cfg);
    const CoolingParams params = cooling_params_si(cfg, spec);

    auto snapshot = [&](double t, const Ensemble& ens) {
        CsvWriter csv((dir / ("hist_" + time_tag(t) + ".csv")).string(),
                      {"region", "state", "v_m_per_s", "population"});
        for (int r = 0; r < 2; ++r) {
            for (int a = 0; a < kNumStates; ++a) {
                for (int k = 0; k < ens.grid.n_bins; ++k) {
                    csv.cell(r + 1);
                    csv.cell(a + 1);
                    csv.cell(ens.grid.bin_speed(k));
                    csv.cell(ens.pops[r][a][k]);
                    csv.end_row();
                }
            }
        }
    };

    const std::vector<CoolingRecord> records = run_cooling(params, snapshot);

    CsvWriter csv((dir / "cooling.csv").string(),
                  {"time_s", "T80_K", "field_step_V_per_m", "N_total", "decays_cum"});
    for (const auto& rec : records) {
        csv.cell(rec.time);
        csv.cell(rec.temperature_p80);
        csv.cell(rec.field_step);
        csv.cell(rec.total_number);
        csv.cell(rec.decays_cum);
        csv.end_row();
    }
}

void cmd_trajectories(const RunConfig& cfg) {
    const MoleculeSpec spec = load_molecule(cfg.molecule_path);
    const fs::path dir = prepare_output(cfg);
    const TrapStudyParams params = trap_study_params_si(cfg, spec);

    const TrapStudyResult res = run_trap_study(params);

    {
        CsvWriter csv((dir / "correlation.csv").string(), {"tau_s", "c_x", "c_y", "c_z"});
        for (size_t j = 0; j < res.correlation.tau.size(); ++j) {
            csv.cell(res.correlation.tau[j]);
            csv.cell(res.correlation.c_x[j]);
            csv.cell(res.correlation.c_y[j]);
            csv.cell(res.correlation.c_z[j]);
            csv.end_row();
        }
    }
    {
        CsvWriter csv((dir / "collisions.csv").string(), {"particle", "collisions", "lost"});
        for (size_t i = 0; i < res.collision_counts.size(); ++i) {
            csv.cell(static_cast<long long>(i));
            csv.cell(static_cast<long long>(res.collision_counts[i]));
            csv.cell(static_cast<long long>(res.per_particle[i].lost ? 1 : 0));
            csv.end_row();
        }
    }

    const MixingFit fit = fit_mixing_probability(res.correlation);

    // Jackknife over surviving particles for a confidence interval on q.
    std::vector<size_t> used;
    for (size_t i = 0; i < res.per_particle.size(); ++i) {
        if (!res.per_particle[i].lost) used.push_back(i);
    }
    double ci_low = fit.q, ci_high = fit.q, se = 0.0;
    if (used.size() >= 8) {
        const size_t m = used.size();
        const size_t nt = res.correlation.tau.size();
        std::vector<double> qs;
        qs.reserve(m);
        for (size_t leave = 0; leave < m; ++leave) {
            CorrelationSeries sub;
            sub.tau = res.correlation.tau;
            sub.collision_rate = res.correlation.collision_rate;
            sub.c_x.assign(nt, 0.0);
            sub.c_y.assign(nt, 0.0);
            sub.c_z.assign(nt, 0.0);
            for (size_t u = 0; u < m; ++u) {
                if (u == leave) continue;
                const auto& pc = res.per_particle[used[u]];
                for (size_t j = 0; j < nt; ++j) {
                    sub.c_x[j] += pc.c_x[j];
                    sub.c_y[j] += pc.c_y[j];
                    sub.c_z[j] += pc.c_z[j];
                }
            }
            for (size_t j = 0; j < nt; ++j) {
                sub.c_x[j] /= (m - 1);
                sub.c_y[j] /= (m - 1);
                sub.c_z[j] /= (m - 1);
            }
            qs.push_back(fit_mixing_probability(sub).q);
        }
        double mean = 0.0;
        for (double q : qs) mean += q;
        mean /= m;
        double var = 0.0;
        for (double q : qs) var += (q - mean) * (q - mean);
        se = std::sqrt(var * (m - 1) / m);
        ci_low = fit.q - 1.96 * se;
        ci_high = fit.q + 1.96 * se;
    }

    nlohmann::json report;
    report["seed"] = cfg.seed;
    report["n_particles"] = params.n_particles;
    report["n_lost"] = res.n_lost;
    report["duration_s"] = params.duration;
    report["top_plate_rotated"] = params.geometry.top_plate_rotated;
    report["collision_rate_hz"] = res.correlation.collision_rate;
    report["max_energy_drift"] = res.max_energy_drift;
    report["fit_components"] = {"c_x", "c_y"};
    report["q"] = fit.q;
    report["q_stderr_jackknife"] = se;
    report["q_ci95"] = {ci_low, ci_high};
    report["c_inf"] = fit.c_inf;
    report["fit_residual"] = fit.residual;

    std::ofstream out(dir / "mixing_fit.json");
    if (!out) throw IoError("cannot write mixing_fit.json");
    out << report.dump(2) << "\n";
}

}  // namespace molcool
