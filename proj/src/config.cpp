#include "molcool/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "molcool/errors.hpp"

namespace molcool {

namespace {

using nlohmann::json;

// Strict section reader: every key must be consumed exactly once.
class Section {
  public:
    Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
        if (!j_.is_object()) throw ConfigError("config section '" + name_ + "' must be an object");
    }

    template <typename T>
    void get(const char* key, T& out) {
        if (j_.contains(key)) {
            try {
                out = j_.at(key).get<T>();
            } catch (const json::exception&) {
                throw ConfigError("config key '" + name_ + "." + key + "' has the wrong type");
            }
        }
        seen_.insert(key);
    }

    const json* raw(const char* key) {
        seen_.insert(key);
        return j_.contains(key) ? &j_.at(key) : nullptr;
    }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (!seen_.count(key)) {
                throw ConfigError("unknown config key '" + name_ + "." + key + "'");
            }
        }
    }

  private:
    const json& j_;
    std::string name_;
    std::set<std::string> seen_;
};

RotationalState parse_state(const json& j, const std::string& where) {
    Section s(j, where);
    RotationalState st;
    s.get("v", st.v);
    s.get("J", st.J);
    s.get("K", st.K);
    s.get("M", st.M);
    s.finish();
    if (!st.valid()) throw ConfigError(where + ": invalid quantum numbers");
    return st;
}

std::vector<DriveSpec> parse_drives(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + " must be a list of drive records");
    std::vector<DriveSpec> drives;
    for (size_t i = 0; i < j.size(); ++i) {
        Section s(j[i], where + "[" + std::to_string(i) + "]");
        DriveSpec d;
        double rate_hz = 0.0;
        std::string kind = "mw";
        s.get("from", d.from);
        s.get("to", d.to);
        s.get("rate_hz", rate_hz);
        s.get("region", d.region);
        s.get("kind", kind);
        s.finish();
        d.rate = rate_hz;
        if (kind == "mw") {
            d.kind = DriveKind::microwave;
        } else if (kind == "ir") {
            d.kind = DriveKind::infrared;
        } else {
            throw ConfigError(where + ": drive kind must be 'mw' or 'ir'");
        }
        drives.push_back(d);
    }
    return drives;
}

}  // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }

    RunConfig cfg;
    Section root(j, "");
    root.get("molecule", cfg.molecule_path);
    root.get("seed", cfg.seed);
    root.get("output_dir", cfg.output_dir);

    if (const json* g = root.raw("grid")) {
        Section s(*g, "grid");
        s.get("bin_width_mK", cfg.grid.bin_width_mK);
        s.get("n_bins", cfg.grid.n_bins);
        s.finish();
    }
    if (const json* t = root.raw("trap")) {
        Section s(*t, "trap");
        s.get("volume1_mm3", cfg.trap.volume1_mm3);
        s.get("volume2_mm3", cfg.trap.volume2_mm3);
        s.get("interface_area_mm2", cfg.trap.interface_area_mm2);
        s.get("field1_kV_per_cm", cfg.trap.field1_kV_per_cm);
        s.get("field_step_initial_kV_per_cm", cfg.trap.field_step_initial_kV_per_cm);
        s.finish();
    }
    if (const json* r = root.raw("ramp")) {
        Section s(*r, "ramp");
        s.get("kappa", cfg.ramp.kappa);
        s.get("percentile", cfg.ramp.percentile);
        s.get("update_interval_s", cfg.ramp.update_interval_s);
        s.get("min_step_V_per_cm", cfg.ramp.min_step_V_per_cm);
        s.finish();
    }
    if (const json* sc = root.raw("scheme")) {
        Section s(*sc, "scheme");
        s.get("drive_rate_hz", cfg.scheme.drive_rate_hz);
        if (const json* d = s.raw("drives")) {
            cfg.scheme.drives = parse_drives(*d, "scheme.drives");
            cfg.scheme.has_override = !cfg.scheme.drives.empty();
        }
        s.finish();
    }
    if (const json* c = root.raw("cooling")) {
        Section s(*c, "cooling");
        s.get("duration_s", cfg.cooling.duration_s);
        s.get("dt_s", cfg.cooling.dt_s);
        s.get("n_total", cfg.cooling.n_total);
        s.get("v_cutoff_m_per_s", cfg.cooling.v_cutoff_m_per_s);
        s.get("record_interval_s", cfg.cooling.record_interval_s);
        s.get("snapshot_times_s", cfg.cooling.snapshot_times_s);
        s.finish();
    }
    if (const json* sm = root.raw("stark_map")) {
        Section s(*sm, "stark_map");
        s.get("k", cfg.stark_map.k);
        s.get("m_values", cfg.stark_map.m_values);
        s.get("fields_kV_per_cm", cfg.stark_map.fields_kV_per_cm);
        s.get("j_max", cfg.stark_map.j_max);
        s.get("levels", cfg.stark_map.levels);
        s.finish();
    }
    if (const json* b = root.raw("branching")) {
        Section s(*b, "branching");
        s.get("fields_kV_per_cm", cfg.branching.fields_kV_per_cm);
        s.get("j_max", cfg.branching.j_max);
        s.finish();
    }
    if (const json* tg = root.raw("trap_geometry")) {
        Section s(*tg, "trap_geometry");
        s.get("plate_gap_mm", cfg.trap_geometry.plate_gap_mm);
        s.get("half_width_mm", cfg.trap_geometry.half_width_mm);
        s.get("micro_period_mm", cfg.trap_geometry.micro_period_mm);
        s.get("micro_field_surface_kV_per_cm", cfg.trap_geometry.micro_field_surface_kV_per_cm);
        s.get("homogeneous_field_kV_per_cm", cfg.trap_geometry.homogeneous_field_kV_per_cm);
        s.get("perimeter_barrier_field_kV_per_cm",
              cfg.trap_geometry.perimeter_barrier_field_kV_per_cm);
        s.get("perimeter_decay_length_mm", cfg.trap_geometry.perimeter_decay_length_mm);
        s.get("top_plate_rotated", cfg.trap_geometry.top_plate_rotated);
        s.finish();
    }
    if (const json* tj = root.raw("trajectories")) {
        Section s(*tj, "trajectories");
        s.get("n_particles", cfg.trajectories.n_particles);
        s.get("duration_s", cfg.trajectories.duration_s);
        s.get("speed_m_per_s", cfg.trajectories.speed_m_per_s);
        s.get("sample_interval_s", cfg.trajectories.sample_interval_s);
        s.get("tau_grid_s", cfg.trajectories.tau_grid_s);
        if (const json* st = s.raw("state")) {
            cfg.trajectories.state = parse_state(*st, "trajectories.state");
        }
        s.get("threads", cfg.trajectories.threads);
        s.finish();
    }
    root.finish();

    if (cfg.molecule_path.empty()) throw ConfigError("config: 'molecule' path is required");
    if (!std::filesystem::exists(cfg.molecule_path)) {
        throw ConfigError("config: molecule file does not exist: " + cfg.molecule_path);
    }
    return cfg;
}

void apply_overrides(RunConfig& cfg, const CliOverrides& ov) {
    if (ov.output_dir) cfg.output_dir = *ov.output_dir;
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.duration_s) {
        cfg.cooling.duration_s = *ov.duration_s;
        cfg.trajectories.duration_s = *ov.duration_s;
    }
}

std::string resolved_config_json(const RunConfig& cfg) {
    json j;
    j["molecule"] = cfg.molecule_path;
    j["seed"] = cfg.seed;
    j["output_dir"] = cfg.output_dir;
    j["grid"] = {{"bin_width_mK", cfg.grid.bin_width_mK}, {"n_bins", cfg.grid.n_bins}};
    j["trap"] = {{"volume1_mm3", cfg.trap.volume1_mm3},
                 {"volume2_mm3", cfg.trap.volume2_mm3},
                 {"interface_area_mm2", cfg.trap.interface_area_mm2},
                 {"field1_kV_per_cm", cfg.trap.field1_kV_per_cm},
                 {"field_step_initial_kV_per_cm", cfg.trap.field_step_initial_kV_per_cm}};
    j["ramp"] = {{"kappa", cfg.ramp.kappa},
                 {"percentile", cfg.ramp.percentile},
                 {"update_interval_s", cfg.ramp.update_interval_s},
                 {"min_step_V_per_cm", cfg.ramp.min_step_V_per_cm}};
    json drives = json::array();
    for (const auto& d : cfg.scheme.drives) {
        drives.push_back({{"from", d.from},
                          {"to", d.to},
                          {"rate_hz", d.rate},
                          {"region", d.region},
                          {"kind", d.kind == DriveKind::infrared ? "ir" : "mw"}});
    }
    j["scheme"] = {{"drive_rate_hz", cfg.scheme.drive_rate_hz}, {"drives", drives}};
    j["cooling"] = {{"duration_s", cfg.cooling.duration_s},
                    {"dt_s", cfg.cooling.dt_s},
                    {"n_total", cfg.cooling.n_total},
                    {"v_cutoff_m_per_s", cfg.cooling.v_cutoff_m_per_s},
                    {"record_interval_s", cfg.cooling.record_interval_s},
                    {"snapshot_times_s", cfg.cooling.snapshot_times_s}};
    j["stark_map"] = {{"k", cfg.stark_map.k},
                      {"m_values", cfg.stark_map.m_values},
                      {"fields_kV_per_cm", cfg.stark_map.fields_kV_per_cm},
                      {"j_max", cfg.stark_map.j_max},
                      {"levels", cfg.stark_map.levels}};
    j["branching"] = {{"fields_kV_per_cm", cfg.branching.fields_kV_per_cm},
                      {"j_max", cfg.branching.j_max}};
    j["trap_geometry"] = {
        {"plate_gap_mm", cfg.trap_geometry.plate_gap_mm},
        {"half_width_mm", cfg.trap_geometry.half_width_mm},
        {"micro_period_mm", cfg.trap_geometry.micro_period_mm},
        {"micro_field_surface_kV_per_cm", cfg.trap_geometry.micro_field_surface_kV_per_cm},
        {"homogeneous_field_kV_per_cm", cfg.trap_geometry.homogeneous_field_kV_per_cm},
        {"perimeter_barrier_field_kV_per_cm", cfg.trap_geometry.perimeter_barrier_field_kV_per_cm},
        {"perimeter_decay_length_mm", cfg.trap_geometry.perimeter_decay_length_mm},
        {"top_plate_rotated", cfg.trap_geometry.top_plate_rotated}};
    j["trajectories"] = {{"n_particles", cfg.trajectories.n_particles},
                         {"duration_s", cfg.trajectories.duration_s},
                         {"speed_m_per_s", cfg.trajectories.speed_m_per_s},
                         {"sample_interval_s", cfg.trajectories.sample_interval_s},
                         {"tau_grid_s", cfg.trajectories.tau_grid_s},
                         {"state",
                          {{"v", cfg.trajectories.state.v},
                           {"J", cfg.trajectories.state.J},
                           {"K", cfg.trajectories.state.K},
                           {"M", cfg.trajectories.state.M}}},
                         {"threads", cfg.trajectories.threads}};
    return j.dump(2) + "\n";
}

}  // namespace molcool
