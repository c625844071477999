#ifndef MOLCOOL_COMMANDS_HPP
#define MOLCOOL_COMMANDS_HPP

#include "molcool/config.hpp"
#include "molcool/correlation.hpp"
#include "molcool/ratesim.hpp"
#include "molcool/trap.hpp"

namespace molcool {

// Subcommand entry points; outputs land in cfg.output_dir, which is created
// if needed. A resolved_config.json snapshot accompanies every run. Errors
// propagate as ConfigError / NumericError / IoError.
void cmd_stark_map(const RunConfig& cfg);
void cmd_branching(const RunConfig& cfg);
void cmd_cool(const RunConfig& cfg);
void cmd_trajectories(const RunConfig& cfg);

// SI conversions of the config sections (shared with tests).
TrapConfig trap_config_si(const RunConfig& cfg);
TrapGeometry trap_geometry_si(const RunConfig& cfg, const MoleculeSpec& spec);
CoolingParams cooling_params_si(const RunConfig& cfg, const MoleculeSpec& spec);
TrapStudyParams trap_study_params_si(const RunConfig& cfg, const MoleculeSpec& spec);

}  // namespace molcool

#endif
