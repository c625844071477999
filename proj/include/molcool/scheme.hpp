#ifndef MOLCOOL_SCHEME_HPP
#define MOLCOOL_SCHEME_HPP

#include <array>
#include <string>
#include <vector>

#include "molcool/branching.hpp"
#include "molcool/molecule.hpp"
#include "molcool/state.hpp"

namespace molcool {

inline constexpr int kNumStates = 6;

enum class DriveKind { microwave, infrared };

struct DriveSpec {
    int from = 0;      // state index
    int to = 0;        // state index
    double rate = 0.0; // 1/s, symmetric (up = down)
    int region = 1;    // 1 = low field, 2 = high field
    DriveKind kind = DriveKind::microwave;
};

// The six-level cooling scheme: five v=0 states plus one v=1 state, the
// driven transitions, and the gamma-scaled spontaneous-decay channels.
struct LevelScheme {
    std::array<RotationalState, kNumStates> states;
    std::vector<DriveSpec> drives;
    BranchingTable decay;     // fractions from the excited state
    double gamma = 0.0;       // 1/s

    int excited_index() const;
    int index_of(const RotationalState& s) const;  // -1 if absent
    void validate() const;    // throws ConfigError on rule violations
};

// entry (a', a) holds the rate c_{a',a} from state a' into state a.
struct RateMatrices {
    std::array<std::array<double, kNumStates>, kNumStates> c1{};  // region 1
    std::array<std::array<double, kNumStates>, kNumStates> c2{};  // region 2
};

// Per-state Stark-energy step for moving region 1 -> region 2.
struct PotentialSteps {
    std::array<double, kNumStates> delta_e{};  // J
};

// Default graph: region-2 MW |2,2,-2>..|2,2,-1> and |3,2,-3>..|3,2,-2>;
// region-1 MW |2,2,-1>..|3,2,-1> and |3,2,-2>..|3,2,-1>; region-1 IR
// |3,2,-1>..|e>. All drives symmetric at drive_rate; decay from |e> active
// in both regions with zero-field branching fractions.
LevelScheme build_default_scheme(const MoleculeSpec& spec, double drive_rate = 1e4);

// Applies a user drive list (replacing the defaults) after validation.
LevelScheme build_scheme_with_drives(const MoleculeSpec& spec, std::vector<DriveSpec> drives);

PotentialSteps potential_steps(const MoleculeSpec& spec, const LevelScheme& scheme,
                               double field1, double field2);

RateMatrices rate_matrices(const LevelScheme& scheme);

}  // namespace molcool

#endif
