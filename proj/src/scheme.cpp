#include "molcool/scheme.hpp"

#include <cmath>
#include <string>

#include "molcool/angular.hpp"
#include "molcool/errors.hpp"
#include "molcool/stark.hpp"

namespace molcool {

namespace {

// Canonical state order; index 5 is the excited state.
const std::array<RotationalState, kNumStates> kSchemeStates = {{
    {0, 2, 2, -1},  // 0
    {0, 2, 2, -2},  // 1  strong lfs
    {0, 3, 2, -1},  // 2
    {0, 3, 2, -2},  // 3
    {0, 3, 2, -3},  // 4
    {1, 2, 2, -2},  // 5  |e>
}};

}  // namespace

int LevelScheme::excited_index() const {
    for (int i = 0; i < kNumStates; ++i) {
        if (states[i].v == 1) return i;
    }
    return -1;
}

int LevelScheme::index_of(const RotationalState& s) const {
    for (int i = 0; i < kNumStates; ++i) {
        if (states[i] == s) return i;
    }
    return -1;
}

void LevelScheme::validate() const {
    int n_excited = 0;
    for (const auto& s : states) {
        require_valid(s, "LevelScheme");
        if (s.v == 1) ++n_excited;
    }
    if (n_excited != 1) throw ConfigError("scheme must contain exactly one v=1 state");

    for (const auto& d : drives) {
        if (d.from < 0 || d.from >= kNumStates || d.to < 0 || d.to >= kNumStates) {
            throw ConfigError("drive references a state index outside 0..5");
        }
        if (d.from == d.to) throw ConfigError("drive must connect two distinct states");
        if (d.rate < 0.0) throw ConfigError("drive rate must be >= 0");
        if (d.region != 1 && d.region != 2) throw ConfigError("drive region must be 1 or 2");
        const RotationalState& a = states[d.from];
        const RotationalState& b = states[d.to];
        if (dipole_coupling_sq(a, b) == 0.0) {
            throw ConfigError("drive " + to_label(a) + " <-> " + to_label(b) +
                              " violates the parallel-band selection rules");
        }
        const bool vib = a.v != b.v;
        if (vib && d.kind != DriveKind::infrared) {
            throw ConfigError("drive " + to_label(a) + " <-> " + to_label(b) +
                              " changes v and must be kind 'ir'");
        }
        if (!vib && d.kind != DriveKind::microwave) {
            throw ConfigError("drive " + to_label(a) + " <-> " + to_label(b) +
                              " keeps v and must be kind 'mw'");
        }
    }
    for (const auto& e : decay.entries) {
        if (index_of(e.lower) < 0) {
            throw ConfigError("decay channel to unlisted state " + to_label(e.lower));
        }
        if (e.fraction < 0.0) throw ConfigError("decay fraction must be >= 0");
    }
}

LevelScheme build_default_scheme(const MoleculeSpec& spec, double drive_rate) {
    if (drive_rate <= 0.0) throw ConfigError("drive_rate must be positive");
    LevelScheme s;
    s.states = kSchemeStates;
    s.gamma = spec.decay_rate;
    s.decay = zero_field_branching(s.states[5]);
    s.drives = {
        {1, 0, drive_rate, 2, DriveKind::microwave},  // strong -> weak, high field
        {4, 3, drive_rate, 2, DriveKind::microwave},
        {0, 2, drive_rate, 1, DriveKind::microwave},  // weak -> repump ladder, low field
        {3, 2, drive_rate, 1, DriveKind::microwave},
        {2, 5, drive_rate, 1, DriveKind::infrared},
    };
    s.validate();
    return s;
}

LevelScheme build_scheme_with_drives(const MoleculeSpec& spec, std::vector<DriveSpec> drives) {
    LevelScheme s;
    s.states = kSchemeStates;
    s.gamma = spec.decay_rate;
    s.decay = zero_field_branching(s.states[5]);
    s.drives = std::move(drives);
    s.validate();
    return s;
}

PotentialSteps potential_steps(const MoleculeSpec& spec, const LevelScheme& scheme,
                               double field1, double field2) {
    if (field1 < 0.0 || field2 < field1) {
        throw ConfigError("potential_steps requires field2 >= field1 >= 0");
    }
    PotentialSteps steps;
    for (int a = 0; a < kNumStates; ++a) {
        steps.delta_e[a] = first_order_stark(spec, scheme.states[a], field2) -
                           first_order_stark(spec, scheme.states[a], field1);
    }
    return steps;
}

RateMatrices rate_matrices(const LevelScheme& scheme) {
    scheme.validate();
    RateMatrices m;
    for (const auto& d : scheme.drives) {
        auto& c = (d.region == 1) ? m.c1 : m.c2;
        c[d.from][d.to] += d.rate;
        c[d.to][d.from] += d.rate;
    }
    const int e = scheme.excited_index();
    for (const auto& ch : scheme.decay.entries) {
        const int a = scheme.index_of(ch.lower);
        m.c1[e][a] += scheme.gamma * ch.fraction;
        m.c2[e][a] += scheme.gamma * ch.fraction;
    }
    return m;
}

}  // namespace molcool
