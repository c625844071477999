#ifndef MOLCOOL_MOLECULE_HPP
#define MOLCOOL_MOLECULE_HPP

#include <string>

namespace molcool {

// Molecular constants in SI units. rot_const_a is the constant of rotation
// about the symmetry axis (A for a prolate top, C for an oblate one);
// rot_const_b the perpendicular constant.
struct MoleculeSpec {
    std::string name;
    double mass = 0.0;         // kg
    double dipole = 0.0;       // C m
    double rot_const_a = 0.0;  // J
    double rot_const_b = 0.0;  // J
    double vib_freq = 0.0;     // 1/m (wavenumber of the vibrational transition)
    double decay_rate = 0.0;   // 1/s, total spontaneous rate of the v=1 state

    void validate() const;  // throws ConfigError on nonphysical values
};

// Reads a molecule-constants JSON file with keys
// name, mass_amu, dipole_debye, A_cm1, B_cm1, f_vib_cm1, gamma_hz.
MoleculeSpec load_molecule(const std::string& path);

}  // namespace molcool

#endif
