#ifndef MOLCOOL_STARK_HPP
#define MOLCOOL_STARK_HPP

#include <vector>

#include "molcool/molecule.hpp"
#include "molcool/state.hpp"

namespace molcool {

// Zero-field rigid-rotor energy B*J(J+1) + (A-B)*K^2, independent of M.
double rigid_rotor_energy(const MoleculeSpec& spec, const RotationalState& state);

// First-order Stark energy -|E| d KM/(J(J+1)); 0 for J = 0 by convention.
// Positive (low-field-seeking) when K*M < 0. Throws on negative field.
double first_order_stark(const MoleculeSpec& spec, const RotationalState& state, double field);

// Dimensionless |KM|/(J(J+1)) orientation factor of a low-field seeker
// (0 for J = 0). Shared by the rate model and the trap potential.
double stark_factor(const RotationalState& state);

// Temperature equivalent of a speed via (m/2) v^2 = (3/2) kB T.
double kinetic_temperature(const MoleculeSpec& spec, double speed);

// One (K, M) block of the rotor + field Hamiltonian, tridiagonal in J.
struct StarkBlock {
    int K = 0;
    int M = 0;
    int j_min = 0;
    int j_max = 0;
    double field = 0.0;                             // V/m
    std::vector<double> eigenvalues;                // ascending, J index = j_min + row
    std::vector<std::vector<double>> eigenvectors;  // [level][J - j_min]
};

// Diagonalizes the (K, M) block for J = max(|K|,|M|) .. j_max.
// Requires j_max >= max(|K|,|M|) + 10.
StarkBlock stark_eigensystem(const MoleculeSpec& spec, int K, int M, double field, int j_max);

}  // namespace molcool

#endif
