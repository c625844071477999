#include "molcool/stark.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "molcool/angular.hpp"
#include "molcool/constants.hpp"
#include "molcool/errors.hpp"
#include "molcool/tridiag.hpp"

namespace molcool {

double rigid_rotor_energy(const MoleculeSpec& spec, const RotationalState& state) {
    require_valid(state, "rigid_rotor_energy");
    const double J = state.J, K = state.K;
    return spec.rot_const_b * J * (J + 1) + (spec.rot_const_a - spec.rot_const_b) * K * K;
}

double first_order_stark(const MoleculeSpec& spec, const RotationalState& state, double field) {
    require_valid(state, "first_order_stark");
    if (field < 0.0) throw DomainError("first_order_stark: negative field");
    if (state.J == 0) return 0.0;
    const double J = state.J;
    return -field * spec.dipole * state.K * state.M / (J * (J + 1));
}

double stark_factor(const RotationalState& state) {
    require_valid(state, "stark_factor");
    if (state.J == 0) return 0.0;
    const double J = state.J;
    return std::abs(state.K * state.M) / (J * (J + 1));
}

double kinetic_temperature(const MoleculeSpec& spec, double speed) {
    if (speed < 0.0) throw DomainError("kinetic_temperature: negative speed");
    return spec.mass * speed * speed / (3.0 * constants::boltzmann);
}

StarkBlock stark_eigensystem(const MoleculeSpec& spec, int K, int M, double field, int j_max) {
    const int j_min = std::max(std::abs(K), std::abs(M));
    if (j_max < j_min + 10) {
        throw DomainError("stark_eigensystem: j_max must be at least max(|K|,|M|) + 10");
    }
    if (field < 0.0) throw DomainError("stark_eigensystem: negative field");

    const int n = j_max - j_min + 1;
    std::vector<double> diag(n), off(n - 1);
    for (int row = 0; row < n; ++row) {
        const int J = j_min + row;
        const RotationalState s{0, J, K, M};
        diag[row] = rigid_rotor_energy(spec, s) + first_order_stark(spec, s, field);
        if (row < n - 1) {
            // <J+1 K M| -d E cos(theta) |J K M>
            off[row] = -spec.dipole * field * direction_cosine(J + 1, K, M, J, K, M);
        }
    }

    TridiagEigen eig = tridiag_eigensystem(std::move(diag), std::move(off));

    StarkBlock block;
    block.K = K;
    block.M = M;
    block.j_min = j_min;
    block.j_max = j_max;
    block.field = field;
    block.eigenvalues = std::move(eig.eigenvalues);
    block.eigenvectors = std::move(eig.eigenvectors);
    return block;
}

}  // namespace molcool
