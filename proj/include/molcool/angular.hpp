#ifndef MOLCOOL_ANGULAR_HPP
#define MOLCOOL_ANGULAR_HPP

#include "molcool/state.hpp"

namespace molcool {

// Clebsch-Gordan coefficient <j m; 1 q | j' m+q> for jp in {j-1, j, j+1},
// Condon-Shortley phases. Returns 0 outside the triangle/projection range.
double cg_rank1(int j, int m, int q, int jp);

// Signed direction-cosine matrix element
//   <J' K M'| Phi_{p z} |J K M>  (body-frame dipole along the symmetry axis,
// lab spherical component p = M' - M), equal to
//   sqrt((2J+1)/(2J'+1)) * <J M; 1 p|J' M'> * <J K; 1 0|J' K>.
// Zero whenever a parallel-band selection rule is violated.
double direction_cosine(int Jp, int Kp, int Mp, int J, int K, int M);

// Squared line strength of a parallel (dK=0) dipole transition between two
// rotational states, normalized so that the sum over all allowed final
// states from a given initial state is exactly 1. Symmetric in its
// arguments; 0 for forbidden pairs. Throws DomainError on invalid states.
double dipole_coupling_sq(const RotationalState& upper, const RotationalState& lower);

}  // namespace molcool

#endif
