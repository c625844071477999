#ifndef MOLCOOL_TRAP_HPP
#define MOLCOOL_TRAP_HPP

#include <array>

#include "molcool/molecule.hpp"
#include "molcool/state.hpp"

namespace molcool {

using Vec3 = std::array<double, 3>;

// Microstructured box trap: plates at y = 0 and y = plate_gap carrying
// alternating strip electrodes (single Fourier mode, decay length p/2pi),
// a homogeneous field E0 along y, and an exponential perimeter barrier on
// the x and z walls.
struct TrapGeometry {
    double plate_gap = 3e-3;             // m
    double half_width = 5e-3;            // m, |x|,|z| extent
    double micro_period = 0.4e-3;        // m
    double micro_field_surface = 40e5;   // V/m, strip-mode amplitude at the surface
    double homogeneous_field = 5e5;      // V/m
    double perimeter_barrier_height = 0; // J (W0)
    double perimeter_decay_length = 1e-4;// m
    bool top_plate_rotated = false;      // top strips along z instead of x

    void validate() const;
    bool inside(const Vec3& r) const;
};

// |E| at a position inside the trap. Throws DomainError outside the bounds.
double field_magnitude(const TrapGeometry& geom, const Vec3& position);

// Stark potential W = mu_eff |E| + perimeter barrier and its analytic
// force -grad W for a low-field-seeking state (K*M < 0 required).
struct PotentialForce {
    double energy = 0.0;  // J
    Vec3 force{};         // N
};

PotentialForce stark_potential_and_force(const MoleculeSpec& spec, const RotationalState& state,
                                         const TrapGeometry& geom, const Vec3& position);

// Unchecked evaluators used by the integrator (the analytic model extends
// smoothly past the nominal bounds).
double field_magnitude_unchecked(const TrapGeometry& geom, const Vec3& r);
PotentialForce potential_force_unchecked(double mu_eff, const TrapGeometry& geom, const Vec3& r);

}  // namespace molcool

#endif
