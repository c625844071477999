#include "molcool/trap.hpp"

#include <cmath>

#include "molcool/errors.hpp"
#include "molcool/stark.hpp"

namespace molcool {

void TrapGeometry::validate() const {
    if (plate_gap <= 0 || half_width <= 0 || micro_period <= 0 || perimeter_decay_length <= 0) {
        throw ConfigError("trap geometry lengths must be positive");
    }
    if (micro_period > 0.5 * plate_gap) {
        throw ConfigError("micro_period must be small compared to the plate gap");
    }
    if (micro_field_surface < 0 || homogeneous_field <= 0 || perimeter_barrier_height < 0) {
        throw ConfigError("trap fields must be positive");
    }
}

bool TrapGeometry::inside(const Vec3& r) const {
    return r[1] >= 0.0 && r[1] <= plate_gap && std::fabs(r[0]) <= half_width &&
           std::fabs(r[2]) <= half_width;
}

namespace {

struct FieldEval {
    double ex, ey, ez;  // components
    double mag;
    // d|E|/dx, d|E|/dy, d|E|/dz
    double gx, gy, gz;
};

// Bottom-plate mode decays as exp(-k y) varying along x; the top-plate mode
// decays as exp(-k (gap - y)) varying along z when rotated, else along x.
FieldEval eval_field(const TrapGeometry& g, const Vec3& r) {
    const double k = 2.0 * M_PI / g.micro_period;
    const double a = g.micro_field_surface * std::exp(-k * r[1]);
    const double b = g.micro_field_surface * std::exp(-k * (g.plate_gap - r[1]));
    const double sx = std::sin(k * r[0]), cx = std::cos(k * r[0]);

    FieldEval f{};
    double dex[3], dey[3], dez[3];
    if (g.top_plate_rotated) {
        const double sz = std::sin(k * r[2]), cz = std::cos(k * r[2]);
        f.ex = a * sx;
        f.ey = g.homogeneous_field + a * cx - b * cz;
        f.ez = b * sz;
        dex[0] = a * k * cx;  dex[1] = -k * a * sx;           dex[2] = 0.0;
        dey[0] = -a * k * sx; dey[1] = -k * a * cx - k * b * cz; dey[2] = b * k * sz;
        dez[0] = 0.0;         dez[1] = k * b * sz;            dez[2] = b * k * cz;
    } else {
        f.ex = (a + b) * sx;
        f.ey = g.homogeneous_field + (a - b) * cx;
        f.ez = 0.0;
        dex[0] = (a + b) * k * cx; dex[1] = (-a + b) * k * sx; dex[2] = 0.0;
        dey[0] = -(a - b) * k * sx; dey[1] = -(a + b) * k * cx; dey[2] = 0.0;
        dez[0] = dez[1] = dez[2] = 0.0;
    }
    f.mag = std::sqrt(f.ex * f.ex + f.ey * f.ey + f.ez * f.ez);
    const double inv = f.mag > 0.0 ? 1.0 / f.mag : 0.0;
    f.gx = (f.ex * dex[0] + f.ey * dey[0] + f.ez * dez[0]) * inv;
    f.gy = (f.ex * dex[1] + f.ey * dey[1] + f.ez * dez[1]) * inv;
    f.gz = (f.ex * dex[2] + f.ey * dey[2] + f.ez * dez[2]) * inv;
    return f;
}

}  // namespace

double field_magnitude_unchecked(const TrapGeometry& geom, const Vec3& r) {
    return eval_field(geom, r).mag;
}

double field_magnitude(const TrapGeometry& geom, const Vec3& position) {
    if (!geom.inside(position)) throw DomainError("field_magnitude: position outside the trap");
    return field_magnitude_unchecked(geom, position);
}

PotentialForce potential_force_unchecked(double mu_eff, const TrapGeometry& g, const Vec3& r) {
    const FieldEval f = eval_field(g, r);

    // Separable per-axis perimeter barrier; keeps v_x and v_z decoupled.
    const double wx = g.perimeter_barrier_height *
                      std::exp((std::fabs(r[0]) - g.half_width) / g.perimeter_decay_length);
    const double wz = g.perimeter_barrier_height *
                      std::exp((std::fabs(r[2]) - g.half_width) / g.perimeter_decay_length);

    PotentialForce out;
    out.energy = mu_eff * f.mag + wx + wz;
    out.force[0] = -mu_eff * f.gx - std::copysign(wx / g.perimeter_decay_length, r[0]);
    out.force[1] = -mu_eff * f.gy;
    out.force[2] = -mu_eff * f.gz - std::copysign(wz / g.perimeter_decay_length, r[2]);
    return out;
}

PotentialForce stark_potential_and_force(const MoleculeSpec& spec, const RotationalState& state,
                                         const TrapGeometry& geom, const Vec3& position) {
    require_valid(state, "stark_potential_and_force");
    if (state.K * state.M >= 0) {
        throw DomainError("stark_potential_and_force: state " + to_label(state) +
                          " is not low-field-seeking (requires K*M < 0)");
    }
    if (!geom.inside(position)) {
        throw DomainError("stark_potential_and_force: position outside the trap");
    }
    const double mu_eff = spec.dipole * stark_factor(state);
    return potential_force_unchecked(mu_eff, geom, position);
}

}  // namespace molcool
