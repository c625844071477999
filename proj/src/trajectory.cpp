#include "molcool/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "molcool/errors.hpp"
#include "molcool/stark.hpp"

namespace molcool {

namespace {

struct State6 {
    Vec3 r;
    Vec3 v;
};

struct Deriv {
    Vec3 dr;
    Vec3 dv;
};

State6 axpy(const State6& y, double h, const Deriv& k) {
    State6 out;
    for (int i = 0; i < 3; ++i) {
        out.r[i] = y.r[i] + h * k.dr[i];
        out.v[i] = y.v[i] + h * k.dv[i];
    }
    return out;
}

}  // namespace

TrajectoryResult integrate_trajectory(const MoleculeSpec& spec, const RotationalState& state,
                                      const TrapGeometry& geom, const Particle& particle,
                                      double duration, const IntegratorOptions& opt) {
    require_valid(state, "integrate_trajectory");
    if (state.K * state.M >= 0) {
        throw DomainError("integrate_trajectory: state must be low-field-seeking");
    }
    geom.validate();
    if (duration <= 0 || opt.sample_interval <= 0) {
        throw ConfigError("integrate_trajectory: duration and sample_interval must be positive");
    }
    if (!geom.inside(particle.position)) {
        throw DomainError("integrate_trajectory: initial position outside the trap");
    }

    const double mu_eff = spec.dipole * stark_factor(state);
    const double inv_mass = 1.0 / spec.mass;
    const double zone = 0.5 * geom.micro_period;
    const double escape_margin = 5.0 * geom.perimeter_decay_length;

    auto deriv = [&](const State6& y) {
        Deriv d;
        const PotentialForce pf = potential_force_unchecked(mu_eff, geom, y.r);
        for (int i = 0; i < 3; ++i) {
            d.dr[i] = y.v[i];
            d.dv[i] = pf.force[i] * inv_mass;
        }
        return d;
    };
    auto energy = [&](const State6& y) {
        const double ke =
            0.5 * spec.mass * (y.v[0] * y.v[0] + y.v[1] * y.v[1] + y.v[2] * y.v[2]);
        return ke + potential_force_unchecked(mu_eff, geom, y.r).energy;
    };
    auto escaped = [&](const State6& y) {
        return y.r[1] < 0.0 || y.r[1] > geom.plate_gap ||
               std::fabs(y.r[0]) > geom.half_width + escape_margin ||
               std::fabs(y.r[2]) > geom.half_width + escape_margin;
    };

    // Dormand-Prince 5(4) coefficients.
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    TrajectoryResult res;
    const long n_samples = static_cast<long>(std::floor(duration / opt.sample_interval)) + 1;
    res.velocity_samples.reserve(n_samples);
    res.velocity_samples.push_back(particle.velocity);

    State6 y{particle.position, particle.velocity};
    const double e0 = energy(y);
    const double e_ref = std::max(std::fabs(e0), 1e-300);
    double e_prev = e0;

    bool in_zone = y.r[1] < zone || y.r[1] > geom.plate_gap - zone;
    if (in_zone) res.collisions = 1;

    Deriv k1 = deriv(y);  // FSAL
    double h = 1e-8;
    double t = 0.0;

    for (long sample = 1; sample < n_samples; ++sample) {
        const double t_target = sample * opt.sample_interval;
        while (t < t_target) {
            bool clipped = false;
            if (t + h >= t_target) {
                h = t_target - t;
                clipped = true;
            }

            const State6 y2 = axpy(y, h * a21, k1);
            const Deriv k2 = deriv(y2);
            State6 y3;
            for (int i = 0; i < 3; ++i) {
                y3.r[i] = y.r[i] + h * (a31 * k1.dr[i] + a32 * k2.dr[i]);
                y3.v[i] = y.v[i] + h * (a31 * k1.dv[i] + a32 * k2.dv[i]);
            }
            const Deriv k3 = deriv(y3);
            State6 y4;
            for (int i = 0; i < 3; ++i) {
                y4.r[i] = y.r[i] + h * (a41 * k1.dr[i] + a42 * k2.dr[i] + a43 * k3.dr[i]);
                y4.v[i] = y.v[i] + h * (a41 * k1.dv[i] + a42 * k2.dv[i] + a43 * k3.dv[i]);
            }
            const Deriv k4 = deriv(y4);
            State6 y5;
            for (int i = 0; i < 3; ++i) {
                y5.r[i] = y.r[i] +
                          h * (a51 * k1.dr[i] + a52 * k2.dr[i] + a53 * k3.dr[i] + a54 * k4.dr[i]);
                y5.v[i] = y.v[i] +
                          h * (a51 * k1.dv[i] + a52 * k2.dv[i] + a53 * k3.dv[i] + a54 * k4.dv[i]);
            }
            const Deriv k5 = deriv(y5);
            State6 y6;
            for (int i = 0; i < 3; ++i) {
                y6.r[i] = y.r[i] + h * (a61 * k1.dr[i] + a62 * k2.dr[i] + a63 * k3.dr[i] +
                                        a64 * k4.dr[i] + a65 * k5.dr[i]);
                y6.v[i] = y.v[i] + h * (a61 * k1.dv[i] + a62 * k2.dv[i] + a63 * k3.dv[i] +
                                        a64 * k4.dv[i] + a65 * k5.dv[i]);
            }
            const Deriv k6 = deriv(y6);
            State6 ynew;
            for (int i = 0; i < 3; ++i) {
                ynew.r[i] = y.r[i] + h * (b1 * k1.dr[i] + b3 * k3.dr[i] + b4 * k4.dr[i] +
                                          b5 * k5.dr[i] + b6 * k6.dr[i]);
                ynew.v[i] = y.v[i] + h * (b1 * k1.dv[i] + b3 * k3.dv[i] + b4 * k4.dv[i] +
                                          b5 * k5.dv[i] + b6 * k6.dv[i]);
            }
            const Deriv k7 = deriv(ynew);

            double err = 0.0;
            for (int i = 0; i < 3; ++i) {
                const double er = h * (e1 * k1.dr[i] + e3 * k3.dr[i] + e4 * k4.dr[i] +
                                       e5 * k5.dr[i] + e6 * k6.dr[i] + e7 * k7.dr[i]);
                const double ev = h * (e1 * k1.dv[i] + e3 * k3.dv[i] + e4 * k4.dv[i] +
                                       e5 * k5.dv[i] + e6 * k6.dv[i] + e7 * k7.dv[i]);
                const double scr =
                    opt.abs_tol_pos + opt.rel_tol * std::max(std::fabs(y.r[i]), std::fabs(ynew.r[i]));
                const double scv =
                    opt.abs_tol_vel + opt.rel_tol * std::max(std::fabs(y.v[i]), std::fabs(ynew.v[i]));
                err += (er / scr) * (er / scr) + (ev / scv) * (ev / scv);
            }
            err = std::sqrt(err / 6.0);

            bool accept = err <= 1.0;
            double e_new = 0.0;
            if (accept) {
                e_new = energy(ynew);
                if (std::fabs(e_new - e_prev) > opt.energy_tol_per_step * e_ref) accept = false;
            }

            if (accept) {
                t += h;
                y = ynew;
                k1 = k7;
                e_prev = e_new;
                res.energy_drift = std::max(res.energy_drift, std::fabs(e_new - e0) / e_ref);
                ++res.n_steps;

                const bool now_in_zone = y.r[1] < zone || y.r[1] > geom.plate_gap - zone;
                if (now_in_zone && !in_zone) ++res.collisions;
                in_zone = now_in_zone;

                if (escaped(y)) {
                    res.lost = true;
                    res.lost_time = t;
                    return res;
                }
                const double grow = clipped ? 1.0 : std::min(5.0, 0.9 * std::pow(std::max(err, 1e-10), -0.2));
                h = std::max(h * grow, 1e-14);
            } else {
                const double shrink =
                    err > 1.0 ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.5;
                h *= shrink;
                if (h < 1e-16) {
                    throw NumericError("integrate_trajectory: step size underflow at t=" +
                                       std::to_string(t));
                }
            }
        }
        res.velocity_samples.push_back(y.v);
    }
    return res;
}

}  // namespace molcool
