#include "molcool/ratesim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "molcool/constants.hpp"
#include "molcool/errors.hpp"
#include "molcool/expm.hpp"
#include "molcool/stark.hpp"

namespace molcool {

void TrapConfig::validate() const {
    if (volume1 <= 0 || volume2 <= 0 || interface_area <= 0) {
        throw ConfigError("trap volumes and interface area must be positive");
    }
    if (field1 < 0 || field_step_initial <= 0) {
        throw ConfigError("trap fields must satisfy field1 >= 0, field_step_initial > 0");
    }
}

double EnergyGrid::bin_speed(int k) const {
    return std::sqrt(2.0 * bin_energy(k) / mass);
}

double Ensemble::total() const {
    double t = 0.0;
    for (const auto& region : pops) {
        for (const auto& state : region) {
            for (double x : state) t += x;
        }
    }
    return t;
}

double Ensemble::total_state(int region, int state) const {
    double t = 0.0;
    for (double x : pops[region][state]) t += x;
    return t;
}

std::vector<double> Ensemble::energy_marginal() const {
    std::vector<double> m(grid.n_bins, 0.0);
    for (const auto& region : pops) {
        for (const auto& state : region) {
            for (int k = 0; k < grid.n_bins; ++k) m[k] += state[k];
        }
    }
    return m;
}

Ensemble init_ensemble(const EnergyGrid& grid, double n_total, double v_cutoff) {
    if (v_cutoff <= 0) throw ConfigError("init_ensemble: v_cutoff must be positive");
    if (grid.bin_width <= 0 || grid.n_bins <= 0 || grid.mass <= 0) {
        throw ConfigError("init_ensemble: invalid grid");
    }
    const double e_cut = 0.5 * grid.mass * v_cutoff * v_cutoff;
    if (grid.bin_width > 0.01 * e_cut) {
        throw ConfigError("init_ensemble: grid too coarse to resolve the cutoff "
                          "(bin width > 1% of the cutoff energy)");
    }
    if (grid.n_bins * grid.bin_width < e_cut) {
        throw ConfigError("init_ensemble: grid does not cover the cutoff energy");
    }

    // v^2 dv translates to dN ~ d(E^{3/2}) on the energy axis.
    std::vector<double> w(grid.n_bins, 0.0);
    double wsum = 0.0;
    for (int k = 0; k < grid.n_bins; ++k) {
        const double lo = std::min(k * grid.bin_width, e_cut);
        const double hi = std::min((k + 1) * grid.bin_width, e_cut);
        if (hi <= lo) break;
        w[k] = std::pow(hi, 1.5) - std::pow(lo, 1.5);
        wsum += w[k];
    }

    Ensemble ens;
    ens.grid = grid;
    const double per_cell = n_total / (2.0 * 5.0);
    for (int r = 0; r < 2; ++r) {
        for (int a = 0; a < kNumStates; ++a) {
            ens.pops[r][a].assign(grid.n_bins, 0.0);
        }
    }
    for (int r = 0; r < 2; ++r) {
        for (int a = 0; a < kNumStates - 1; ++a) {  // all but |e>
            for (int k = 0; k < grid.n_bins; ++k) {
                ens.pops[r][a][k] = per_cell * w[k] / wsum;
            }
        }
    }
    return ens;
}

TransitionPropagator::TransitionPropagator(const RateMatrices& rates, double dt) : dt_(dt) {
    if (dt <= 0) throw ConfigError("TransitionPropagator: dt must be positive");
    for (int r = 0; r < 2; ++r) {
        const auto& c = (r == 0) ? rates.c1 : rates.c2;
        // Generator G[a][a'] = c_{a',a} off-diagonal, column sums zero.
        std::vector<double> g(kNumStates * kNumStates, 0.0);
        for (int a = 0; a < kNumStates; ++a) {
            for (int ap = 0; ap < kNumStates; ++ap) {
                if (a == ap) continue;
                if (c[a][ap] < 0) throw ConfigError("rate matrix entries must be >= 0");
                g[ap * kNumStates + a] += c[a][ap];
                g[a * kNumStates + a] -= c[a][ap];
            }
        }
        for (double& x : g) x *= dt;
        const auto e = expm_dense(g, kNumStates);
        std::copy(e.begin(), e.end(), exp_[r].begin());
    }
}

void TransitionPropagator::apply(Ensemble& ens) const {
    const int nb = ens.grid.n_bins;
    if (static_cast<int>(scratch_.size()) < kNumStates * nb) {
        scratch_.assign(static_cast<size_t>(kNumStates) * nb, 0.0);
    }
    const double neg_tol = -1e-12 * std::max(1.0, ens.total());
    for (int r = 0; r < 2; ++r) {
        const auto& e = exp_[r];
        double lowest = 0.0;
        for (int a = 0; a < kNumStates; ++a) {
            double* out = scratch_.data() + static_cast<size_t>(a) * nb;
            const double e0 = e[a * kNumStates + 0], e1 = e[a * kNumStates + 1],
                         e2 = e[a * kNumStates + 2], e3 = e[a * kNumStates + 3],
                         e4 = e[a * kNumStates + 4], e5 = e[a * kNumStates + 5];
            const double* p0 = ens.pops[r][0].data();
            const double* p1 = ens.pops[r][1].data();
            const double* p2 = ens.pops[r][2].data();
            const double* p3 = ens.pops[r][3].data();
            const double* p4 = ens.pops[r][4].data();
            const double* p5 = ens.pops[r][5].data();
            for (int k = 0; k < nb; ++k) {
                const double v = e0 * p0[k] + e1 * p1[k] + e2 * p2[k] + e3 * p3[k] +
                                 e4 * p4[k] + e5 * p5[k];
                out[k] = v;
                lowest = std::min(lowest, v);
            }
        }
        if (lowest < neg_tol) {
            throw NumericError("transition substep produced negative population " +
                               std::to_string(lowest));
        }
        for (int a = 0; a < kNumStates; ++a) {
            std::copy_n(scratch_.data() + static_cast<size_t>(a) * nb, nb,
                        ens.pops[r][a].data());
        }
    }
}

void transition_substep(Ensemble& ens, const RateMatrices& rates, double dt) {
    TransitionPropagator(rates, dt).apply(ens);
}

void diffusion_substep(Ensemble& ens, const TrapConfig& trap, const PotentialSteps& steps,
                       double dt) {
    const EnergyGrid& grid = ens.grid;
    const int nb = grid.n_bins;
    const double eps = grid.bin_width;

    std::array<int, kNumStates> shift{};
    for (int a = 0; a < kNumStates; ++a) {
        const double s = steps.delta_e[a] / eps;
        shift[a] = static_cast<int>(std::llround(s));
        if (std::fabs(s - shift[a]) > 1e-9 || shift[a] < 0) {
            throw ConfigError("diffusion_substep: delta_e for state " + std::to_string(a) +
                              " is not snapped to the energy grid");
        }
    }

    const double r2 = trap.interface_area / trap.volume2 / 4.0;
    const double r1 = trap.interface_area / trap.volume1 / 4.0;
    const double vmax = grid.bin_speed(nb - 1);
    if (dt * std::max(r1, r2) * vmax >= 0.5) {
        throw NumericError("diffusion_substep: CFL violated, reduce dt (dt*rate = " +
                           std::to_string(dt * std::max(r1, r2) * vmax) + ")");
    }

    static thread_local std::vector<double> d1, d2, vk;
    if (static_cast<int>(vk.size()) != nb) {
        vk.resize(nb);
        for (int k = 0; k < nb; ++k) vk[k] = grid.bin_speed(k);
    } else if (std::fabs(vk[0] - grid.bin_speed(0)) > 0) {
        for (int k = 0; k < nb; ++k) vk[k] = grid.bin_speed(k);
    }

    const double clamp_tol = 1e-12 * std::max(1.0, ens.total());
    for (int a = 0; a < kNumStates; ++a) {
        const int s = shift[a];
        std::vector<double>& p1 = ens.pops[0][a];
        std::vector<double>& p2 = ens.pops[1][a];
        d1.assign(nb, 0.0);
        d2.assign(nb, 0.0);

        // Region 2 bin k -> region 1 bin k+s at rate (A/V2) v_k / 4.
        double clamped = 0.0;
        for (int k = 0; k < nb; ++k) {
            if (p2[k] == 0.0) continue;
            if (k + s >= nb) {
                clamped += dt * r2 * vk[k] * p2[k];
                continue;
            }
            const double f = dt * r2 * vk[k] * p2[k];
            d2[k] -= f;
            d1[k + s] += f;
        }
        if (clamped > clamp_tol) {
            throw NumericError("diffusion_substep: energy grid overflow for state " +
                               std::to_string(a) + "; enlarge n_bins");
        }

        // Region 1 bin k -> region 2 bin k-s at rate (A/V1) v_{k-s}^2 / (4 v_k);
        // bins with k < s have zero outflow (below the potential step).
        for (int k = s; k < nb; ++k) {
            if (p1[k] == 0.0) continue;
            const double va2 = vk[k - s];
            const double f = dt * r1 * (va2 * va2 / vk[k]) * p1[k];
            d1[k] -= f;
            d2[k - s] += f;
        }

        for (int k = 0; k < nb; ++k) p1[k] += d1[k];
        for (int k = 0; k < nb; ++k) p2[k] += d2[k];
    }
}

double percentile_kinetic(const Ensemble& ens, double q) {
    if (q <= 0.0 || q >= 1.0) throw DomainError("percentile_kinetic: q must be in (0,1)");
    const std::vector<double> marg = ens.energy_marginal();
    double total = 0.0;
    for (double x : marg) total += x;
    if (total <= 0.0) throw DomainError("percentile_kinetic: empty ensemble");

    // CDF anchored at bin midpoints, linear between them.
    const double target = q * total;
    double below = 0.0;  // mass strictly below current bin
    const double eps = ens.grid.bin_width;
    double prev_mid_cdf = 0.0, prev_mid_e = 0.5 * eps;
    bool have_prev = false;
    for (int k = 0; k < ens.grid.n_bins; ++k) {
        if (marg[k] <= 0.0) {
            below += marg[k];
            continue;
        }
        const double mid_cdf = below + 0.5 * marg[k];
        const double mid_e = ens.grid.bin_energy(k);
        if (target <= mid_cdf) {
            if (!have_prev) return mid_e;
            const double f = (target - prev_mid_cdf) / (mid_cdf - prev_mid_cdf);
            return prev_mid_e + f * (mid_e - prev_mid_e);
        }
        prev_mid_cdf = mid_cdf;
        prev_mid_e = mid_e;
        have_prev = true;
        below += marg[k];
    }
    return prev_mid_e;
}

double update_ramp(RampController& ctrl, const Ensemble& ens, const MoleculeSpec& spec,
                   const LevelScheme& scheme) {
    const double eq = percentile_kinetic(ens, ctrl.percentile);
    double max_factor = 0.0;
    for (const auto& st : scheme.states) max_factor = std::max(max_factor, stark_factor(st));
    if (max_factor <= 0.0) throw ConfigError("update_ramp: scheme has no Stark-shifted state");

    // Smallest grid-snapped step not below min_step; the ramp pins here.
    const double eps = ens.grid.bin_width;
    const double unit = eps / (max_factor * spec.dipole);
    const double floor_step =
        std::max(1LL, static_cast<long long>(std::ceil(ctrl.min_step / unit - 1e-12))) * unit;

    double step = ctrl.kappa * eq / (max_factor * spec.dipole);
    step = std::min(step, ctrl.current_step);
    step = std::max(step, floor_step);

    // Snap so the strongest per-state step is an integer number of bins.
    double snapped = std::max(1LL, std::llround(step / unit)) * unit;
    if (snapped < floor_step) snapped = floor_step;
    ctrl.current_step = std::min(snapped, std::max(ctrl.current_step, floor_step));
    return ctrl.current_step;
}

EnergyGrid make_grid(const CoolingParams& params) {
    EnergyGrid grid;
    grid.mass = params.molecule.mass;
    grid.bin_width = params.bin_width > 0 ? params.bin_width : constants::boltzmann * 0.12e-3;
    if (params.n_bins > 0) {
        grid.n_bins = params.n_bins;
    } else {
        double max_factor = 0.0;
        for (const auto& st : params.scheme.states) {
            max_factor = std::max(max_factor, stark_factor(st));
        }
        const double e_cut = 0.5 * grid.mass * params.v_cutoff * params.v_cutoff;
        const double de0 = max_factor * params.molecule.dipole * params.trap.field_step_initial;
        grid.n_bins = static_cast<int>(std::ceil((e_cut + de0) / grid.bin_width)) + 2;
    }
    return grid;
}

namespace {

PotentialSteps snapped_steps(const MoleculeSpec& spec, const LevelScheme& scheme,
                             double field_step, double eps) {
    PotentialSteps steps;
    for (int a = 0; a < kNumStates; ++a) {
        const double de = stark_factor(scheme.states[a]) * spec.dipole * field_step;
        steps.delta_e[a] = std::llround(de / eps) * eps;
    }
    return steps;
}

CoolingRecord make_record(double t, const Ensemble& ens, const RampController& ramp,
                          double decays) {
    CoolingRecord rec;
    rec.time = t;
    rec.temperature_p80 =
        percentile_kinetic(ens, ramp.percentile) * 2.0 / (3.0 * constants::boltzmann);
    rec.field_step = ramp.current_step;
    rec.total_number = ens.total();
    rec.decays_cum = decays;
    for (int r = 0; r < 2; ++r) {
        for (int a = 0; a < kNumStates; ++a) rec.region_state_totals[r][a] = ens.total_state(r, a);
    }
    return rec;
}

}  // namespace

std::vector<CoolingRecord> run_cooling(const CoolingParams& params, const SnapshotFn& snapshot_fn) {
    params.trap.validate();
    params.scheme.validate();
    if (params.duration <= 0 || params.dt <= 0) {
        throw ConfigError("run_cooling: duration and dt must be positive");
    }
    if (params.trap.field_step_initial < params.ramp.min_step) {
        throw ConfigError("run_cooling: field_step_initial below ramp min_step");
    }

    const EnergyGrid grid = make_grid(params);
    Ensemble ens = init_ensemble(grid, params.n_total, params.v_cutoff);

    RampController ramp = params.ramp;
    if (ramp.current_step <= 0) ramp.current_step = params.trap.field_step_initial;

    const RateMatrices rates = rate_matrices(params.scheme);
    const TransitionPropagator half(rates, params.dt / 2.0);
    const int excited = params.scheme.excited_index();

    PotentialSteps steps =
        snapped_steps(params.molecule, params.scheme, ramp.current_step, grid.bin_width);

    const long n_steps = std::lround(params.duration / params.dt);
    const long update_every = std::max(1L, std::lround(ramp.update_interval / params.dt));
    const long record_every = std::max(1L, std::lround(params.record_interval / params.dt));

    std::vector<long> snap_steps;
    for (double ts : params.snapshot_times) snap_steps.push_back(std::lround(ts / params.dt));

    const double n_total = ens.total();
    double decays = 0.0;

    std::vector<CoolingRecord> records;
    records.push_back(make_record(0.0, ens, ramp, decays));
    for (size_t i = 0; i < snap_steps.size(); ++i) {
        if (snap_steps[i] == 0 && snapshot_fn) snapshot_fn(params.snapshot_times[i], ens);
    }

    for (long it = 0; it < n_steps; ++it) {
        if (it > 0 && it % update_every == 0) {
            update_ramp(ramp, ens, params.molecule, params.scheme);
            steps = snapped_steps(params.molecule, params.scheme, ramp.current_step,
                                  grid.bin_width);
        }

        double ne = 0.0;
        for (int r = 0; r < 2; ++r) ne += ens.total_state(r, excited);

        half.apply(ens);
        diffusion_substep(ens, params.trap, steps, params.dt);
        half.apply(ens);

        double ne_after = 0.0;
        for (int r = 0; r < 2; ++r) ne_after += ens.total_state(r, excited);
        decays += params.scheme.gamma * 0.5 * (ne + ne_after) * params.dt / n_total;

        const long step_now = it + 1;
        const double t_now = step_now * params.dt;
        if (step_now % record_every == 0 || step_now == n_steps) {
            records.push_back(make_record(t_now, ens, ramp, decays));
        }
        if (snapshot_fn) {
            for (size_t i = 0; i < snap_steps.size(); ++i) {
                if (snap_steps[i] == step_now) snapshot_fn(params.snapshot_times[i], ens);
            }
        }
    }
    return records;
}

}  // namespace molcool
