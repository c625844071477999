#include <doctest.h>

#include <cmath>

#include "molcool/constants.hpp"
#include "molcool/errors.hpp"
#include "molcool/ratesim.hpp"
#include "molcool/stark.hpp"

using namespace molcool;

namespace {

MoleculeSpec cf3h_like() {
    MoleculeSpec m;
    m.name = "CF3H";
    m.mass = 70.014 * constants::amu;
    m.dipole = 1.65 * constants::debye;
    m.rot_const_a = 0.18930 * constants::wavenumber_cm_to_joule;
    m.rot_const_b = 0.34520 * constants::wavenumber_cm_to_joule;
    m.vib_freq = 3036e2;
    m.decay_rate = 65.2;
    return m;
}

CoolingParams default_params() {
    CoolingParams p;
    p.molecule = cf3h_like();
    p.scheme = build_default_scheme(p.molecule);
    p.ramp.current_step = p.trap.field_step_initial;
    return p;
}

EnergyGrid default_grid() {
    return make_grid(default_params());
}

}  // namespace

TEST_CASE("initial ensemble: normalization, mean energy, empty excited state") {
    const EnergyGrid grid = default_grid();
    const Ensemble ens = init_ensemble(grid, 1e6, 11.7);

    CHECK(ens.total() == doctest::Approx(1e6).epsilon(1e-12));
    for (int r = 0; r < 2; ++r) CHECK(ens.total_state(r, 5) == 0.0);

    double esum = 0.0;
    const auto marg = ens.energy_marginal();
    for (int k = 0; k < grid.n_bins; ++k) esum += marg[k] * grid.bin_energy(k);
    const double mean = esum / ens.total();
    const double want = 0.3 * grid.mass * 11.7 * 11.7;  // (3/10) m v_c^2
    CHECK(mean == doctest::Approx(want).epsilon(1e-4));
    // mean temperature ~0.23 K
    CHECK(mean * 2 / (3 * constants::boltzmann) == doctest::Approx(0.2306).epsilon(1e-3));

    EnergyGrid coarse = grid;
    coarse.bin_width = 0.5 * grid.mass * 11.7 * 11.7 * 0.02;
    coarse.n_bins = 60;
    CHECK_THROWS_AS(init_ensemble(coarse, 1.0, 11.7), ConfigError);
}

TEST_CASE("percentile of the v^2 dv distribution and degenerate cases") {
    const EnergyGrid grid = default_grid();
    Ensemble ens = init_ensemble(grid, 1.0, 11.7);

    const double e80 = percentile_kinetic(ens, 0.8);
    CHECK(e80 == doctest::Approx(6.85e-24).epsilon(2e-3));
    const double v80 = std::sqrt(2 * e80 / grid.mass);
    CHECK(v80 == doctest::Approx(10.86).epsilon(2e-3));

    // all molecules in one bin -> that bin's representative energy
    for (auto& region : ens.pops) {
        for (auto& st : region) std::fill(st.begin(), st.end(), 0.0);
    }
    ens.pops[0][0][1000] = 5.0;
    CHECK(percentile_kinetic(ens, 0.3) == doctest::Approx(grid.bin_energy(1000)));
    CHECK(percentile_kinetic(ens, 0.9) == doctest::Approx(grid.bin_energy(1000)));

    // symmetric two-bin split -> midpoint at q = 0.5
    ens.pops[0][0][2000] = 5.0;
    CHECK(percentile_kinetic(ens, 0.5) ==
          doctest::Approx(0.5 * (grid.bin_energy(1000) + grid.bin_energy(2000))));

    for (auto& region : ens.pops) {
        for (auto& st : region) std::fill(st.begin(), st.end(), 0.0);
    }
    CHECK_THROWS_AS(percentile_kinetic(ens, 0.8), DomainError);
}

TEST_CASE("transition substep: identity, equilibration, conservation") {
    const MoleculeSpec m = cf3h_like();
    EnergyGrid grid;
    grid.mass = m.mass;
    grid.bin_width = constants::boltzmann * 0.12e-3;
    grid.n_bins = 64;

    Ensemble ens;
    ens.grid = grid;
    for (auto& region : ens.pops) {
        for (auto& st : region) st.assign(grid.n_bins, 0.0);
    }
    ens.pops[0][0][10] = 2.0;
    ens.pops[1][3][20] = 3.0;

    SUBCASE("all rates zero -> identity") {
        const LevelScheme s = build_scheme_with_drives({m.name, m.mass, m.dipole, m.rot_const_a,
                                                        m.rot_const_b, m.vib_freq, 0.0},
                                                       {});
        transition_substep(ens, rate_matrices(s), 1.0);
        CHECK(ens.pops[0][0][10] == 2.0);
        CHECK(ens.pops[1][3][20] == 3.0);
        CHECK(ens.total() == doctest::Approx(5.0).epsilon(1e-15));
    }

    SUBCASE("symmetric two-level drive equilibrates") {
        std::vector<DriveSpec> drives = {{0, 2, 100.0, 1, DriveKind::microwave}};
        MoleculeSpec nodecay = m;
        nodecay.decay_rate = 0.0;
        const LevelScheme s = build_scheme_with_drives(nodecay, drives);
        transition_substep(ens, rate_matrices(s), 1.0);  // dt >> 1/r
        CHECK(ens.pops[0][0][10] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(ens.pops[0][2][10] == doctest::Approx(1.0).epsilon(1e-9));
        // region 2 untouched by a region-1 drive
        CHECK(ens.pops[1][3][20] == 3.0);
        CHECK(ens.total() == doctest::Approx(5.0).epsilon(1e-12));
    }

    SUBCASE("full default scheme conserves per-bin totals") {
        const LevelScheme s = build_default_scheme(m);
        const RateMatrices rm = rate_matrices(s);
        transition_substep(ens, rm, 5e-5);
        double bin10 = 0.0, bin20 = 0.0;
        for (int a = 0; a < kNumStates; ++a) {
            bin10 += ens.pops[0][a][10];
            bin20 += ens.pops[1][a][20];
        }
        CHECK(bin10 == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(bin20 == doctest::Approx(3.0).epsilon(1e-12));
    }
}

TEST_CASE("diffusion substep: rates, stationarity, conservation") {
    const MoleculeSpec m = cf3h_like();
    CoolingParams p = default_params();
    const EnergyGrid grid = make_grid(p);
    TrapConfig trap;  // defaults: V = 100 mm^3, A = 10 mm^2

    SUBCASE("escape rate from region 2 matches v A / (4 V2)") {
        Ensemble ens;
        ens.grid = grid;
        for (auto& region : ens.pops) {
            for (auto& st : region) st.assign(grid.n_bins, 0.0);
        }
        // bin whose representative speed is closest to 10 m/s
        const double e10 = 0.5 * grid.mass * 100.0;
        const int k10 = static_cast<int>(e10 / grid.bin_width);
        const double vk = grid.bin_speed(k10);
        ens.pops[1][0][k10] = 1.0;

        PotentialSteps steps{};  // all zero
        const double dt = 1e-4;
        diffusion_substep(ens, trap, steps, dt);
        const double lost = 1.0 - ens.pops[1][0][k10];
        const double rate = lost / dt;
        CHECK(rate == doctest::Approx(vk * trap.interface_area / (4 * trap.volume2))
                          .epsilon(1e-9));
        CHECK(rate == doctest::Approx(250.0).epsilon(2e-3));
        CHECK(ens.pops[0][0][k10] == doctest::Approx(lost).epsilon(1e-12));
    }

    SUBCASE("arrival speed in region 2 from 10 m/s against a 0.4 K step") {
        const double de = constants::boltzmann * 0.4;
        const double v = 10.0;
        const double va2 = std::sqrt(v * v - 2 * de / m.mass);
        CHECK(va2 == doctest::Approx(2.23).epsilon(2e-3));
    }

    SUBCASE("p ~ V_i v_k is stationary under diffusion") {
        Ensemble ens;
        ens.grid = grid;
        for (auto& region : ens.pops) {
            for (auto& st : region) st.assign(grid.n_bins, 0.0);
        }
        PotentialSteps steps{};
        const LevelScheme scheme = build_default_scheme(m);
        for (int a = 0; a < kNumStates; ++a) {
            const double de =
                std::llround(stark_factor(scheme.states[a]) * m.dipole * 15e5 / grid.bin_width) *
                grid.bin_width;
            steps.delta_e[a] = de;
            const int s = static_cast<int>(std::llround(de / grid.bin_width));
            for (int k = 0; k < grid.n_bins; ++k) {
                ens.pops[0][a][k] = trap.volume1 * grid.bin_speed(k);
                if (k + s < grid.n_bins) ens.pops[1][a][k] = trap.volume2 * grid.bin_speed(k);
            }
        }
        Ensemble before = ens;
        const double dt = 1e-4;
        const int n_steps = 10000;  // 1 s
        for (int it = 0; it < n_steps; ++it) diffusion_substep(ens, trap, steps, dt);

        double max_rel = 0.0;
        for (int r = 0; r < 2; ++r) {
            for (int a = 0; a < kNumStates; ++a) {
                for (int k = 0; k < grid.n_bins; ++k) {
                    const double b = before.pops[r][a][k];
                    if (b <= 0) continue;
                    max_rel = std::max(max_rel, std::fabs(ens.pops[r][a][k] - b) / b);
                }
            }
        }
        CHECK(max_rel < 1e-8);
    }

    SUBCASE("energy + potential is conserved and number is conserved") {
        Ensemble ens = init_ensemble(grid, 1.0, 11.7);
        PotentialSteps steps{};
        const LevelScheme scheme = build_default_scheme(m);
        for (int a = 0; a < kNumStates; ++a) {
            steps.delta_e[a] =
                std::llround(stark_factor(scheme.states[a]) * m.dipole * 15e5 / grid.bin_width) *
                grid.bin_width;
        }
        auto energy = [&]() {
            double e = 0.0;
            for (int r = 0; r < 2; ++r) {
                for (int a = 0; a < kNumStates; ++a) {
                    for (int k = 0; k < grid.n_bins; ++k) {
                        e += ens.pops[r][a][k] *
                             (grid.bin_energy(k) + (r == 1 ? steps.delta_e[a] : 0.0));
                    }
                }
            }
            return e;
        };
        const double e0 = energy();
        const double n0 = ens.total();
        for (int it = 0; it < 10000; ++it) diffusion_substep(ens, trap, steps, 1e-4);
        CHECK(std::fabs(energy() - e0) / e0 < 1e-8);
        CHECK(std::fabs(ens.total() - n0) / n0 < 1e-9);
    }

    SUBCASE("CFL violation raises a step-size error") {
        Ensemble ens = init_ensemble(grid, 1.0, 11.7);
        PotentialSteps steps{};
        CHECK_THROWS_AS(diffusion_substep(ens, trap, steps, 1.0), NumericError);
    }

    SUBCASE("unsnapped step raises a config error") {
        Ensemble ens = init_ensemble(grid, 1.0, 11.7);
        PotentialSteps steps{};
        steps.delta_e[1] = grid.bin_width * 10.5;
        CHECK_THROWS_AS(diffusion_substep(ens, trap, steps, 1e-4), ConfigError);
    }
}

TEST_CASE("ramp controller behavior") {
    const MoleculeSpec m = cf3h_like();
    CoolingParams p = default_params();
    const EnergyGrid grid = make_grid(p);
    Ensemble ens = init_ensemble(grid, 1.0, 11.7);
    const LevelScheme scheme = build_default_scheme(m);

    RampController ctrl;
    ctrl.kappa = 1.0;
    ctrl.current_step = 50e5;  // far above the candidate
    const double step1 = update_ramp(ctrl, ens, m, scheme);
    // kappa=1: candidate = E80 / ((2/3) d) ~ 18.7 kV/cm
    CHECK(step1 == doctest::Approx(18.7e5).epsilon(5e-3));

    // unchanged ensemble -> unchanged step
    const double step2 = update_ramp(ctrl, ens, m, scheme);
    CHECK(step2 == doctest::Approx(step1).epsilon(1e-12));

    // a hotter ensemble cannot raise the step (monotone clamp)
    Ensemble hot = init_ensemble(grid, 1.0, 13.0);
    const double step3 = update_ramp(ctrl, hot, m, scheme);
    CHECK(step3 <= step1 * (1 + 1e-12));

    // the floor holds
    RampController low;
    low.current_step = 1.2e4;
    for (int i = 0; i < 5; ++i) {
        Ensemble cold;
        cold.grid = grid;
        for (auto& region : cold.pops) {
            for (auto& st : region) st.assign(grid.n_bins, 0.0);
        }
        cold.pops[0][1][3] = 1.0;
        update_ramp(low, cold, m, scheme);
    }
    CHECK(low.current_step >= low.min_step * (1 - 1e-9));
}

TEST_CASE("cooling run without drives or decay conserves the total number") {
    MoleculeSpec m = cf3h_like();
    m.decay_rate = 0.0;
    CoolingParams p;
    p.molecule = m;
    p.scheme = build_scheme_with_drives(m, {});
    p.trap.field_step_initial = 15e5;
    p.ramp.current_step = 0.0;  // filled by run_cooling
    p.duration = 0.5;
    p.record_interval = 0.1;
    p.n_total = 1.0;

    const auto records = run_cooling(p);
    const double n0 = records.front().total_number;
    for (const auto& rec : records) {
        CHECK(std::fabs(rec.total_number - n0) / n0 < 1e-9);
    }
}
