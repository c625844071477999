#include <doctest.h>

#include <cmath>

#include "molcool/angular.hpp"
#include "wigner_oracle.hpp"

using molcool::RotationalState;
using molcool::dipole_coupling_sq;
using molcool::direction_cosine;

TEST_CASE("selection rules give zero line strength") {
    const RotationalState up{1, 2, 2, -2};
    CHECK(dipole_coupling_sq(up, {0, 3, 3, -2}) == 0.0);   // dK = 1
    CHECK(dipole_coupling_sq(up, {0, 1, 2, -2}) == 0.0);   // J >= |K| impossible
    CHECK(dipole_coupling_sq(up, {0, 2, 2, 0}) == 0.0);    // dM = 2
    CHECK(dipole_coupling_sq(up, {0, 4, 2, -2}) == 0.0);   // dJ = 2
}

TEST_CASE("line strength is symmetric under exchange") {
    for (int J = 1; J <= 5; ++J) {
        for (int K = 0; K <= J; ++K) {
            for (int M = -J; M <= J; ++M) {
                const RotationalState a{0, J, K, M};
                for (int Jp = J - 1; Jp <= J + 1; ++Jp) {
                    for (int Mp = M - 1; Mp <= M + 1; ++Mp) {
                        if (Jp < 0 || std::abs(K) > Jp || std::abs(Mp) > Jp) continue;
                        const RotationalState b{0, Jp, K, Mp};
                        CHECK(dipole_coupling_sq(a, b) ==
                              doctest::Approx(dipole_coupling_sq(b, a)).epsilon(1e-14));
                    }
                }
            }
        }
    }
}

TEST_CASE("sum rule: strengths out of any upper state total one") {
    for (int J = 0; J <= 10; ++J) {
        for (int K = -J; K <= J; ++K) {
            for (int M = -J; M <= J; ++M) {
                const RotationalState up{1, J, K, M};
                double sum = 0.0;
                for (int Jp = J - 1; Jp <= J + 1; ++Jp) {
                    for (int Mp = M - 1; Mp <= M + 1; ++Mp) {
                        sum += dipole_coupling_sq(up, {0, Jp, K, Mp});
                    }
                }
                CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("signed elements match the exact 3-j oracle") {
    for (int J = 0; J <= 6; ++J) {
        for (int K = -J; K <= J; ++K) {
            for (int M = -J; M <= J; ++M) {
                for (int Jp = std::max(0, J - 1); Jp <= J + 1; ++Jp) {
                    for (int Mp = M - 1; Mp <= M + 1; ++Mp) {
                        if (std::abs(K) > Jp || std::abs(Mp) > Jp) continue;
                        const double got = direction_cosine(Jp, K, Mp, J, K, M);
                        const double want = oracle::direction_cosine(Jp, K, Mp, J, K, M);
                        CHECK(got == doctest::Approx(want).epsilon(1e-12));
                    }
                }
            }
        }
    }
}

TEST_CASE("spec example: total strength out of |2,2,-2>") {
    const RotationalState up{1, 2, 2, -2};
    double sum = 0.0;
    for (int Jp = 1; Jp <= 3; ++Jp) {
        for (int Mp = -3; Mp <= -1; ++Mp) {
            if (std::abs(Mp) > Jp || Jp < 2) continue;
            sum += dipole_coupling_sq(up, {0, Jp, 2, Mp});
        }
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}
