#include "molcool/angular.hpp"

#include <cmath>

#include "molcool/errors.hpp"

namespace molcool {

double cg_rank1(int j, int m, int q, int jp) {
    if (std::abs(m) > j || std::abs(m + q) > jp || std::abs(q) > 1) return 0.0;
    const double dj = j, dm = m;
    if (jp == j + 1) {
        switch (q) {
            case +1: return std::sqrt((dj + dm + 1) * (dj + dm + 2) / ((2 * dj + 1) * (2 * dj + 2)));
            case 0:  return std::sqrt((dj - dm + 1) * (dj + dm + 1) / ((2 * dj + 1) * (dj + 1)));
            case -1: return std::sqrt((dj - dm + 1) * (dj - dm + 2) / ((2 * dj + 1) * (2 * dj + 2)));
        }
    } else if (jp == j) {
        if (j == 0) return 0.0;
        switch (q) {
            case +1: return -std::sqrt((dj + dm + 1) * (dj - dm) / (2 * dj * (dj + 1)));
            case 0:  return dm / std::sqrt(dj * (dj + 1));
            case -1: return std::sqrt((dj - dm + 1) * (dj + dm) / (2 * dj * (dj + 1)));
        }
    } else if (jp == j - 1) {
        switch (q) {
            case +1: return std::sqrt((dj - dm) * (dj - dm - 1) / (2 * dj * (2 * dj + 1)));
            case 0:  return -std::sqrt((dj - dm) * (dj + dm) / (dj * (2 * dj + 1)));
            case -1: return std::sqrt((dj + dm) * (dj + dm - 1) / (2 * dj * (2 * dj + 1)));
        }
    }
    return 0.0;
}

double direction_cosine(int Jp, int Kp, int Mp, int J, int K, int M) {
    if (Kp != K) return 0.0;                      // parallel band
    const int dJ = Jp - J;
    if (dJ < -1 || dJ > 1) return 0.0;
    const int p = Mp - M;
    if (p < -1 || p > 1) return 0.0;
    if (Jp < std::abs(Kp) || Jp < std::abs(Mp)) return 0.0;
    const double norm = std::sqrt((2.0 * J + 1) / (2.0 * Jp + 1));
    return norm * cg_rank1(J, M, p, Jp) * cg_rank1(J, K, 0, Jp);
}

double dipole_coupling_sq(const RotationalState& upper, const RotationalState& lower) {
    if (upper.J < 0) throw DomainError("dipole_coupling_sq: invalid upper state");
    // Forbidden or unphysical final states (e.g. J < |K|) score zero.
    if (!lower.valid() || !upper.valid()) return 0.0;
    const double amp = direction_cosine(lower.J, lower.K, lower.M, upper.J, upper.K, upper.M);
    return amp * amp;
}

}  // namespace molcool
