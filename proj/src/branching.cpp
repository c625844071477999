#include "molcool/branching.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "molcool/angular.hpp"
#include "molcool/errors.hpp"
#include "molcool/stark.hpp"

namespace molcool {

double BranchingTable::total() const {
    double t = 0.0;
    for (const auto& e : entries) t += e.fraction;
    return t;
}

double BranchingTable::fraction_to(const RotationalState& lower) const {
    for (const auto& e : entries) {
        if (e.lower == lower) return e.fraction;
    }
    return 0.0;
}

BranchingTable zero_field_branching(const RotationalState& excited) {
    require_valid(excited, "zero_field_branching");
    if (excited.v != 1) throw DomainError("zero_field_branching: excited state must have v=1");

    BranchingTable table;
    table.upper = excited;
    for (int Jp = excited.J - 1; Jp <= excited.J + 1; ++Jp) {
        if (Jp < std::abs(excited.K)) continue;
        for (int Mp = excited.M - 1; Mp <= excited.M + 1; ++Mp) {
            if (std::abs(Mp) > Jp) continue;
            const RotationalState lower{0, Jp, excited.K, Mp};
            const double s = dipole_coupling_sq(excited, lower);
            if (s > 0.0) table.entries.push_back({lower, s});
        }
    }
    std::sort(table.entries.begin(), table.entries.end(), [](const auto& a, const auto& b) {
        return a.lower.J != b.lower.J ? a.lower.J < b.lower.J : a.lower.M < b.lower.M;
    });
    return table;
}

namespace {

// Field-continuation step used for adiabatic labeling (1 kV/cm).
constexpr double kLabelStep = 1e5;

struct LabeledBlock {
    StarkBlock block;
    std::vector<int> j_label;  // adiabatic J of each sorted eigenlevel
};

// Follows each eigenlevel of the (K, M) block from zero field by
// maximal-overlap continuation and assigns the zero-field J it connects to.
LabeledBlock labeled_eigensystem(const MoleculeSpec& spec, int K, int M, double field, int j_max) {
    const int j_min = std::max(std::abs(K), std::abs(M));
    const int n = j_max - j_min + 1;

    std::vector<int> label(n);
    for (int i = 0; i < n; ++i) label[i] = j_min + i;  // zero-field order is J order

    StarkBlock prev = stark_eigensystem(spec, K, M, 0.0, j_max);
    const int n_steps = std::max(1, static_cast<int>(std::ceil(field / kLabelStep)));
    StarkBlock cur = prev;
    for (int s = 1; s <= n_steps; ++s) {
        const double f = std::min(field, s * kLabelStep);
        cur = stark_eigensystem(spec, K, M, f, j_max);
        std::vector<int> new_label(n, -1);
        std::vector<char> taken(n, 0);
        for (int a = 0; a < n; ++a) {
            double best = 0.0, second = 0.0;
            int arg = -1;
            for (int b = 0; b < n; ++b) {
                double ov = 0.0;
                for (int i = 0; i < n; ++i) ov += cur.eigenvectors[a][i] * prev.eigenvectors[b][i];
                const double ov2 = ov * ov;
                if (ov2 > best) {
                    second = best;
                    best = ov2;
                    arg = b;
                } else if (ov2 > second) {
                    second = ov2;
                }
            }
            if (arg < 0 || best < 0.5 || taken[arg] || best - second < 1e-12) {
                throw NumericError("dressed-state labeling ambiguous for block K=" +
                                   std::to_string(K) + " M=" + std::to_string(M) + " at field " +
                                   std::to_string(f) + " V/m");
            }
            taken[arg] = 1;
            new_label[a] = label[arg];
        }
        label = std::move(new_label);
        prev = std::move(cur);
    }
    return {std::move(prev), std::move(label)};
}

}  // namespace

DressedBranching dressed_branching(const MoleculeSpec& spec, double field,
                                   const RotationalState& excited_label, int j_max) {
    require_valid(excited_label, "dressed_branching");
    if (excited_label.v != 1) throw DomainError("dressed_branching: excited state must have v=1");
    if (field < 0.0) throw DomainError("dressed_branching: negative field");

    const int K = excited_label.K;
    const int M = excited_label.M;
    if (j_max <= 0) j_max = std::max(std::abs(K), std::abs(M)) + 30;

    // The v=1 and v=0 blocks share rotational constants, so the upper block
    // eigenvectors are field-dressed rotor states like the lower ones.
    const LabeledBlock up = labeled_eigensystem(spec, K, M, field, j_max);
    int upper_idx = -1;
    for (size_t i = 0; i < up.j_label.size(); ++i) {
        if (up.j_label[i] == excited_label.J) {
            upper_idx = static_cast<int>(i);
            break;
        }
    }
    if (upper_idx < 0) throw NumericError("dressed_branching: excited label not found in block");
    const std::vector<double>& u = up.block.eigenvectors[upper_idx];
    const int up_jmin = up.block.j_min;
    const int nu = static_cast<int>(u.size());

    DressedBranching out;
    out.table.upper = excited_label;

    for (int Mp = M - 1; Mp <= M + 1; ++Mp) {
        const int lo_jmin = std::max(std::abs(K), std::abs(Mp));
        if (lo_jmin > j_max) continue;
        const LabeledBlock lo = labeled_eigensystem(spec, K, Mp, field, j_max);
        const int nl = static_cast<int>(lo.block.eigenvalues.size());
        for (int level = 0; level < nl; ++level) {
            const std::vector<double>& w = lo.block.eigenvectors[level];
            double amp = 0.0;
            for (int row = 0; row < nu; ++row) {
                const int J = up_jmin + row;
                if (u[row] == 0.0) continue;
                for (int Jp = J - 1; Jp <= J + 1; ++Jp) {
                    const int rowp = Jp - lo_jmin;
                    if (rowp < 0 || rowp >= nl) continue;
                    amp += u[row] * w[rowp] * direction_cosine(Jp, K, Mp, J, K, M);
                }
            }
            const double frac = amp * amp;
            if (frac == 0.0) continue;
            const RotationalState lower{0, lo.j_label[level], K, Mp};
            out.table.entries.push_back({lower, frac});
            if (lo.j_label[level] >= 4) out.leak_high_j += frac;
        }
    }

    std::sort(out.table.entries.begin(), out.table.entries.end(),
              [](const auto& a, const auto& b) {
                  if (a.lower.J != b.lower.J) return a.lower.J < b.lower.J;
                  return a.lower.M < b.lower.M;
              });
    return out;
}

}  // namespace molcool
