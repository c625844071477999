#ifndef MOLCOOL_BRANCHING_HPP
#define MOLCOOL_BRANCHING_HPP

#include <vector>

#include "molcool/molecule.hpp"
#include "molcool/state.hpp"

namespace molcool {

struct BranchingEntry {
    RotationalState lower;
    double fraction = 0.0;
};

struct BranchingTable {
    RotationalState upper;
    std::vector<BranchingEntry> entries;  // ordered by (J, M) of the lower state

    double total() const;
    // Fraction into a specific lower state; 0 if absent.
    double fraction_to(const RotationalState& lower) const;
};

// Spontaneous-decay branching of a v=1 level over the v=0 levels allowed by
// the parallel-band selection rules; fractions are rigid-rotor line
// strengths (frequency-cubed weighting across rotational sublevels is
// negligible at vibrational scale and omitted). Throws DomainError if the
// input is not a v=1 state.
BranchingTable zero_field_branching(const RotationalState& excited);

// Branching between field-dressed eigenstates. The lower states in the
// returned table carry adiabatic labels: the (J,K,M) of the zero-field state
// each dressed level connects to. leak_high_j sums the fractions into
// dressed states labeled J >= 4.
struct DressedBranching {
    BranchingTable table;
    double leak_high_j = 0.0;
};

DressedBranching dressed_branching(const MoleculeSpec& spec, double field,
                                   const RotationalState& excited_label, int j_max = 0);

}  // namespace molcool

#endif
