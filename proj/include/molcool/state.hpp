#ifndef MOLCOOL_STATE_HPP
#define MOLCOOL_STATE_HPP

#include <cstdlib>
#include <string>

namespace molcool {

// Rovibrational level |v; J, K, M> of a symmetric top.
// J >= 0, |K| <= J, |M| <= J; v is 0 or 1 in this suite.
struct RotationalState {
    int v = 0;
    int J = 0;
    int K = 0;
    int M = 0;

    bool valid() const {
        return (v == 0 || v == 1) && J >= 0 && std::abs(K) <= J && std::abs(M) <= J;
    }
    bool operator==(const RotationalState&) const = default;
};

std::string to_label(const RotationalState& s);

// Throws DomainError if the quantum numbers are inconsistent.
void require_valid(const RotationalState& s, const char* where);

}  // namespace molcool

#endif
