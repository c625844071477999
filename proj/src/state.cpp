#include "molcool/state.hpp"

#include <sstream>

#include "molcool/errors.hpp"

namespace molcool {

std::string to_label(const RotationalState& s) {
    std::ostringstream os;
    os << "v=" << s.v << "|" << s.J << "," << s.K << "," << s.M << ">";
    return os.str();
}

void require_valid(const RotationalState& s, const char* where) {
    if (!s.valid()) {
        throw DomainError(std::string(where) + ": invalid quantum numbers " + to_label(s));
    }
}

}  // namespace molcool
