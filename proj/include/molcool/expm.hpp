#ifndef MOLCOOL_EXPM_HPP
#define MOLCOOL_EXPM_HPP

#include <vector>

namespace molcool {

// Dense matrix exponential of a small n x n matrix (row-major), by
// Pade [6/6] approximation with scaling and squaring.
std::vector<double> expm_dense(const std::vector<double>& a, int n);

}  // namespace molcool

#endif
