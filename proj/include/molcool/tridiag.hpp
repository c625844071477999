#ifndef MOLCOOL_TRIDIAG_HPP
#define MOLCOOL_TRIDIAG_HPP

#include <vector>

namespace molcool {

// Eigendecomposition of a real symmetric tridiagonal matrix by the
// implicit-shift QL algorithm with accumulated rotations.
//
// diag: n diagonal entries; offdiag: n-1 subdiagonal entries.
// On return, eigenvalues are sorted ascending and eigenvectors[k] is the
// orthonormal eigenvector (length n) belonging to eigenvalues[k].
// Throws NumericError if an eigenvalue fails to converge.
struct TridiagEigen {
    std::vector<double> eigenvalues;
    std::vector<std::vector<double>> eigenvectors;
};

TridiagEigen tridiag_eigensystem(std::vector<double> diag, std::vector<double> offdiag);

}  // namespace molcool

#endif
