#include "molcool/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "molcool/errors.hpp"

namespace molcool {

namespace {

double hypot2(double a, double b) {
    const double absa = std::fabs(a), absb = std::fabs(b);
    if (absa > absb) {
        const double r = absb / absa;
        return absa * std::sqrt(1.0 + r * r);
    }
    if (absb == 0.0) return 0.0;
    const double r = absa / absb;
    return absb * std::sqrt(1.0 + r * r);
}

}  // namespace

TridiagEigen tridiag_eigensystem(std::vector<double> d, std::vector<double> off) {
    const int n = static_cast<int>(d.size());
    if (n == 0) return {};
    if (static_cast<int>(off.size()) != n - 1) {
        throw NumericError("tridiag_eigensystem: offdiag size must be n-1");
    }

    // e[i] couples rows i and i+1; e[n-1] is a workspace zero.
    std::vector<double> e(off);
    e.push_back(0.0);

    // Rotation accumulator, starts as identity; z[i][k] = component i of vector k.
    std::vector<std::vector<double>> z(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) z[i][i] = 1.0;

    // Implicit-shift QL sweeps (tql2 lineage).
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (iter++ == 50) {
                    throw NumericError("tridiag_eigensystem: no convergence for eigenvalue " +
                                       std::to_string(l) + " after 50 QL iterations (n=" +
                                       std::to_string(n) + ")");
                }
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = hypot2(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = hypot2(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = z[k][i + 1];
                        z[k][i + 1] = s * z[k][i] + c * f;
                        z[k][i] = c * z[k][i] - s * f;
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });

    TridiagEigen out;
    out.eigenvalues.resize(n);
    out.eigenvectors.assign(n, std::vector<double>(n));
    for (int k = 0; k < n; ++k) {
        out.eigenvalues[k] = d[order[k]];
        for (int i = 0; i < n; ++i) out.eigenvectors[k][i] = z[i][order[k]];
    }
    return out;
}

}  // namespace molcool
