#include "molcool/expm.hpp"

#include <cmath>
#include <cstdlib>

#include "molcool/errors.hpp"

namespace molcool {

namespace {

using Mat = std::vector<double>;

Mat matmul(const Mat& a, const Mat& b, int n) {
    Mat c(n * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const double aik = a[i * n + k];
            if (aik == 0.0) continue;
            for (int j = 0; j < n; ++j) c[i * n + j] += aik * b[k * n + j];
        }
    }
    return c;
}

// Solves A X = B in place (X returned in b), partial pivoting.
void solve_inplace(Mat a, Mat& b, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::fabs(a[r * n + col]) > std::fabs(a[piv * n + col])) piv = r;
        }
        if (a[piv * n + col] == 0.0) throw NumericError("expm_dense: singular Pade denominator");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a[col * n + j], a[piv * n + j]);
            for (int j = 0; j < n; ++j) std::swap(b[col * n + j], b[piv * n + j]);
        }
        const double inv = 1.0 / a[col * n + col];
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] * inv;
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) a[r * n + j] -= f * a[col * n + j];
            for (int j = 0; j < n; ++j) b[r * n + j] -= f * b[col * n + j];
        }
    }
    for (int col = n - 1; col >= 0; --col) {
        const double inv = 1.0 / a[col * n + col];
        for (int j = 0; j < n; ++j) b[col * n + j] *= inv;
        for (int r = 0; r < col; ++r) {
            const double f = a[r * n + col];
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) b[r * n + j] -= f * b[col * n + j];
        }
    }
}

}  // namespace

std::vector<double> expm_dense(const std::vector<double>& a, int n) {
    if (static_cast<int>(a.size()) != n * n) throw NumericError("expm_dense: bad dimensions");

    double norm = 0.0;  // infinity norm
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += std::fabs(a[i * n + j]);
        norm = std::max(norm, row);
    }
    int squarings = 0;
    if (norm > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    }
    const double scale = std::ldexp(1.0, -squarings);

    Mat as(a);
    for (double& x : as) x *= scale;

    // Pade [6/6]: N(A) = sum c_k A^k, D(A) = sum c_k (-A)^k, exp(A) = D^{-1} N.
    constexpr int order = 6;
    double coeff[order + 1];
    coeff[0] = 1.0;
    for (int k = 0; k < order; ++k) {
        coeff[k + 1] = coeff[k] * (order - k) / ((2.0 * order - k) * (k + 1));
    }

    Mat power(n * n, 0.0);
    for (int i = 0; i < n; ++i) power[i * n + i] = 1.0;
    Mat num(n * n, 0.0), den(n * n, 0.0);
    for (int i = 0; i < n; ++i) num[i * n + i] = den[i * n + i] = coeff[0];
    double sign = 1.0;
    for (int k = 1; k <= order; ++k) {
        power = matmul(power, as, n);
        sign = -sign;
        for (int i = 0; i < n * n; ++i) {
            num[i] += coeff[k] * power[i];
            den[i] += coeff[k] * sign * power[i];
        }
    }
    solve_inplace(std::move(den), num, n);

    for (int s = 0; s < squarings; ++s) num = matmul(num, num, n);
    return num;
}

}  // namespace molcool
