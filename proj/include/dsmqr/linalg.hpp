#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsmqr {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

// Dense real matrix, row-major.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {
        if (r <= 0 || c <= 0) throw std::invalid_argument("Matrix: dimensions must be positive");
    }

    double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    bool all_finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

inline Matrix transpose(const Matrix& a) {
    Matrix t(a.cols, a.rows);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
    return t;
}

inline Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matrix product: dimension mismatch");
    Matrix c(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

inline std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
    if (a.cols != static_cast<int>(x.size())) throw std::invalid_argument("matvec: dimension mismatch");
    std::vector<double> y(a.rows, 0.0);
    for (int i = 0; i < a.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < a.cols; ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

// A^T A without materializing the transpose; result is symmetric a.cols x a.cols.
inline Matrix gram_matrix(const Matrix& a) {
    Matrix g(a.cols, a.cols);
    for (int i = 0; i < a.rows; ++i) {
        const double* row = &a.data[static_cast<std::size_t>(i) * a.cols];
        for (int k = 0; k < a.cols; ++k) {
            const double rk = row[k];
            if (rk == 0.0) continue;
            for (int l = k; l < a.cols; ++l) g(k, l) += rk * row[l];
        }
    }
    for (int k = 0; k < a.cols; ++k)
        for (int l = 0; l < k; ++l) g(k, l) = g(l, k);
    return g;
}

inline std::vector<double> transpose_matvec(const Matrix& a, const std::vector<double>& x) {
    if (a.rows != static_cast<int>(x.size())) throw std::invalid_argument("transpose_matvec: dimension mismatch");
    std::vector<double> y(a.cols, 0.0);
    for (int i = 0; i < a.rows; ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        for (int j = 0; j < a.cols; ++j) y[j] += a(i, j) * xi;
    }
    return y;
}

inline double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double v : a.data) m = std::max(m, std::abs(v));
    return m;
}

inline double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double v : a.data) s += v * v;
    return std::sqrt(s);
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

struct QrFactors {
    Matrix Q;  // n x n orthogonal
    Matrix R;  // n x m upper triangular (m >= n), positive diagonal
};

// Householder QR of an n x m matrix with m >= n, returning the full square Q.
// The diagonal of R is made strictly positive (flipping signs of Q columns),
// so the factorization is unique when the leading n columns have full rank.
inline QrFactors householder_qr(const Matrix& b) {
    const int n = b.rows;
    const int m = b.cols;
    if (m < n) throw std::invalid_argument("householder_qr: expected at least as many columns as rows");

    Matrix r = b;
    Matrix q = Matrix::identity(n);
    std::vector<double> v(n);

    for (int j = 0; j < n; ++j) {
        double norm = 0.0;
        for (int i = j; i < n; ++i) norm = std::hypot(norm, r(i, j));
        if (norm == 0.0) throw std::runtime_error("householder_qr: rank-deficient leading block");

        const double alpha = (r(j, j) >= 0.0) ? -norm : norm;
        double vnorm2 = 0.0;
        for (int i = j; i < n; ++i) {
            v[i] = r(i, j);
            if (i == j) v[i] -= alpha;
            vnorm2 += v[i] * v[i];
        }
        if (vnorm2 == 0.0) continue;  // column already triangular

        // r <- (I - 2 v v^T / v^T v) r, applied to columns j..m-1
        for (int c = j; c < m; ++c) {
            double dot = 0.0;
            for (int i = j; i < n; ++i) dot += v[i] * r(i, c);
            const double f = 2.0 * dot / vnorm2;
            for (int i = j; i < n; ++i) r(i, c) -= f * v[i];
        }
        // accumulate q <- q (I - 2 v v^T / v^T v)
        for (int row = 0; row < n; ++row) {
            double dot = 0.0;
            for (int i = j; i < n; ++i) dot += q(row, i) * v[i];
            const double f = 2.0 * dot / vnorm2;
            for (int i = j; i < n; ++i) q(row, i) -= f * v[i];
        }
        r(j, j) = alpha;
        for (int i = j + 1; i < n; ++i) r(i, j) = 0.0;
    }

    for (int j = 0; j < n; ++j) {
        if (r(j, j) < 0.0) {
            for (int c = j; c < m; ++c) r(j, c) = -r(j, c);
            for (int i = 0; i < n; ++i) q(i, j) = -q(i, j);
        }
    }
    return {std::move(q), std::move(r)};
}

// Gaussian elimination with partial pivoting. A pivot smaller than
// pivot_rel_tol * max|A| marks the system numerically singular: the solve
// continues best-effort and *warned is set instead of aborting.
inline std::vector<double> gaussian_solve(Matrix a, std::vector<double> rhs, double pivot_rel_tol,
                                          bool* warned) {
    const int n = a.rows;
    if (a.cols != n || static_cast<int>(rhs.size()) != n)
        throw std::invalid_argument("gaussian_solve: square system required");

    const double scale = max_abs(a);
    const double tiny = pivot_rel_tol * (scale > 0.0 ? scale : 1.0);
    if (warned) *warned = false;

    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (piv != k) {
            for (int c = k; c < n; ++c) std::swap(a(k, c), a(piv, c));
            std::swap(rhs[k], rhs[piv]);
        }
        double pivot = a(k, k);
        if (std::abs(pivot) < tiny) {
            if (warned) *warned = true;
            if (pivot == 0.0) pivot = a(k, k) = tiny;
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = a(i, k) / pivot;
            if (f == 0.0) continue;
            a(i, k) = 0.0;
            for (int c = k + 1; c < n; ++c) a(i, c) -= f * a(k, c);
            rhs[i] -= f * rhs[k];
        }
    }

    std::vector<double> x(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = rhs[i];
        for (int c = i + 1; c < n; ++c) s -= a(i, c) * x[c];
        x[i] = s / a(i, i);
    }
    return x;
}

// Least-squares solve of a tall p x n system by Householder reflections
// applied in place to [A | b]; the normal equations are never formed.
inline std::vector<double> householder_lsq(Matrix a, std::vector<double> rhs, double pivot_rel_tol,
                                           bool* warned) {
    const int p = a.rows;
    const int n = a.cols;
    if (p < n || static_cast<int>(rhs.size()) != p)
        throw std::invalid_argument("householder_lsq: tall system required");

    const double scale = max_abs(a);
    const double tiny = pivot_rel_tol * (scale > 0.0 ? scale : 1.0);
    if (warned) *warned = false;
    std::vector<double> v(p);

    for (int j = 0; j < n; ++j) {
        double norm = 0.0;
        for (int i = j; i < p; ++i) norm = std::hypot(norm, a(i, j));
        const double alpha = (a(j, j) >= 0.0) ? -norm : norm;
        double vnorm2 = 0.0;
        for (int i = j; i < p; ++i) {
            v[i] = a(i, j);
            if (i == j) v[i] -= alpha;
            vnorm2 += v[i] * v[i];
        }
        if (vnorm2 > 0.0) {
            for (int c = j; c < n; ++c) {
                double dot = 0.0;
                for (int i = j; i < p; ++i) dot += v[i] * a(i, c);
                const double f = 2.0 * dot / vnorm2;
                for (int i = j; i < p; ++i) a(i, c) -= f * v[i];
            }
            double dot = 0.0;
            for (int i = j; i < p; ++i) dot += v[i] * rhs[i];
            const double f = 2.0 * dot / vnorm2;
            for (int i = j; i < p; ++i) rhs[i] -= f * v[i];
            a(j, j) = alpha;
        }
    }

    std::vector<double> x(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double diag = a(i, i);
        if (std::abs(diag) < tiny) {
            if (warned) *warned = true;
            if (diag == 0.0) diag = tiny;
        }
        double s = rhs[i];
        for (int c = i + 1; c < n; ++c) s -= a(i, c) * x[c];
        x[i] = s / diag;
    }
    return x;
}

}  // namespace dsmqr
