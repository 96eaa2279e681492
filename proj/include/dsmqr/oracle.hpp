#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dsmqr/basis.hpp"
#include "dsmqr/linalg.hpp"

namespace dsmqr {

// Modified Gram-Schmidt with a second orthogonalization pass, positive
// diagonal. Shares no code with the Householder path it cross-checks.
inline QrFactors reference_qr(const Matrix& b) {
    const int n = b.rows;
    const int m = b.cols;
    if (m < n) throw std::invalid_argument("reference_qr: expected at least as many columns as rows");

    Matrix q(n, n);
    Matrix r(n, m);
    const double scale = std::max(1.0, max_abs(b));

    for (int j = 0; j < n; ++j) {
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) v[i] = b(i, j);
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < j; ++k) {
                double dot = 0.0;
                for (int i = 0; i < n; ++i) dot += q(i, k) * v[i];
                r(k, j) += dot;
                for (int i = 0; i < n; ++i) v[i] -= dot * q(i, k);
            }
        }
        double norm = 0.0;
        for (int i = 0; i < n; ++i) norm += v[i] * v[i];
        norm = std::sqrt(norm);
        if (norm <= 1e-13 * scale) throw std::runtime_error("reference_qr: rank deficiency in leading block");
        r(j, j) = norm;
        for (int i = 0; i < n; ++i) q(i, j) = v[i] / norm;
    }
    // remaining columns: R = Q^T B
    for (int j = n; j < m; ++j)
        for (int k = 0; k < n; ++k) {
            double dot = 0.0;
            for (int i = 0; i < n; ++i) dot += q(i, k) * b(i, j);
            r(k, j) = dot;
        }
    return {std::move(q), std::move(r)};
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations; sweeps until
// the off-diagonal Frobenius norm falls below 1e-14 * ||A||_F.
inline std::vector<double> jacobi_eigenvalues(Matrix a) {
    const int n = a.rows;
    if (a.cols != n) throw std::invalid_argument("jacobi_eigenvalues: square matrix required");
    if (n == 1) return {a(0, 0)};

    const double target = 1e-14 * frobenius_norm(a);
    const int max_sweeps = 60;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += 2.0 * a(p, q) * a(p, q);
        if (std::sqrt(off) <= target) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (int i = 0; i < n; ++i) {
                    const double aip = a(i, p);
                    const double aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const double api = a(p, i);
                    const double aqi = a(q, i);
                    a(p, i) = c * api - s * aqi;
                    a(q, i) = s * api + c * aqi;
                }
            }
        }
    }

    std::vector<double> eigs(n);
    for (int i = 0; i < n; ++i) eigs[i] = a(i, i);
    return eigs;
}

// Singular values of G as square roots of the eigenvalue moduli of G^T G,
// sorted descending.
inline std::vector<double> reference_singular_values(const Matrix& g) {
    std::vector<double> eigs = jacobi_eigenvalues(gram_matrix(g));
    std::vector<double> sv(eigs.size());
    for (std::size_t i = 0; i < eigs.size(); ++i) sv[i] = std::sqrt(std::abs(eigs[i]));
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    return sv;
}

// Direct double-loop accumulation of [G^T G]_{kl} = sum_j psi_k(1,theta_j) psi_l(1,theta_j)
// for the square (alpha = 1) disk collocation.
inline Matrix brute_force_gram(const DiskParams& params) {
    if (params.alpha != 1) throw std::invalid_argument("brute_force_gram: alpha = 1 required");
    const int n = params.N;
    Matrix g(n, n);
    for (int j = 1; j <= n; ++j) {
        const double theta = kTwoPi * j / n;
        std::vector<double> row(n);
        for (int k = 1; k <= n; ++k) row[k - 1] = psi_eval(k, 1.0, theta, params);
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) g(k, l) += row[k] * row[l];
    }
    return g;
}

enum class TrigSumKind { Sin, Cos, CosCos, SinSin, SinCos };

// Direct summation over theta_j = 2 pi j / N of the five products appearing
// in the Gram computation.
inline double trig_sum(TrigSumKind kind, int m, int n, int N) {
    double acc = 0.0;
    for (int j = 1; j <= N; ++j) {
        const double t = kTwoPi * j / N;
        switch (kind) {
            case TrigSumKind::Sin: acc += std::sin(m * t); break;
            case TrigSumKind::Cos: acc += std::cos(m * t); break;
            case TrigSumKind::CosCos: acc += std::cos(m * t) * std::cos(n * t); break;
            case TrigSumKind::SinSin: acc += std::sin(m * t) * std::sin(n * t); break;
            case TrigSumKind::SinCos: acc += std::sin(m * t) * std::cos(n * t); break;
        }
    }
    return acc;
}

// Case values the five sums must take, from the aliasing structure of the
// uniform angle grid.
inline double trig_sum_expected(TrigSumKind kind, int m, int n, int N) {
    const auto cong = [N](int v) { return ((v % N) + N) % N == 0; };
    switch (kind) {
        case TrigSumKind::Sin: return 0.0;
        case TrigSumKind::Cos: return cong(m) ? static_cast<double>(N) : 0.0;
        case TrigSumKind::CosCos: {
            const bool diff = cong(m - n);
            const bool sum = cong(m + n);
            if (diff && sum) return static_cast<double>(N);
            if (diff != sum) return N / 2.0;
            return 0.0;
        }
        case TrigSumKind::SinSin: {
            const bool diff = cong(m - n);
            const bool sum = cong(m + n);
            if (diff && !sum) return N / 2.0;
            if (sum && !diff) return -N / 2.0;
            return 0.0;
        }
        case TrigSumKind::SinCos: return 0.0;
    }
    throw std::logic_error("trig_sum_expected: unhandled kind");
}

}  // namespace dsmqr
