#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dsmqr/geometry.hpp"
#include "dsmqr/linalg.hpp"

namespace dsmqr {

// Geometry and discretization parameters shared by every basis and matrix:
// boundary radius rho, source radius R, kappa = rho/R, number of sources N
// (odd), truncation order M (2M+1 > N, default N-1), oversampling alpha with
// P = alpha*N collocation points.
struct DiskParams {
    double rho = 1.0;
    double R = 1.5;
    double kappa = 1.0 / 1.5;
    int N = 3;
    int M = 2;
    int alpha = 1;
    int P = 3;

    DiskParams(double rho_, double R_, int N_, int M_ = -1, int alpha_ = 1)
        : rho(rho_), R(R_), N(N_), M(M_ < 0 ? N_ - 1 : M_), alpha(alpha_) {
        if (!(rho > 0.0)) throw std::invalid_argument("DiskParams: rho must be positive");
        if (!(R > rho)) throw std::invalid_argument("DiskParams: R must exceed rho");
        if (N < 3 || N % 2 == 0) throw std::invalid_argument("DiskParams: N must be odd and >= 3");
        if (2 * M + 1 <= N) throw std::invalid_argument("DiskParams: need 2M+1 > N");
        if (alpha < 1) throw std::invalid_argument("DiskParams: alpha must be >= 1");
        kappa = rho / R;
        P = alpha * N;
    }

    bool analytic_truncation() const { return M == N - 1; }
    int half() const { return (N - 1) / 2; }
};

// Normal derivative of the fundamental solution: -(1/2pi) Re(nu / (z - zeta)).
inline double dipole_kernel(Complex z, Complex zeta, Complex nu) {
    const Complex d = z - zeta;
    if (std::abs(d) < 1e-300) throw std::domain_error("dipole_kernel: evaluation point hits the source");
    return -(1.0 / kTwoPi) * (nu / d).real();
}

// Fundamental solution kernel of the classical MFS: -(1/2pi) log|z - zeta|.
inline double mfs_kernel(Complex z, Complex zeta) {
    const Complex d = z - zeta;
    const double r = std::abs(d);
    if (r < 1e-300) throw std::domain_error("mfs_kernel: evaluation point hits the source");
    return -(1.0 / kTwoPi) * std::log(r);
}

// F(s, theta) = (1, s sin theta, s cos theta, ..., s^M sin M theta, s^M cos M theta)^T
inline std::vector<double> build_F(double s, double theta, int M) {
    if (M < 0) throw std::invalid_argument("build_F: M must be nonnegative");
    std::vector<double> f(2 * M + 1);
    f[0] = 1.0;
    double p = 1.0;
    for (int m = 1; m <= M; ++m) {
        p *= s;
        f[2 * m - 1] = p * std::sin(m * theta);
        f[2 * m] = p * std::cos(m * theta);
    }
    return f;
}

// Trigonometric sampling matrix: row k is F(1, phi_k, M) with phi_k = 2 pi k / N.
inline Matrix build_B(int N, int M) {
    Matrix b(N, 2 * M + 1);
    for (int k = 1; k <= N; ++k) {
        const double phi = kTwoPi * k / N;
        b(k - 1, 0) = 1.0;
        for (int m = 1; m <= M; ++m) {
            b(k - 1, 2 * m - 1) = std::sin(m * phi);
            b(k - 1, 2 * m) = std::cos(m * phi);
        }
    }
    return b;
}

// D = diag(1, kappa, kappa, ..., kappa^M, kappa^M), returned as its diagonal.
inline std::vector<double> build_D(double kappa, int M) {
    std::vector<double> d(2 * M + 1);
    d[0] = 1.0;
    double p = 1.0;
    for (int m = 1; m <= M; ++m) {
        p *= kappa;
        d[2 * m - 1] = p;
        d[2 * m] = p;
    }
    return d;
}

// Numeric QR of B with the positive-diagonal uniqueness convention.
inline QrFactors qr_positive(const Matrix& b) {
    QrFactors f = householder_qr(b);
    const double tiny = 1e-13 * std::max(1.0, max_abs(b));
    for (int i = 0; i < f.R.rows; ++i)
        if (!(f.R(i, i) > tiny)) throw std::runtime_error("qr_positive: leading block is rank deficient");
    return f;
}

// Closed-form QR factors for M = N-1 and odd N. The columns of Q are the
// normalized cosine/sine sample vectors c_0/sqrt(N), s_l/sqrt(N/2),
// c_l/sqrt(N/2); R carries sqrt(N), sqrt(N/2) on the diagonal and the
// reflected +-sqrt(N/2) entries in the trailing block, since the sample
// vectors repeat as c_{N-j} = c_j and s_{N-j} = -s_j.
inline QrFactors analytic_qr(int N) {
    if (N < 3 || N % 2 == 0) throw std::invalid_argument("analytic_qr: N must be odd and >= 3");
    const int cols = 2 * N - 1;
    const double norm_c0 = std::sqrt(static_cast<double>(N));
    const double norm_cs = std::sqrt(N / 2.0);

    Matrix q(N, N);
    for (int k = 1; k <= N; ++k) {
        const double phi = kTwoPi * k / N;
        q(k - 1, 0) = 1.0 / norm_c0;
        for (int l = 1; l <= (N - 1) / 2; ++l) {
            q(k - 1, 2 * l - 1) = std::sin(l * phi) / norm_cs;
            q(k - 1, 2 * l) = std::cos(l * phi) / norm_cs;
        }
    }

    Matrix r(N, cols);
    r(0, 0) = norm_c0;
    for (int i = 2; i <= N; ++i) r(i - 1, i - 1) = norm_cs;
    for (int l = 1; l <= (N - 1) / 2; ++l) {
        r(2 * l - 1, 2 * (N - l) - 1) = -norm_cs;  // s_{N-l} = -s_l
        r(2 * l, 2 * (N - l)) = norm_cs;           // c_{N-l} = c_l
    }
    return {std::move(q), std::move(r)};
}

// Explicit DSM-QR basis function (M = N-1):
//   psi_1      = sqrt(N)
//   psi_{2m}   = sqrt(N/2) [ s^m sin m theta - kappa^{N-2m} s^{N-m} sin (N-m) theta ]
//   psi_{2m+1} = sqrt(N/2) [ s^m cos m theta + kappa^{N-2m} s^{N-m} cos (N-m) theta ]
inline double psi_eval(int k, double s, double theta, const DiskParams& params) {
    if (k < 1 || k > params.N) throw std::invalid_argument("psi_eval: basis index out of range");
    if (!params.analytic_truncation())
        throw std::invalid_argument("psi_eval: closed form requires M = N-1");
    const int N = params.N;
    if (k == 1) return std::sqrt(static_cast<double>(N));
    const int m = k / 2;
    const double amp = std::sqrt(N / 2.0);
    const double damp = std::pow(params.kappa, N - 2 * m);
    const double lo = (s == 1.0) ? 1.0 : std::pow(s, m);
    const double hi = (s == 1.0) ? 1.0 : std::pow(s, N - m);
    if (k % 2 == 0)
        return amp * (lo * std::sin(m * theta) - damp * hi * std::sin((N - m) * theta));
    return amp * (lo * std::cos(m * theta) + damp * hi * std::cos((N - m) * theta));
}

// All factor matrices of the basis change Psi = D_N^{-1} R D F.
struct FactorMatrices {
    Matrix B;
    std::vector<double> D;  // diagonal of D, length 2M+1
    Matrix Q;
    Matrix Rfac;
    Matrix Rtilde;  // D_N^{-1} Rfac D
};

inline FactorMatrices dsmqr_basis_numeric(const DiskParams& params) {
    FactorMatrices f;
    f.B = build_B(params.N, params.M);
    f.D = build_D(params.kappa, params.M);
    QrFactors qr = qr_positive(f.B);
    f.Q = std::move(qr.Q);
    f.Rfac = std::move(qr.R);

    f.Rtilde = Matrix(params.N, 2 * params.M + 1);
    for (int i = 0; i < params.N; ++i) {
        const double dn_inv = 1.0 / f.D[i];  // D_N is the leading N x N block of D
        for (int j = 0; j < f.Rtilde.cols; ++j) f.Rtilde(i, j) = dn_inv * f.Rfac(i, j) * f.D[j];
    }
    return f;
}

// Basis value Rtilde * F(s, theta) for row k (1-based); the generic numeric
// path for truncations other than M = N-1.
inline double basis_eval_numeric(const FactorMatrices& f, int k, double s, double theta) {
    if (k < 1 || k > f.Rtilde.rows) throw std::invalid_argument("basis_eval_numeric: index out of range");
    const std::vector<double> fv = build_F(s, theta, (f.Rtilde.cols - 1) / 2);
    double acc = 0.0;
    for (int j = 0; j < f.Rtilde.cols; ++j) acc += f.Rtilde(k - 1, j) * fv[j];
    return acc;
}

// Corrected basis for a Jordan region: the dipole kernel at the mapped points
// minus its disk counterpart (a smooth perturbation), plus the reconditioned
// disk basis psi_k. The kernel difference is scaled by 2 pi R so that the
// identity map reduces exactly to psi_k, matching the normalization in which
// the disk kernel expansion has the 1/(2 pi R) factor stripped.
inline double jordan_basis_eval(int k, double s, double theta, const ConformalMapSpec& map,
                                const PointLayout& layout, const DiskParams& params) {
    if (k < 1 || k > params.N) throw std::invalid_argument("jordan_basis_eval: index out of range");
    const double psi = psi_eval(k, s, theta, params);
    if (map.is_disk()) return psi;
    if (params.rho != 1.0) throw std::invalid_argument("jordan_basis_eval: rho is fixed to 1 for map kinds");

    const Complex pre = std::polar(s, theta);  // rho = 1 for map kinds
    const Complex pre_source = std::polar(params.R, layout.singular_angles[k - 1]);
    const Complex moment_disk = std::polar(1.0, layout.singular_angles[k - 1]);
    const double mapped = dipole_kernel(map_eval(map, pre), layout.singular[k - 1], layout.moments[k - 1]);
    const double disk = dipole_kernel(pre, pre_source, moment_disk);
    return kTwoPi * params.R * (mapped - disk) + psi;
}

}  // namespace dsmqr
