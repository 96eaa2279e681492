#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsmqr/basis.hpp"
#include "dsmqr/geometry.hpp"
#include "dsmqr/linalg.hpp"
#include "dsmqr/oracle.hpp"

namespace dsmqr {

enum class Method { DsmQr, Dsm, Mfs, DsmQrJordan, DsmJordan };

inline std::string method_name(Method m) {
    switch (m) {
        case Method::DsmQr: return "dsm-qr";
        case Method::Dsm: return "dsm";
        case Method::Mfs: return "mfs";
        case Method::DsmQrJordan: return "dsm-qr-jordan";
        case Method::DsmJordan: return "dsm-jordan";
    }
    throw std::logic_error("method_name: unhandled method");
}

inline Method parse_method(const std::string& s) {
    if (s == "dsm-qr") return Method::DsmQr;
    if (s == "dsm") return Method::Dsm;
    if (s == "mfs") return Method::Mfs;
    if (s == "dsm-qr-jordan") return Method::DsmQrJordan;
    if (s == "dsm-jordan") return Method::DsmJordan;
    throw std::invalid_argument("unknown method: " + s);
}

inline bool is_qr_method(Method m) { return m == Method::DsmQr || m == Method::DsmQrJordan; }
inline bool is_jordan_method(Method m) { return m == Method::DsmQrJordan || m == Method::DsmJordan; }

// Dense collocation system G Q = f together with everything needed to
// evaluate the resulting approximation.
struct CollocationSystem {
    Matrix G;  // P x N
    std::vector<double> rhs;
    Method method = Method::DsmQr;
    DiskParams params{1.0, 1.5, 3};
    ConformalMapSpec map;
    PointLayout layout;
};

inline CollocationSystem assemble(Method method, const DiskParams& params, const ConformalMapSpec& map,
                                  const PointLayout& layout, const std::vector<double>& boundary_values) {
    if (static_cast<int>(boundary_values.size()) != params.P)
        throw std::invalid_argument("assemble: boundary value count must equal P");
    if (static_cast<int>(layout.collocation.size()) != params.P ||
        static_cast<int>(layout.singular.size()) != params.N)
        throw std::invalid_argument("assemble: layout does not match params");
    if (is_jordan_method(method) == map.is_disk())
        throw std::invalid_argument("assemble: method/geometry combination invalid");

    CollocationSystem sys;
    sys.method = method;
    sys.params = params;
    sys.map = map;
    sys.layout = layout;
    sys.rhs = boundary_values;
    sys.G = Matrix(params.P, params.N);

    switch (method) {
        case Method::DsmQr: {
            if (params.analytic_truncation()) {
                for (int j = 0; j < params.P; ++j) {
                    const double theta = layout.collocation_angles[j];
                    for (int k = 1; k <= params.N; ++k) sys.G(j, k - 1) = psi_eval(k, 1.0, theta, params);
                }
            } else {
                const FactorMatrices f = dsmqr_basis_numeric(params);
                for (int j = 0; j < params.P; ++j) {
                    const double theta = layout.collocation_angles[j];
                    for (int k = 1; k <= params.N; ++k)
                        sys.G(j, k - 1) = basis_eval_numeric(f, k, 1.0, theta);
                }
            }
            break;
        }
        case Method::DsmQrJordan: {
            for (int j = 0; j < params.P; ++j) {
                const double theta = layout.collocation_angles[j];
                for (int k = 1; k <= params.N; ++k)
                    sys.G(j, k - 1) = jordan_basis_eval(k, 1.0, theta, map, layout, params);
            }
            break;
        }
        case Method::Dsm:
        case Method::DsmJordan: {
            for (int j = 0; j < params.P; ++j)
                for (int k = 0; k < params.N; ++k)
                    sys.G(j, k) = dipole_kernel(layout.collocation[j], layout.singular[k], layout.moments[k]);
            break;
        }
        case Method::Mfs: {
            for (int j = 0; j < params.P; ++j)
                for (int k = 0; k < params.N; ++k)
                    sys.G(j, k) = mfs_kernel(layout.collocation[j], layout.singular[k]);
            break;
        }
    }
    if (!sys.G.all_finite()) throw std::domain_error("assemble: non-finite matrix entry");
    return sys;
}

// Diagonal of G^T G for the square disk DSM-QR system:
// N^2 for k = 1 and (N^2/4)(1 + kappa^{N-2m})^2 for k = 2m, 2m+1.
inline std::vector<double> gram_diagonal_closed_form(const DiskParams& params) {
    const int N = params.N;
    std::vector<double> d(N);
    d[0] = static_cast<double>(N) * N;
    for (int m = 1; m <= (N - 1) / 2; ++m) {
        const double t = 1.0 + std::pow(params.kappa, N - 2 * m);
        const double v = 0.25 * N * N * t * t;
        d[2 * m - 1] = v;
        d[2 * m] = v;
    }
    return d;
}

// cond_2(G) = 2 / (1 + kappa^{N-2}) for the square disk DSM-QR system.
inline double cond2_closed_form(const DiskParams& params) {
    return 2.0 / (1.0 + std::pow(params.kappa, params.N - 2));
}

// Spectral condition number, or a saturation marker when the smallest
// eigenvalue modulus of G^T G underflows below 1e-280 of the largest.
struct Cond2 {
    double value = 1.0;
    bool saturated = false;

    static constexpr double kSaturatedValue = 1e140;
    static Cond2 saturated_flag() { return {kSaturatedValue, true}; }
};

inline Cond2 cond2(const Matrix& g) {
    const std::vector<double> eigs = jacobi_eigenvalues(gram_matrix(g));
    double lam_max = 0.0;
    double lam_min = std::numeric_limits<double>::infinity();
    for (double e : eigs) {
        const double a = std::abs(e);
        lam_max = std::max(lam_max, a);
        lam_min = std::min(lam_min, a);
    }
    if (!(lam_max > 0.0) || lam_min < 1e-280 * lam_max) return Cond2::saturated_flag();
    return {std::sqrt(lam_max / lam_min), false};
}

struct SolveResult {
    std::vector<double> coeffs;
    Cond2 cond2{};
    double residual_linf = 0.0;
    double wall_ms = 0.0;
    std::string note;  // nonempty when the solve hit a numerically singular pivot
};

namespace detail {

inline double residual_linf_of(const Matrix& g, const std::vector<double>& x,
                               const std::vector<double>& rhs) {
    const std::vector<double> gx = matvec(g, x);
    double r = 0.0;
    for (std::size_t i = 0; i < rhs.size(); ++i) r = std::max(r, std::abs(gx[i] - rhs[i]));
    return r;
}

constexpr double kPivotRelTol = 1e-15;

}  // namespace detail

// Square collocation solve (P = N) by row-pivoted elimination. A relative
// pivot below 1e-15 is reported in the note with a best-effort solution;
// classical DSM at large N lands here and the run must not abort.
inline SolveResult solve_square(const CollocationSystem& sys) {
    if (sys.params.P != sys.params.N) throw std::invalid_argument("solve_square: P = N required");
    const auto t0 = std::chrono::steady_clock::now();

    SolveResult res;
    bool warned = false;
    res.coeffs = gaussian_solve(sys.G, sys.rhs, detail::kPivotRelTol, &warned);
    if (warned) res.note = "singular-pivot";
    res.residual_linf = detail::residual_linf_of(sys.G, res.coeffs, sys.rhs);
    res.cond2 = cond2(sys.G);

    res.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

// Least-squares solve for P = alpha N. QR-modified methods go through the
// normal equations (G^T G is diagonal for the disk at alpha = 1 and stays
// well conditioned otherwise); the ill-conditioned baselines use an
// orthogonal factorization of G, which does not square their condition
// number.
inline SolveResult solve_least_squares(const CollocationSystem& sys) {
    const auto t0 = std::chrono::steady_clock::now();

    SolveResult res;
    bool warned = false;
    if (is_qr_method(sys.method)) {
        const Matrix normal = gram_matrix(sys.G);
        const std::vector<double> gt_rhs = transpose_matvec(sys.G, sys.rhs);
        res.coeffs = gaussian_solve(normal, gt_rhs, detail::kPivotRelTol, &warned);
    } else {
        res.coeffs = householder_lsq(sys.G, sys.rhs, detail::kPivotRelTol, &warned);
    }
    if (warned) res.note = "singular-pivot";
    res.residual_linf = detail::residual_linf_of(sys.G, res.coeffs, sys.rhs);
    res.cond2 = cond2(sys.G);

    res.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

// Explicit coefficients for the square disk DSM-QR system:
// Q_k = (1/[G^T G]_{kk}) sum_j psi_k(1, theta_j) f_j.
inline std::vector<double> closed_form_coeffs(const DiskParams& params,
                                              const std::vector<double>& boundary_values) {
    if (params.alpha != 1) throw std::invalid_argument("closed_form_coeffs: alpha = 1 required");
    if (static_cast<int>(boundary_values.size()) != params.N)
        throw std::invalid_argument("closed_form_coeffs: boundary value count must equal N");
    const std::vector<double> diag = gram_diagonal_closed_form(params);
    std::vector<double> q(params.N, 0.0);
    for (int k = 1; k <= params.N; ++k) {
        double acc = 0.0;
        for (int j = 1; j <= params.N; ++j) {
            const double theta = kTwoPi * j / params.N;
            acc += psi_eval(k, 1.0, theta, params) * boundary_values[j - 1];
        }
        q[k - 1] = acc / diag[k - 1];
    }
    return q;
}

// Value of the approximate solution at preimage polar coordinates (s, theta);
// the physical location is rho*s*e^{i theta} on the disk and Psi(s e^{i theta})
// for map kinds.
inline double evaluate_solution(const std::vector<double>& coeffs, Method method,
                                const DiskParams& params, const ConformalMapSpec& map,
                                const PointLayout& layout, double s, double theta) {
    if (static_cast<int>(coeffs.size()) != params.N)
        throw std::invalid_argument("evaluate_solution: coefficient count must equal N");
    double acc = 0.0;
    switch (method) {
        case Method::DsmQr:
            if (params.analytic_truncation()) {
                for (int k = 1; k <= params.N; ++k) acc += coeffs[k - 1] * psi_eval(k, s, theta, params);
            } else {
                const FactorMatrices f = dsmqr_basis_numeric(params);
                for (int k = 1; k <= params.N; ++k)
                    acc += coeffs[k - 1] * basis_eval_numeric(f, k, s, theta);
            }
            break;
        case Method::DsmQrJordan:
            for (int k = 1; k <= params.N; ++k)
                acc += coeffs[k - 1] * jordan_basis_eval(k, s, theta, map, layout, params);
            break;
        case Method::Dsm: {
            const Complex z = std::polar(params.rho * s, theta);
            for (int k = 0; k < params.N; ++k)
                acc += coeffs[k] * dipole_kernel(z, layout.singular[k], layout.moments[k]);
            break;
        }
        case Method::DsmJordan: {
            const Complex z = map_eval(map, std::polar(s, theta));
            for (int k = 0; k < params.N; ++k)
                acc += coeffs[k] * dipole_kernel(z, layout.singular[k], layout.moments[k]);
            break;
        }
        case Method::Mfs: {
            const Complex z = std::polar(params.rho * s, theta);
            for (int k = 0; k < params.N; ++k) acc += coeffs[k] * mfs_kernel(z, layout.singular[k]);
            break;
        }
    }
    return acc;
}

inline double evaluate_solution(const SolveResult& res, const CollocationSystem& sys, double s,
                                double theta) {
    return evaluate_solution(res.coeffs, sys.method, sys.params, sys.map, sys.layout, s, theta);
}

}  // namespace dsmqr
