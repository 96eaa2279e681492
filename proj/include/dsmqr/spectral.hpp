#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsmqr/basis.hpp"
#include "dsmqr/linalg.hpp"

namespace dsmqr {

// Truncated Fourier series of boundary data theta -> f(rho e^{i theta}):
// coefficients f_n for |n| <= K. real_data marks series representing real
// boundary values, for which f_{-n} = conj(f_n) must hold.
struct FourierSeries {
    int K = 0;
    std::vector<Complex> coeffs;  // index n + K
    bool real_data = true;

    explicit FourierSeries(int truncation = 0)
        : K(truncation), coeffs(2 * static_cast<std::size_t>(truncation) + 1, Complex{0.0, 0.0}) {
        if (truncation < 0) throw std::invalid_argument("FourierSeries: K must be nonnegative");
    }

    Complex coeff(int n) const {
        if (n < -K || n > K) return Complex{0.0, 0.0};
        return coeffs[static_cast<std::size_t>(n + K)];
    }
    void set(int n, Complex v) {
        if (n < -K || n > K) throw std::out_of_range("FourierSeries::set: index out of range");
        coeffs[static_cast<std::size_t>(n + K)] = v;
    }

    double abs_sum() const {
        double s = 0.0;
        for (const Complex& c : coeffs) s += std::abs(c);
        return s;
    }
};

// Boundary trace of the series at angle theta. Powers of e^{i theta} are
// built incrementally; the rounding this adds stays proportional to the
// (decaying) coefficient sizes.
inline double series_eval(const FourierSeries& fs, double theta) {
    const Complex w = std::polar(1.0, theta);
    Complex pos{1.0, 0.0};
    Complex acc = fs.coeff(0);
    for (int n = 1; n <= fs.K; ++n) {
        pos *= w;
        acc += fs.coeff(n) * pos + fs.coeff(-n) * std::conj(pos);
    }
    return acc.real();
}

// Trapezoidal Fourier coefficients from L uniform samples at angles 2 pi j / L:
// exact (to rounding) for trigonometric polynomials of degree <= K when L > 2K.
inline FourierSeries fourier_coeffs(const std::vector<double>& samples, int K) {
    const int L = static_cast<int>(samples.size());
    if (L < 2 * K + 2) throw std::invalid_argument("fourier_coeffs: need L >= 2K+2 samples");
    FourierSeries fs(K);
    for (int n = 0; n <= K; ++n) {
        const Complex step = std::polar(1.0, -kTwoPi * n / L);
        Complex rot{1.0, 0.0};
        Complex acc{0.0, 0.0};
        for (int j = 0; j < L; ++j) {
            acc += samples[j] * rot;
            rot *= step;
        }
        acc /= static_cast<double>(L);
        fs.set(n, acc);
        if (n > 0) fs.set(-n, std::conj(acc));
    }
    return fs;
}

// Exact solution of the disk Dirichlet problem for series data:
// u(r e^{i theta}) = sum f_n (r/rho)^{|n|} e^{i n theta}.
inline double exact_disk_solution(const FourierSeries& fs, double rho, double r, double theta) {
    if (r > rho * (1.0 + 1e-12)) throw std::invalid_argument("exact_disk_solution: r must not exceed rho");
    const double s = std::min(r / rho, 1.0);
    const Complex w = std::polar(s, theta);
    Complex pos{1.0, 0.0};
    Complex acc = fs.coeff(0);
    for (int n = 1; n <= fs.K; ++n) {
        pos *= w;
        acc += fs.coeff(n) * pos + fs.coeff(-n) * std::conj(pos);
    }
    if (fs.real_data) {
        const double scale = std::max(1.0, fs.abs_sum());
        if (std::abs(acc.imag()) > 1e-12 * scale)
            throw std::domain_error("exact_disk_solution: symmetry violated for real-flagged data");
    }
    return acc.real();
}

// Discrete transfer function phi_n: the DSM-QR approximation produced by
// boundary data e^{i n theta}. With w = s e^{i theta} and the residue of n
// mod N reduced to 0, m or -m (1 <= m <= (N-1)/2):
//   n == 0 (mod N):  1
//   n == m:          (w^m + kappa^{N-2m} conj(w)^{N-m}) / (1 + kappa^{N-2m})
//   n == -m:         (conj(w)^m + kappa^{N-2m} w^{N-m}) / (1 + kappa^{N-2m})
inline Complex phi_n(int n, const DiskParams& params, double s, double theta) {
    const int N = params.N;
    const int r = ((n % N) + N) % N;
    if (r == 0) return Complex{1.0, 0.0};

    const Complex w = std::polar(s, theta);
    int m = r;
    bool positive_case = true;
    if (r > (N - 1) / 2) {
        m = N - r;
        positive_case = false;
    }
    const double damp = std::pow(params.kappa, N - 2 * m);
    const Complex wm = std::pow(w, m);
    const Complex wnm = std::pow(w, N - m);
    if (positive_case) return (wm + damp * std::conj(wnm)) / (1.0 + damp);
    return (std::conj(wm) + damp * wnm) / (1.0 + damp);
}

// Worst-case boundary deviation g_n = sup_theta |e^{i n theta} - phi_n(1, theta)|.
// Unaliased modes (|n| <= (N-1)/2) have the exact value
// 2 kappa^{N-2|n|} / (1 + kappa^{N-2|n|}); n = 0 gives 0. Aliased modes fall
// back to a 720-point grid sup (the deviation is 2 pi / N periodic, so one
// period is gridded) with one refinement pass around the maximizer, accurate
// to about 1e-6; when the kappa^{N-2m} weight is below 1e-7 the sup equals
// the n-independent limit 2 within that accuracy and is returned directly.
inline double g_n(int n, const DiskParams& params) {
    if (n == 0) return 0.0;
    const int N = params.N;
    const int mag = std::abs(n);
    if (mag <= (N - 1) / 2) {
        const double damp = std::pow(params.kappa, N - 2 * mag);
        return 2.0 * damp / (1.0 + damp);
    }

    const int r = ((n % N) + N) % N;
    if (r == 0) return 2.0;  // phi = 1 while e^{i n theta} sweeps the circle
    const int m = (r <= (N - 1) / 2) ? r : N - r;
    const bool positive_case = r <= (N - 1) / 2;
    const double damp = std::pow(params.kappa, N - 2 * m);
    if (damp < 1e-7) return 2.0;

    const auto deviation = [&](double theta) {
        const Complex e = std::polar(1.0, n * theta);
        const Complex lead = std::polar(1.0, (positive_case ? m : -m) * theta);
        const Complex echo = std::polar(1.0, (positive_case ? -(N - m) : (N - m)) * theta);
        return std::abs(e - (lead + damp * echo) / (1.0 + damp));
    };
    const int coarse = 720;
    const double period = kTwoPi / N;
    double best = 0.0;
    double best_theta = 0.0;
    for (int j = 0; j < coarse; ++j) {
        const double theta = period * j / coarse;
        const double v = deviation(theta);
        if (v > best) {
            best = v;
            best_theta = theta;
        }
    }
    const double h = period / coarse;
    for (int j = 0; j <= 720; ++j) {
        const double theta = best_theta - h + 2.0 * h * j / 720.0;
        best = std::max(best, deviation(theta));
    }
    return best;
}

// A-priori bound sum |f_n| g_n over the truncated series.
inline double error_bound(const FourierSeries& fs, const DiskParams& params) {
    double acc = 0.0;
    for (int n = -fs.K; n <= fs.K; ++n) {
        const double fn = std::abs(fs.coeff(n));
        if (fn > 0.0) acc += fn * g_n(n, params);
    }
    return acc;
}

enum class DataKind { X2Y3, Geometric, Algebraic };

inline DataKind parse_data_kind(const std::string& s) {
    if (s == "x2y3") return DataKind::X2Y3;
    if (s == "geometric") return DataKind::Geometric;
    if (s == "algebraic") return DataKind::Algebraic;
    throw std::invalid_argument("unknown data kind: " + s);
}

// Benchmark boundary data families:
//   x2y3         - exact series of x^2 y^3 on the unit circle,
//                  cos^2 sin^3 = sin/8 + sin3/16 - sin5/16
//   geometric(a) - f_n = a^{|n|}, a in (0,1)
//   algebraic(b) - f_n = (1+|n|)^{-b}, b > 1
inline FourierSeries synthetic_data(DataKind kind, double param, int K) {
    switch (kind) {
        case DataKind::X2Y3: {
            FourierSeries fs(5);
            fs.set(1, Complex{0.0, -1.0 / 16.0});
            fs.set(-1, Complex{0.0, 1.0 / 16.0});
            fs.set(3, Complex{0.0, -1.0 / 32.0});
            fs.set(-3, Complex{0.0, 1.0 / 32.0});
            fs.set(5, Complex{0.0, 1.0 / 32.0});
            fs.set(-5, Complex{0.0, -1.0 / 32.0});
            return fs;
        }
        case DataKind::Geometric: {
            if (!(param > 0.0 && param < 1.0))
                throw std::invalid_argument("synthetic_data: geometric ratio must lie in (0,1)");
            FourierSeries fs(K);
            for (int n = -K; n <= K; ++n) fs.set(n, Complex{std::pow(param, std::abs(n)), 0.0});
            return fs;
        }
        case DataKind::Algebraic: {
            if (!(param > 1.0)) throw std::invalid_argument("synthetic_data: algebraic exponent must exceed 1");
            FourierSeries fs(K);
            for (int n = -K; n <= K; ++n)
                fs.set(n, Complex{std::pow(1.0 + std::abs(n), -param), 0.0});
            return fs;
        }
    }
    throw std::logic_error("synthetic_data: unhandled kind");
}

// CSV import for user-supplied boundary series; columns n, re, im with an
// optional header line.
inline FourierSeries load_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_series_csv: cannot open " + path);

    struct Entry {
        int n;
        Complex v;
    };
    std::vector<Entry> entries;
    int max_n = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream ls(line);
        int n = 0;
        double re = 0.0, im = 0.0;
        if (!(ls >> n >> re >> im)) continue;  // skips a header line
        entries.push_back({n, Complex{re, im}});
        max_n = std::max(max_n, std::abs(n));
    }
    if (entries.empty()) throw std::runtime_error("load_series_csv: no coefficient rows in " + path);

    FourierSeries fs(max_n);
    for (const Entry& e : entries) fs.set(e.n, e.v);
    for (int n = 1; n <= fs.K; ++n) {
        if (std::abs(fs.coeff(-n) - std::conj(fs.coeff(n))) > 1e-12 * (1.0 + std::abs(fs.coeff(n)))) {
            fs.real_data = false;
            break;
        }
    }
    return fs;
}

}  // namespace dsmqr
