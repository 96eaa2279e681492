#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dsmqr/linalg.hpp"

namespace dsmqr {

// Conformal map from the unit-disk preimage onto the problem region.
// Three closed-form kinds are supported:
//   Disk       - identity (the plain disk geometry),
//   Polynomial - sum a_k z^k with a_1 != 0,
//   Joukowski  - w + 1/(2w) with w = z + shift.
struct ConformalMapSpec {
    enum class Kind { Disk, Polynomial, Joukowski };

    Kind kind = Kind::Disk;
    std::vector<Complex> coeffs;  // Polynomial: coefficient of z^k at index k
    Complex shift{0.0, 0.0};      // Joukowski shift constant

    static ConformalMapSpec disk() { return {}; }

    static ConformalMapSpec polynomial(std::vector<Complex> c) {
        if (c.size() < 2 || std::abs(c[1]) == 0.0)
            throw std::invalid_argument("polynomial map: coefficient a_1 must be nonzero");
        ConformalMapSpec m;
        m.kind = Kind::Polynomial;
        m.coeffs = std::move(c);
        return m;
    }

    static ConformalMapSpec joukowski(Complex shift) {
        ConformalMapSpec m;
        m.kind = Kind::Joukowski;
        m.shift = shift;
        return m;
    }

    // The two example regions: 4/5 z + 1/10 z^5 and the airfoil-type map
    // w + 1/(2w), w = z - 1/5 + i/5.
    static ConformalMapSpec poly5() {
        return polynomial({Complex{0.0, 0.0}, Complex{0.8, 0.0}, Complex{0.0, 0.0},
                           Complex{0.0, 0.0}, Complex{0.0, 0.0}, Complex{0.1, 0.0}});
    }
    static ConformalMapSpec example_joukowski() { return joukowski(Complex{-0.2, 0.2}); }

    bool is_disk() const { return kind == Kind::Disk; }
};

inline Complex map_eval(const ConformalMapSpec& map, Complex z) {
    switch (map.kind) {
        case ConformalMapSpec::Kind::Disk:
            return z;
        case ConformalMapSpec::Kind::Polynomial: {
            // Horner on the coefficient list
            Complex acc{0.0, 0.0};
            for (auto it = map.coeffs.rbegin(); it != map.coeffs.rend(); ++it) acc = acc * z + *it;
            return acc;
        }
        case ConformalMapSpec::Kind::Joukowski: {
            const Complex w = z + map.shift;
            if (std::abs(w) == 0.0) throw std::domain_error("pole of Joukowski map");
            return w + 1.0 / (2.0 * w);
        }
    }
    throw std::logic_error("map_eval: unhandled kind");
}

inline Complex map_derivative(const ConformalMapSpec& map, Complex z) {
    switch (map.kind) {
        case ConformalMapSpec::Kind::Disk:
            return Complex{1.0, 0.0};
        case ConformalMapSpec::Kind::Polynomial: {
            Complex acc{0.0, 0.0};
            for (std::size_t k = map.coeffs.size(); k-- > 1;)
                acc = acc * z + static_cast<double>(k) * map.coeffs[k];
            return acc;
        }
        case ConformalMapSpec::Kind::Joukowski: {
            const Complex w = z + map.shift;
            if (std::abs(w) == 0.0) throw std::domain_error("pole of Joukowski map");
            return 1.0 - 1.0 / (2.0 * w * w);
        }
    }
    throw std::logic_error("map_derivative: unhandled kind");
}

// Unit outward normal to the image curve Psi(|z| = R) at Psi(R e^{i phi}).
// A conformal map rotates the circle's radial normal e^{i phi} by arg Psi'.
inline Complex image_normal(const ConformalMapSpec& map, double R, double phi) {
    const Complex z = std::polar(R, phi);
    const Complex d = map_derivative(map, z);
    const double mag = std::abs(d);
    if (mag < 1e-14) throw std::domain_error("image_normal: map degenerate (|Psi'| < 1e-14)");
    return d * std::polar(1.0, phi) / mag;
}

// Collocation points z_j (j = 1..P), singular points zeta_k and dipole
// moments nu_k (k = 1..N), together with the preimage angles that generated
// them. For the disk all points live on the circles |z| = rho and |z| = R;
// for map kinds the preimage circles |z| = 1 and |z| = R are pushed through
// the map and the moments become normals to the image source curve.
struct PointLayout {
    std::vector<Complex> collocation;        // length P
    std::vector<Complex> singular;           // length N
    std::vector<Complex> moments;            // length N, unit modulus
    std::vector<double> collocation_angles;  // theta_j = 2 pi j / P
    std::vector<double> singular_angles;     // phi_k = 2 pi k / N
};

inline PointLayout build_layout(const ConformalMapSpec& map, int N, int P, double rho, double R) {
    if (N < 3 || N % 2 == 0)
        throw std::invalid_argument("build_layout: N must be odd and at least 3");
    if (P < N) throw std::invalid_argument("build_layout: P must be at least N");
    if (map.is_disk()) {
        if (!(rho > 0.0 && R > rho)) throw std::invalid_argument("build_layout: need 0 < rho < R");
    } else {
        if (rho != 1.0) throw std::invalid_argument("build_layout: rho is fixed to 1 for map kinds");
        if (!(R > 1.0)) throw std::invalid_argument("build_layout: need R > 1 for map kinds");
    }

    PointLayout layout;
    layout.collocation.reserve(P);
    layout.collocation_angles.reserve(P);
    layout.singular.reserve(N);
    layout.moments.reserve(N);
    layout.singular_angles.reserve(N);

    for (int j = 1; j <= P; ++j) {
        const double theta = kTwoPi * j / P;
        layout.collocation_angles.push_back(theta);
        const Complex pre = std::polar(rho, theta);
        layout.collocation.push_back(map.is_disk() ? pre : map_eval(map, pre));
    }
    for (int k = 1; k <= N; ++k) {
        const double phi = kTwoPi * k / N;
        layout.singular_angles.push_back(phi);
        if (map.is_disk()) {
            layout.singular.push_back(std::polar(R, phi));
            layout.moments.push_back(std::polar(1.0, phi));
        } else {
            layout.singular.push_back(map_eval(map, std::polar(R, phi)));
            layout.moments.push_back(image_normal(map, R, phi));
        }
    }

    for (const Complex& z : layout.collocation)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::domain_error("build_layout: non-finite collocation point");
    for (const Complex& z : layout.singular)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::domain_error("build_layout: non-finite singular point");
    return layout;
}

}  // namespace dsmqr
