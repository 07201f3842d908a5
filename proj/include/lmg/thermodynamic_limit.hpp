#pragma once

// N -> infinity description via Holstein-Primakoff bosonization: phase
// gaps, Bogoliubov angle, truncated-Fock thermal QFIs through the shared
// spectral kernel, and the literal near-critical scaling expansions.
//
// The quadratic Hamiltonian at order (1/N)^0 is
//   H = omega a^dag a + lambda (a^2 + a^dag^2) + const
// with, in the ordered phase (h >= 1),
//   omega = 2h - 1 - gamma,      lambda = (gamma - 1)/2,
// and in the broken phase (0 <= h < 1), after rotating to the mean field,
//   omega = 2 - h^2 - gamma,     lambda = (gamma - h^2)/2.
// Both give sqrt(omega^2 - 4 lambda^2) equal to the phase gap formulas,
// which is the validation contract for the angle Theta,
//   tanh 2 Theta = -2 lambda / omega.

#include <cmath>

#include "lmg/estimation_core.hpp"
#include "lmg/model.hpp"

namespace lmg {

namespace detail {

struct QuadraticCoefficients {
    double omega, lambda;
    double domega, dlambda;  // d/d gamma (both phases: -1 and 1/2)
};

inline QuadraticCoefficients quadratic_coefficients(double gamma, double field) {
    if (gamma < -1.0 || gamma > 1.0)
        throw domain_error("thermodynamic_limit: gamma must lie in [-1, 1]");
    if (field < 0.0) throw domain_error("thermodynamic_limit: field must be >= 0");
    if (field >= 1.0)
        return {2.0 * field - 1.0 - gamma, 0.5 * (gamma - 1.0), -1.0, 0.5};
    return {2.0 - field * field - gamma, 0.5 * (gamma - field * field), -1.0, 0.5};
}

}  // namespace detail

/// Single-mode gap: 2 sqrt((h-1)(h-gamma)) for h >= 1,
/// 2 sqrt((1-h^2)(1-gamma)) for 0 <= h < 1.
inline double gap(double gamma, double field) {
    if (gamma < -1.0 || gamma > 1.0)
        throw domain_error("gap: gamma must lie in [-1, 1]");
    if (field < 0.0) throw domain_error("gap: field must be >= 0");
    if (field >= 1.0) return 2.0 * std::sqrt((field - 1.0) * (field - gamma));
    return 2.0 * std::sqrt((1.0 - field * field) * (1.0 - gamma));
}

/// Squeezing angle diagonalizing the quadratic Hamiltonian:
/// Theta = (1/4) log((omega - 2 lambda)/(omega + 2 lambda)).
inline double bogoliubov_angle(double gamma, double field) {
    if (std::abs(field - 1.0) < 1e-8 || gap(gamma, field) < 1e-8)
        throw domain_error("bogoliubov_angle: near-critical singularity (Theta diverges)");
    const auto c = detail::quadratic_coefficients(gamma, field);
    return 0.25 * std::log((c.omega - 2.0 * c.lambda) / (c.omega + 2.0 * c.lambda));
}

struct BosonicModel {
    double gamma;
    double field;
    double gap;
    double bog_angle;
    int cutoff;
};

namespace detail {

inline int fock_cutoff(double beta_gap, double theta, int requested) {
    if (requested > 0) return requested;
    // thermal tail sum_{n >= M} w_n = q^M < 1e-12, then inflated by the
    // squeezing spread so the rotated-frame tail is covered too
    const int thermal = int(std::ceil(12.0 * std::log(10.0) / beta_gap)) + 1;
    const double spread = std::exp(2.0 * std::abs(theta));
    return std::max(32, int(std::ceil(thermal * spread)) + 16);
}

}  // namespace detail

inline BosonicModel bosonic_model(double gamma, double field, double beta,
                                  int cutoff = 0) {
    const double d = gap(gamma, field);
    if (d <= 1e-6)
        throw domain_error("bosonic_model: gap below the near-critical exclusion zone");
    if (beta * d < 1e-8)
        throw domain_error("bosonic_model: beta * gap too small");
    const double theta = bogoliubov_angle(gamma, field);
    const int m = detail::fock_cutoff(beta * d, theta, cutoff);
    if (m > 4096)
        throw numerical_error("bosonic_model: Fock truncation tail criterion unmet at 4096");
    return {gamma, field, d, theta, m};
}

/// Thermal QFI of the bosonic model for anisotropy or temperature, in a
/// truncated Fock basis through the shared stable spectral kernel. The
/// anisotropy derivative acts on the gap (weights) with
///   d Delta / d gamma = -(omega + 2 lambda) / Delta
/// and on the eigenvectors via the squeeze generator (a^dag^2 - a^2)/2
/// scaled by d Theta / d gamma = -1/(2 (omega - 2 lambda)).
inline QfiBreakdown thermo_qfi(double gamma, double field, double beta,
                               Parameter which, int cutoff = 0) {
    if (which == Parameter::field)
        throw domain_error("thermo_qfi: parameter must be anisotropy or temperature");
    const auto model = bosonic_model(gamma, field, beta, cutoff);
    const int m = model.cutoff;
    const double d = model.gap;

    Vector energies(m);
    for (int n = 0; n < m; ++n) energies[n] = d * n;

    Matrix dh = Matrix::Zero(m, m);
    if (which == Parameter::anisotropy) {
        const auto c = detail::quadratic_coefficients(gamma, field);
        const double d_gap = -(c.omega + 2.0 * c.lambda) / d;
        const double d_theta = -0.5 / (c.omega - 2.0 * c.lambda);
        for (int n = 0; n < m; ++n) dh(n, n) = n * d_gap;
        // <n | dH | n+2> = (E_{n+2} - E_n) dTheta <n|(a^dag^2 - a^2)/2|n+2>
        for (int n = 0; n + 2 < m; ++n) {
            const double g = -2.0 * d * d_theta *
                             0.5 * std::sqrt(double(n + 1) * double(n + 2));
            dh(n, n + 2) = g;
            dh(n + 2, n) = g;
        }
        return detail::qfi_from_eigenbasis(energies, beta, dh,
                                           std::max(1.0, d * (m - 1)));
    }
    // temperature: the eigenbasis is beta-independent, so only the
    // classical (energy-variance) term survives
    for (int n = 0; n < m; ++n) dh(n, n) = energies[n];
    auto out = detail::qfi_from_eigenbasis(energies, beta, dh,
                                           std::max(1.0, d * (m - 1)));
    out.classical_term = out.total = out.classical_term / (beta * beta);
    out.quantum_term = 0.0;
    return out;
}

/// The four displayed near-critical expansions, evaluated literally;
/// the phase branch follows from h.
inline double thermo_scaling(double gamma, double field, double beta, Parameter which) {
    switch (which) {
        case Parameter::anisotropy:
            if (field >= 1.0)
                return 9.0 / (4.0 * (field - 1.0) * (field - 1.0)) -
                       25.0 * beta * beta / 12.0;
            return 9.0 / (4.0 * (gamma - 1.0) * (gamma - 1.0)) -
                   25.0 * beta * beta * (field - 1.0) / (6.0 * (gamma - 1.0));
        case Parameter::temperature:
            if (field >= 1.0)
                return 1.0 / (beta * beta) + (gamma - 1.0) * (field - 1.0) / 3.0;
            return 1.0 / (beta * beta) - 2.0 * (gamma - 1.0) * (field - 1.0) / 3.0;
        default:
            throw domain_error("thermo_scaling: parameter must be anisotropy or temperature");
    }
}

}  // namespace lmg
