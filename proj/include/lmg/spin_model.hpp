#pragma once

// Dense construction of the LMG Hamiltonian
//   H = -(1/N) sum_{j<k} (sx_j sx_k + gamma sy_j sy_k) - h sum_k sz_k
// in the computational (sigma_z product) basis, together with collective
// spin operators, the analytic parameter derivatives of H, and the two
// symmetry conjugations of the model.
//
// Basis convention: bit k of the state index encodes spin k, bit value 0
// meaning |up> (sigma_z eigenvalue +1).

#include <cmath>
#include <utility>

#include "lmg/model.hpp"

namespace lmg {

namespace detail {

// Applies sigma_axis on spin k of basis state b; returns (new state, amplitude).
inline std::pair<int, complex> apply_pauli(int b, int k, Axis axis) {
    const int bit = (b >> k) & 1;  // 0 = up
    switch (axis) {
        case Axis::x: return {b ^ (1 << k), complex(1.0, 0.0)};
        case Axis::y:
            // sy|up> = i|down>, sy|down> = -i|up>
            return {b ^ (1 << k), bit == 0 ? complex(0.0, 1.0) : complex(0.0, -1.0)};
        case Axis::z: return {b, complex(bit == 0 ? 1.0 : -1.0, 0.0)};
    }
    return {b, complex(0.0, 0.0)};
}

// Two-site term coeff * sigma_a^j sigma_a^k accumulated into m.
inline void add_two_site(Matrix& m, int n, int j, int k, Axis axis, double coeff) {
    const int dim = 1 << n;
    for (int b = 0; b < dim; ++b) {
        auto [b1, a1] = apply_pauli(b, j, axis);
        auto [b2, a2] = apply_pauli(b1, k, axis);
        m(b2, b) += coeff * a1 * a2;
    }
}

}  // namespace detail

/// Collective spin component S_axis = (1/2) sum_k sigma_axis^k.
inline Matrix collective_spin(int n_sites, Axis axis) {
    check_sites(n_sites);
    const int dim = 1 << n_sites;
    Matrix s = Matrix::Zero(dim, dim);
    for (int k = 0; k < n_sites; ++k)
        for (int b = 0; b < dim; ++b) {
            auto [b1, a1] = detail::apply_pauli(b, k, axis);
            s(b1, b) += 0.5 * a1;
        }
    return s;
}

/// LMG Hamiltonian for the given parameters, 2^N x 2^N.
inline Matrix build_hamiltonian(const ModelParams& p) {
    check_params(p);
    const int n = p.n_sites;
    const int dim = 1 << n;
    Matrix ham = Matrix::Zero(dim, dim);
    const double jcoeff = -1.0 / n;
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            detail::add_two_site(ham, n, j, k, Axis::x, jcoeff);
            detail::add_two_site(ham, n, j, k, Axis::y, jcoeff * p.gamma);
        }
    // field term is diagonal: sum_k sz_k has eigenvalue N - 2*popcount(b)
    for (int b = 0; b < dim; ++b) {
        const int down = __builtin_popcount(static_cast<unsigned>(b));
        ham(b, b) += -p.field * (n - 2 * down);
    }
    return ham;
}

/// Analytic dH/dgamma or dH/dh; H is affine in both parameters.
inline Matrix hamiltonian_derivative(const ModelParams& p, Parameter which) {
    check_params(p);
    const int n = p.n_sites;
    const int dim = 1 << n;
    Matrix d = Matrix::Zero(dim, dim);
    switch (which) {
        case Parameter::anisotropy:
            for (int j = 0; j < n; ++j)
                for (int k = j + 1; k < n; ++k)
                    detail::add_two_site(d, n, j, k, Axis::y, -1.0 / n);
            break;
        case Parameter::field:
            for (int b = 0; b < dim; ++b) {
                const int down = __builtin_popcount(static_cast<unsigned>(b));
                d(b, b) = -(n - 2 * down);
            }
            break;
        case Parameter::temperature:
            throw domain_error("temperature is not a Hamiltonian parameter");
    }
    return d;
}

struct ConjugationResult {
    Matrix transformed;  // U^dag H' U, equal to H at the mapped parameters
    Matrix unitary;
};

/// Spin-flip (h -> -h) or gamma-inversion (gamma -> 1/gamma) conjugation.
/// Returns the conjugated partner Hamiltonian and the unitary used; the
/// caller-side identity it satisfies is asserted in the test suite.
inline ConjugationResult symmetry_conjugation(const ModelParams& p, Symmetry which) {
    check_params(p);
    const int n = p.n_sites;
    const int dim = 1 << n;
    Matrix u = Matrix::Zero(dim, dim);
    Matrix partner;
    switch (which) {
        case Symmetry::spin_flip: {
            // U = tensor product of sigma_x: maps b -> ~b
            const int mask = dim - 1;
            for (int b = 0; b < dim; ++b) u((~b) & mask, b) = 1.0;
            partner = build_hamiltonian({p.n_sites, p.gamma, -p.field});
            break;
        }
        case Symmetry::gamma_inversion: {
            if (p.gamma == 0.0)
                throw domain_error("gamma_inversion undefined at gamma = 0");
            // pi/2 rotation around z: per-site phase e^{-i pi/4 sigma_z},
            // swapping the x and y couplings; with the field rescaled by
            // gamma the conjugation satisfies
            //   H(1/gamma, h) = (1/gamma) W^dag H(gamma, h gamma) W
            const std::complex<double> i(0.0, 1.0);
            for (int b = 0; b < dim; ++b) {
                const int down = __builtin_popcount(static_cast<unsigned>(b));
                u(b, b) = std::exp(-i * (M_PI / 4.0) * double(n - 2 * down));
            }
            partner = build_hamiltonian({p.n_sites, p.gamma, p.field * p.gamma});
            Matrix transformed = (u.adjoint() * partner * u) / p.gamma;
            return {std::move(transformed), std::move(u)};
        }
    }
    Matrix transformed = u.adjoint() * partner * u;
    return {std::move(transformed), std::move(u)};
}

}  // namespace lmg
