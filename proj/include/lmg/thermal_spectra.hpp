#pragma once

// Eigendecomposition of Hermitian operators and numerically stable Gibbs
// ensembles. Boltzmann weights are always formed with the ground energy
// subtracted before exponentiation, so beta up to 1e6 is safe.

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "lmg/model.hpp"

namespace lmg {

struct SpectralDecomposition {
    Vector eigenvalues;   // ascending
    Matrix eigenvectors;  // column n <-> eigenvalue n

    int dim() const { return static_cast<int>(eigenvalues.size()); }
};

struct GibbsEnsemble {
    double beta = 0.0;
    Vector weights;        // Boltzmann weights B_n, aligned with eigenvalues
    double log_partition;  // log sum_n exp(-beta (E_n - E_0))
    SpectralDecomposition spectrum;
};

inline SpectralDecomposition eigendecompose(const Matrix& op) {
    if (!is_hermitian(op))
        throw domain_error("eigendecompose: operator is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(op);
    if (solver.info() != Eigen::Success)
        throw numerical_error("eigendecompose: solver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Ground-shifted Boltzmann weights for an energy vector (ascending or not).
inline Vector boltzmann_weights(const Vector& energies, double beta) {
    const double e0 = energies.minCoeff();
    Vector w = (-beta * (energies.array() - e0)).exp();
    return w / w.sum();
}

inline GibbsEnsemble gibbs_ensemble(const SpectralDecomposition& spec, double beta) {
    if (beta < 0.0) throw domain_error("gibbs_ensemble: beta must be nonnegative");
    if (beta > kMaxBeta)
        throw domain_error("gibbs_ensemble: beta exceeds the supported cap 1e6");
    const double e0 = spec.eigenvalues.minCoeff();
    Eigen::ArrayXd shifted = (-beta * (spec.eigenvalues.array() - e0)).exp();
    const double z = shifted.sum();
    GibbsEnsemble g;
    g.beta = beta;
    g.weights = shifted / z;
    g.log_partition = std::log(z);
    g.spectrum = spec;
    return g;
}

inline double spectral_gap(const SpectralDecomposition& spec) {
    if (spec.dim() < 2) throw domain_error("spectral_gap: need dimension >= 2");
    return spec.eigenvalues[1] - spec.eigenvalues[0];
}

/// Dense Gibbs density matrix e^{-beta H}/Z.
inline Matrix gibbs_density(const Matrix& hamiltonian, double beta) {
    auto g = gibbs_ensemble(eigendecompose(hamiltonian), beta);
    return g.spectrum.eigenvectors * g.weights.asDiagonal() *
           g.spectrum.eigenvectors.adjoint();
}

/// Square root of the Gibbs density matrix, built directly from the
/// weights so exponentially small populations keep full relative
/// precision (re-decomposing the dense density matrix would not).
inline Matrix gibbs_root(const Matrix& hamiltonian, double beta) {
    auto g = gibbs_ensemble(eigendecompose(hamiltonian), beta);
    return g.spectrum.eigenvectors * g.weights.cwiseSqrt().asDiagonal() *
           g.spectrum.eigenvectors.adjoint();
}

/// Root fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)) between density
/// matrices given by their matrix square roots: the trace norm of
/// root_a root_b, via singular values.
inline double root_fidelity(const Matrix& root_a, const Matrix& root_b) {
    Eigen::BDCSVD<Matrix> svd(root_a * root_b);
    return svd.singularValues().sum();
}

}  // namespace lmg
