#pragma once

// Quantum Fisher information of thermal LMG states, the symmetric
// logarithmic derivative, and the classical Fisher information of
// projective measurements (total magnetization in particular).
//
// The spectral QFI is split into the weight-derivative ("classical") and
// eigenvector-derivative ("quantum") contributions. Eigenvector
// derivatives are always obtained from off-diagonal matrix elements of
// dH (Hellmann-Feynman), never from finite differences of eigenvectors,
// which removes the phase-gauge ambiguity. Level crossings are handled
// by a combined kernel that evaluates (w_n - w_m)/(E_n - E_m) through
// expm1, finite at exact degeneracy.

#include <cmath>
#include <vector>

#include "lmg/model.hpp"
#include "lmg/spin_model.hpp"
#include "lmg/thermal_spectra.hpp"

namespace lmg {

struct QfiBreakdown {
    double classical_term = 0.0;
    double quantum_term = 0.0;
    double total = 0.0;
};

namespace detail {

constexpr double kWeightFloor = 1e-290;  // w_n + w_m below this: term dropped
constexpr double kProbFloor = 1e-14;     // measurement outcomes below this: excluded

// Stable (w_n - w_m)/(E_n - E_m) for Boltzmann weights w at inverse
// temperature beta. Finite at dE -> 0 (limit -beta * w_m).
inline double weight_difference_ratio(double w_m, double beta, double dE) {
    const double x = beta * dE;
    if (std::abs(x) < 1e-6) {
        // series of expm1(-x)/dE
        return -beta * w_m * (1.0 - 0.5 * x + x * x / 6.0);
    }
    return w_m * std::expm1(-x) / dE;
}

// Groups ascending energies into clusters of exact degeneracy.
inline std::vector<std::pair<int, int>> degeneracy_clusters(const Vector& energies,
                                                           double scale) {
    const double tol = 1e-12 * std::max(1.0, scale);
    std::vector<std::pair<int, int>> clusters;
    const int n = static_cast<int>(energies.size());
    int start = 0;
    for (int i = 1; i <= n; ++i) {
        if (i == n || energies[i] - energies[i - 1] > tol) {
            clusters.emplace_back(start, i);
            start = i;
        }
    }
    return clusters;
}

// Rotates the eigenbasis inside each degenerate cluster so that the
// projected dH is diagonal there (degenerate perturbation theory). After
// the rotation intra-cluster off-diagonal elements of dH vanish; they are
// zeroed explicitly. Returns the clusters for reuse.
inline std::vector<std::pair<int, int>> resolve_degeneracies(Matrix& dh_eig,
                                                            const Vector& energies,
                                                            double scale,
                                                            Matrix* eigenvectors = nullptr) {
    auto clusters = degeneracy_clusters(energies, scale);
    for (auto [a, b] : clusters) {
        const int k = b - a;
        if (k < 2) continue;
        Eigen::SelfAdjointEigenSolver<Matrix> sub(dh_eig.block(a, a, k, k));
        if (sub.info() != Eigen::Success)
            throw numerical_error("degenerate-cluster rotation did not converge near E = " +
                                  std::to_string(energies[a]));
        const Matrix& rot = sub.eigenvectors();
        dh_eig.middleCols(a, k) = dh_eig.middleCols(a, k) * rot;
        dh_eig.middleRows(a, k) = rot.adjoint() * dh_eig.middleRows(a, k);
        dh_eig.block(a, a, k, k) = sub.eigenvalues().cast<complex>().asDiagonal();
        if (eigenvectors)
            eigenvectors->middleCols(a, k) = eigenvectors->middleCols(a, k) * rot;
    }
    return clusters;
}

// Core spectral QFI from ascending energies and dH expressed in the
// (cluster-rotated) eigenbasis.
inline QfiBreakdown qfi_from_eigenbasis(const Vector& energies, double beta,
                                        Matrix dh_eig, double scale) {
    const int n = static_cast<int>(energies.size());
    auto clusters = resolve_degeneracies(dh_eig, energies, scale);
    const Vector w = boltzmann_weights(energies, beta);

    // classical term: beta^2 Var_w(dE_n), dE_n = <n|dH|n>
    Vector de = dh_eig.diagonal().real();
    const double de_mean = w.dot(de);
    double classical = 0.0;
    for (int i = 0; i < n; ++i) {
        const double c = de[i] - de_mean;
        classical += w[i] * c * c;
    }
    classical *= beta * beta;

    // quantum term over cross-cluster pairs
    std::vector<int> cluster_of(n);
    for (int c = 0; c < static_cast<int>(clusters.size()); ++c)
        for (int i = clusters[c].first; i < clusters[c].second; ++i) cluster_of[i] = c;

    double quantum = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (cluster_of[i] == cluster_of[j]) continue;
            const double ws = w[i] + w[j];
            if (ws < kWeightFloor) continue;
            // pass the larger weight with positive gap: expm1 stays bounded
            const double g = weight_difference_ratio(w[i], beta, energies[j] - energies[i]);
            quantum += 4.0 * g * g / ws * std::norm(dh_eig(i, j));
        }
    }
    return {classical, quantum, classical + quantum};
}

struct ThermalSetup {
    SpectralDecomposition spec;
    Matrix dh_eig;  // dH rotated into the eigenbasis
    double scale;   // max-norm of H, for degeneracy tolerances
};

inline ThermalSetup thermal_setup(const ModelParams& p, Parameter which) {
    Matrix ham = build_hamiltonian(p);
    const double scale = ham.cwiseAbs().maxCoeff();
    auto spec = eigendecompose(ham);
    Matrix dh = hamiltonian_derivative(p, which);
    Matrix dh_eig = spec.eigenvectors.adjoint() * dh * spec.eigenvectors;
    return {std::move(spec), std::move(dh_eig), scale};
}

}  // namespace detail

/// QFI for anisotropy or field estimation on the thermal state at beta.
inline QfiBreakdown qfi_thermal(const ModelParams& p, Parameter which, double beta) {
    if (which == Parameter::temperature)
        throw domain_error("qfi_thermal handles anisotropy/field; use qfi_temperature");
    if (beta < 0.0) throw domain_error("qfi_thermal: beta must be nonnegative");
    if (beta > kMaxBeta)
        throw domain_error("qfi_thermal: beta exceeds the supported cap 1e6");
    auto setup = detail::thermal_setup(p, which);
    return detail::qfi_from_eigenbasis(setup.spec.eigenvalues, beta,
                                       std::move(setup.dh_eig), setup.scale);
}

/// Temperature QFI: purely classical, equal to the thermal energy variance.
/// Both routes are evaluated and must agree to 1e-10 relative.
inline QfiBreakdown qfi_temperature(const ModelParams& p, double beta) {
    if (beta <= 0.0) throw domain_error("qfi_temperature: beta must be positive");
    if (beta > kMaxBeta)
        throw domain_error("qfi_temperature: beta exceeds the supported cap 1e6");
    auto spec = eigendecompose(build_hamiltonian(p));
    const Vector w = boltzmann_weights(spec.eigenvalues, beta);
    const int n = spec.dim();
    const double e0 = spec.eigenvalues.minCoeff();

    // route 1: sum_n (dB_n/dbeta)^2 / B_n with dB_n = B_n (<E> - E_n)
    // route 2: energy variance <E^2> - <E>^2, evaluated ground-shifted
    const double es_mean = w.dot(Vector(spec.eigenvalues.array() - e0));
    double weight_route = 0.0, variance_route = 0.0;
    for (int i = 0; i < n; ++i) {
        const double c = (spec.eigenvalues[i] - e0) - es_mean;
        weight_route += w[i] * c * c;
        variance_route += w[i] * (spec.eigenvalues[i] - e0) * (spec.eigenvalues[i] - e0);
    }
    variance_route -= es_mean * es_mean;
    if (std::abs(weight_route - variance_route) >
        1e-10 * std::max(1.0, std::abs(variance_route)))
        throw numerical_error("qfi_temperature: weight and variance routes disagree");
    return {weight_route, 0.0, weight_route};
}

/// Symmetric logarithmic derivative L solving (L rho + rho L)/2 = d rho.
inline Matrix sld(const ModelParams& p, Parameter which, double beta) {
    if (beta < 0.0) throw domain_error("sld: beta must be nonnegative");
    if (which == Parameter::temperature) {
        auto spec = eigendecompose(build_hamiltonian(p));
        const Vector w = boltzmann_weights(spec.eigenvalues, beta);
        const double e_mean = w.dot(spec.eigenvalues);
        Vector diag = e_mean - spec.eigenvalues.array();
        return spec.eigenvectors * diag.cast<complex>().asDiagonal() *
               spec.eigenvectors.adjoint();
    }
    auto setup = detail::thermal_setup(p, which);
    const Vector& energies = setup.spec.eigenvalues;
    Matrix dh_eig = setup.dh_eig;
    Matrix vectors = setup.spec.eigenvectors;
    detail::resolve_degeneracies(dh_eig, energies, setup.scale, &vectors);
    const Vector w = boltzmann_weights(energies, beta);
    const int n = setup.spec.dim();

    Matrix l = Matrix::Zero(n, n);
    const Vector de = dh_eig.diagonal().real();
    const double de_mean = w.dot(de);
    for (int i = 0; i < n; ++i) l(i, i) = beta * (de_mean - de[i]);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double ws = w[i] + w[j];
            if (ws < detail::kWeightFloor) continue;
            // (w_i - w_j)/(E_i - E_j), with the larger weight passed in so
            // the expm1 factor stays bounded
            const double g =
                w[i] >= w[j]
                    ? detail::weight_difference_ratio(w[i], beta, energies[j] - energies[i])
                    : detail::weight_difference_ratio(w[j], beta, energies[i] - energies[j]);
            l(i, j) = 2.0 * g / ws * dh_eig(i, j);
        }
    return vectors * l * vectors.adjoint();
}

struct ProjectiveMeasurement {
    std::vector<Matrix> projectors;
    std::vector<double> outcome_labels;
};

inline void check_measurement(const ProjectiveMeasurement& m, int dim, double tol = 1e-10) {
    if (m.projectors.empty() || m.projectors.size() != m.outcome_labels.size())
        throw domain_error("measurement: projector/label mismatch");
    Matrix sum = Matrix::Zero(dim, dim);
    for (const auto& proj : m.projectors) {
        if (proj.rows() != dim || proj.cols() != dim)
            throw domain_error("measurement: projector dimension mismatch");
        if ((proj * proj - proj).cwiseAbs().maxCoeff() > tol)
            throw domain_error("measurement: projector is not idempotent");
        sum += proj;
    }
    if ((sum - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > tol)
        throw domain_error("measurement: projectors do not resolve the identity");
    for (size_t a = 0; a + 1 < m.projectors.size(); ++a)
        for (size_t b = a + 1; b < m.projectors.size(); ++b)
            if ((m.projectors[a] * m.projectors[b]).cwiseAbs().maxCoeff() > tol)
                throw domain_error("measurement: projectors are not orthogonal");
}

namespace detail {

// Outcome distribution of a projective measurement on the thermal state.
inline Vector outcome_probabilities(const ModelParams& p, double beta,
                                    const ProjectiveMeasurement& m) {
    auto spec = eigendecompose(build_hamiltonian(p));
    const Vector w = boltzmann_weights(spec.eigenvalues, beta);
    const int nout = static_cast<int>(m.projectors.size());
    Vector probs(nout);
    for (int x = 0; x < nout; ++x) {
        double px = 0.0;
        for (int n = 0; n < spec.dim(); ++n) {
            const auto col = spec.eigenvectors.col(n);
            px += w[n] * std::real(complex(col.adjoint() * m.projectors[x] * col));
        }
        probs[x] = px;
    }
    return probs;
}

inline Vector probabilities_at(const ModelParams& p, Parameter which, double beta,
                               double offset, const ProjectiveMeasurement& m) {
    ModelParams q = p;
    double b = beta;
    switch (which) {
        case Parameter::anisotropy: q.gamma += offset; break;
        case Parameter::field: q.field += offset; break;
        case Parameter::temperature: b += offset; break;
    }
    return outcome_probabilities(q, b, m);
}

}  // namespace detail

/// Classical Fisher information of a projective measurement for the given
/// parameter, with finite-difference probability derivatives (step 1e-5,
/// half-step consistency check).
inline double fisher_information(const ModelParams& p, const ProjectiveMeasurement& m,
                                 Parameter which, double beta) {
    if (beta < 0.0) throw domain_error("fisher_information: beta must be nonnegative");
    const int dim = 1 << p.n_sites;
    check_measurement(m, dim);

    auto derivative = [&](double step) {
        Vector plus = detail::probabilities_at(p, which, beta, step, m);
        Vector minus = detail::probabilities_at(p, which, beta, -step, m);
        return Vector((plus - minus) / (2.0 * step));
    };

    // derivative norms below this are indistinguishable from finite-
    // difference noise on O(1) probabilities; treated as converged zeros
    constexpr double kDerivFloor = 1e-6;
    double step = 1e-5;
    Vector d_full = derivative(step);
    Vector d_half = derivative(step / 2.0);
    double diff = (d_full - d_half).norm() / std::max(d_half.norm(), kDerivFloor);
    if (diff > 1e-4) {
        step /= 2.0;
        d_full = d_half;
        d_half = derivative(step / 2.0);
        diff = (d_full - d_half).norm() / std::max(d_half.norm(), kDerivFloor);
        if (diff > 1e-4)
            throw numerical_error("fisher_information: probability derivative did not settle");
    }

    const Vector probs = detail::probabilities_at(p, which, beta, 0.0, m);
    double fi = 0.0;
    for (int x = 0; x < probs.size(); ++x) {
        if (probs[x] < detail::kProbFloor) continue;
        fi += d_half[x] * d_half[x] / probs[x];
    }
    return fi;
}

/// Total-magnetization measurement: projectors onto fixed numbers of up
/// spins, outcome labels 2 N_z - N.
inline ProjectiveMeasurement magnetization_measurement(int n_sites) {
    check_sites(n_sites);
    const int dim = 1 << n_sites;
    ProjectiveMeasurement m;
    for (int nz = 0; nz <= n_sites; ++nz) {
        Matrix proj = Matrix::Zero(dim, dim);
        for (int b = 0; b < dim; ++b) {
            const int up = n_sites - __builtin_popcount(static_cast<unsigned>(b));
            if (up == nz) proj(b, b) = 1.0;
        }
        m.projectors.push_back(std::move(proj));
        m.outcome_labels.push_back(2.0 * nz - n_sites);
    }
    return m;
}

inline double magnetization_fisher(const ModelParams& p, Parameter which, double beta) {
    return fisher_information(p, magnetization_measurement(p.n_sites), which, beta);
}

}  // namespace lmg
