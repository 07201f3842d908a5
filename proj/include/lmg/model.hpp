#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lmg {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using complex = std::complex<double>;

// Thrown when inputs violate an operation's domain (bad sizes, negative
// beta, singular parameter points, ...).
class domain_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Thrown when a computation fails numerically (non-convergent derivative,
// unresolved degeneracy, truncation overflow, internal consistency).
class numerical_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

constexpr int kMinSites = 2;
constexpr int kMaxSites = 12;   // dense-matrix feasibility bound
constexpr double kMaxBeta = 1e6;

/// Parameters of one LMG instance: N spins, anisotropy gamma, field h.
struct ModelParams {
    int n_sites;
    double gamma;
    double field;
};

inline void check_sites(int n_sites) {
    if (n_sites < kMinSites || n_sites > kMaxSites)
        throw domain_error("n_sites must be in [" + std::to_string(kMinSites) +
                           ", " + std::to_string(kMaxSites) + "], got " +
                           std::to_string(n_sites));
}

inline void check_params(const ModelParams& p) { check_sites(p.n_sites); }

inline bool is_hermitian(const Matrix& m, double tol = 1e-12) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

enum class Parameter { anisotropy, field, temperature };
enum class Axis { x, y, z };
enum class Symmetry { spin_flip, gamma_inversion };

inline const char* to_string(Parameter p) {
    switch (p) {
        case Parameter::anisotropy: return "anisotropy";
        case Parameter::field: return "field";
        case Parameter::temperature: return "temperature";
    }
    return "?";
}

}  // namespace lmg
