#pragma once

// Closed-form results for small LMG chains: the N=2 and N=3 analytic
// eigensystems, the N=2 QFI expressions for anisotropy and temperature,
// critical lines, low-temperature asymptotics, and the two-level
// approximation. These serve as independent oracles for the spectral
// machinery.
//
// All thermal expressions are evaluated through ground-shifted Boltzmann
// weights so that beta up to 1e4 does not overflow.
//
// Two deviations from the printed expressions, both verified against the
// exact energy-variance identity and the spectral route:
//  - the temperature-QFI display's middle coefficient is inconsistent with
//    the beta -> 0 limit; the pair-product variance form is used instead;
//  - the compact two-outcome FI denominator is used in its positive form
//    P(x1) P(x2).

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "lmg/model.hpp"
#include "lmg/thermal_spectra.hpp"

namespace lmg {

/// Shorthand parameters u = gamma-1, v = gamma+1, r = sqrt(u^2 + 16 h^2),
/// kappa = beta (1+gamma).
struct ReducedParams {
    double u, v, r, kappa;

    static ReducedParams from(double gamma, double field, double beta) {
        const double u = gamma - 1.0;
        const double v = gamma + 1.0;
        return {u, v, std::sqrt(u * u + 16.0 * field * field), beta * v};
    }
};

namespace detail {

// N=2 thermal weights at energies {-v/2, +v/2, -r/2, +r/2}.
struct N2Weights {
    double b_mv, b_pv, b_mr, b_pr;  // B(-v/2), B(+v/2), B(-r/2), B(+r/2)
    double log_z;                   // log of the ground-shifted partition sum
    double e0;
};

inline N2Weights n2_weights(double v, double r, double beta) {
    Vector energies(4);
    energies << -0.5 * v, 0.5 * v, -0.5 * r, 0.5 * r;
    const double e0 = energies.minCoeff();
    Eigen::ArrayXd w = (-beta * (energies.array() - e0)).exp();
    const double z = w.sum();
    return {w[0] / z, w[1] / z, w[2] / z, w[3] / z, std::log(z), e0};
}

}  // namespace detail

/// Anisotropy QFI for N=2 (thermal state, exact closed form).
inline double qfi_gamma_n2(double gamma, double field, double beta) {
    const auto rp = ReducedParams::from(gamma, field, beta);
    if (rp.r == 0.0)
        throw domain_error("qfi_gamma_n2: singular at gamma = 1, h = 0 (r = 0)");
    const double u = rp.u, v = rp.v, r = rp.r;
    const auto w = detail::n2_weights(v, r, beta);

    const double term1 =
        0.5 * beta * beta *
        (0.5 * (u - r) * (u - r) * (w.b_pv * w.b_pr + w.b_mv * w.b_mr) +
         4.0 * (8.0 * field * field + u * u) * w.b_pv * w.b_mv +
         0.5 * (u + r) * (u + r) * (w.b_pv * w.b_mr + w.b_mv * w.b_pr));

    // (1-e^{br})^2 / ((1+e^{br}) sqrt(kappa2)) == (B_{-r} + B_{+r}) - 4/(2cosh(br/2) Z)
    const double x = 0.5 * beta * r;
    const double log_cosh2 = x + std::log1p(std::exp(-2.0 * x));  // log(2 cosh x)
    const double sech_term = std::exp(std::log(4.0) - log_cosh2 - (w.log_z - beta * w.e0));
    const double term2 =
        16.0 * field * field / (r * r) * ((w.b_mr + w.b_pr) - sech_term);

    return (term1 + term2) / (r * r);
}

/// Anisotropy QFI on the N=2 critical line h = sqrt(gamma)/2.
inline double qfi_gamma_n2_critical(double gamma, double beta) {
    if (gamma < 0.0) throw domain_error("qfi_gamma_n2_critical: gamma must be >= 0");
    const double v = 1.0 + gamma;
    const double kappa = beta * v;
    const double sech = 1.0 / std::cosh(0.5 * kappa);
    const double num = 8.0 * gamma + kappa * kappa +
                       gamma * (gamma * kappa * kappa - 8.0) * sech * sech;
    return num / (4.0 * v * v * v * v);
}

/// Low-temperature asymptotic of the anisotropy QFI (beta >> 1), branch by
/// the side of the critical line.
inline double qfi_gamma_n2_asymptotic(double gamma, double field, double beta) {
    const auto rp = ReducedParams::from(gamma, field, beta);
    const double expo = (field >= 0.5 * std::sqrt(std::max(gamma, 0.0)) ? 0.5 : -0.5) *
                        beta * (rp.v - rp.r);
    return beta * beta * (rp.u + rp.r) * (rp.u + rp.r) / (8.0 * rp.r * rp.r) *
           std::exp(expo);
}

/// Temperature QFI for N=2: thermal energy variance of the four-level
/// spectrum, in pair-product form sum_{i<j} B_i B_j (E_i - E_j)^2.
inline double qfi_beta_n2(double gamma, double field, double beta) {
    if (beta <= 0.0) throw domain_error("qfi_beta_n2: beta must be positive");
    const auto rp = ReducedParams::from(gamma, field, beta);
    const double v = rp.v, r = rp.r;
    const auto w = detail::n2_weights(v, r, beta);
    const double pm = 0.25 * (v - r) * (v - r);
    const double pp = 0.25 * (v + r) * (v + r);
    return v * v * w.b_mv * w.b_pv + r * r * w.b_mr * w.b_pr +
           pm * (w.b_mv * w.b_mr + w.b_pv * w.b_pr) +
           pp * (w.b_mv * w.b_pr + w.b_pv * w.b_mr);
}

/// Low-temperature asymptotic of the temperature QFI.
inline double qfi_beta_n2_asymptotic(double gamma, double field, double beta) {
    const auto rp = ReducedParams::from(gamma, field, beta);
    const double expo = (field >= 0.5 * std::sqrt(std::max(gamma, 0.0)) ? 0.5 : -0.5) *
                        beta * (rp.v - rp.r);
    return 0.25 * (rp.v - rp.r) * (rp.v - rp.r) * std::exp(expo);
}

/// Ground-state degeneracy lines h_c(gamma) for N = 2, 3, 4.
inline std::vector<double> critical_lines(int n_sites, double gamma) {
    if (gamma < 0.0) throw domain_error("critical_lines: gamma must be >= 0");
    const double sq = std::sqrt(gamma);
    switch (n_sites) {
        case 2: return {0.5 * sq};
        case 3: return {2.0 * sq / 3.0};
        case 4: return {0.25 * sq, 0.75 * sq};
        default: throw domain_error("critical_lines: closed forms exist for N = 2, 3, 4");
    }
}

struct AnalyticSpectrum {
    Vector eigenvalues;   // ascending
    Matrix eigenvectors;  // normalized; within degenerate pairs not orthogonalized
};

namespace detail {

// Eigenvector of the symmetric 2x2 block [[d0, c], [c, d1]] for its
// lower/upper eigenvalue, smooth through c -> 0.
inline std::array<double, 2> block_vector(double d0, double d1, double c, bool lower) {
    const double half = 0.5 * (d0 - d1);
    const double disc = std::sqrt(half * half + c * c);
    // eigenvalue avg -/+ disc; use the numerically robust component pairing
    const double lam = 0.5 * (d0 + d1) + (lower ? -disc : disc);
    double x = c, y = lam - d0;
    if (std::abs(y) < 1e-300 && std::abs(x) < 1e-300) {
        // c == 0 and lam == d0: bare basis vector
        return {1.0, 0.0};
    }
    if (std::abs(lam - d1) > std::abs(y)) {
        x = lam - d1;
        y = c;
    }
    const double norm = std::hypot(x, y);
    return {x / norm, y / norm};
}

}  // namespace detail

/// Analytic N=2 eigensystem (ascending), consistent with the computational
/// basis convention of build_hamiltonian.
inline AnalyticSpectrum spectrum_n2(double gamma, double field) {
    const auto rp = ReducedParams::from(gamma, field, 0.0);
    const double v = rp.v, r = rp.r;

    // sector {|11>, |00>...} indices {0, 3}: block [[-2h, u/2], [u/2, 2h]]
    // sector indices {1, 2}: block [[0, -v/2], [-v/2, 0]]
    std::vector<std::pair<double, Eigen::Vector4cd>> sys;
    const auto push = [&](double lam, std::initializer_list<double> comps) {
        Eigen::Vector4cd vec;
        int i = 0;
        for (double c : comps) vec[i++] = c;
        sys.emplace_back(lam, vec.normalized());
    };
    auto lowv = detail::block_vector(-2.0 * field, 2.0 * field, 0.5 * rp.u, true);
    auto highv = detail::block_vector(-2.0 * field, 2.0 * field, 0.5 * rp.u, false);
    push(-0.5 * r, {lowv[0], 0.0, 0.0, lowv[1]});
    push(0.5 * r, {highv[0], 0.0, 0.0, highv[1]});
    push(-0.5 * v, {0.0, 1.0, 1.0, 0.0});
    push(0.5 * v, {0.0, -1.0, 1.0, 0.0});

    std::sort(sys.begin(), sys.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    AnalyticSpectrum out;
    out.eigenvalues.resize(4);
    out.eigenvectors.resize(4, 4);
    for (int i = 0; i < 4; ++i) {
        out.eigenvalues[i] = sys[i].first;
        out.eigenvectors.col(i) = sys[i].second;
    }
    return out;
}

/// Analytic N=3 eigensystem: mu-families with Delta_pm = 2 sqrt(1 + 9h^2
/// +- 3 h v + gamma u), delta_pm = -6h +- v. The u -> 0 singular
/// parametrization of the displayed eigenvectors is replaced by the smooth
/// sector-block form.
inline AnalyticSpectrum spectrum_n3(double gamma, double field) {
    const double u = gamma - 1.0, v = gamma + 1.0, h = field;
    const double dm = 2.0 * std::sqrt(1.0 + 9.0 * h * h - 3.0 * h * v + gamma * u);
    const double dp = 2.0 * std::sqrt(1.0 + 9.0 * h * h + 3.0 * h * v + gamma * u);

    std::vector<std::pair<double, Eigen::VectorXcd>> sys;
    const auto push = [&](double lam, std::initializer_list<double> comps) {
        Eigen::VectorXcd vec(8);
        int i = 0;
        for (double c : comps) vec[i++] = c;
        sys.emplace_back(lam, vec.normalized());
    };
    push((v - 3.0 * h) / 3.0, {0, -1, 0, 0, 1, 0, 0, 0});
    push((v - 3.0 * h) / 3.0, {0, -1, 1, 0, 0, 0, 0, 0});
    push((v + 3.0 * h) / 3.0, {0, 0, 0, -1, 0, 0, 1, 0});
    push((v + 3.0 * h) / 3.0, {0, 0, 0, -1, 0, 1, 0, 0});

    // symmetric sectors: {e0, (e3+e5+e6)/sqrt3} and {e7, (e1+e2+e4)/sqrt3}
    const double s3 = std::sqrt(3.0);
    {
        const double d0 = -3.0 * h, d1 = h - 2.0 * v / 3.0, c = u / s3;
        auto lo = detail::block_vector(d0, d1, c, true);
        auto hi = detail::block_vector(d0, d1, c, false);
        push((-3.0 * h - v - dm) / 3.0,
             {lo[0], 0, 0, lo[1] / s3, 0, lo[1] / s3, lo[1] / s3, 0});
        push((-3.0 * h - v + dm) / 3.0,
             {hi[0], 0, 0, hi[1] / s3, 0, hi[1] / s3, hi[1] / s3, 0});
    }
    {
        const double d0 = 3.0 * h, d1 = -h - 2.0 * v / 3.0, c = u / s3;
        auto lo = detail::block_vector(d0, d1, c, true);
        auto hi = detail::block_vector(d0, d1, c, false);
        push((3.0 * h - v - dp) / 3.0,
             {0, lo[1] / s3, lo[1] / s3, 0, lo[1] / s3, 0, 0, lo[0]});
        push((3.0 * h - v + dp) / 3.0,
             {0, hi[1] / s3, hi[1] / s3, 0, hi[1] / s3, 0, 0, hi[0]});
    }

    std::sort(sys.begin(), sys.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    AnalyticSpectrum out;
    out.eigenvalues.resize(8);
    out.eigenvectors.resize(8, 8);
    for (int i = 0; i < 8; ++i) {
        out.eigenvalues[i] = sys[i].first;
        out.eigenvectors.col(i) = sys[i].second;
    }
    return out;
}

struct H4Blocks {
    Eigen::MatrixXd a;  // 5x5 symmetric (S=2) block
    Eigen::MatrixXd b;  // 3x3 block, appears twice
    Eigen::MatrixXd c;  // 5x5 block (third S=1 copy plus two singlets)
};

/// Golden block decomposition of the N=4 Hamiltonian.
inline H4Blocks h4_blocks(double gamma, double field) {
    const double u = gamma - 1.0, v = gamma + 1.0, h = field;
    const double s6 = std::sqrt(6.0);
    H4Blocks blk;
    blk.a.resize(5, 5);
    blk.a << 16.0 * h, 0, -s6 * u, 0, 0,
             0, 3.0 * v + 8.0 * h, 0, -3.0 * u, 0,
             -s6 * u, 0, 4.0 * v, 0, -s6 * u,
             0, -3.0 * u, 0, 3.0 * v - 8.0 * h, 0,
             0, 0, -s6 * u, 0, -16.0 * h;
    blk.a *= -0.25;
    blk.b.resize(3, 3);
    blk.b << v - 8.0 * h, 0, u,
             0, 0, 0,
             u, 0, v + 8.0 * h;
    blk.b *= 0.25;
    blk.c.resize(5, 5);
    blk.c << 2.0 * v, 0, 0, 0, 0,
             0, v - 8.0 * h, 0, u, 0,
             0, 0, 0, 0, 0,
             0, u, 0, v + 8.0 * h, 0,
             0, 0, 0, 0, 2.0 * v;
    blk.c *= 0.25;
    return blk;
}

/// Qubit with eigenenergies f(a,b) and f(a,b) + x(a,b): only the gap and
/// its parameter gradient enter the thermal QFI.
struct TwoLevelModel {
    std::function<double(double, double)> gap;           // x(a, b)
    std::function<double(double, double)> gap_gradient;  // d x / d a
};

/// Thermal QFI of the two-level family for the parameter a.
inline double two_level_qfi(const TwoLevelModel& model, double a, double b, double beta) {
    if (beta < 0.0) throw domain_error("two_level_qfi: beta must be nonnegative");
    const double x = model.gap(a, b);
    const double dx = model.gap_gradient(a, b);
    const double sech = 1.0 / std::cosh(0.5 * beta * x);
    return 0.25 * beta * beta * sech * sech * dx * dx;
}

/// F(y) = y^2 e^y / (1 + e^y)^2, the universal thermometry profile.
inline double thermometry_profile(double y) {
    const double sech = 1.0 / std::cosh(0.5 * y);
    return 0.25 * y * y * sech * sech;
}

/// Temperature QFI of a two-level gap x at inverse temperature beta:
/// F(beta x) / beta^2.
inline double two_level_thermometry(double x, double beta) {
    if (beta <= 0.0) throw domain_error("two_level_thermometry: beta must be positive");
    return thermometry_profile(beta * x) / (beta * beta);
}

/// Positive root of (y - 2) e^y = y + 2: location of the maxima of F(y).
inline double thermometry_y_opt() {
    // bisection on (2, 3); the function is monotone there
    auto residual = [](double y) { return (y - 2.0) * std::exp(y) - (y + 2.0); };
    double lo = 2.0, hi = 3.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// F at the optimum, algebraically (y_opt^2 - 4)/4.
inline double thermometry_f_opt() {
    const double y = thermometry_y_opt();
    return 0.25 * (y * y - 4.0);
}

/// Compact two-outcome Fisher information
///   (dp dq' + dq dp')^2 / (P1 P2)
/// with dq' = 2q-1, dp' = 2p-1, P1 = pq + (1-p)(1-q), P2 = 1 - P1.
inline double two_outcome_fisher(double p, double q, double dp, double dq) {
    if (p <= 0.0 || p >= 1.0 || q <= 0.0 || q >= 1.0)
        throw domain_error("two_outcome_fisher: p, q must lie in (0, 1)");
    const double delta_q = 2.0 * q - 1.0;
    const double delta_p = 2.0 * p - 1.0;
    const double p1 = p * q + (1.0 - p) * (1.0 - q);
    const double p2 = 1.0 - p1;
    if (p1 <= 0.0 || p2 <= 0.0)
        throw domain_error("two_outcome_fisher: degenerate outcome distribution");
    const double num = dp * delta_q + dq * delta_p;
    return num * num / (p1 * p2);
}

/// d p / d lambda for the two-level thermal occupation p = 1/(1 + e^{-beta eps}):
/// beta e^{beta eps} / (1 + e^{beta eps})^2 * d eps.
inline double thermal_derivative_weight(double eps, double beta, double deps) {
    if (beta < 0.0) throw domain_error("thermal_derivative_weight: beta must be nonnegative");
    const double sech = 1.0 / std::cosh(0.5 * beta * eps);
    return 0.25 * beta * sech * sech * deps;
}

}  // namespace lmg
