#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "lmg/analytic_forms.hpp"
#include "lmg/estimation_core.hpp"
#include "lmg/spin_model.hpp"

using namespace lmg;
using Catch::Approx;

namespace {

// Literal display of the N=2 anisotropy QFI, evaluated in extended
// precision. Usable for beta <= 30 before the exponentials overflow.
double qfi_gamma_n2_literal(double gamma, double h, double beta) {
    const long double u = gamma - 1.0L, v = gamma + 1.0L;
    const long double r = sqrtl(u * u + 16.0L * h * h);
    const long double b = beta;
    const long double k1 =
        expl(-0.5L * b * (v - r)) *
        (0.5L * (u - r) * (u - r) + 4.0L * (8.0L * h * h + u * u) * expl(0.5L * b * (v + r)) +
         0.5L * (u - r) * (u - r) * expl(b * (v + r)) +
         0.5L * (u + r) * (u + r) * expl(b * r) +
         0.5L * (u + r) * (u + r) * expl(b * v));
    const long double k2 =
        powl(1.0L + expl(b * r) + expl(0.5L * b * (v + r)) + expl(-0.5L * b * (v - r)), 2.0L);
    const long double ebr = expl(b * r);
    const long double inner = b * b * k1 / (2.0L * k2) +
                              16.0L * h * h / (r * r) * (1.0L - ebr) * (1.0L - ebr) /
                                  ((1.0L + ebr) * sqrtl(k2));
    return double(inner / (r * r));
}

}  // namespace

TEST_CASE("reduced parameters") {
    const auto rp = ReducedParams::from(0.36, 0.3, 2.0);
    REQUIRE(rp.u == Approx(-0.64));
    REQUIRE(rp.v == Approx(1.36));
    REQUIRE(rp.r * rp.r == Approx(rp.u * rp.u + 16.0 * 0.09).epsilon(1e-14));
    REQUIRE(rp.kappa == Approx(2.72));
}

TEST_CASE("stable anisotropy form matches the literal display at beta <= 30") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 60; ++i) {
        const double gamma = 0.05 + 0.9 * u01(rng);
        const double h = 0.05 + 1.45 * u01(rng);
        const double beta = 0.2 + 29.0 * u01(rng);
        const double stable = qfi_gamma_n2(gamma, h, beta);
        const double literal = qfi_gamma_n2_literal(gamma, h, beta);
        REQUIRE(stable == Approx(literal).epsilon(1e-11).margin(1e-300));
    }
}

TEST_CASE("anisotropy closed form: singular point and pinned values") {
    REQUIRE_THROWS_AS(qfi_gamma_n2(1.0, 0.0, 2.0), domain_error);
    REQUIRE(qfi_gamma_n2(0.5, 0.353553, 0.0) == Approx(0.0).margin(1e-14));
    REQUIRE(qfi_gamma_n2(0.36, 0.3, 100.0) ==
            Approx(qfi_gamma_n2_critical(0.36, 100.0)).epsilon(1e-10));
    REQUIRE(qfi_gamma_n2(0.5, 0.3, 5.0) ==
            Approx(qfi_thermal({2, 0.5, 0.3}, Parameter::anisotropy, 5.0).total)
                .epsilon(1e-8));
}

TEST_CASE("critical-line closed form") {
    REQUIRE(qfi_gamma_n2_critical(0.0, 7.0) == Approx(49.0 / 4.0).epsilon(1e-13));
    REQUIRE(qfi_gamma_n2_critical(0.5, 200.0) / (200.0 * 200.0) ==
            Approx(1.0 / 9.0).epsilon(0.01));
    REQUIRE(qfi_gamma_n2_critical(0.5, 20.0) ==
            Approx(qfi_gamma_n2(0.5, std::sqrt(0.5) / 2.0, 20.0)).epsilon(1e-10));
}

TEST_CASE("anisotropy asymptotics") {
    // the literal display carries the exact decay exponent; its prefactor
    // does not match the exact closed form, so only the rate is compared:
    // the exact/asymptotic ratio must be beta-independent in the decaying
    // (classically dominated) regime
    const double r80 = qfi_gamma_n2(0.5, 0.25, 80.0) /
                       qfi_gamma_n2_asymptotic(0.5, 0.25, 80.0);
    const double r100 = qfi_gamma_n2(0.5, 0.25, 100.0) /
                        qfi_gamma_n2_asymptotic(0.5, 0.25, 100.0);
    REQUIRE(r100 == Approx(r80).epsilon(0.02));
    // decay exponent -(v - r)/2 below the critical line
    const double d = 0.1;
    const double b1 = 100.0 + d;
    const double slope =
        std::log((qfi_gamma_n2_asymptotic(0.5, 0.25, b1) / (b1 * b1)) /
                 (qfi_gamma_n2_asymptotic(0.5, 0.25, 100.0) / 1e4)) /
        d;
    const auto rp = ReducedParams::from(0.5, 0.25, 1.0);
    REQUIRE(slope == Approx(-(rp.v - rp.r) / 2.0).epsilon(1e-3));
    // branch continuity at h = sqrt(gamma)/2 (v = r)
    const double hc = std::sqrt(0.5) / 2.0;
    const auto rc = ReducedParams::from(0.5, hc, 1.0);
    REQUIRE(qfi_gamma_n2_asymptotic(0.5, hc, 80.0) ==
            Approx(80.0 * 80.0 * (rc.u + rc.r) * (rc.u + rc.r) /
                   (8.0 * rc.r * rc.r))
                .epsilon(1e-10));
}

TEST_CASE("temperature closed form equals the energy variance") {
    for (double beta : {0.3, 1.0, 3.0, 10.0, 100.0}) {
        const double form = qfi_beta_n2(0.5, 0.4, beta);
        REQUIRE(form ==
                Approx(qfi_temperature({2, 0.5, 0.4}, beta).total).epsilon(1e-12));
    }
    // infinite-temperature limit: uniform variance of the four energies
    const auto rp = ReducedParams::from(0.7, 0.2, 1.0);
    const double uniform_var = (rp.v * rp.v + rp.r * rp.r) / 8.0;
    REQUIRE(qfi_beta_n2(0.7, 0.2, 1e-8) == Approx(uniform_var).epsilon(1e-6));
}

TEST_CASE("temperature asymptotics decay with the gap exponent") {
    const double d = 0.1;
    const auto rp = ReducedParams::from(0.5, 0.25, 1.0);
    const double slope = std::log(qfi_beta_n2_asymptotic(0.5, 0.25, 100.0 + d) /
                                  qfi_beta_n2_asymptotic(0.5, 0.25, 100.0)) /
                         d;
    REQUIRE(slope == Approx(-(rp.v - rp.r) / 2.0).epsilon(1e-3));
    REQUIRE(qfi_beta_n2_asymptotic(0.5, 0.4, 60.0) ==
            Approx(qfi_beta_n2(0.5, 0.4, 60.0)).epsilon(0.05));
}

TEST_CASE("critical lines") {
    REQUIRE(critical_lines(2, 0.36) == std::vector<double>{0.3});
    const auto four = critical_lines(4, 0.64);
    REQUIRE(four[0] == Approx(0.2));
    REQUIRE(four[1] == Approx(0.6));
    REQUIRE_THROWS_AS(critical_lines(5, 0.5), domain_error);
    for (int n : {2, 3, 4}) {
        REQUIRE(critical_lines(n, 0.0).front() == 0.0);
        for (double gamma : {0.1, 0.25, 0.5, 0.81}) {
            for (double hc : critical_lines(n, gamma)) {
                REQUIRE(spectral_gap(eigendecompose(build_hamiltonian({n, gamma, hc}))) <
                        1e-10);
            }
        }
    }
}

TEST_CASE("analytic N=2 spectrum") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const double gamma = u01(rng), h = 1.5 * u01(rng);
        auto s = spectrum_n2(gamma, h);
        const Matrix ham = build_hamiltonian({2, gamma, h});
        auto e = eigendecompose(ham);
        REQUIRE((s.eigenvalues - e.eigenvalues).cwiseAbs().maxCoeff() < 1e-12);
        for (int k = 0; k < 4; ++k) {
            const auto vec = s.eigenvectors.col(k);
            REQUIRE((ham * vec - s.eigenvalues[k] * vec).cwiseAbs().maxCoeff() < 1e-12);
            REQUIRE(vec.norm() == Approx(1.0).epsilon(1e-13));
        }
    }
    // h=0, gamma=0.5: the continued basis reduces to (-1,0,0,1)/sqrt(2)
    auto s = spectrum_n2(0.5, 0.0);
    const auto top = s.eigenvectors.col(2);  // eigenvalue +r/2 = 0.25
    REQUIRE(s.eigenvalues[2] == Approx(0.25));
    REQUIRE(std::abs(std::abs(top[0]) - 1.0 / std::sqrt(2.0)) < 1e-13);
    REQUIRE(std::abs(std::abs(top[3]) - 1.0 / std::sqrt(2.0)) < 1e-13);
    REQUIRE((top[0] * top[3]).real() < 0.0);
}

TEST_CASE("analytic N=3 spectrum") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const double gamma = u01(rng), h = 1.5 * u01(rng);
        auto s = spectrum_n3(gamma, h);
        const Matrix ham = build_hamiltonian({3, gamma, h});
        auto e = eigendecompose(ham);
        REQUIRE((s.eigenvalues - e.eigenvalues).cwiseAbs().maxCoeff() < 1e-10);
        for (int k = 0; k < 8; ++k) {
            const auto vec = s.eigenvectors.col(k);
            REQUIRE((ham * vec - s.eigenvalues[k] * vec).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
    // mu5 for gamma=0.4, h=0.6 is the lowest eigenvalue of its sector
    const double gamma = 0.4, h = 0.6;
    const double u = gamma - 1.0, v = gamma + 1.0;
    const double dm = 2.0 * std::sqrt(1.0 + 9.0 * h * h - 3.0 * h * v + gamma * u);
    const double mu5 = (-3.0 * h - v - dm) / 3.0;
    auto s = spectrum_n3(gamma, h);
    REQUIRE(s.eigenvalues.minCoeff() == Approx(mu5).margin(1e-12));
    // isotropic point (u = 0): the continued basis still diagonalizes H
    auto iso = spectrum_n3(1.0, 0.25);
    const Matrix ham = build_hamiltonian({3, 1.0, 0.25});
    for (int k = 0; k < 8; ++k) {
        const auto vec = iso.eigenvectors.col(k);
        REQUIRE((ham * vec - iso.eigenvalues[k] * vec).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("N=3 mu families reproduce the degeneracy pattern") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const double gamma = 0.05 + 0.9 * u01(rng), h = 0.1 + 1.3 * u01(rng);
        const double v = gamma + 1.0;
        auto e = eigendecompose(build_hamiltonian({3, gamma, h}));
        const double mu12 = (v - 3.0 * h) / 3.0, mu34 = (v + 3.0 * h) / 3.0;
        int c12 = 0, c34 = 0;
        for (int k = 0; k < 8; ++k) {
            if (std::abs(e.eigenvalues[k] - mu12) < 1e-10) ++c12;
            if (std::abs(e.eigenvalues[k] - mu34) < 1e-10) ++c34;
        }
        REQUIRE(c12 >= 2);
        REQUIRE(c34 >= 2);
    }
}

TEST_CASE("H4 block eigenvalue multiset matches the full matrix") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        const double gamma = u01(rng), h = 1.5 * u01(rng);
        const auto blocks = h4_blocks(gamma, h);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sa(blocks.a), sb(blocks.b),
            sc(blocks.c);
        Eigen::VectorXd all(16);
        all << sa.eigenvalues(), sb.eigenvalues(), sb.eigenvalues(), sc.eigenvalues();
        std::sort(all.begin(), all.end());
        auto full = eigendecompose(build_hamiltonian({4, gamma, h}));
        REQUIRE((all - full.eigenvalues).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("two-level QFI") {
    TwoLevelModel flat{[](double, double) { return 0.0; },
                       [](double, double) { return 1.0; }};
    REQUIRE(two_level_qfi(flat, 0.0, 0.0, 10.0) == Approx(25.0).epsilon(1e-13));

    // N=2 below the critical line: gap (v - r)/2 between the two lowest
    // levels, near-pure regime
    TwoLevelModel n2{[](double g, double h) {
                         const auto rp = ReducedParams::from(g, h, 1.0);
                         return (rp.v - rp.r) / 2.0;
                     },
                     [](double g, double h) {
                         const auto rp = ReducedParams::from(g, h, 1.0);
                         return (1.0 - rp.u / rp.r) / 2.0;
                     }};
    const double approx = two_level_qfi(n2, 0.5, 0.25, 100.0);
    REQUIRE(approx / qfi_gamma_n2(0.5, 0.25, 100.0) == Approx(1.0).epsilon(0.02));

    TwoLevelModel insensitive{[](double, double) { return 0.7; },
                              [](double, double) { return 0.0; }};
    REQUIRE(two_level_qfi(insensitive, 0.3, 0.1, 5.0) == 0.0);
}

TEST_CASE("thermometry profile and constants") {
    REQUIRE(thermometry_profile(0.0) == 0.0);
    REQUIRE(thermometry_y_opt() == Approx(2.39936).margin(1e-4));
    REQUIRE(thermometry_f_opt() == Approx(0.43923).margin(1e-4));
    REQUIRE(thermometry_profile(thermometry_y_opt()) ==
            Approx(thermometry_f_opt()).margin(1e-12));
    for (double y : {0.3, 1.7, 2.9}) {
        REQUIRE(thermometry_profile(y) == Approx(thermometry_profile(-y)).margin(1e-12));
    }
    const double x = 0.8, beta = 3.0;
    REQUIRE(two_level_thermometry(x, beta) ==
            Approx(thermometry_profile(beta * x) / (beta * beta)).epsilon(1e-14));
}

TEST_CASE("two-outcome Fisher information") {
    REQUIRE(two_outcome_fisher(0.3, 0.5, 1.0, 0.0) == Approx(0.0).margin(1e-14));
    REQUIRE(two_outcome_fisher(0.7, 0.9, 1.0, 0.0) ==
            Approx(0.64 / (0.66 * 0.34)).epsilon(1e-3));
    REQUIRE_THROWS_AS(two_outcome_fisher(0.0, 0.5, 1.0, 0.0), domain_error);

    // brute-force two-outcome FI oracle
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        const double p = 0.05 + 0.9 * u01(rng), q = 0.05 + 0.9 * u01(rng);
        const double dp = 2.0 * u01(rng) - 1.0, dq = 2.0 * u01(rng) - 1.0;
        const double p1 = p * q + (1.0 - p) * (1.0 - q);
        const double dp1 = dp * (2.0 * q - 1.0) + dq * (2.0 * p - 1.0);
        const double brute = dp1 * dp1 / p1 + dp1 * dp1 / (1.0 - p1);
        REQUIRE(two_outcome_fisher(p, q, dp, dq) == Approx(brute).epsilon(1e-6));
    }
}

TEST_CASE("thermal derivative weight") {
    REQUIRE(thermal_derivative_weight(0.0, 4.0, 0.7) == Approx(0.7).epsilon(1e-14));
    // suppressed as beta e^{-beta eps} for large beta eps
    const double w = thermal_derivative_weight(1.0, 50.0, 1.0);
    REQUIRE(w == Approx(50.0 * std::exp(-50.0)).epsilon(1e-10));
    // equals +d/dlambda of p = 1/(1 + e^{-beta eps(lambda)})
    const double beta = 2.0, d = 1e-6;
    auto occupation = [&](double eps) { return 1.0 / (1.0 + std::exp(-beta * eps)); };
    const double fd = (occupation(0.4 + d) - occupation(0.4 - d)) / (2.0 * d);
    REQUIRE(thermal_derivative_weight(0.4, beta, 1.0) == Approx(fd).epsilon(1e-8));
}

TEST_CASE("closed-form agreement grid") {
    for (int gi = 0; gi < 10; ++gi) {
        for (int hi = 0; hi < 10; ++hi) {
            for (double beta : {1.0, 10.0, 100.0}) {
                const double gamma = 0.05 + 0.1 * gi;
                const double h = 0.05 + (1.45 / 9.0) * hi;
                const double num =
                    qfi_thermal({2, gamma, h}, Parameter::anisotropy, beta).total;
                const double form = qfi_gamma_n2(gamma, h, beta);
                REQUIRE(std::abs(num - form) / std::max(num, 1e-30) < 1e-7);
                const double numb = qfi_temperature({2, gamma, h}, beta).total;
                const double formb = qfi_beta_n2(gamma, h, beta);
                REQUIRE(std::abs(numb - formb) / std::max(numb, 1e-30) < 1e-7);
            }
        }
    }
}
