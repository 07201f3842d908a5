#pragma once

// Grid scans of QFI surfaces, optimal-field search, and robustness of the
// optimum under Gaussian field fluctuations.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "lmg/analytic_forms.hpp"
#include "lmg/estimation_core.hpp"
#include "lmg/model.hpp"

namespace lmg {

struct ScanQuantities {
    bool qfi_gamma = true;
    bool qfi_beta = true;
    bool magnetization = true;
    bool gap = true;
};

/// Flat result table over a (gamma, field, beta) product grid;
/// gamma-major, then field, then beta. Failed points carry an error
/// message and zero-filled values instead of NaN.
struct ScanTable {
    std::vector<std::string> columns;       // axis names then value names
    std::vector<std::vector<double>> rows;  // one row per grid point
    std::vector<std::string> errors;        // per row; empty string = ok

    std::size_t size() const { return rows.size(); }
};

namespace detail {

template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
    if (workers <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    };
    std::vector<std::thread> pool;
    const int n = std::min<std::size_t>(workers, count) - 1;
    pool.reserve(n);
    for (int t = 0; t < n; ++t) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
}

}  // namespace detail

inline ScanTable scan(int n_sites, const std::vector<double>& gammas,
                      const std::vector<double>& fields,
                      const std::vector<double>& betas,
                      const ScanQuantities& quantities = {}, int workers = 1) {
    check_sites(n_sites);
    if (gammas.empty() || fields.empty() || betas.empty())
        throw domain_error("scan: empty grid axis");
    const std::size_t total = gammas.size() * fields.size() * betas.size();
    if (total > std::size_t(1e7)) throw domain_error("scan: more than 1e7 grid points");

    ScanTable table;
    table.columns = {"n_sites", "gamma", "field", "beta"};
    if (quantities.qfi_gamma) {
        table.columns.insert(table.columns.end(),
                             {"g_gamma_total", "g_gamma_classical", "g_gamma_quantum"});
    }
    if (quantities.qfi_beta) table.columns.push_back("g_beta");
    if (quantities.magnetization) table.columns.push_back("fi_magnetization");
    if (quantities.gap) table.columns.push_back("gap");
    table.rows.assign(total, {});
    table.errors.assign(total, {});

    const std::size_t nf = fields.size(), nb = betas.size();
    detail::parallel_for(total, workers, [&](std::size_t idx) {
        const double gamma = gammas[idx / (nf * nb)];
        const double field = fields[(idx / nb) % nf];
        const double beta = betas[idx % nb];
        std::vector<double>& row = table.rows[idx];
        row = {double(n_sites), gamma, field, beta};
        try {
            const ModelParams p{n_sites, gamma, field};
            if (quantities.qfi_gamma) {
                const auto g = qfi_thermal(p, Parameter::anisotropy, beta);
                row.insert(row.end(), {g.total, g.classical_term, g.quantum_term});
            }
            if (quantities.qfi_beta) row.push_back(qfi_temperature(p, beta).total);
            if (quantities.magnetization)
                row.push_back(magnetization_fisher(p, Parameter::anisotropy, beta));
            if (quantities.gap)
                row.push_back(spectral_gap(eigendecompose(build_hamiltonian(p))));
        } catch (const std::exception& ex) {
            table.errors[idx] = ex.what();
            row.resize(table.columns.size(), 0.0);
        }
    });
    return table;
}

enum class Branch { below, at, above };

inline const char* to_string(Branch b) {
    switch (b) {
        case Branch::below: return "below";
        case Branch::at: return "at";
        default: return "above";
    }
}

struct OptimalFieldResult {
    double field_star = 0.0;
    double qfi_at_star = 0.0;
    double nearest_critical = 0.0;
    Branch branch = Branch::at;
};

namespace detail {

// Golden-section maximization of fn on [lo, hi] to |hi - lo| < tol.
template <typename Fn>
double golden_max(Fn&& fn, double lo, double hi, double tol) {
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = fn(x1), f2 = fn(x2);
    while (hi - lo > tol) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = fn(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = fn(x1);
        }
    }
    return 0.5 * (lo + hi);
}

// All local maxima of fn on the grid [0, h_max] with the given step,
// refined by golden section; boundary maxima widen the bracket toward the
// interior only.
template <typename Fn>
std::vector<std::pair<double, double>> local_maxima(Fn&& fn, double h_max,
                                                    double step, double tol) {
    const int n = int(std::round(h_max / step)) + 1;
    std::vector<double> val(n);
    for (int i = 0; i < n; ++i) val[i] = fn(std::min(i * step, h_max));
    const auto [mn, mx] = std::minmax_element(val.begin(), val.end());
    if (*mx - *mn < 1e-30)
        throw numerical_error("optimal_field: flat objective, no maximum");

    std::vector<std::pair<double, double>> out;
    for (int i = 0; i < n; ++i) {
        const bool left_ok = i == 0 || val[i] >= val[i - 1];
        const bool right_ok = i == n - 1 || val[i] >= val[i + 1];
        const bool strict = (i > 0 && val[i] > val[i - 1]) ||
                            (i < n - 1 && val[i] > val[i + 1]);
        if (!(left_ok && right_ok && strict)) continue;
        const double lo = std::max(0.0, (i - 1) * step);
        const double hi = std::min(h_max, (i + 1) * step);
        const double h = golden_max(fn, lo, hi, tol);
        const double f = fn(h);
        if (!out.empty() && std::abs(out.back().first - h) < 2.0 * step) {
            if (f > out.back().second) out.back() = {h, f};
        } else {
            out.push_back({h, f});
        }
    }
    return out;
}

// Critical fields: closed forms for N <= 4, otherwise located numerically
// as the zeros of the spectral gap over the search window.
inline std::vector<double> critical_fields(int n_sites, double gamma, double h_max) {
    if (n_sites <= 4) return critical_lines(n_sites, gamma);
    auto neg_gap = [&](double h) {
        return -spectral_gap(eigendecompose(build_hamiltonian({n_sites, gamma, h})));
    };
    std::vector<double> out;
    for (const auto& [h, v] : local_maxima(neg_gap, h_max, 1e-3, 1e-10))
        if (-v < 1e-8) out.push_back(h);
    if (out.empty())
        throw numerical_error("critical_fields: no level crossing located");
    return out;
}

}  // namespace detail

inline std::vector<OptimalFieldResult> optimal_field(int n_sites, double gamma,
                                                     double beta, Parameter target,
                                                     double h_max = 2.0) {
    check_sites(n_sites);
    if (gamma < 0.0 || gamma > 1.0)
        throw domain_error("optimal_field: gamma must lie in [0, 1]");
    if (beta <= 0.0) throw domain_error("optimal_field: beta must be positive");
    if (target == Parameter::field)
        throw domain_error("optimal_field: target must be anisotropy or temperature");

    auto objective = [&](double h) {
        const ModelParams p{n_sites, gamma, h};
        return target == Parameter::anisotropy
                   ? qfi_thermal(p, Parameter::anisotropy, beta).total
                   : qfi_temperature(p, beta).total;
    };
    auto maxima = detail::local_maxima(objective, h_max, 1e-3, 1e-8);

    // drop maxima at underflow level relative to the global best; those are
    // grid noise of a numerically zero objective, not physical branches
    double top = 0.0;
    for (const auto& m : maxima) top = std::max(top, m.second);
    std::erase_if(maxima, [&](const auto& m) { return m.second <= top * 1e-12; });

    if (target == Parameter::anisotropy) {
        // keep all maximizers within 1e-9 relative of the best, sorted by h
        double best = 0.0;
        for (const auto& m : maxima) best = std::max(best, m.second);
        std::erase_if(maxima, [&](const auto& m) {
            return m.second < best * (1.0 - 1e-9);
        });
    }

    const auto criticals = detail::critical_fields(n_sites, gamma, h_max);
    std::vector<OptimalFieldResult> out;
    for (const auto& [h, f] : maxima) {
        OptimalFieldResult r;
        r.field_star = h;
        r.qfi_at_star = f;
        r.nearest_critical = *std::min_element(
            criticals.begin(), criticals.end(), [&](double a, double b) {
                return std::abs(a - h) < std::abs(b - h);
            });
        r.branch = std::abs(h - r.nearest_critical) < 1e-6
                       ? Branch::at
                       : (h > r.nearest_critical ? Branch::above : Branch::below);
        out.push_back(r);
    }
    return out;
}

namespace detail {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
inline void gauss_legendre(int n, std::vector<double>& nodes,
                           std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

}  // namespace detail

/// Robustness ratio xi: anisotropy QFI averaged over a Gaussian field
/// distribution centered on the (global-maximum) critical line, divided by
/// the QFI on the line. The density is truncated at h >= 0 and
/// renormalized over the integration window.
inline double robustness_ratio(int n_sites, double gamma, double beta, double sigma,
                               int nodes = 41) {
    check_sites(n_sites);
    if (sigma <= 0.0) throw domain_error("robustness_ratio: sigma must be positive");
    if (beta <= 0.0) throw domain_error("robustness_ratio: beta must be positive");
    const auto lines = critical_lines(n_sites, gamma);
    const double h_c = *std::max_element(lines.begin(), lines.end());

    const double lo = std::max(0.0, h_c - 6.0 * sigma);
    const double hi = h_c + 6.0 * sigma;
    std::vector<double> x, w;
    detail::gauss_legendre(nodes, x, w);

    double avg = 0.0, mass = 0.0;
    for (int i = 0; i < nodes; ++i) {
        const double h = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x[i];
        const double z = (h - h_c) / sigma;
        const double density = std::exp(-0.5 * z * z);
        const double g = qfi_thermal({n_sites, gamma, h}, Parameter::anisotropy, beta).total;
        avg += w[i] * density * g;
        mass += w[i] * density;
    }
    const double g_c =
        qfi_thermal({n_sites, gamma, h_c}, Parameter::anisotropy, beta).total;
    if (g_c <= 0.0 || mass <= 0.0)
        throw numerical_error("robustness_ratio: degenerate reference QFI or density");
    return avg / (mass * g_c);
}

}  // namespace lmg
