// Command-line front end: grid scans, optimal-field and robustness
// reports, thermodynamic-limit surfaces, and the self-validation suite.
//
// Exit codes: 0 success, 1 input error, 2 numerical failure,
// 3 validation failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lmg/lmg.hpp"

namespace {

struct Cell {
    bool is_number;
    std::string text;
};

Cell num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return {true, buf};
}

Cell txt(std::string s) { return {false, std::move(s)}; }

struct OutputTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            default: out += c;
        }
    }
    return out;
}

void write_table(std::ostream& os, const OutputTable& t, const std::string& format) {
    if (format == "csv") {
        for (std::size_t c = 0; c < t.columns.size(); ++c)
            os << (c ? "," : "") << t.columns[c];
        os << "\n";
        for (const auto& row : t.rows) {
            for (std::size_t c = 0; c < row.size(); ++c)
                os << (c ? "," : "") << row[c].text;
            os << "\n";
        }
        return;
    }
    os << "{\n  \"columns\": [";
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        os << (c ? ", " : "") << '"' << json_escape(t.columns[c]) << '"';
    os << "],\n  \"rows\": [\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        os << "    [";
        for (std::size_t c = 0; c < t.rows[r].size(); ++c) {
            os << (c ? ", " : "");
            if (t.rows[r][c].is_number)
                os << t.rows[r][c].text;
            else
                os << '"' << json_escape(t.rows[r][c].text) << '"';
        }
        os << (r + 1 < t.rows.size() ? "],\n" : "]\n");
    }
    os << "  ]\n}\n";
}

void emit(const OutputTable& t, const std::string& path, const std::string& format) {
    if (path.empty() || path == "-") {
        write_table(std::cout, t, format);
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw lmg::domain_error("cannot open output path: " + path);
    write_table(os, t, format);
}

// "x" or "start:stop:step", inclusive of stop up to half a step.
std::vector<double> parse_range(const std::string& spec) {
    const auto c1 = spec.find(':');
    if (c1 == std::string::npos) return {std::stod(spec)};
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw lmg::domain_error("range must be a single value or start:stop:step");
    const double start = std::stod(spec.substr(0, c1));
    const double stop = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    const double step = std::stod(spec.substr(c2 + 1));
    if (step <= 0.0) throw lmg::domain_error("range step must be positive");
    std::vector<double> out;
    for (double v = start; v <= stop + 0.5 * step; v += step)
        out.push_back(std::min(v, stop));
    if (out.empty()) throw lmg::domain_error("empty range: " + spec);
    return out;
}

std::vector<double> parse_list(const std::string& spec) {
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    if (out.empty()) throw lmg::domain_error("empty list: " + spec);
    return out;
}

std::vector<double> betas_from(const std::string& beta_spec,
                               const std::string& temp_spec) {
    if (!beta_spec.empty() && !temp_spec.empty())
        throw lmg::domain_error("give either --beta or --temperature, not both");
    if (!temp_spec.empty()) {
        auto temps = parse_list(temp_spec);
        for (double& t : temps) {
            if (t <= 0.0) throw lmg::domain_error("temperature must be positive");
            t = 1.0 / t;
        }
        return temps;
    }
    if (beta_spec.empty()) throw lmg::domain_error("--beta (or --temperature) is required");
    return parse_list(beta_spec);
}

struct CommonOpts {
    int n_sites = 2;
    std::string gamma = "0.5";
    std::string field = "0:1:0.05";
    std::string beta;
    std::string temperature;
    std::string target = "anisotropy";
    double sigma = 0.0;
    int cutoff = 0;
    std::string out;
    std::string format = "csv";
    int workers = 1;
    long seed = 12345;
    bool perturb = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_sites = true) {
    if (with_sites)
        cmd->add_option("--n-sites", o.n_sites, "number of spins (2..12)");
    cmd->add_option("--gamma", o.gamma, "anisotropy: value or start:stop:step");
    cmd->add_option("--beta", o.beta, "inverse temperatures, comma list");
    cmd->add_option("--temperature", o.temperature,
                    "temperatures, comma list (converted as beta = 1/T)");
    cmd->add_option("--out", o.out, "output path ('-' for stdout)");
    cmd->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--workers", o.workers, "parallel workers")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "seed for randomized draws");
}

int cmd_surface(const CommonOpts& o) {
    const auto gammas = parse_range(o.gamma);
    const auto fields = parse_range(o.field);
    const auto betas = betas_from(o.beta, o.temperature);
    auto table = lmg::scan(o.n_sites, gammas, fields, betas, {}, o.workers);

    OutputTable out;
    out.columns = table.columns;
    out.columns.push_back("error");
    bool numerical_failure = false;
    for (std::size_t r = 0; r < table.size(); ++r) {
        std::vector<Cell> row;
        row.push_back(num(table.rows[r][0]));
        for (std::size_t c = 1; c < table.rows[r].size(); ++c)
            row.push_back(num(table.rows[r][c]));
        row[0] = {true, std::to_string(int(table.rows[r][0]))};
        row.push_back(txt(table.errors[r]));
        if (!table.errors[r].empty()) numerical_failure = true;
        out.rows.push_back(std::move(row));
    }
    emit(out, o.out, o.format);
    return numerical_failure ? 2 : 0;
}

int cmd_optimal(const CommonOpts& o) {
    const auto gammas = parse_range(o.gamma);
    const auto betas = betas_from(o.beta, o.temperature);
    const lmg::Parameter target = o.target == "temperature"
                                      ? lmg::Parameter::temperature
                                      : lmg::Parameter::anisotropy;
    if (o.target != "temperature" && o.target != "anisotropy")
        throw lmg::domain_error("--target must be anisotropy or temperature");

    OutputTable out;
    out.columns = {"n_sites", "gamma",      "beta",      "h_star",
                   "qfi_at_star", "h_critical", "branch"};
    for (double gamma : gammas) {
        for (double beta : betas) {
            for (const auto& r : lmg::optimal_field(o.n_sites, gamma, beta, target)) {
                out.rows.push_back({{true, std::to_string(o.n_sites)},
                                    num(gamma),
                                    num(beta),
                                    num(r.field_star),
                                    num(r.qfi_at_star),
                                    num(r.nearest_critical),
                                    txt(lmg::to_string(r.branch))});
            }
        }
    }
    emit(out, o.out, o.format);
    return 0;
}

int cmd_robustness(const CommonOpts& o) {
    if (o.sigma <= 0.0) throw lmg::domain_error("--sigma must be positive");
    const auto gammas = parse_range(o.gamma);
    const auto betas = betas_from(o.beta, o.temperature);
    OutputTable out;
    out.columns = {"n_sites", "gamma", "beta", "sigma", "xi"};
    for (double gamma : gammas) {
        for (double beta : betas) {
            const double xi = lmg::robustness_ratio(o.n_sites, gamma, beta, o.sigma);
            out.rows.push_back({{true, std::to_string(o.n_sites)}, num(gamma),
                                num(beta), num(o.sigma), num(xi)});
        }
    }
    emit(out, o.out, o.format);
    return 0;
}

int cmd_thermo(const CommonOpts& o) {
    const auto gammas = parse_range(o.gamma);
    const auto fields = parse_range(o.field);
    const auto betas = betas_from(o.beta, o.temperature);
    OutputTable out;
    out.columns = {"gamma",   "field",           "beta",
                   "g_gamma_total", "g_gamma_classical", "g_gamma_quantum",
                   "g_beta",  "gap",             "error"};
    bool numerical_failure = false;
    for (double gamma : gammas) {
        for (double field : fields) {
            for (double beta : betas) {
                std::vector<Cell> row = {num(gamma), num(field), num(beta)};
                try {
                    const auto gg = lmg::thermo_qfi(gamma, field, beta,
                                                    lmg::Parameter::anisotropy, o.cutoff);
                    const auto gb = lmg::thermo_qfi(gamma, field, beta,
                                                    lmg::Parameter::temperature, o.cutoff);
                    row.insert(row.end(),
                               {num(gg.total), num(gg.classical_term),
                                num(gg.quantum_term), num(gb.total),
                                num(lmg::gap(gamma, field)), txt("")});
                } catch (const std::exception& ex) {
                    row.insert(row.end(), {num(0), num(0), num(0), num(0),
                                           num(0), txt(ex.what())});
                    numerical_failure = true;
                }
                out.rows.push_back(std::move(row));
            }
        }
    }
    emit(out, o.out, o.format);
    return numerical_failure ? 2 : 0;
}

// ---- validation suite ----------------------------------------------------

struct Check {
    std::string name;
    double residual;
    double tolerance;
    bool pass;
};

int cmd_validate(const CommonOpts& o) {
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<Check> checks;
    auto record = [&](const std::string& name, double residual, double tol) {
        checks.push_back({name, residual, tol, residual < tol});
    };

    // closed-form oracles vs the spectral route, N = 2
    {
        double worst_g = 0.0, worst_b = 0.0;
        for (int i = 0; i < 40; ++i) {
            const double gamma = 0.05 + 0.9 * u01(rng);
            const double h = 0.05 + 1.45 * u01(rng);
            const double beta = std::pow(10.0, 2.0 * u01(rng));
            const lmg::ModelParams p{2, gamma, h};
            const double g_ref = lmg::qfi_gamma_n2(gamma, h, beta);
            const double g_num =
                lmg::qfi_thermal(p, lmg::Parameter::anisotropy, beta).total +
                (o.perturb ? 1e-3 * g_ref : 0.0);
            worst_g = std::max(worst_g, std::abs(g_num - g_ref) /
                                            std::max(1e-300, std::abs(g_ref)));
            const double b_ref = lmg::qfi_beta_n2(gamma, h, beta);
            const double b_num = lmg::qfi_temperature(p, beta).total;
            worst_b = std::max(worst_b, std::abs(b_num - b_ref) /
                                            std::max(1e-300, std::abs(b_ref)));
        }
        record("closed_form_anisotropy", worst_g, 1e-7);
        record("closed_form_temperature", worst_b, 1e-7);
    }

    // energy-variance identity at random N
    {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const int n = 2 + int(u01(rng) * 5);
            const lmg::ModelParams p{n, u01(rng), 1.5 * u01(rng)};
            const double beta = 0.1 + 20.0 * u01(rng);
            auto spec = lmg::eigendecompose(lmg::build_hamiltonian(p));
            const lmg::Vector w = lmg::boltzmann_weights(spec.eigenvalues, beta);
            const double e0 = spec.eigenvalues.minCoeff();
            double mean = 0.0, var = 0.0;
            for (int k = 0; k < spec.dim(); ++k) mean += w[k] * (spec.eigenvalues[k] - e0);
            for (int k = 0; k < spec.dim(); ++k) {
                const double c = spec.eigenvalues[k] - e0 - mean;
                var += w[k] * c * c;
            }
            const double g = lmg::qfi_temperature(p, beta).total;
            worst = std::max(worst, std::abs(g - var) / std::max(1.0, var));
        }
        record("energy_variance_identity", worst, 1e-10);
    }

    // fidelity oracle for the anisotropy QFI
    {
        double worst = 0.0;
        const double delta = 1e-4;
        for (int i = 0; i < 10; ++i) {
            const int n = 2 + int(u01(rng) * 3);
            const double gamma = 0.1 + 0.8 * u01(rng);
            const double h = 0.1 + 1.2 * u01(rng);
            const double beta = 1.0 + 9.0 * u01(rng);
            const lmg::Matrix root =
                lmg::gibbs_root(lmg::build_hamiltonian({n, gamma, h}), beta);
            const lmg::Matrix root2 =
                lmg::gibbs_root(lmg::build_hamiltonian({n, gamma + delta, h}), beta);
            const double fid = lmg::root_fidelity(root, root2);
            const double approx = 8.0 * (1.0 - fid) / (delta * delta);
            const double exact =
                lmg::qfi_thermal({n, gamma, h}, lmg::Parameter::anisotropy, beta).total;
            worst = std::max(worst, std::abs(approx - exact) /
                                        std::max(1e-300, std::abs(exact)));
        }
        record("fidelity_oracle", worst, 1e-3);
    }

    // symmetry conjugation residuals
    {
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            const int n = 2 + int(u01(rng) * 7);
            const lmg::ModelParams p{n, 0.05 + 0.9 * u01(rng), 1.5 * u01(rng)};
            const auto flip = lmg::symmetry_conjugation(p, lmg::Symmetry::spin_flip);
            worst = std::max(worst, (flip.transformed - lmg::build_hamiltonian(p))
                                        .cwiseAbs()
                                        .maxCoeff());
            const auto inv = lmg::symmetry_conjugation(p, lmg::Symmetry::gamma_inversion);
            const lmg::Matrix target =
                lmg::build_hamiltonian({n, 1.0 / p.gamma, p.field});
            worst = std::max(worst, (inv.transformed - target).cwiseAbs().maxCoeff());
        }
        record("symmetry_residuals", worst, 1e-12);
    }

    // analytic eigen-systems and block golden data
    {
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            const double gamma = u01(rng), h = 1.5 * u01(rng);
            auto s2 = lmg::spectrum_n2(gamma, h);
            auto e2 = lmg::eigendecompose(lmg::build_hamiltonian({2, gamma, h}));
            worst = std::max(worst,
                             (s2.eigenvalues - e2.eigenvalues).cwiseAbs().maxCoeff());
            auto s3 = lmg::spectrum_n3(gamma, h);
            auto e3 = lmg::eigendecompose(lmg::build_hamiltonian({3, gamma, h}));
            worst = std::max(worst,
                             (s3.eigenvalues - e3.eigenvalues).cwiseAbs().maxCoeff());
            auto blocks = lmg::h4_blocks(gamma, h);
            Eigen::VectorXd ev(16);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sa(blocks.a), sb(blocks.b),
                sc(blocks.c);
            ev << sa.eigenvalues(), sb.eigenvalues(), sb.eigenvalues(), sc.eigenvalues();
            std::sort(ev.begin(), ev.end());
            auto e4 = lmg::eigendecompose(lmg::build_hamiltonian({4, gamma, h}));
            worst = std::max(worst, (ev - e4.eigenvalues).cwiseAbs().maxCoeff());
        }
        record("appendix_golden_matrices", worst, 1e-10);
    }

    // thermometry constants
    {
        const double y = lmg::thermometry_y_opt();
        record("y_opt_root", std::abs((y - 2.0) * std::exp(y) - (y + 2.0)), 1e-12);
        record("f_opt_consistency",
               std::abs(lmg::thermometry_profile(y) - lmg::thermometry_f_opt()), 1e-12);
    }

    // gap-match contract of the Bogoliubov angle
    {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double gamma = 0.9 * u01(rng);
            const double h = i % 2 ? 1.05 + u01(rng) : 0.9 * u01(rng);
            const auto c = lmg::detail::quadratic_coefficients(gamma, h);
            const double d = std::sqrt(c.omega * c.omega - 4.0 * c.lambda * c.lambda);
            worst = std::max(worst, std::abs(d - lmg::gap(gamma, h)));
        }
        record("gap_match_contract", worst, 1e-10);
    }

    OutputTable out;
    out.columns = {"check", "residual", "tolerance", "status"};
    bool all_pass = true;
    for (const auto& c : checks) {
        out.rows.push_back(
            {txt(c.name), num(c.residual), num(c.tolerance), txt(c.pass ? "pass" : "fail")});
        all_pass = all_pass && c.pass;
    }
    emit(out, o.out, o.format);
    return all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thermal metrology of the anisotropic LMG model"};
    app.require_subcommand(1);
    CommonOpts o;

    auto* surface = app.add_subcommand("surface", "QFI surface over a (gamma, field, beta) grid");
    add_common(surface, o);
    surface->add_option("--field", o.field, "field: value or start:stop:step");

    auto* optimal = app.add_subcommand("optimal", "optimal-field search");
    add_common(optimal, o);
    optimal->add_option("--target", o.target, "anisotropy or temperature");

    auto* robustness = app.add_subcommand("robustness", "field-fluctuation robustness ratio");
    add_common(robustness, o);
    robustness->add_option("--sigma", o.sigma, "field-noise standard deviation");

    auto* thermo = app.add_subcommand("thermo", "thermodynamic-limit surface");
    add_common(thermo, o, false);
    thermo->add_option("--field", o.field, "field: value or start:stop:step");
    thermo->add_option("--cutoff", o.cutoff, "Fock truncation (0 = automatic)");

    auto* validate = app.add_subcommand("validate", "run the oracle suite");
    add_common(validate, o);
    validate->add_flag("--perturb", o.perturb,
                       "test hook: inject a perturbation that must flip the oracle check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (surface->parsed()) return cmd_surface(o);
        if (optimal->parsed()) return cmd_optimal(o);
        if (robustness->parsed()) return cmd_robustness(o);
        if (thermo->parsed()) return cmd_thermo(o);
        return cmd_validate(o);
    } catch (const lmg::domain_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const lmg::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    }
}
