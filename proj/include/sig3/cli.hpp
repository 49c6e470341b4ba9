#ifndef SIG3_CLI_HPP
#define SIG3_CLI_HPP

#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csv.hpp"
#include "errors.hpp"
#include "hypergeometric.hpp"
#include "signature3.hpp"
#include "transfer.hpp"

namespace sig3::cli
{

enum exit_code : int
{
    ok = 0,
    check_failed = 1,
    usage_error = 2,
};

struct Grid
{
    double start;
    double stop;
    double step;
};

/// Parses "start:stop:step".
inline Grid parse_grid(const std::string &text)
{
    std::vector<std::string> parts;
    std::size_t from = 0;
    for (std::size_t pos; (pos = text.find(':', from)) != std::string::npos; from = pos + 1) {
        parts.push_back(text.substr(from, pos - from));
    }
    parts.push_back(text.substr(from));
    if (parts.size() != 3) {
        throw config_error("--grid: expected start:stop:step, got '" + text + "'");
    }
    try {
        return {parse_real(parts[0]), parse_real(parts[1]), parse_real(parts[2])};
    } catch (const std::invalid_argument &e) {
        throw config_error("--grid: " + std::string(e.what()));
    }
}

struct CliConfig
{
    std::string grid = "0.05:0.95:0.05";
    double tol = 1e-10;
    std::string output_path;
    bool quiet = false;
    bool allow_endpoints = false;
    unsigned threads = 0;

    std::string function;
    double x = 0.0;
    double kappa = 0.0;
    double u = 0.0;
};

namespace detail
{

inline int run_verify(const CliConfig &cfg, std::ostream &out, std::ostream &err)
{
    const auto g = parse_grid(cfg.grid);
    GridOptions opts;
    opts.allow_endpoints = cfg.allow_endpoints;
    opts.threads = cfg.threads;
    const auto report = grid_report(g.start, g.stop, g.step, cfg.tol, EvalConfig{}, opts);

    if (!cfg.output_path.empty()) {
        if (cfg.output_path == "-") {
            emit_csv(report, out);
        } else {
            std::ofstream file(cfg.output_path, std::ios::binary);
            if (!file) {
                err << "error: cannot open '" << cfg.output_path << "' for writing\n";
                return check_failed;
            }
            emit_csv(report, file);
            file.close();
            if (!file) {
                err << "error: failed writing '" << cfg.output_path << "'\n";
                return check_failed;
            }
        }
    }
    if (!cfg.quiet) {
        out << "rows " << report.rows.size() << ", tol " << format_real(report.tol) << '\n';
        const std::pair<const char *, double> lines[] = {
            {"thm56", report.max_relerr56}, {"thm57", report.max_relerr57}, {"thm58", report.max_relerr58}};
        for (const auto &[name, worst] : lines) {
            out << name << " max_relerr " << format_real(worst) << (worst <= report.tol ? " PASS" : " FAIL")
                << '\n';
        }
    }
    return report.all_pass ? ok : check_failed;
}

inline int run_eval(const CliConfig &cfg, std::ostream &out)
{
    double value = 0.0;
    if (cfg.function == "f2") {
        value = f2(cfg.x);
    } else if (cfg.function == "f3") {
        value = f3(cfg.x);
    } else {
        value = f_half(cfg.x);
    }
    out << format_real(value) << '\n';
    return ok;
}

inline int run_periods(const CliConfig &cfg, std::ostream &out)
{
    const auto mod = modulus_from_kappa(cfg.kappa);
    const double p = p_from_s_c(std::sin(mod.theta / 3.0), std::cos(mod.theta / 3.0));
    const auto a = half_periods_sig3(mod);
    const auto b = half_periods_jacobi_route(p);
    const double d1 = std::abs(a.omega - b.omega) / a.omega;
    const double d2 = std::abs(a.omega_prime_imag() - b.omega_prime_imag()) / a.omega_prime_imag();
    const bool pass = d1 <= cfg.tol && d2 <= cfg.tol;
    if (!cfg.quiet) {
        out << "kappa " << format_real(cfg.kappa) << ", p " << format_real(p) << '\n'
            << "cubic    omega " << format_real(a.omega) << ", -i omega' " << format_real(a.omega_prime_imag())
            << '\n'
            << "jacobi   omega " << format_real(b.omega) << ", -i omega' " << format_real(b.omega_prime_imag())
            << '\n'
            << "relerr   omega " << format_real(d1) << ", -i omega' " << format_real(d2)
            << (pass ? " PASS" : " FAIL") << '\n';
    }
    return pass ? ok : check_failed;
}

inline int run_delta(const CliConfig &cfg, std::ostream &out)
{
    const DeltaContext ctx(modulus_from_kappa(cfg.kappa));
    const auto st = delta_state(cfg.u, ctx);
    const auto ext = dn3({cfg.u, 0.0}, ctx.modulus);
    if (cfg.quiet) {
        out << format_real(st.delta) << '\n';
    } else {
        out << "delta " << format_real(st.delta) << '\n'
            << "delta' " << format_real(st.delta_prime) << '\n'
            << "T " << format_real(st.T) << '\n'
            << "dn3 " << format_real(ext.real()) << '\n';
    }
    return ok;
}

} // namespace detail

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CliConfig cfg;
    CLI::App app{"Signature-three elliptic numerics and transfer-identity verification"};
    app.require_subcommand(1);

    auto *verify = app.add_subcommand("verify", "Check the three transfer identities over a p grid");
    verify->add_option("--grid", cfg.grid, "start:stop:step, all inside (0, 1)")->capture_default_str();
    verify->add_option("--tol", cfg.tol, "Relative tolerance")->capture_default_str()->check(CLI::PositiveNumber);
    verify->add_option("--out", cfg.output_path, "CSV report path ('-' for standard output)");
    verify->add_flag("--allow-endpoints", cfg.allow_endpoints, "Do not clamp grid points away from 0 and 1");
    verify->add_option("--threads", cfg.threads, "Worker threads (0 = hardware concurrency)")->capture_default_str();
    verify->add_flag("-q,--quiet", cfg.quiet, "Suppress the summary");

    auto *eval = app.add_subcommand("eval", "Evaluate f2, f3 or fhalf at one point");
    eval->add_option("function", cfg.function, "f2 | f3 | fhalf")
        ->required()
        ->check(CLI::IsMember({"f2", "f3", "fhalf"}));
    eval->add_option("x", cfg.x, "Argument in [0, 1)")->required();

    auto *periods = app.add_subcommand("periods", "Half-periods by the cubic and the Jacobian route");
    periods->add_option("--kappa", cfg.kappa, "Modulus in (0, 1)")->required();
    periods->add_option("--tol", cfg.tol, "Agreement tolerance")->capture_default_str()->check(CLI::PositiveNumber);
    periods->add_flag("-q,--quiet", cfg.quiet, "Suppress the summary");

    auto *delta_cmd = app.add_subcommand("delta", "Evaluate delta_kappa(u)");
    delta_cmd->add_option("--kappa", cfg.kappa, "Modulus in (0, 0.99]")->required();
    delta_cmd->add_option("--u", cfg.u, "Real argument")->required();
    delta_cmd->add_flag("-q,--quiet", cfg.quiet, "Print only the value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        app.exit(e, out, err);
        return ok;
    } catch (const CLI::CallForAllHelp &e) {
        app.exit(e, out, err);
        return ok;
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return usage_error;
    }

    try {
        if (verify->parsed()) {
            return detail::run_verify(cfg, out, err);
        }
        if (eval->parsed()) {
            return detail::run_eval(cfg, out);
        }
        if (periods->parsed()) {
            return detail::run_periods(cfg, out);
        }
        return detail::run_delta(cfg, out);
    } catch (const config_error &e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const std::domain_error &e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return check_failed;
    }
}

} // namespace sig3::cli

#endif
