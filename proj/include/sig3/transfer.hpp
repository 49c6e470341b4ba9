#ifndef SIG3_TRANSFER_HPP
#define SIG3_TRANSFER_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <stdexcept>
#include <span>
#include <thread>
#include <vector>

#include "elliptic_core.hpp"
#include "errors.hpp"
#include "hypergeometric.hpp"
#include "signature3.hpp"

// Certification of the three transfer identities, for 0 < p < 1,
//
//   (1 + p + p^2) F2(alpha)     = sqrt(1 + 2p) F3(beta)
//   (1 + p + p^2) F2(1 - alpha) = sqrt(3 + 6p) F3(1 - beta)
//   F2(1 - alpha) / F2(alpha)   = sqrt3 F3(1 - beta) / F3(beta)
//
// with alpha = p^3 (2 + p)/(1 + 2p) and beta = (27/4) p^2 (1 + p)^2 / (1 + p + p^2)^3.

namespace sig3
{

inline constexpr double relerr_floor = 1e-300;

struct IdentityCheck
{
    double lhs;
    double rhs;
    double relerr;
    bool pass;
};

inline IdentityCheck make_check(double lhs, double rhs, double tol)
{
    const double relerr = std::abs(lhs - rhs) / std::max(std::abs(rhs), relerr_floor);
    return {lhs, rhs, relerr, relerr <= tol};
}

namespace detail
{

struct transfer_values
{
    TransferParams params;
    double f2_alpha;
    double f2_co_alpha;
    double f3_beta;
    double f3_co_beta;
};

inline transfer_values evaluate_transfer(double p, const EvalConfig &config)
{
    const auto t = params_from_p(p);
    return {t, f2_from_complement(t.one_minus_alpha, config), f2_from_complement(t.alpha, config),
            f3_from_complement(t.one_minus_beta, config), f3_from_complement(t.beta, config)};
}

inline IdentityCheck check56(const transfer_values &v, double tol)
{
    const double p = v.params.p;
    return make_check((1.0 + p + p * p) * v.f2_alpha, std::sqrt(1.0 + 2.0 * p) * v.f3_beta, tol);
}

inline IdentityCheck check57(const transfer_values &v, double tol)
{
    const double p = v.params.p;
    return make_check((1.0 + p + p * p) * v.f2_co_alpha, std::sqrt(3.0 + 6.0 * p) * v.f3_co_beta, tol);
}

inline IdentityCheck check58(const transfer_values &v, double tol)
{
    return make_check(v.f2_co_alpha / v.f2_alpha, constants::sqrt3 * v.f3_co_beta / v.f3_beta, tol);
}

} // namespace detail

inline IdentityCheck verify_thm56(double p, double tol, const EvalConfig &config = {})
{
    return detail::check56(detail::evaluate_transfer(p, config), tol);
}

inline IdentityCheck verify_thm57(double p, double tol, const EvalConfig &config = {})
{
    return detail::check57(detail::evaluate_transfer(p, config), tol);
}

inline IdentityCheck verify_thm58(double p, double tol, const EvalConfig &config = {})
{
    return detail::check58(detail::evaluate_transfer(p, config), tol);
}

struct VerificationRow
{
    double p;
    double alpha;
    double beta;
    IdentityCheck thm56;
    IdentityCheck thm57;
    IdentityCheck thm58;

    bool all_pass() const
    {
        return thm56.pass && thm57.pass && thm58.pass;
    }
};

inline VerificationRow verify_row(double p, double tol, const EvalConfig &config = {})
{
    const auto v = detail::evaluate_transfer(p, config);
    return {p, v.params.alpha, v.params.beta, detail::check56(v, tol), detail::check57(v, tol),
            detail::check58(v, tol)};
}

struct VerificationReport
{
    std::vector<VerificationRow> rows;
    double tol = 0.0;
    bool all_pass = false;
    double max_relerr56 = 0.0;
    double max_relerr57 = 0.0;
    double max_relerr58 = 0.0;
};

/// Sorts rows by p and fills the summary fields; rows may arrive in any order.
inline VerificationReport assemble_report(std::vector<VerificationRow> rows, double tol)
{
    std::stable_sort(rows.begin(), rows.end(),
                     [](const VerificationRow &a, const VerificationRow &b) { return a.p < b.p; });
    VerificationReport report;
    report.tol = tol;
    report.all_pass = true;
    for (const auto &r : rows) {
        report.all_pass = report.all_pass && r.all_pass();
        report.max_relerr56 = std::max(report.max_relerr56, r.thm56.relerr);
        report.max_relerr57 = std::max(report.max_relerr57, r.thm57.relerr);
        report.max_relerr58 = std::max(report.max_relerr58, r.thm58.relerr);
    }
    report.rows = std::move(rows);
    return report;
}

struct GridOptions
{
    /// Permit grid points closer than endpoint_margin to 0 or 1.
    bool allow_endpoints = false;
    double endpoint_margin = 1e-3;
    /// Worker threads; 0 picks the hardware concurrency, 1 runs serially.
    unsigned threads = 1;
};

/// Points start + i step, i = 0, 1, ..., with the stop value included when it
/// lies within half a step of the last point.
inline std::vector<double> make_grid(double start, double stop, double step, const GridOptions &opts = {})
{
    if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step)) {
        throw config_error("grid: start, stop and step must be finite");
    }
    if (!(start > 0.0 && stop < 1.0)) {
        throw config_error("grid: need 0 < start <= stop < 1");
    }
    if (!(step > 0.0)) {
        throw config_error("grid: step must be positive");
    }
    if (start > stop) {
        throw config_error("grid: empty grid (start exceeds stop)");
    }
    const double span = (stop - start) / step;
    if (span > 1e7) {
        throw config_error("grid: too many points");
    }
    const auto count = static_cast<std::size_t>(std::floor(span + 0.5)) + 1;
    const double lo = opts.allow_endpoints ? 0.0 : opts.endpoint_margin;
    const double hi = opts.allow_endpoints ? 1.0 : 1.0 - opts.endpoint_margin;
    std::vector<double> grid;
    grid.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        double p = start + static_cast<double>(i) * step;
        if (i + 1 == count && std::abs(p - stop) <= 1e-9 * step) {
            p = stop;
        }
        if (!opts.allow_endpoints) {
            p = std::clamp(p, lo, hi);
        }
        if (!(p > 0.0 && p < 1.0)) {
            continue;
        }
        if (grid.empty() || p > grid.back()) {
            grid.push_back(p);
        }
    }
    if (grid.empty()) {
        throw config_error("grid: no admissible points");
    }
    return grid;
}

inline VerificationReport grid_report(double p_start, double p_stop, double p_step, double tol,
                                      const EvalConfig &config = {}, const GridOptions &opts = {})
{
    const auto grid = make_grid(p_start, p_stop, p_step, opts);
    std::vector<VerificationRow> rows(grid.size());
    unsigned workers = opts.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opts.threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, grid.size()));

    if (workers <= 1) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            rows[i] = verify_row(grid[i], tol, config);
        }
        return assemble_report(std::move(rows), tol);
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(workers);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = next++; i < grid.size(); i = next++) {
                        rows[i] = verify_row(grid[i], tol, config);
                    }
                } catch (...) {
                    failures[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto &f : failures) {
        if (f) {
            std::rethrow_exception(f);
        }
    }
    return assemble_report(std::move(rows), tol);
}

/// Relative disagreement of the cubic and classical half-period routes at one p.
struct PeriodRouteCheck
{
    HalfPeriodPair<double> sig3_route;
    HalfPeriodPair<double> jacobi_route;
    double relerr_omega;
    double relerr_omega_prime;
};

inline PeriodRouteCheck verify_period_routes(double p, const EvalConfig &config = {})
{
    const auto mod = params_from_p(p).modulus();
    const auto a = half_periods_sig3(mod, config);
    const auto b = half_periods_jacobi_route(p, config);
    return {a, b, std::abs(a.omega - b.omega) / a.omega,
            std::abs(a.omega_prime_imag() - b.omega_prime_imag()) / a.omega_prime_imag()};
}

/// Largest scaled residual |9 delta'^2 - 4 (1 - delta)(delta^3 + 3 delta^2 - 4 lambda^2)| / (1 + delta^4).
inline double verify_ode_delta(std::span<const double> u_grid, const DeltaContext &ctx)
{
    const double l2 = ctx.modulus.lambda * ctx.modulus.lambda;
    double worst = 0.0;
    for (const double u : u_grid) {
        const auto st = delta_state(u, ctx);
        const double d = st.delta;
        const double lhs = 9.0 * st.delta_prime * st.delta_prime;
        const double rhs = 4.0 * (1.0 - d) * (d * d * d + 3.0 * d * d - 4.0 * l2);
        worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + d * d * d * d));
    }
    return worst;
}

inline double verify_ode_delta(double kappa, std::span<const double> u_grid)
{
    return verify_ode_delta(u_grid, DeltaContext(modulus_from_kappa(kappa)));
}

/// max |q(z) + 3 P_lambda(sqrt3 i z)| / |q(z)| where q has the trimidiated invariants (h2, h3).
inline double verify_trimidiation(double kappa, std::span<const Complex<double>> z_samples,
                                  const EvalConfig &config = {})
{
    const auto mod = modulus_from_kappa(kappa);
    const weierstrass_p<double> q(trimidiation(mod).invariants(), config);
    const weierstrass_p<double> p_lambda(invariants(mod.complement()), config);
    const Complex<double> rot(0.0, constants::sqrt3);
    double worst = 0.0;
    for (const auto z : z_samples) {
        const auto lhs = q(z);
        const auto rhs = -3.0 * p_lambda(rot * z);
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
    }
    return worst;
}

} // namespace sig3

#endif
