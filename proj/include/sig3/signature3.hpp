#ifndef SIG3_SIGNATURE3_HPP
#define SIG3_SIGNATURE3_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "elliptic_core.hpp"
#include "errors.hpp"
#include "hypergeometric.hpp"
#include "quadrature.hpp"

// Signature-three objects for a modulus 0 < kappa < 1:
//
//   delta_kappa : derivative of the inverse of T -> int_0^T F(1/3,2/3;1/2; kappa^2 sin^2 t) dt,
//   P_kappa     : Weierstrass P with g2 = (4/27)(9 - 8 kappa^2), g3 = (8/729)(27 - 36 kappa^2 + 8 kappa^4),
//   dn3         : 1 - (4/9) kappa^2 / (1/3 + P_kappa), the elliptic extension of delta_kappa.
//
// Half-periods come from two routes: omega = (pi/2) F3(kappa^2),
// omega' = i (sqrt3/2) pi F3(1 - kappa^2) on the cubic side, and
// K/r, i K'/r with the Jacobian modulus k on the classical side.

namespace sig3
{

namespace constants
{
inline constexpr double sqrt3 = std::numbers::sqrt3;
inline constexpr double half_pi = std::numbers::pi / 2;
} // namespace constants

/// kappa, its complement lambda = sqrt(1 - kappa^2) and the modular angle theta (kappa = sin theta).
struct ModulusSet
{
    double kappa;
    double lambda;
    double theta;

    /// The set with the roles of kappa and lambda exchanged.
    ModulusSet complement() const
    {
        return {lambda, kappa, constants::half_pi - theta};
    }
};

inline ModulusSet modulus_from_kappa(double kappa)
{
    if (!(kappa > 0.0 && kappa < 1.0)) {
        throw domain_error("modulus_from_kappa: kappa must lie in (0, 1), got " + std::to_string(kappa));
    }
    const double lambda = std::sqrt((1.0 - kappa) * (1.0 + kappa));
    return {kappa, lambda, std::atan2(kappa, lambda)};
}

/// The parameter p together with every quantity derived from it.
/**
 * s = sin(theta/3) and c = cos(theta/3) for the modulus kappa^2 = beta; X and
 * s3c are evaluated from s and c directly, k2 from the midpoint spread
 * k^2 = 16 s^3 c / (8 s^3 c + sqrt3 X), while alpha, beta and r2 use the
 * rational forms in p. The complements 1 - alpha and 1 - beta are kept in
 * factored form.
 */
struct TransferParams
{
    double p;
    double s;
    double c;
    double X;
    double s3c;
    double alpha;
    double beta;
    double one_minus_alpha;
    double one_minus_beta;
    double r2;
    double k2;

    ModulusSet modulus() const
    {
        const double kappa = std::sqrt(beta);
        const double lambda = std::sqrt(one_minus_beta);
        return {kappa, lambda, 3.0 * std::atan2(s, c)};
    }
};

namespace detail
{

inline bool close_rel(double a, double b, double tol)
{
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

} // namespace detail

inline TransferParams params_from_p(double p)
{
    if (!(p > 0.0 && p < 1.0)) {
        throw domain_error("params_from_p: p must lie in (0, 1), got " + std::to_string(p));
    }
    using constants::sqrt3;
    const double q = 1.0 + p + p * p;
    const double root_q = std::sqrt(q);

    TransferParams t{};
    t.p = p;
    t.s = sqrt3 / 2.0 * p / root_q;
    t.c = 0.5 * (2.0 + p) / root_q;
    const double s2 = t.s * t.s;
    t.X = (8.0 * s2 - 12.0) * s2 + 3.0;
    t.s3c = s2 * t.s * t.c;
    t.alpha = p * p * p * (2.0 + p) / (1.0 + 2.0 * p);
    t.beta = 27.0 / 4.0 * p * p * (1.0 + p) * (1.0 + p) / (q * q * q);
    // Factored complements only pay off near 1; for small values they can round above 1.
    t.one_minus_alpha =
        t.alpha < 0.5 ? 1.0 - t.alpha : (1.0 - p) * std::pow(1.0 + p, 3) / (1.0 + 2.0 * p);
    t.one_minus_beta =
        t.beta < 0.5 ? 1.0 - t.beta : std::pow((1.0 - p) * (2.0 + p) * (1.0 + 2.0 * p), 2) / (4.0 * q * q * q);
    t.r2 = (1.0 + 2.0 * p) / (q * q);
    t.k2 = 16.0 * t.s3c / (8.0 * t.s3c + sqrt3 * t.X);

    // alpha is k^2 and beta is kappa^2 = s^2 (3 - 4 s^2)^2.
    const double kappa_from_s = t.s * (3.0 - 4.0 * s2);
    if (!detail::close_rel(t.alpha, t.k2, 1e-14) || !detail::close_rel(t.beta, kappa_from_s * kappa_from_s, 1e-14)) {
        throw std::logic_error("params_from_p: parametrisation routes disagree");
    }
    return t;
}

/// p = 2 (s^2 + sqrt3 s c) / (3 - 4 s^2) for s = sin(theta/3), c = cos(theta/3).
inline double p_from_s_c(double s, double c)
{
    if (!(s > 0.0 && s < 0.5)) {
        throw domain_error("p_from_s_c: s must lie in (0, 1/2)");
    }
    if (!(c > 0.0) || std::abs(s * s + c * c - 1.0) > 1e-12) {
        throw domain_error("p_from_s_c: (s, c) must be the sine and cosine of one angle");
    }
    return 2.0 * (s * s + constants::sqrt3 * s * c) / (3.0 - 4.0 * s * s);
}

inline WeierstrassInvariants<double> invariants(const ModulusSet &mod)
{
    const double k2 = mod.kappa * mod.kappa;
    return {4.0 / 27.0 * (9.0 - 8.0 * k2), 8.0 / 729.0 * ((8.0 * k2 - 36.0) * k2 + 27.0)};
}

/// Same invariants written through the complementary modulus.
inline WeierstrassInvariants<double> invariants_lambda_form(const ModulusSet &mod)
{
    const double l2 = mod.lambda * mod.lambda;
    return {4.0 / 27.0 * (8.0 * l2 + 1.0), 8.0 / 729.0 * ((8.0 * l2 + 20.0) * l2 - 1.0)};
}

/// e1 = (2/9) X, e2,3 = (1/9)(-X +- 8 sqrt3 s^3 c), X = 8 s^4 - 12 s^2 + 3, s = sin(theta/3).
inline MidpointTriple<double> midpoints(const ModulusSet &mod)
{
    const double s = std::sin(mod.theta / 3.0);
    const double c = std::cos(mod.theta / 3.0);
    const double s2 = s * s;
    const double X = (8.0 * s2 - 12.0) * s2 + 3.0;
    const double split = 8.0 * constants::sqrt3 * s2 * s * c;
    return {2.0 / 9.0 * X, (split - X) / 9.0, (-X - split) / 9.0};
}

/// Invariants of the lattice whose imaginary period is a third of the original one.
struct TrimidiationData
{
    double b;          // P_kappa at (2/3) omega'
    double h2;
    double h3;
    double h2_b_route; // 120 b^2 - 9 g2
    double h3_b_route; // 280 b^3 - 42 b g2 - 27 g3

    WeierstrassInvariants<double> invariants() const
    {
        return {h2, h3};
    }
};

inline TrimidiationData trimidiation(const ModulusSet &mod)
{
    const double k2 = mod.kappa * mod.kappa;
    const auto g = invariants(mod);
    TrimidiationData d{};
    d.b = -1.0 / 3.0;
    d.h2 = 4.0 / 3.0 * (1.0 + 8.0 * k2);
    d.h3 = 8.0 / 27.0 * ((-8.0 * k2 - 20.0) * k2 + 1.0);
    d.h2_b_route = 120.0 * d.b * d.b - 9.0 * g.g2;
    d.h3_b_route = 280.0 * d.b * d.b * d.b - 42.0 * d.b * g.g2 - 27.0 * g.g3;
    return d;
}

/// omega = (pi/2) F3(kappa^2), omega' = i (sqrt3/2) pi F3(lambda^2).
inline HalfPeriodPair<double> half_periods_sig3(const ModulusSet &mod, const EvalConfig &config = {})
{
    const double k2 = mod.kappa * mod.kappa;
    const double l2 = mod.lambda * mod.lambda;
    const double omega = constants::half_pi * detail::f3_from_complement(l2, config);
    const double omega_im = constants::sqrt3 * constants::half_pi * detail::f3_from_complement(k2, config);
    return {omega, {0.0, omega_im}};
}

/// r omega = (pi/2) F2(alpha), r omega' = i (pi/2) F2(1 - alpha), r^2 = (1 + 2p)/(1 + p + p^2)^2.
inline HalfPeriodPair<double> half_periods_jacobi_route(double p, const EvalConfig &config = {})
{
    const auto t = params_from_p(p);
    const double r = std::sqrt(t.r2);
    const double omega = constants::half_pi * detail::f2_from_complement(t.one_minus_alpha, config) / r;
    const double omega_im = constants::half_pi * detail::f2_from_complement(t.alpha, config) / r;
    return {omega, {0.0, omega_im}};
}

/// Settings for evaluating delta_kappa by quadrature and inversion.
struct DeltaContext
{
    ModulusSet modulus;
    double quad_tol = 1e-12;
    double root_tol = 1e-13;
    EvalConfig config{};

    explicit DeltaContext(const ModulusSet &mod, double quad_tol_ = 1e-12, double root_tol_ = 1e-13,
                          const EvalConfig &config_ = {})
        : modulus(mod), quad_tol(quad_tol_), root_tol(root_tol_), config(config_)
    {
        // F(1/3,2/3;1/2;.) is only summed directly, so keep kappa^2 sin^2 t away from 1.
        if (!(mod.kappa > 0.0 && mod.kappa <= 0.99)) {
            throw domain_error("DeltaContext: kappa must lie in (0, 0.99]");
        }
        if (!(quad_tol > 0.0) || !(root_tol > 0.0)) {
            throw domain_error("DeltaContext: tolerances must be positive");
        }
    }
};

namespace detail
{

inline double delta_integrand(double t, const DeltaContext &ctx)
{
    const double st = std::sin(t);
    return f_half(ctx.modulus.kappa * ctx.modulus.kappa * st * st, ctx.config);
}

// G on [0, pi/2], the only range the inversion needs.
inline double delta_integral_quarter(double T, const DeltaContext &ctx)
{
    return integrate([&ctx](double t) { return delta_integrand(t, ctx); }, 0.0, T, {ctx.quad_tol});
}

} // namespace detail

/// G(T) = int_0^T F(1/3, 2/3; 1/2; kappa^2 sin^2 t) dt.
inline double delta_integral(double T, const DeltaContext &ctx)
{
    if (!std::isfinite(T)) {
        throw domain_error("delta_integral: T must be finite");
    }
    const double sign = T < 0.0 ? -1.0 : 1.0;
    const double span = std::abs(T);
    // Integrate panel-by-panel between consecutive multiples of pi/2.
    const QuadratureOptions opts{ctx.quad_tol};
    auto f = [&ctx](double t) { return detail::delta_integrand(t, ctx); };
    double total = 0.0, lo = 0.0;
    while (lo < span) {
        const double hi = std::min(span, lo + constants::half_pi);
        total += integrate(f, lo, hi, opts);
        lo = hi;
    }
    return sign * total;
}

/// Inverse T(u) of G together with delta(u) = T'(u) and delta'(u).
struct DeltaState
{
    double T;
    double delta;
    double delta_prime;
};

/// delta_kappa(u) and its derivative.
/**
 * u is reduced modulo the period 2 G(pi/2) and reflected into [0, G(pi/2)];
 * there G is inverted by a safeguarded Newton iteration (G' = F >= 1).
 * delta' = -delta F'(x) kappa^2 sin(2T) / F(x)^2 with x = kappa^2 sin^2 T.
 */
inline DeltaState delta_state(double u, const DeltaContext &ctx)
{
    if (!std::isfinite(u)) {
        throw domain_error("delta: u must be finite");
    }
    const double quarter = detail::delta_integral_quarter(constants::half_pi, ctx);
    const double period = 2.0 * quarter;

    const double sign = u < 0.0 ? -1.0 : 1.0;
    const double ua = std::abs(u);
    const double cycles = std::floor(ua / period);
    double rem = ua - cycles * period;
    const bool reflected = rem > quarter;
    if (reflected) {
        rem = std::max(0.0, period - rem);
    }

    // Invert G on [0, pi/2].
    double lo = 0.0, hi = constants::half_pi;
    double T = std::clamp(rem / quarter * constants::half_pi, lo, hi);
    bool converged = rem == 0.0 || rem >= quarter;
    if (rem >= quarter) {
        T = constants::half_pi;
    } else if (rem == 0.0) {
        T = 0.0;
    }
    for (int iter = 0; iter < 200 && !converged; ++iter) {
        const double g = detail::delta_integral_quarter(T, ctx) - rem;
        if (g > 0.0) {
            hi = T;
        } else {
            lo = T;
        }
        double next = T - g / detail::delta_integrand(T, ctx);
        if (!(next > lo && next < hi)) {
            next = (lo + hi) / 2;
        }
        converged = std::abs(next - T) <= ctx.root_tol || hi - lo <= ctx.root_tol;
        T = next;
    }
    if (!converged) {
        throw non_convergence("delta: inversion of the integral did not converge");
    }

    const double pi = std::numbers::pi;
    const double branch = reflected ? pi - T : T;
    const double T_full = sign * (cycles * pi + branch);

    const double k2 = ctx.modulus.kappa * ctx.modulus.kappa;
    const double st = std::sin(T_full);
    const double x = k2 * st * st;
    const double F = f_half(x, ctx.config);
    const double dF = f_half_deriv(x, ctx.config);
    const double d = 1.0 / F;
    return {T_full, d, -d * dF * k2 * std::sin(2.0 * T_full) / (F * F)};
}

inline double delta(double u, const DeltaContext &ctx)
{
    return delta_state(u, ctx).delta;
}

/// dn3(z) = 1 - (4/9) kappa^2 / (1/3 + P_kappa(z)).
/**
 * Lattice points are removable (P -> infinity gives 1); the zeros of
 * 1/3 + P, among them z = (2/3) omega', are poles.
 */
inline Complex<double> dn3(Complex<double> z, const ModulusSet &mod, const EvalConfig &config = {})
{
    const weierstrass_p<double> P(invariants(mod), config);
    Complex<double> value;
    try {
        value = P(z);
    } catch (const pole_error &) {
        return {1.0, 0.0};
    }
    const Complex<double> shifted = 1.0 / 3.0 + value;
    if (std::abs(shifted) <= 1e-10 * std::max(1.0, std::abs(value))) {
        throw pole_error("dn3: argument is a zero of 1/3 + P");
    }
    return 1.0 - 4.0 / 9.0 * mod.kappa * mod.kappa / shifted;
}

} // namespace sig3

#endif
