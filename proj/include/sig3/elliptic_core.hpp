#ifndef SIG3_ELLIPTIC_CORE_HPP
#define SIG3_ELLIPTIC_CORE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "hypergeometric.hpp"

// Weierstrass P from real invariants, real-argument Jacobi sn, and the
// classical dictionary between midpoint values, Jacobian quarter-periods
// and Weierstrass half-periods:
//
//   P(z) = e3 + (e1 - e3) / sn^2(z sqrt(e1 - e3), k),  k^2 = (e2 - e3)/(e1 - e3),
//   omega = K / sqrt(e1 - e3),  omega' = i K' / sqrt(e1 - e3).
//
// The differential equation is the usual cubic (P')^2 = 4P^3 - g2 P - g3.

namespace sig3
{

template <std::floating_point Real>
using Complex = std::complex<Real>;

template <std::floating_point Real>
struct WeierstrassInvariants
{
    Real g2;
    Real g3;

    Real discriminant() const
    {
        return g2 * g2 * g2 - Real(27) * g3 * g3;
    }
    /// Residual of 4t^3 - g2 t - g3.
    Real cubic(Real t) const
    {
        return (Real(4) * t * t - g2) * t - g3;
    }
};

/// Roots e1 >= e2 >= e3 of 4t^3 - g2 t - g3 (they sum to zero).
template <std::floating_point Real>
class MidpointTriple
{
public:
    MidpointTriple(Real e1, Real e2, Real e3) : m_e{e1, e2, e3}
    {
        if (!std::isfinite(e1) || !std::isfinite(e2) || !std::isfinite(e3)) {
            throw domain_error("MidpointTriple: non-finite midpoint value");
        }
        if (e1 < e2 || e2 < e3) {
            throw domain_error("MidpointTriple: midpoint values must satisfy e1 >= e2 >= e3");
        }
        const Real scale = std::max(std::abs(e1), std::abs(e3));
        if (std::abs(e1 + e2 + e3) > Real(1e-12) * scale) {
            throw domain_error("MidpointTriple: midpoint values must sum to zero");
        }
    }

    Real e1() const
    {
        return m_e[0];
    }
    Real e2() const
    {
        return m_e[1];
    }
    Real e3() const
    {
        return m_e[2];
    }
    /// e1 - e3, the square of the Jacobian scale factor.
    Real spread() const
    {
        return m_e[0] - m_e[2];
    }
    WeierstrassInvariants<Real> invariants() const
    {
        const Real s2 = m_e[0] * m_e[1] + m_e[0] * m_e[2] + m_e[1] * m_e[2];
        return {Real(-4) * s2, Real(4) * m_e[0] * m_e[1] * m_e[2]};
    }
    /// The triple for the lattice scaled by 1/t, i.e. every e multiplied by t^2.
    MidpointTriple scaled(Real t) const
    {
        const Real t2 = t * t;
        return {t2 * m_e[0], t2 * m_e[1], t2 * m_e[2]};
    }

private:
    std::array<Real, 3> m_e;
};

/// Half-periods of a rectangular lattice: omega real, omega' on the positive imaginary axis.
template <std::floating_point Real>
struct HalfPeriodPair
{
    Real omega;
    Complex<Real> omega_prime;

    HalfPeriodPair(Real omega_, Complex<Real> omega_prime_) : omega(omega_), omega_prime(omega_prime_)
    {
        if (!(omega > Real(0)) || omega_prime.real() != Real(0) || !(omega_prime.imag() > Real(0))) {
            throw domain_error("HalfPeriodPair: need omega > 0 and omega' on the positive imaginary axis");
        }
    }
    /// -i omega'.
    Real omega_prime_imag() const
    {
        return omega_prime.imag();
    }
};

template <std::floating_point Real>
struct JacobiModulus
{
    Real k;
    Real K;
    Real K_prime;
};

/// Real roots of the Weierstrass cubic; requires a positive discriminant.
template <std::floating_point Real>
MidpointTriple<Real> midpoints_from_invariants(const WeierstrassInvariants<Real> &inv)
{
    if (!(inv.discriminant() > Real(0))) {
        throw degenerate_lattice("midpoints_from_invariants: discriminant must be positive");
    }
    // Trigonometric solution of the depressed cubic t^3 - (g2/4) t - g3/4.
    const Real amp = Real(2) * std::sqrt(inv.g2 / Real(12));
    const Real arg
        = std::clamp(Real(3) * std::sqrt(Real(3)) * inv.g3 / (inv.g2 * std::sqrt(inv.g2)), Real(-1), Real(1));
    const Real phi = std::acos(arg) / Real(3);
    const Real third = Real(2) * std::numbers::pi_v<Real> / Real(3);
    std::array<Real, 3> e{amp * std::cos(phi), amp * std::cos(phi - third), amp * std::cos(phi + third)};
    for (auto &t : e) {
        for (int i = 0; i < 2; ++i) {
            const Real d = Real(12) * t * t - inv.g2;
            if (d != Real(0)) {
                t -= inv.cubic(t) / d;
            }
        }
    }
    std::sort(e.begin(), e.end(), std::greater<>());
    return {e[0], e[1], e[2]};
}

template <std::floating_point Real>
JacobiModulus<Real> jacobi_quarter_periods(Real k, const EvalConfig &config = {})
{
    if (!(k > Real(0) && k < Real(1))) {
        throw domain_error("jacobi_quarter_periods: modulus must lie in (0, 1)");
    }
    const Real half_pi = std::numbers::pi_v<Real> / Real(2);
    const Real K = half_pi * detail::f2_from_complement((Real(1) - k) * (Real(1) + k), config);
    const Real K_prime = half_pi * detail::f2_from_complement(k * k, config);
    return {k, K, K_prime};
}

/// omega = K / sqrt(e1 - e3), omega' = i K' / sqrt(e1 - e3) with k^2 = (e2 - e3)/(e1 - e3).
template <std::floating_point Real>
HalfPeriodPair<Real> half_periods_from_midpoints(const MidpointTriple<Real> &mids, const EvalConfig &config = {})
{
    const Real spread = mids.spread();
    const Real lower_gap = mids.e2() - mids.e3();
    const Real upper_gap = mids.e1() - mids.e2();
    const Real floor = Real(4) * std::numeric_limits<Real>::epsilon() * spread;
    if (!(spread > std::numeric_limits<Real>::min()) || !(lower_gap > floor) || !(upper_gap > floor)) {
        throw degenerate_lattice("half_periods_from_midpoints: coincident midpoint values");
    }
    const Real half_pi = std::numbers::pi_v<Real> / Real(2);
    const Real root = std::sqrt(spread);
    // 1 - k^2 = (e1 - e2)/(e1 - e3) and k^2 = (e2 - e3)/(e1 - e3), both without cancellation.
    const Real K = half_pi * detail::f2_from_complement(upper_gap / spread, config);
    const Real K_prime = half_pi * detail::f2_from_complement(lower_gap / spread, config);
    return {K / root, Complex<Real>(Real(0), K_prime / root)};
}

/// Jacobi sn(u, k) for real u and 0 < k < 1 by descending Landen transformation.
template <std::floating_point Real>
Real sn(Real u, Real k, const EvalConfig &config = {})
{
    if (!(k > Real(0) && k < Real(1))) {
        throw domain_error("sn: modulus must lie in (0, 1)");
    }
    if (!std::isfinite(u)) {
        throw domain_error("sn: argument must be finite");
    }
    constexpr std::size_t max_depth = 12;
    const std::size_t depth_cap = std::min(max_depth, config.max_iters);
    std::array<Real, max_depth + 1> a{}, c{};
    a[0] = Real(1);
    c[0] = k;
    Real b = std::sqrt((Real(1) - k) * (Real(1) + k));
    std::size_t n = 0;
    while (c[n] / a[n] >= Real(1e-14)) {
        if (n == depth_cap) {
            throw non_convergence("sn: Landen descent did not reach a negligible modulus");
        }
        a[n + 1] = (a[n] + b) / Real(2);
        c[n + 1] = (a[n] - b) / Real(2);
        b = std::sqrt(a[n] * b);
        ++n;
    }
    Real phi = std::ldexp(a[n] * u, static_cast<int>(n));
    for (std::size_t j = n; j > 0; --j) {
        phi = (phi + std::asin(c[j] / a[j] * std::sin(phi))) / Real(2);
    }
    return std::sin(phi);
}

/// Weierstrass P(z; g2, g3) for complex z and real invariants.
/**
 * Arguments are reduced modulo the period lattice (when the discriminant is
 * positive), halved until they fall inside the Laurent radius, evaluated by
 * the Laurent series
 *
 *   P(z) = 1/z^2 + sum_{k>=2} c_k z^(2k-2),  c_2 = g2/20, c_3 = g3/28,
 *   c_k = 3/((2k+1)(k-3)) sum_{m=2}^{k-2} c_m c_{k-m},
 *
 * and brought back by the duplication formula, which carries P' along and
 * needs no square roots.
 */
template <std::floating_point Real>
class weierstrass_p
{
public:
    using complex_type = Complex<Real>;

    static constexpr std::size_t max_coefficients = 64;
    static constexpr std::size_t fallback_coefficients = 12;
    static constexpr Real pole_threshold = Real(1e-8);

    explicit weierstrass_p(const WeierstrassInvariants<Real> &inv, const EvalConfig &config = {})
        : m_inv(inv), m_c(max_coefficients + 1, Real(0))
    {
        m_c[2] = inv.g2 / Real(20);
        m_c[3] = inv.g3 / Real(28);
        for (std::size_t k = 4; k <= max_coefficients; ++k) {
            Real acc(0);
            for (std::size_t m = 2; m + 2 <= k; ++m) {
                acc += m_c[m] * m_c[k - m];
            }
            m_c[k] = Real(3) * acc / (Real(2 * k + 1) * Real(k - 3));
        }

        const Real eps = std::numeric_limits<Real>::epsilon();
        if (inv.discriminant() > Real(0)) {
            const auto mids = midpoints_from_invariants(inv);
            m_periods.emplace(half_periods_from_midpoints(mids, config));
            m_r0 = std::min(m_periods->omega, m_periods->omega_prime_imag());
            // Smallest truncation order whose tail is negligible at |z| = r0.
            m_terms = max_coefficients;
            for (std::size_t k = 4; k <= max_coefficients; ++k) {
                const Real tail = std::abs(m_c[k]) * std::pow(m_r0, Real(2 * k));
                const Real next = std::abs(m_c[k - 1]) * std::pow(m_r0, Real(2 * k - 2));
                if (tail < eps * Real(1e-2) && next < eps) {
                    m_terms = k;
                    break;
                }
            }
        } else {
            m_terms = fallback_coefficients;
            const Real top = std::abs(m_c[fallback_coefficients]);
            m_r0 = top > Real(0) ? std::pow(Real(1e-16) / top, Real(1) / Real(2 * fallback_coefficients))
                                 : std::numeric_limits<Real>::max();
        }
    }

    const WeierstrassInvariants<Real> &invariants() const
    {
        return m_inv;
    }
    /// Half-periods, available when the discriminant is positive.
    const std::optional<HalfPeriodPair<Real>> &half_periods() const
    {
        return m_periods;
    }
    Real laurent_radius() const
    {
        return m_r0;
    }
    /// Laurent coefficient c_k for 2 <= k <= max_coefficients.
    Real coefficient(std::size_t k) const
    {
        return m_c.at(k);
    }

    complex_type operator()(complex_type z) const
    {
        return evaluate(z).first;
    }

    /// (P(z), P'(z)).
    std::pair<complex_type, complex_type> evaluate(complex_type z) const
    {
        const complex_type zr = reduce(z);
        if (std::abs(zr) < pole_threshold) {
            throw pole_error("wp: argument lies on (or next to) a lattice point");
        }
        complex_type w = zr;
        int halvings = 0;
        while (std::abs(w) > m_r0) {
            w /= Real(2);
            ++halvings;
        }
        auto [x, y] = laurent(w);
        const Real half_g2 = m_inv.g2 / Real(2);
        for (int i = 0; i < halvings; ++i) {
            const complex_type slope = (Real(6) * x * x - half_g2) / y;
            const complex_type x2 = slope * slope / Real(4) - Real(2) * x;
            y = -(slope * (x2 - x) + y);
            x = x2;
        }
        return {x, y};
    }

private:
    complex_type reduce(complex_type z) const
    {
        if (!m_periods) {
            return z;
        }
        const Real px = Real(2) * m_periods->omega;
        const Real py = Real(2) * m_periods->omega_prime_imag();
        const Real re = z.real() - px * std::nearbyint(z.real() / px);
        const Real im = z.imag() - py * std::nearbyint(z.imag() / py);
        return {re, im};
    }

    std::pair<complex_type, complex_type> laurent(complex_type z) const
    {
        const complex_type w = z * z;
        complex_type s(0), ds(0);
        for (std::size_t k = m_terms; k >= 2; --k) {
            s = s * w + m_c[k];
            if (k >= 3) {
                ds = ds * w + Real(k - 1) * m_c[k];
            }
        }
        // s = sum c_k w^(k-2); ds = sum (k-1) c_k w^(k-3) for k >= 3.
        const complex_type inv_w = Real(1) / w;
        const complex_type value = inv_w + s * w;
        const complex_type deriv = Real(-2) * inv_w / z + Real(2) * z * (m_c[2] + w * ds);
        return {value, deriv};
    }

    WeierstrassInvariants<Real> m_inv;
    std::vector<Real> m_c;
    std::optional<HalfPeriodPair<Real>> m_periods;
    Real m_r0{};
    std::size_t m_terms{};
};

template <std::floating_point Real>
Complex<Real> wp(Complex<Real> z, const WeierstrassInvariants<Real> &inv, const EvalConfig &config = {})
{
    return weierstrass_p<Real>(inv, config)(z);
}

/// P(z) = e3 + (e1 - e3) / sn^2(z sqrt(e1 - e3), k) for real z.
template <std::floating_point Real>
Real wp_via_sn(Real z, const MidpointTriple<Real> &mids, const EvalConfig &config = {})
{
    const Real spread = mids.spread();
    const Real lower_gap = mids.e2() - mids.e3();
    if (!(spread > Real(0)) || !(lower_gap > Real(0)) || !(mids.e1() > mids.e2())) {
        throw degenerate_lattice("wp_via_sn: coincident midpoint values");
    }
    const Real k = std::sqrt(lower_gap / spread);
    const Real s = sn(z * std::sqrt(spread), k, config);
    if (std::abs(s) < weierstrass_p<Real>::pole_threshold) {
        throw pole_error("wp_via_sn: argument lies on (or next to) a lattice point");
    }
    return mids.e3() + spread / (s * s);
}

} // namespace sig3

#endif
