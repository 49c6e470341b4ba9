#ifndef SIG3_HYPERGEOMETRIC_HPP
#define SIG3_HYPERGEOMETRIC_HPP

#include <cmath>
#include <concepts>
#include <cstddef>
#include <string>

#include "errors.hpp"

namespace sig3
{

/// Stopping rules shared by every series and mean iteration in the library.
struct EvalConfig
{
    double rel_tol = 1e-15;
    std::size_t max_terms = 100000;
    std::size_t max_iters = 64;

    void validate() const
    {
        if (!(rel_tol > 0.0)) {
            throw domain_error("EvalConfig: rel_tol must be positive");
        }
        if (max_terms < 1 || max_iters < 1) {
            throw domain_error("EvalConfig: max_terms and max_iters must be at least 1");
        }
    }
};

/// Parameters (a, b; c) of a Gauss hypergeometric function.
template <std::floating_point Real>
struct HyperTriple
{
    Real a, b, c;

    HyperTriple(Real a_, Real b_, Real c_) : a(a_), b(b_), c(c_)
    {
        if (c <= Real(0) && std::floor(c) == c) {
            throw domain_error("HyperTriple: c must not be zero or a negative integer");
        }
    }
};

namespace detail
{

// Neumaier's variant of Kahan summation: also correct when the addend
// is larger than the running sum.
template <std::floating_point Real>
class compensated_sum
{
public:
    void add(Real x)
    {
        const Real t = m_sum + x;
        if (std::abs(m_sum) >= std::abs(x)) {
            m_comp += (m_sum - t) + x;
        } else {
            m_comp += (x - t) + m_sum;
        }
        m_sum = t;
    }
    Real value() const
    {
        return m_sum + m_comp;
    }

private:
    Real m_sum = Real(0);
    Real m_comp = Real(0);
};

template <std::floating_point Real>
void check_unit_interval(Real x, const char *who)
{
    if (!(x >= Real(0) && x < Real(1))) {
        throw domain_error(std::string(who) + ": argument must lie in [0, 1)");
    }
}

} // namespace detail

/// Truncated Gauss series sum_n (a)_n (b)_n / ((c)_n n!) x^n for 0 <= x < 1.
/**
 * Terms come from the multiplicative recurrence, never from factorial
 * ratios. Summation stops at the first term below rel_tol times the
 * partial sum; for x > 0.9 two consecutive such terms are required.
 */
template <std::floating_point Real>
Real gauss_2f1_series(const HyperTriple<Real> &params, Real x, const EvalConfig &config = {})
{
    config.validate();
    detail::check_unit_interval(x, "gauss_2f1_series");
    const Real tol = static_cast<Real>(config.rel_tol);
    const std::size_t needed = x > Real(0.9) ? 2 : 1;

    detail::compensated_sum<Real> sum;
    Real term(1);
    std::size_t small_run = 0;
    for (std::size_t n = 0; n < config.max_terms; ++n) {
        sum.add(term);
        const Real k = static_cast<Real>(n);
        term *= (params.a + k) * (params.b + k) * x / ((params.c + k) * (Real(1) + k));
        if (std::abs(term) < tol * std::abs(sum.value())) {
            if (++small_run == needed) {
                return sum.value();
            }
        } else {
            small_run = 0;
        }
    }
    throw non_convergence("gauss_2f1_series: term limit reached before convergence");
}

/// Arithmetic-geometric mean of two positive numbers.
template <std::floating_point Real>
Real agm(Real a0, Real b0, const EvalConfig &config = {})
{
    config.validate();
    if (!(a0 > Real(0) && b0 > Real(0)) || !std::isfinite(a0) || !std::isfinite(b0)) {
        throw domain_error("agm: arguments must be finite and positive");
    }
    const Real tol = static_cast<Real>(config.rel_tol);
    Real a = a0, b = b0;
    for (std::size_t i = 0; i <= config.max_iters; ++i) {
        if (std::abs(a - b) <= tol * a) {
            return a;
        }
        const Real next_b = std::sqrt(a * b);
        a = (a + b) / Real(2);
        b = next_b;
    }
    throw non_convergence("agm: iteration limit reached");
}

/// Borwein cubic mean: a' = (a + 2b)/3, b' = cbrt(b (a^2 + ab + b^2) / 3).
/**
 * 1 / agm3(1, s) = F(1/3, 2/3; 1; 1 - s^3).
 */
template <std::floating_point Real>
Real agm3(Real a0, Real b0, const EvalConfig &config = {})
{
    config.validate();
    if (!(a0 > Real(0) && b0 > Real(0)) || !std::isfinite(a0) || !std::isfinite(b0)) {
        throw domain_error("agm3: arguments must be finite and positive");
    }
    const Real tol = static_cast<Real>(config.rel_tol);
    Real a = a0, b = b0;
    for (std::size_t i = 0; i <= config.max_iters; ++i) {
        if (std::abs(a - b) <= tol * a) {
            return a;
        }
        const Real next_b = std::cbrt(b * (a * a + a * b + b * b) / Real(3));
        a = (a + Real(2) * b) / Real(3);
        b = next_b;
    }
    throw non_convergence("agm3: iteration limit reached");
}

namespace detail
{

// F2 and F3 parametrised by the complement 1 - x, so that callers holding an
// accurately computed complement do not lose digits near x = 1.
template <std::floating_point Real>
Real f2_from_complement(Real one_minus_x, const EvalConfig &config)
{
    if (!(one_minus_x > Real(0) && one_minus_x <= Real(1))) {
        throw domain_error("f2: argument must lie in [0, 1)");
    }
    return Real(1) / agm(Real(1), std::sqrt(one_minus_x), config);
}

template <std::floating_point Real>
Real f3_from_complement(Real one_minus_x, const EvalConfig &config)
{
    if (!(one_minus_x > Real(0) && one_minus_x <= Real(1))) {
        throw domain_error("f3: argument must lie in [0, 1)");
    }
    return Real(1) / agm3(Real(1), std::cbrt(one_minus_x), config);
}

} // namespace detail

/// F(1/2, 1/2; 1; x) = 1 / agm(1, sqrt(1 - x)).
template <std::floating_point Real>
Real f2(Real x, const EvalConfig &config = {})
{
    detail::check_unit_interval(x, "f2");
    return detail::f2_from_complement(Real(1) - x, config);
}

/// F(1/3, 2/3; 1; x) = 1 / agm3(1, cbrt(1 - x)).
template <std::floating_point Real>
Real f3(Real x, const EvalConfig &config = {})
{
    detail::check_unit_interval(x, "f3");
    return detail::f3_from_complement(Real(1) - x, config);
}

/// F(1/3, 2/3; 1/2; x) by direct summation.
/**
 * No transformation is applied near x = 1, where the function grows like
 * (1 - x)^(-1/2); keep x <= 0.99^2. Closer to the singular point the series
 * reports non_convergence instead of returning a poor value.
 */
template <std::floating_point Real>
Real f_half(Real x, const EvalConfig &config = {})
{
    detail::check_unit_interval(x, "f_half");
    return gauss_2f1_series(HyperTriple<Real>(Real(1) / Real(3), Real(2) / Real(3), Real(1) / Real(2)), x,
                            config);
}

/// d/dx F(1/3, 2/3; 1/2; x) = (4/9) F(4/3, 5/3; 3/2; x).
template <std::floating_point Real>
Real f_half_deriv(Real x, const EvalConfig &config = {})
{
    detail::check_unit_interval(x, "f_half_deriv");
    const HyperTriple<Real> shifted(Real(4) / Real(3), Real(5) / Real(3), Real(3) / Real(2));
    return Real(4) / Real(9) * gauss_2f1_series(shifted, x, config);
}

} // namespace sig3

#endif
