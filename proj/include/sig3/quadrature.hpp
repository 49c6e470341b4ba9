#ifndef SIG3_QUADRATURE_HPP
#define SIG3_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>

#include "errors.hpp"

namespace sig3
{

/// Nodes and weights of the N-point Gauss-Legendre rule on [-1, 1].
template <std::size_t N>
struct gauss_legendre_rule
{
    std::array<double, N> nodes{};
    std::array<double, N> weights{};

    gauss_legendre_rule()
    {
        // Newton on P_N in extended precision, seeded by the Tricomi estimate.
        using ext = long double;
        for (std::size_t i = 0; i < (N + 1) / 2; ++i) {
            ext x = std::cos(std::numbers::pi_v<ext> * (ext(i) + ext(0.75)) / (ext(N) + ext(0.5)));
            ext dp = 0;
            for (int iter = 0; iter < 100; ++iter) {
                ext p0 = 1, p1 = x;
                for (std::size_t n = 2; n <= N; ++n) {
                    const ext p2 = ((ext(2 * n - 1)) * x * p1 - ext(n - 1) * p0) / ext(n);
                    p0 = p1;
                    p1 = p2;
                }
                dp = ext(N) * (x * p1 - p0) / (x * x - 1);
                const ext dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < ext(1e-19)) {
                    break;
                }
            }
            const ext w = 2 / ((1 - x * x) * dp * dp);
            nodes[i] = static_cast<double>(-x);
            nodes[N - 1 - i] = static_cast<double>(x);
            weights[i] = weights[N - 1 - i] = static_cast<double>(w);
        }
        if constexpr (N % 2 == 1) {
            nodes[N / 2] = 0.0;
        }
    }

    template <typename F>
    double apply(F &&f, double a, double b) const
    {
        const double half = (b - a) / 2, mid = (a + b) / 2;
        double acc = 0;
        for (std::size_t i = 0; i < N; ++i) {
            acc += weights[i] * f(mid + half * nodes[i]);
        }
        return acc * half;
    }
};

struct QuadratureOptions
{
    double abs_tol = 1e-12;
    int max_depth = 30;
};

namespace detail
{

template <typename F>
double adaptive_gl15(const gauss_legendre_rule<15> &rule, F &f, double a, double b, double whole, double tol,
                     int depth, int max_depth)
{
    const double mid = (a + b) / 2;
    const double left = rule.apply(f, a, mid);
    const double right = rule.apply(f, mid, b);
    if (std::abs(left + right - whole) <= tol) {
        return left + right;
    }
    if (depth >= max_depth) {
        throw quadrature_failure("integrate: subdivision budget exhausted before reaching tolerance");
    }
    return adaptive_gl15(rule, f, a, mid, left, tol / 2, depth + 1, max_depth)
         + adaptive_gl15(rule, f, mid, b, right, tol / 2, depth + 1, max_depth);
}

} // namespace detail

/// Adaptive composite 15-point Gauss-Legendre with interval halving.
/**
 * A panel is accepted when the two half-panel estimates agree with the
 * whole-panel estimate to within the panel's share of the absolute
 * tolerance.
 */
template <typename F>
double integrate(F &&f, double a, double b, const QuadratureOptions &opts = {})
{
    if (a == b) {
        return 0.0;
    }
    static const gauss_legendre_rule<15> rule;
    const double whole = rule.apply(f, a, b);
    return detail::adaptive_gl15(rule, f, a, b, whole, opts.abs_tol, 0, opts.max_depth);
}

} // namespace sig3

#endif
