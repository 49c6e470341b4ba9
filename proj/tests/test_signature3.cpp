#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include <sig3/signature3.hpp>

#include "frozen_values.hpp"

using namespace sig3;
using cplx = std::complex<double>;

namespace
{

constexpr double pi = std::numbers::pi;
constexpr double sqrt3 = std::numbers::sqrt3;

double rel(double a, double b)
{
    return std::abs(a - b) / std::abs(b);
}

std::vector<double> p_grid()
{
    std::vector<double> ps;
    for (int i = 1; i <= 9; ++i) {
        ps.push_back(i / 10.0);
    }
    return ps;
}

} // namespace

TEST(ModulusSet, SelfComplementaryPoint)
{
    const auto m = modulus_from_kappa(1.0 / std::sqrt(2.0));
    EXPECT_NEAR(m.lambda, 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(m.theta, pi / 4, 1e-15);
}

TEST(ModulusSet, Invariants)
{
    for (const double k : {0.01, 0.3, 0.6, 0.9, 0.999}) {
        const auto m = modulus_from_kappa(k);
        EXPECT_NEAR(m.lambda, std::sqrt(1 - k * k), 1e-15);
        EXPECT_NEAR(std::sin(m.theta), k, 1e-15);
        const auto c = m.complement();
        EXPECT_EQ(c.kappa, m.lambda);
        EXPECT_EQ(c.lambda, m.kappa);
    }
}

TEST(ModulusSet, EndpointsRejected)
{
    EXPECT_THROW(modulus_from_kappa(0.0), sig3::domain_error);
    EXPECT_THROW(modulus_from_kappa(1.0), sig3::domain_error);
    EXPECT_THROW(modulus_from_kappa(-0.2), sig3::domain_error);
}

TEST(ModulusSet, ThirdAngleAtHalfParameter)
{
    // kappa(p = 1/2) = 9 sqrt21 / 49, for which sin(theta/3) = sqrt3 / (2 sqrt7).
    const auto m = modulus_from_kappa(9.0 * std::sqrt(21.0) / 49.0);
    EXPECT_NEAR(std::sin(m.theta / 3), sqrt3 / (2 * std::sqrt(7.0)), 1e-15);
}

TEST(TransferParams, ExactValuesAtHalf)
{
    const auto t = params_from_p(0.5);
    EXPECT_NEAR(t.alpha, 5.0 / 32, 1e-16);
    EXPECT_NEAR(t.beta, 243.0 / 343, 1e-15);
    EXPECT_NEAR(t.one_minus_alpha, 27.0 / 32, 1e-15);
    EXPECT_NEAR(t.one_minus_beta, 100.0 / 343, 1e-15);
    EXPECT_NEAR(t.r2, 32.0 / 49, 1e-15);
    EXPECT_NEAR(t.s * t.s, 3.0 / 28, 1e-15);
    EXPECT_NEAR(t.X, 177.0 / 98, 1e-14);
    EXPECT_NEAR(t.s3c, 15.0 * sqrt3 / 784, 1e-16);
    // Jacobian modulus through the midpoint spread.
    EXPECT_NEAR(16 * t.s3c / (8 * t.s3c + sqrt3 * t.X), 5.0 / 32, 1e-15);
    EXPECT_NEAR(t.k2, t.alpha, 1e-15);
}

TEST(TransferParams, AuxiliaryClosedForms)
{
    for (const double p : p_grid()) {
        const auto t = params_from_p(p);
        const double q = 1 + p + p * p;
        EXPECT_NEAR(t.s * t.s + t.c * t.c, 1.0, 1e-15);
        EXPECT_LT(rel(t.X, 3.0 / (2 * q * q) * (2 + 4 * p - 2 * p * p * p - p * p * p * p)), 1e-14);
        EXPECT_LT(rel(t.s3c, 3 * sqrt3 / 16 * p * p * p * (2 + p) / (q * q)), 1e-14);
        EXPECT_LT(rel(t.r2, (8 * t.s3c + sqrt3 * t.X) / (3 * sqrt3)), 1e-14);
        EXPECT_LT(rel(t.alpha, t.k2), 1e-14);
        const double kappa = t.s * (3 - 4 * t.s * t.s);
        EXPECT_LT(rel(t.beta, kappa * kappa), 1e-14);
        EXPECT_NEAR(t.one_minus_alpha, 1 - t.alpha, 1e-15);
        EXPECT_NEAR(t.one_minus_beta, 1 - t.beta, 1e-15);
        EXPECT_GT(t.alpha, 0);
        EXPECT_LT(t.alpha, 1);
        EXPECT_GT(t.beta, 0);
        EXPECT_LT(t.beta, 1);
    }
}

TEST(TransferParams, SmallParameterLimit)
{
    const auto t = params_from_p(1e-6);
    EXPECT_LT(t.alpha, 1e-17);
    EXPECT_LT(t.beta, 1e-10);
    EXPECT_LT(t.s, 1e-5);
    EXPECT_NEAR(t.r2, 1.0, 1e-5);
}

TEST(TransferParams, DomainErrors)
{
    EXPECT_THROW(params_from_p(0.0), sig3::domain_error);
    EXPECT_THROW(params_from_p(1.0), sig3::domain_error);
    EXPECT_THROW(params_from_p(1.5), sig3::domain_error);
}

TEST(InverseParametrisation, HalfParameter)
{
    const double r7 = std::sqrt(7.0);
    EXPECT_NEAR(p_from_s_c(sqrt3 / (2 * r7), 5 / (2 * r7)), 0.5, 1e-15);
    EXPECT_LT(p_from_s_c(1e-9, std::sqrt(1 - 1e-18)), 1e-8);
    EXPECT_THROW(p_from_s_c(0.5, sqrt3 / 2), sig3::domain_error);
    EXPECT_THROW(p_from_s_c(0.0, 1.0), sig3::domain_error);
    EXPECT_THROW(p_from_s_c(0.3, 0.3), sig3::domain_error);
}

TEST(InverseParametrisation, RoundTrip)
{
    for (const double p : p_grid()) {
        const auto t = params_from_p(p);
        EXPECT_NEAR(p_from_s_c(t.s, t.c), p, 1e-14) << p;
    }
}

TEST(Invariants, ClosedFormsAndLambdaForms)
{
    const auto g0 = invariants(modulus_from_kappa(1e-9));
    EXPECT_NEAR(g0.g2, 4.0 / 3, 1e-15);
    EXPECT_NEAR(g0.g3, 8.0 / 27, 1e-15);

    const auto g = invariants(modulus_from_kappa(0.6));
    EXPECT_LT(rel(g.g2, 68.0 / 75), 1e-15);
    EXPECT_LT(rel(g.g3, 2792.0 / 16875), 1e-15);
    EXPECT_GT(g.discriminant(), 0.0);
    EXPECT_LT(rel(g.discriminant(), 65536.0 / 10546875), 1e-13);

    for (const double k : {0.3, 0.6, 0.9}) {
        const auto m = modulus_from_kappa(k);
        const auto a = invariants(m), b = invariants_lambda_form(m);
        EXPECT_LT(rel(a.g2, b.g2), 1e-15) << k;
        EXPECT_LT(rel(a.g3, b.g3), 1e-14) << k;
    }
}

TEST(MidpointValues, HalfParameterConfiguration)
{
    const auto t = params_from_p(0.5);
    const auto m = midpoints(t.modulus());
    EXPECT_NEAR(m.e1(), 59.0 / 147, 1e-14);
    EXPECT_NEAR(m.spread(), 32.0 / 49, 1e-14);
}

TEST(MidpointValues, RootsOrderingAndSpread)
{
    for (const double p : p_grid()) {
        const auto t = params_from_p(p);
        const auto mod = t.modulus();
        const auto g = invariants(mod);
        const auto m = midpoints(mod);
        EXPECT_GT(m.e1(), m.e2());
        EXPECT_GT(m.e2(), m.e3());
        for (const double e : {m.e1(), m.e2(), m.e3()}) {
            EXPECT_LE(std::abs(g.cubic(e)), 1e-13 * std::max(1.0, std::abs(g.g3))) << p;
        }
        EXPECT_LE(std::abs(m.e1() + m.e2() + m.e3()), 1e-14);
        EXPECT_NEAR(m.spread(), t.r2, 1e-14) << p;
        EXPECT_NEAR((m.e2() - m.e3()) / m.spread(), t.alpha, 1e-14) << p;
    }
}

TEST(MidpointValues, CollapseAtSmallModulus)
{
    const auto m = midpoints(modulus_from_kappa(1e-6));
    EXPECT_NEAR(m.e1(), 2.0 / 3, 1e-10);
    EXPECT_NEAR(m.e2(), -1.0 / 3, 1e-6);
    EXPECT_NEAR(m.e3(), -1.0 / 3, 1e-6);
}

TEST(Trimidiation, ExactValues)
{
    const auto d06 = trimidiation(modulus_from_kappa(0.6));
    EXPECT_EQ(d06.b, -1.0 / 3);
    EXPECT_LT(rel(d06.h2, 388.0 / 75), 1e-15);
    EXPECT_LT(rel(d06.h3, -36184.0 / 16875), 1e-15);

    const auto sym = modulus_from_kappa(1.0 / std::sqrt(2.0));
    const auto ds = trimidiation(sym);
    EXPECT_NEAR(ds.h2, 20.0 / 3, 1e-14);
    EXPECT_NEAR(9 * invariants(sym.complement()).g2, 20.0 / 3, 1e-14);
}

TEST(Trimidiation, RoutesAgree)
{
    for (const double k : {0.35, 0.4, 0.6, 0.7, 1 / std::sqrt(2.0), 0.9}) {
        const auto mod = modulus_from_kappa(k);
        const auto d = trimidiation(mod);
        const auto gl = invariants(mod.complement());
        EXPECT_LT(rel(d.h2_b_route, d.h2), 1e-14) << k;
        EXPECT_LT(rel(d.h3_b_route, d.h3), 1e-14) << k;
        EXPECT_LT(rel(9 * gl.g2, d.h2), 1e-14) << k;
        EXPECT_LT(rel(-27 * gl.g3, d.h3), 1e-14) << k;
    }
}

TEST(Trimidiation, HomogeneityIdentity)
{
    for (const double k : {0.4, 0.7}) {
        const auto mod = modulus_from_kappa(k);
        const weierstrass_p<double> q(trimidiation(mod).invariants());
        const weierstrass_p<double> pl(invariants(mod.complement()));
        for (const cplx z : {cplx(0.3, 0), cplx(0.2, 0.1), cplx(0.5, 0.3)}) {
            const cplx lhs = q(z);
            EXPECT_LE(std::abs(lhs + 3.0 * pl(cplx(0, sqrt3) * z)), 1e-8 * std::abs(lhs)) << k << z;
        }
    }
}

TEST(Trimidiation, ImaginaryPeriodDividedByThree)
{
    for (const double k : {0.4, 0.6, 0.7}) {
        const auto mod = modulus_from_kappa(k);
        const auto hp = half_periods_sig3(mod);
        const weierstrass_p<double> q(trimidiation(mod).invariants());
        const auto &hq = *q.half_periods();
        EXPECT_LT(rel(hq.omega_prime_imag(), hp.omega_prime_imag() / 3), 1e-9) << k;
        EXPECT_LT(rel(hq.omega, hp.omega), 1e-9) << k;
        const cplx z(0.37, 0.11);
        EXPECT_LT(std::abs(q(z + 2 * hp.omega) - q(z)), 1e-9 * std::abs(q(z)));
    }
}

TEST(Trimidiation, ValueAtTwoThirdsImaginaryHalfPeriod)
{
    const auto mod = modulus_from_kappa(0.6);
    const auto hp = half_periods_sig3(mod);
    const weierstrass_p<double> P(invariants(mod));
    EXPECT_NEAR(P(2.0 / 3 * hp.omega_prime).real(), -1.0 / 3, 1e-12);
}

TEST(HalfPeriodsSig3, Values)
{
    EXPECT_NEAR(half_periods_sig3(modulus_from_kappa(1e-9)).omega, pi / 2, 1e-15);
    const auto sym = half_periods_sig3(modulus_from_kappa(1 / std::sqrt(2.0)));
    EXPECT_LT(rel(sym.omega_prime_imag(), sqrt3 * sym.omega), 1e-15);
    const auto h = half_periods_sig3(params_from_p(0.5).modulus());
    EXPECT_LT(rel(h.omega, frozen::omega_p_half), 2e-15);
    EXPECT_LT(rel(h.omega_prime_imag(), frozen::omega_im_p_half), 2e-15);
}

TEST(HalfPeriodsSig3, ImaginaryHalfPeriodFromComplement)
{
    for (const double k : {0.2, 0.5, 0.8}) {
        const auto mod = modulus_from_kappa(k);
        const auto a = half_periods_sig3(mod), b = half_periods_sig3(mod.complement());
        EXPECT_LT(rel(a.omega_prime_imag(), sqrt3 * b.omega), 1e-14) << k;
    }
}

TEST(HalfPeriodsSig3, MatchesWeierstrassLattice)
{
    for (const double k : {0.3, 0.6, 0.9}) {
        const auto mod = modulus_from_kappa(k);
        const auto a = half_periods_sig3(mod);
        const auto b = half_periods_from_midpoints(midpoints(mod));
        EXPECT_LT(rel(a.omega, b.omega), 1e-13) << k;
        EXPECT_LT(rel(a.omega_prime_imag(), b.omega_prime_imag()), 1e-13) << k;
    }
}

TEST(HalfPeriodsJacobi, Values)
{
    const auto h = half_periods_jacobi_route(0.5);
    EXPECT_LT(rel(h.omega, frozen::omega_p_half), 2e-15);
    EXPECT_LT(rel(h.omega, pi / 2 * frozen::f2_5_32 * 7 / (4 * std::sqrt(2.0))), 2e-15);
    EXPECT_LT(rel(h.omega_prime_imag(), frozen::omega_im_p_half), 2e-15);
    EXPECT_NEAR(half_periods_jacobi_route(1e-7).omega, pi / 2, 1e-6);
    EXPECT_THROW(half_periods_jacobi_route(1.0), sig3::domain_error);
}

TEST(DeltaIntegral, Basics)
{
    const DeltaContext ctx(modulus_from_kappa(0.6));
    EXPECT_EQ(delta_integral(0.0, ctx), 0.0);
    const double quarter = delta_integral(pi / 2, ctx);
    EXPECT_NEAR(quarter, frozen::omega_kappa06, 1e-10);
    EXPECT_NEAR(delta_integral(pi, ctx), 2 * quarter, 1e-12);
    EXPECT_EQ(delta_integral(-0.7, ctx), -delta_integral(0.7, ctx));
    double prev = -1.0;
    for (double T = 0; T < 4; T += 0.25) {
        const double g = delta_integral(T, ctx);
        EXPECT_GT(g, prev);
        prev = g;
    }
}

TEST(DeltaContext, RejectsModulusNearOne)
{
    EXPECT_THROW(DeltaContext(modulus_from_kappa(0.995)), sig3::domain_error);
    EXPECT_NO_THROW(DeltaContext(modulus_from_kappa(0.99)));
}

TEST(Delta, InitialValueEvennessPeriodicity)
{
    const DeltaContext ctx(modulus_from_kappa(0.6));
    EXPECT_EQ(delta(0.0, ctx), 1.0);
    const double omega = delta_integral(pi / 2, ctx);
    EXPECT_NEAR(delta(0.4 + 2 * omega, ctx), delta(0.4, ctx), 1e-9);
    EXPECT_NEAR(delta(-0.4, ctx), delta(0.4, ctx), 1e-14);
    EXPECT_NEAR(delta(omega, ctx), 1.0 / f_half(0.36), 1e-12);
    EXPECT_NEAR(delta(1.3 * omega, ctx), delta(0.7 * omega, ctx), 1e-12);
}

TEST(Delta, InverseOfIntegral)
{
    const DeltaContext ctx(modulus_from_kappa(0.9));
    for (const double u : {0.1, 0.8, 1.9, 4.2}) {
        const auto st = delta_state(u, ctx);
        EXPECT_NEAR(delta_integral(st.T, ctx), u, 1e-12) << u;
    }
}

TEST(Delta, DifferentialEquationResidual)
{
    for (const double k : {0.3, 0.6, 0.9}) {
        const DeltaContext ctx(modulus_from_kappa(k));
        const double l2 = ctx.modulus.lambda * ctx.modulus.lambda;
        for (const double u : {0.2, 0.5, 0.9}) {
            const auto st = delta_state(u, ctx);
            const double d = st.delta;
            const double r = 9 * st.delta_prime * st.delta_prime - 4 * (1 - d) * (d * d * d + 3 * d * d - 4 * l2);
            EXPECT_LE(std::abs(r), 1e-9 * (1 + d * d * d * d)) << k << ' ' << u;
        }
    }
}

TEST(Delta, DerivativeMatchesFiniteDifference)
{
    const DeltaContext ctx(modulus_from_kappa(0.6));
    for (const double u : {0.3, 1.1, 2.5}) {
        const double h = 1e-3;
        const double fd = (delta(u + h, ctx) - delta(u - h, ctx)) / (2 * h);
        EXPECT_NEAR(delta_state(u, ctx).delta_prime, fd, 1e-6) << u;
    }
}

TEST(Dn3, MatchesDeltaOnRealLine)
{
    const auto mod = modulus_from_kappa(0.6);
    const DeltaContext ctx(mod);
    const double omega = half_periods_sig3(mod).omega;
    EXPECT_NEAR(dn3(cplx(0.5, 0), mod).real(), delta(0.5, ctx), 1e-8);
    for (int i = 1; i < 10; ++i) {
        const double u = 0.2 * i * omega;
        const cplx v = dn3(cplx(u, 0), mod);
        EXPECT_NEAR(v.real(), delta(u, ctx), 1e-8) << u;
        EXPECT_NEAR(v.imag(), 0.0, 1e-12);
    }
}

TEST(Dn3, PoleLimitAndPoles)
{
    const auto mod = modulus_from_kappa(0.6);
    EXPECT_NEAR(dn3(cplx(1e-6, 0), mod).real(), 1.0, 1e-11);
    EXPECT_EQ(dn3(cplx(0, 0), mod), cplx(1.0, 0.0));
    const auto hp = half_periods_sig3(mod);
    EXPECT_THROW(dn3(2.0 / 3 * hp.omega_prime, mod), pole_error);
}
