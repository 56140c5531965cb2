// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "curve_fixtures.hpp"
#include "lame_spectra/curve.hpp"
#include "lame_spectra/lame.hpp"
#include "oracles.hpp"

using namespace lame_spectra;

namespace {

const cplx tau(0.0, 1.2);

double scaled_eigen_residual(const ComplexFn& psi, cplx x, cplx E, const LameContext& ctx)
{
    const cplx lhs = apply_Ltilde(psi, x, ctx);
    const double scale = std::max({1.0, std::abs(psi(x + ctx.eta())),
                                   std::abs(ltilde_coefficient(x, ctx) * psi(x - ctx.eta())), std::abs(E * psi(x))});
    return std::abs(lhs - E * psi(x)) / scale;
}

} // namespace

TEST(LameContext, SizesAndValidation)
{
    const LameContext ctx(3, fixtures::standard_params());
    EXPECT_EQ(ctx.N(), 6);
    EXPECT_EQ(ctx.numbers().max_index(), 14);
    EXPECT_THROW(LameContext(-1, fixtures::standard_params()), Error);
    EXPECT_THROW(LameContext(2, fixtures::standard_params(0.25)), Error); // [4] = 0
}

TEST(Phi, MonodromyAndResidue)
{
    const ThetaEvaluator ev(fixtures::standard_params());
    const cplx zeta(0.23, 0.11);
    const cplx x(0.37, -0.2);
    EXPECT_LT(oracle::rel_err(phi(x + 1.0, zeta, ev), phi(x, zeta, ev)), 1e-13);
    EXPECT_LT(oracle::rel_err(phi(x + tau, zeta, ev), std::exp(-2.0 * pi * I * zeta) * phi(x, zeta, ev)), 1e-12);
    double previous = 1e300;
    for (double t : {1e-3, 1e-4, 1e-5, 1e-6}) {
        const cplx xt = t * std::exp(I * 0.7);
        const double err = std::abs(xt * phi(xt, zeta, ev) - 1.0 / ev.theta1_prime_zero());
        EXPECT_LT(err, previous);
        previous = err;
    }
    EXPECT_LT(previous, 1e-5);
    EXPECT_THROW(phi(0.0, zeta, ev), Error);
}

TEST(ApplyL, FreeCase)
{
    const LameContext ctx(0, fixtures::standard_params());
    const cplx K(1.3, 0.4);
    const ComplexFn Psi = [&](cplx x) { return std::exp(x / ctx.eta() * std::log(K)); };
    const cplx x(0.21, 0.09);
    EXPECT_LT(oracle::rel_err(apply_L(Psi, x, ctx), (K + 1.0 / K) * Psi(x)), 1e-13);
}

TEST(ApplyLtilde, GaugeEquivalence)
{
    for (int ell = 1; ell <= 3; ++ell) {
        const LameContext ctx(ell, fixtures::standard_params(cplx(0.13, 0.02)));
        const ComplexFn Psi = [](cplx x) { return std::exp(std::sin(2.0 * pi * x)) + x * x; };
        const ComplexFn psi = [&](cplx x) { return Psi(x) / gauge_factor(x, ctx); };
        for (const cplx& x : fixtures::sample_points(10, ctx.eta(), tau, 2 * ell + 2, 5)) {
            const cplx lhs = apply_Ltilde(psi, x, ctx) * gauge_factor(x, ctx);
            EXPECT_LT(oracle::rel_err(lhs, apply_L(Psi, x, ctx)), 1e-11);
        }
    }
}

TEST(ApplyLtilde, CoefficientZeroAtMinusEllEta)
{
    const LameContext ctx(1, fixtures::standard_params());
    EXPECT_LT(std::abs(ltilde_coefficient(-ctx.eta(), ctx)), 1e-14);
    EXPECT_THROW(ltilde_coefficient(ctx.eta(), ctx), Error);
}

TEST(ApplyLtilde, ContinuumLimitIsFirstOrder)
{
    // (2u - L~u)/eta^2 with the coefficient shifted by tau/2 tends to
    // -u'' + ell(ell+1) p(x + tau/2) u with p = -(log theta_1)''.
    for (int ell = 1; ell <= 2; ++ell) {
        std::vector<double> errors;
        for (double eta : {1e-2, 1e-3}) {
            const LameContext ctx(ell, EllipticParams{tau, eta, 1e-14});
            const ComplexFn u = [](cplx x) { return std::exp(2.0 * pi * I * x); };
            double worst = 0.0;
            for (double x : {0.1, 0.27, 0.43, 0.61}) {
                const cplx lhs = (2.0 * u(x) - apply_Ltilde_shifted(u, x, tau / 2.0, ctx)) / (eta * eta);
                const cplx rhs = 4.0 * pi * pi * u(x) +
                                 double(ell * (ell + 1)) * ctx.theta().weierstrass_p(x + tau / 2.0) * u(x);
                worst = std::max(worst, std::abs(lhs - rhs));
            }
            errors.push_back(worst);
        }
        EXPECT_GT(errors[0] / errors[1], 5.0);
        EXPECT_LT(errors[0] / errors[1], 20.0);
    }
}

TEST(BuildM, ShapeAndBandStructure)
{
    for (int ell = 1; ell <= 4; ++ell) {
        const LameContext ctx(ell, fixtures::standard_params());
        const CurvePoint pt{cplx(0.3, 0.1), cplx(1.2, -0.3), cplx(0.4, 0.2)};
        const auto m = build_M(pt, ctx);
        ASSERT_EQ(m.rows(), ell + 1);
        ASSERT_EQ(m.cols(), ell);
        for (int i = 2; i <= ell; ++i)
            for (int j = 1; j <= ell; ++j)
                if (std::abs(i - j) > 1) {
                    EXPECT_EQ(m(i, j - 1), cplx(0.0)) << i << "," << j;
                }
    }
}

TEST(BuildM, DerivativesMatchFiniteDifferences)
{
    const LameContext ctx(3, fixtures::standard_params());
    const CurvePoint pt{cplx(0.3, 0.1), cplx(1.2, -0.3), cplx(0.4, 0.2)};
    const double h = 1e-6;
    for (auto v : {CurveVariable::zeta, CurveVariable::K, CurveVariable::E}) {
        CurvePoint p = pt, q = pt;
        cplx& pv = v == CurveVariable::zeta ? p.zeta : (v == CurveVariable::K ? p.K : p.E);
        cplx& qv = v == CurveVariable::zeta ? q.zeta : (v == CurveVariable::K ? q.K : q.E);
        pv += h;
        qv -= h;
        const Eigen::MatrixXcd fd = (build_M(p, ctx) - build_M(q, ctx)) / (2.0 * h);
        EXPECT_LT((build_M_derivative(pt, ctx, v) - fd).norm(), 1e-7);
    }
}

TEST(BuildM, EllOneMatchesCurveEquations)
{
    // det M^(0) = -[2] first / theta_1(zeta) and det M^(1) = -K second / theta_1(zeta).
    const LameContext ctx(1, fixtures::standard_params());
    std::mt19937_64 rng(19);
    for (int i = 0; i < 10; ++i) {
        const CurvePoint pt{oracle::random_point(rng, -0.4, 0.4, -0.4, 0.4),
                            oracle::random_point(rng, 0.5, 1.5, -0.5, 0.5),
                            oracle::random_point(rng, -2.0, 2.0, -1.0, 1.0)};
        const auto r = residual(pt, ctx);
        const auto ce = curve_equations(pt, ctx);
        const cplx t = ctx.theta().theta1(pt.zeta);
        EXPECT_LT(oracle::rel_err(r.det0, -ctx.numbers().bracket(2) * ce.first / t), 1e-12);
        EXPECT_LT(oracle::rel_err(r.det1, -pt.K * ce.second / t), 1e-12);
    }
}

class OnCurve : public ::testing::TestWithParam<int> {};

TEST_P(OnCurve, NullVectorAndEigenfunction)
{
    const int ell = GetParam();
    const LameContext ctx(ell, fixtures::standard_params());
    const auto points = fixtures::on_curve_points(ctx, 4);
    ASSERT_GE(points.size(), 2u);
    for (const auto& pt : points) {
        const auto coeffs = solve_bloch_coeffs(pt, ctx);
        ASSERT_EQ(static_cast<int>(coeffs.s.size()), ell);
        const Eigen::MatrixXcd m = build_M(pt, ctx);
        const Eigen::VectorXcd s = Eigen::Map<const Eigen::VectorXcd>(coeffs.s.data(), ell);
        EXPECT_LT((m * s).norm(), 1e-8 * build_M_magnitude(pt, ctx).norm());
        if (ell == 1) {
            EXPECT_EQ(coeffs.s[0], cplx(1.0));
        } else {
            EXPECT_GT(coeffs.sigma_next_rel, 1e-6);
        }

        const ComplexFn psi = [&](cplx x) { return build_psi(pt, coeffs, x, ctx); };
        const ComplexFn Psi = [&](cplx x) { return build_Psi(pt, coeffs, x, ctx); };
        const auto xs = fixtures::sample_points(20, ctx.eta(), tau, ell + 2, 101);
        const auto mult = bloch_multipliers(pt, ctx);
        for (const cplx& x : xs) {
            EXPECT_LT(scaled_eigen_residual(psi, x, pt.E, ctx), 1e-9);
            EXPECT_LT(oracle::rel_err(psi(x + 1.0), mult.B1 * psi(x)), 1e-9);
            EXPECT_LT(oracle::rel_err(psi(x + tau), mult.Btau * psi(x)), 1e-9);
            EXPECT_LT(oracle::rel_err(Psi(x), psi(x) * gauge_factor(x, ctx)), 1e-10);
            EXPECT_LT(oracle::rel_err(apply_L(Psi, x, ctx), pt.E * Psi(x)), 1e-9);
        }
        double psi_scale = 0.0;
        for (const cplx& x : xs)
            psi_scale = std::max(psi_scale, std::abs(Psi(x)));
        for (int j = 1; j <= ell; ++j) {
            const cplx x = double(j) * ctx.eta();
            EXPECT_LT(std::abs(Psi(x) - Psi(-x)), 1e-9 * psi_scale) << "j=" << j;
            // Psi is continuous across the poles of psi.
            const double d = 1e-4;
            EXPECT_LT(std::abs(Psi(x + d) - Psi(x - d)), 1e-2 * psi_scale);
            EXPECT_TRUE(std::isfinite(std::abs(Psi(x))));
        }
    }
}

TEST_P(OnCurve, CurveSymmetriesPreserveVanishing)
{
    const int ell = GetParam();
    const LameContext ctx(ell, fixtures::standard_params());
    for (const auto& pt : fixtures::on_curve_points(ctx, 3)) {
        EXPECT_LT(residual(pt, ctx).scaled_max(), 1e-9);
        EXPECT_LT(residual(shift_by_tau(pt, ctx), ctx).scaled_max(), 1e-9);
        EXPECT_LT(residual(reflect(pt), ctx).scaled_max(), 1e-9);
        EXPECT_LT(residual(involution(pt, ctx), ctx).scaled_max(), 1e-9);
    }
    // A generic off-curve point stays off under the maps.
    const CurvePoint off{cplx(0.3, 0.1), cplx(1.2, -0.3), cplx(0.4, 0.2)};
    EXPECT_GT(residual(off, ctx).scaled_max(), 1e-4);
    EXPECT_GT(residual(shift_by_tau(off, ctx), ctx).scaled_max(), 1e-4);
    EXPECT_GT(residual(reflect(off), ctx).scaled_max(), 1e-4);
}

INSTANTIATE_TEST_SUITE_P(Ells, OnCurve, ::testing::Values(1, 2, 3));

TEST(SolveBlochCoeffs, RejectsOffCurvePoint)
{
    const LameContext ctx(2, fixtures::standard_params());
    try {
        solve_bloch_coeffs({cplx(0.3, 0.1), cplx(1.2, -0.3), cplx(0.4, 0.2)}, ctx);
        FAIL() << "off-curve point accepted";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::not_on_curve);
    }
}

TEST(WOperator, JointEigenfunctionAndInvolution)
{
    for (int ell = 1; ell <= 2; ++ell) {
        const LameContext ctx(ell, fixtures::standard_params());
        const auto edges = band_edges(ctx).values();
        for (const auto& pt : fixtures::on_curve_points(ctx, 5)) {
            const auto coeffs = solve_bloch_coeffs(pt, ctx);
            const auto w = w_eigenvalue(pt, coeffs, ctx);
            EXPECT_LT(w.spread, 1e-7 * w.scale);
            const CurvePoint sigma = involution(pt, ctx);
            const auto w_sigma = w_eigenvalue(sigma, solve_bloch_coeffs(sigma, ctx), ctx);
            EXPECT_LT(std::abs(w.w + w_sigma.w), 1e-7 * std::max(1.0, std::abs(w.w)));
            cplx product{1.0};
            for (const cplx& e : edges)
                product *= pt.E * pt.E - e * e;
            EXPECT_LT(oracle::rel_err(w.w * w.w, product), 1e-6);
        }
    }
}

TEST(WOperator, VanishesAtBranchPoints)
{
    const LameContext ctx(1, fixtures::standard_params());
    const auto be = band_edges(ctx);
    for (int a = 2; a <= 4; ++a) {
        const CurvePoint pt = edge_curve_point(a, be.label(a).front().value, ctx);
        const auto coeffs = solve_bloch_coeffs(pt, ctx);
        const auto w = w_eigenvalue(pt, coeffs, ctx);
        EXPECT_LT(std::abs(w.w), 1e-6 * w.scale) << "label " << a;
    }
}

TEST(WOperator, RejectsNonEigenfunction)
{
    const LameContext ctx(1, fixtures::standard_params());
    const CurvePoint off{cplx(0.3, 0.1), cplx(1.2, -0.3), cplx(0.4, 0.2)};
    const BlochCoeffs fake{{1.0}, 1.0, 1.0};
    EXPECT_THROW(w_eigenvalue(off, fake, ctx), Error);
}

TEST(Halton, RadicalInverse)
{
    EXPECT_DOUBLE_EQ(halton(1, 2), 0.5);
    EXPECT_DOUBLE_EQ(halton(2, 2), 0.25);
    EXPECT_DOUBLE_EQ(halton(3, 2), 0.75);
    EXPECT_NEAR(halton(1, 3), 1.0 / 3.0, 1e-16);
    EXPECT_NEAR(halton(4, 3), 1.0 / 9.0 + 1.0 / 3.0, 1e-16);
}
