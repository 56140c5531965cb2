// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "curve_fixtures.hpp"
#include "lame_spectra/bloch_numerics.hpp"
#include "lame_spectra/volterra.hpp"
#include "oracles.hpp"

using namespace lame_spectra;

namespace {

const cplx tau(0.0, 1.2);

ThetaEvaluator evaluator(cplx eta = 0.17, cplx t = tau)
{
    return ThetaEvaluator(fixtures::standard_params(eta, t));
}

cplx velocity(const ThetaEvaluator& ev)
{
    return ev.theta1(2.0 * ev.eta()) / ev.theta1_prime_zero();
}

PoleConfig shifted(PoleConfig cfg, cplx c)
{
    for (cplx& x : cfg.xs)
        x += c;
    return cfg;
}

const PoleConfig& locus_config_ell2()
{
    static const PoleConfig cfg = [] {
        const auto found = find_locus_config(2, evaluator());
        if (!found)
            throw Error(ErrorKind::non_convergence, "no locus configuration found");
        return found->cfg;
    }();
    return cfg;
}

} // namespace

TEST(CFromPoles, DegenerateConfigurationsReproduceLameCoefficient)
{
    const auto ev = evaluator();
    const cplx eta = ev.eta();
    const auto xs = fixtures::sample_points(10, eta, tau, 4, 61);
    const PoleConfig one = degenerate_config(1, eta);
    ASSERT_EQ(one.xs.size(), 1u);
    EXPECT_EQ(one.xs[0], cplx(0.0));
    const PoleConfig two = degenerate_config(2, eta);
    ASSERT_EQ(two.xs.size(), 3u);
    for (const cplx& x : xs) {
        const cplx c1 = ev.theta1(x + eta) * ev.theta1(x - 2.0 * eta) / (ev.theta1(x) * ev.theta1(x - eta));
        EXPECT_LT(oracle::rel_err(c_from_poles(one, x, ev), c1), 1e-12);
        const cplx c2 = ev.theta1(x + 2.0 * eta) * ev.theta1(x - 3.0 * eta) / (ev.theta1(x) * ev.theta1(x - eta));
        EXPECT_LT(oracle::rel_err(c_from_poles(two, x, ev), c2), 1e-12);
    }
}

TEST(CFromPoles, DoublyPeriodic)
{
    const auto ev = evaluator(cplx(0.17, 0.02), cplx(0.3, 1.4));
    const PoleConfig cfg{{cplx(0.11, 0.05), cplx(-0.27, 0.31), cplx(0.36, -0.22)}, 0.0};
    for (const cplx& x : fixtures::sample_points(10, ev.eta(), ev.tau(), 2, 67)) {
        const cplx c = c_from_poles(cfg, x, ev);
        EXPECT_LT(oracle::rel_err(c_from_poles(cfg, x + 1.0, ev), c), 1e-11);
        EXPECT_LT(oracle::rel_err(c_from_poles(cfg, x + ev.tau(), ev), c), 1e-11);
    }
    EXPECT_THROW(c_from_poles(cfg, cfg.xs[1], ev), Error);
}

TEST(VolterraRhs, ConstantCoefficientAndSignUnderEtaReflection)
{
    const auto ev = evaluator();
    // No poles: c == 1, a fixed point.
    EXPECT_EQ(volterra_rhs_c(PoleConfig{}, cplx(0.3, 0.1), ev), cplx(0.0));

    const auto ev_minus = evaluator(-0.17);
    const PoleConfig cfg{{cplx(0.05, 0.02), cplx(0.31, -0.2)}, 0.0};
    for (const cplx& x : fixtures::sample_points(6, ev.eta(), tau, 3, 71)) {
        const cplx c = c_from_poles(cfg, x, ev);
        const cplx want = -c * (c_from_poles(cfg, x + ev.eta(), ev) - c_from_poles(cfg, x - ev.eta(), ev));
        EXPECT_LT(oracle::rel_err(volterra_rhs_c(cfg, x, ev), want), 1e-13);
        // With c rebuilt for -eta, the +eta formula applied to the new c flips sign.
        const cplx cm = c_from_poles(cfg, x, ev_minus);
        const cplx reflected = -cm * (c_from_poles(cfg, x + ev.eta(), ev_minus) - c_from_poles(cfg, x - ev.eta(), ev_minus));
        EXPECT_LT(oracle::rel_err(volterra_rhs_c(cfg, x, ev_minus), -reflected), 1e-13);
    }
}

TEST(PoleRhs, SinglePoleMovesAtConstantSpeed)
{
    const auto ev = evaluator();
    const auto v = pole_rhs(PoleConfig{{cplx(0.2, 0.1)}, 0.0}, ev);
    ASSERT_EQ(v.first.size(), 1u);
    EXPECT_LT(oracle::rel_err(v.first[0], velocity(ev)), 1e-14);
    EXPECT_LT(oracle::rel_err(v.second[0], velocity(ev)), 1e-14);
    EXPECT_EQ(v.gap, 0.0);
    const auto locus = locus_residual(PoleConfig{{cplx(0.2, 0.1)}, 0.0}, ev);
    EXPECT_EQ(locus.max_norm, 0.0);
    for (const cplx& r : locus.residuals)
        EXPECT_EQ(r, cplx(0.0));
}

TEST(PoleRhs, TranslationCovariance)
{
    const auto ev = evaluator();
    const PoleConfig cfg{{cplx(0.05, 0.02), cplx(0.31, -0.2), cplx(-0.29, 0.35)}, 0.0};
    const auto base = pole_rhs(cfg, ev);
    const auto base_locus = locus_residual(cfg, ev);
    for (cplx c : {cplx(0.13, 0.0), cplx(-0.4, 0.27)}) {
        const auto moved = pole_rhs(shifted(cfg, c), ev);
        const auto moved_locus = locus_residual(shifted(cfg, c), ev);
        for (std::size_t j = 0; j < 3; ++j) {
            EXPECT_LT(std::abs(moved.first[j] - base.first[j]), 1e-12 * std::abs(base.first[j]));
            EXPECT_LT(std::abs(moved.second[j] - base.second[j]), 1e-12 * std::abs(base.second[j]));
            EXPECT_LT(std::abs(moved_locus.residuals[j] - base_locus.residuals[j]), 1e-12);
        }
    }
}

TEST(LocusResidual, DegenerateConfigurationIsOnTheBoundary)
{
    const auto ev = evaluator();
    for (int ell = 2; ell <= 3; ++ell) {
        const PoleConfig cfg = shifted(degenerate_config(ell, ev.eta()), cplx(0.07, 0.03));
        EXPECT_TRUE(is_degenerate_translate(cfg, ev));
        try {
            locus_residual(cfg, ev);
            FAIL() << "degenerate configuration must be rejected";
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::boundary_of_locus);
        }
        EXPECT_LT(pole_margin(cfg, ev).margin, 1e-6);
    }
    // A non-degenerate collision is a plain margin violation.
    const PoleConfig clash{{cplx(0.1, 0.0), cplx(0.1 + 0.17, 0.0), cplx(-0.3, 0.2)}, 0.0};
    EXPECT_FALSE(is_degenerate_translate(clash, ev));
    try {
        pole_rhs(clash, ev);
        FAIL() << "colliding configuration must be rejected";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::margin_violation);
    }
}

TEST(LocusResidual, SmallEtaExpansion)
{
    // log of each factor is 2 eta^3 (log theta_1)''' + O(eta^5) = -2 eta^3 wp'(Delta) + O(eta^5).
    const PoleConfig cfg{{cplx(0.05, 0.02), cplx(0.31, -0.2), cplx(-0.29, 0.35)}, 0.0};
    std::vector<std::vector<cplx>> scaled;
    std::vector<cplx> limit(3, 0.0);
    for (double eta : {1e-2, 1e-3}) {
        const auto ev = evaluator(eta);
        const auto rep = locus_residual(cfg, ev);
        std::vector<cplx> s;
        for (const cplx& r : rep.residuals)
            s.push_back(r / (eta * eta * eta));
        scaled.push_back(s);
    }
    const auto ev = evaluator(1e-3);
    const double h = 1e-4;
    for (std::size_t j = 0; j < 3; ++j) {
        for (std::size_t k = 0; k < 3; ++k) {
            if (k == j)
                continue;
            const cplx d = cfg.xs[j] - cfg.xs[k];
            const cplx dp = (ev.weierstrass_p(d + h) - ev.weierstrass_p(d - h)) / (2.0 * h);
            limit[j] += -2.0 * dp;
        }
    }
    for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_GT(std::abs(limit[j]), 1e-3);
        const double err_coarse = std::abs(scaled[0][j] - limit[j]);
        const double err_fine = std::abs(scaled[1][j] - limit[j]);
        EXPECT_LT(err_fine, err_coarse);
        EXPECT_LT(err_fine, 1e-3 * std::abs(limit[j]));
    }
}

TEST(IntegrateFlow, SinglePoleIsExactTranslation)
{
    const auto ev = evaluator();
    const PoleConfig cfg0{{cplx(0.2, 0.1)}, 0.0};
    const auto traj = integrate_flow(cfg0, 0.35, 0.01, ev);
    ASSERT_FALSE(traj.samples.empty());
    const auto& last = traj.samples.back();
    EXPECT_DOUBLE_EQ(last.t, 0.35);
    EXPECT_LT(std::abs(last.xs[0] - (cfg0.xs[0] + 0.35 * velocity(ev))), 1e-13);
    EXPECT_FALSE(traj.halted);
}

TEST(IntegrateFlow, TimeReversal)
{
    const auto ev = evaluator();
    const PoleConfig& cfg0 = locus_config_ell2();
    const double dt = 0.01;
    const double t = 0.2;
    const auto fwd = integrate_flow(cfg0, t, dt, ev);
    const PoleConfig mid{fwd.samples.back().xs, fwd.samples.back().t};
    const auto back = integrate_flow(mid, 0.0, dt, ev);
    for (std::size_t j = 0; j < cfg0.xs.size(); ++j)
        EXPECT_LT(std::abs(back.samples.back().xs[j] - cfg0.xs[j]), 10.0 * std::pow(dt, 4) * t);
}

TEST(IntegrateFlow, LocusIsPreserved)
{
    const auto ev = evaluator();
    const PoleConfig& cfg0 = locus_config_ell2();
    EXPECT_LT(locus_residual(cfg0, ev).max_norm, 1e-12);
    const FlowOptions opts;
    const auto traj = integrate_flow(cfg0, 0.3, 0.01, ev, opts);
    EXPECT_FALSE(traj.halted);
    for (const auto& s : traj.samples) {
        EXPECT_LT(s.gap, 100.0 * opts.tol_locus);
        EXPECT_GT(s.margin, opts.margin.tol_margin);
    }
}

TEST(IntegrateFlow, RejectsOffLocusStartAndReportsHalts)
{
    const auto ev = evaluator();
    const PoleConfig off{{cplx(0.05, 0.02), cplx(0.31, -0.2), cplx(-0.29, 0.35)}, 0.0};
    try {
        integrate_flow(off, 0.1, 0.01, ev);
        FAIL() << "off-locus start must be rejected";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::off_locus);
    }
    FlowOptions quiet;
    quiet.throw_on_halt = false;
    const auto traj = integrate_flow(off, 0.1, 0.01, ev, quiet);
    EXPECT_TRUE(traj.halted);
    EXPECT_EQ(traj.halt_kind, ErrorKind::off_locus);

    // Degenerate starts are refused before any step.
    try {
        integrate_flow(degenerate_config(2, ev.eta()), 0.1, 0.01, ev);
        FAIL() << "degenerate start must be rejected";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::boundary_of_locus);
    }
}

TEST(IntegrateFlow, CoefficientFollowsVolterraEquation)
{
    // d/dt c(x) along the single-pole flow equals -c(x)(c(x+eta) - c(x-eta)).
    const auto ev = evaluator();
    const PoleConfig cfg0{{cplx(0.2, 0.1)}, 0.0};
    const cplx x(0.43, -0.12);
    std::vector<double> errs;
    for (double dt : {1e-3, 5e-4}) {
        const auto traj = integrate_flow(cfg0, dt, dt, ev);
        const PoleConfig later{traj.samples.back().xs, dt};
        const cplx deriv = (c_from_poles(later, x, ev) - c_from_poles(cfg0, x, ev)) / dt;
        errs.push_back(std::abs(deriv - volterra_rhs_c(cfg0, x, ev)));
    }
    EXPECT_LT(errs[1], 0.6 * errs[0]);
    EXPECT_LT(errs[1], 1e-2 * std::abs(volterra_rhs_c(cfg0, x, ev)));
}

TEST(IntegrateFlow, SinglePoleFlowIsIsospectral)
{
    const RationalEta re{1, 31};
    const ThetaEvaluator ev(EllipticParams{tau, re.value(), 1e-14});
    const PoleConfig cfg0{{cplx(0.0, 0.0)}, 0.0};
    const auto traj = integrate_flow(cfg0, 0.3, 0.01, ev);
    const PoleConfig cfg1{traj.samples.back().xs, 0.3};
    auto edges_of = [&](const PoleConfig& cfg) {
        const LatticeOperator op{[](cplx) { return cplx(1.0); }, [&ev, cfg](cplx x) { return c_from_poles(cfg, x, ev); }};
        return numeric_band_edges(op, re, default_x0, NumericEdgeOptions{}).confident_values();
    };
    const auto e0 = edges_of(cfg0);
    const auto e1 = edges_of(cfg1);
    ASSERT_EQ(e0.size(), 6u);
    ASSERT_EQ(e1.size(), 6u);
    EXPECT_LT(hausdorff_distance(e0, e1), 1e-6);
}

TEST(FindLocusConfig, FindsMarginSafeSolution)
{
    const auto ev = evaluator();
    const auto found = find_locus_config(2, ev);
    ASSERT_TRUE(found.has_value());
    EXPECT_EQ(found->cfg.xs.size(), 3u);
    EXPECT_LT(found->residual, 1e-13);
    EXPECT_FALSE(is_degenerate_translate(found->cfg, ev));
    EXPECT_GT(pole_margin(found->cfg, ev).margin, 1e-6);
    EXPECT_LT(pole_rhs(found->cfg, ev).gap, 1e-8);
    EXPECT_THROW(find_locus_config(1, ev), Error);
}
