// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "lame_spectra/polynomial.hpp"
#include "oracles.hpp"

using namespace lame_spectra;

TEST(EPoly, DegreeTrimAndZero)
{
    EXPECT_TRUE(EPoly().is_zero());
    EXPECT_EQ(EPoly().degree(), 0);
    const EPoly p({1.0, 2.0, 0.0, 1e-20});
    EXPECT_EQ(p.degree(), 3);
    EXPECT_EQ(p.trimmed(1e-12).degree(), 1);
    EXPECT_EQ(EPoly::monomial(3, 2.0).coeff(3), cplx(2.0));
    EXPECT_EQ(EPoly::monomial(3).coeff(7), cplx(0.0));
}

TEST(EPoly, ArithmeticAndEvaluation)
{
    const EPoly p({1.0, cplx(0.0, 2.0), -3.0});
    const EPoly q({0.5, 1.0});
    const cplx e(0.3, -0.7);
    EXPECT_LT(std::abs((p + q)(e) - (p(e) + q(e))), 1e-15);
    EXPECT_LT(std::abs((p * cplx(2.0, 1.0))(e) - cplx(2.0, 1.0) * p(e)), 1e-15);
    EXPECT_LT(std::abs(p.times_E()(e) - e * p(e)), 1e-15);
    EXPECT_LT(std::abs(p.derivative()(e) - (cplx(0.0, 2.0) - 6.0 * e)), 1e-15);
    EXPECT_NEAR(p.abs_eval(e), 1.0 + 2.0 * std::abs(e) + 3.0 * std::norm(e), 1e-15);
    EXPECT_NEAR(p.max_abs_coeff(), 3.0, 0.0);
}

TEST(EPoly, RootsOfProductForm)
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 1 + trial % 6;
        std::vector<cplx> want;
        EPoly p = EPoly::constant(cplx(1.5, -0.5));
        for (int i = 0; i < n; ++i) {
            want.push_back(oracle::random_point(rng, -2.0, 2.0, -2.0, 2.0));
            p = p.times_E() + p * (-want.back());
        }
        auto got = p.roots();
        ASSERT_EQ(static_cast<int>(got.size()), n);
        for (const cplx& w : want) {
            double best = 1e300;
            for (const cplx& g : got)
                best = std::min(best, std::abs(g - w));
            EXPECT_LT(best, 1e-10);
        }
    }
}

TEST(EPoly, ConstantHasNoRoots)
{
    EXPECT_TRUE(EPoly::constant(3.0).roots().empty());
    EXPECT_TRUE(EPoly().roots().empty());
}
