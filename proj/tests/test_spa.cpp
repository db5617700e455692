#include "outage/errors.hpp"
#include "outage/gilpelaez.hpp"
#include "outage/quadrature.hpp"
#include "outage/spa.hpp"
#include "outage/specfun.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace outage;

namespace {

CaseAModel exp_pair(double theta) {
    CaseAModel m;
    m.aggregation = CaseAModel::Aggregation::single;
    m.fading = FadingModel::gamma(1.0, 1.0);
    m.theta = theta;
    return m;
}

CaseAModel poisson(double l1, double l2, double shape, double theta) {
    CaseAModel m;
    m.lambda1 = l1;
    m.lambda2 = l2;
    m.fading = FadingModel::gamma(shape, 1.0);
    m.theta = theta;
    return m;
}

CaseAModel binomial(int L, double p, double shape, double theta) {
    CaseAModel m;
    m.aggregation = CaseAModel::Aggregation::binomial;
    m.L = L;
    m.p = p;
    m.fading = FadingModel::gamma(shape, 1.0);
    m.theta = theta;
    return m;
}

} // namespace

TEST(Saddle, Gaussian) {
    const GaussianCgf g(-1.0, 1.0);
    const auto ctx = solve_saddle(g, 0.0);
    EXPECT_NEAR(ctx.s_hat, 1.0, 1e-14);
    EXPECT_NEAR(ctx.c, 0.5, 1e-14);
    EXPECT_NEAR(ctx.k2, 1.0, 1e-15);
    EXPECT_EQ(ctx.k3, 0.0);
}

TEST(Saddle, CaseAForwardConvention) {
    // Laplace saddle 1/6 maps to forward saddle -1/6
    const auto k = case_a_cgf(poisson(1.0, 1.0, 1.0, 4.0));
    const auto ctx = solve_saddle(*k, 0.0);
    EXPECT_NEAR(ctx.s_hat, -1.0 / 6.0, 1e-12);
    EXPECT_GE(ctx.c, 0.0);
}

TEST(Saddle, AtTheMean) {
    const auto k = case_a_cgf(poisson(2.0, 3.0, 1.5, 0.7));
    const double mean = -k->deriv(1, 0.0);
    const auto ctx = solve_saddle(*k, mean);
    EXPECT_NEAR(ctx.s_hat, 0.0, 1e-12);
    EXPECT_NEAR(ctx.c, 0.0, 1e-14);
}

TEST(Saddle, ResidualAndRange) {
    const auto k = case_a_cgf(binomial(10, 0.3, 2.0, 0.5));
    const double sd = std::sqrt(k->deriv(2, 0.0)), mean = -k->deriv(1, 0.0);
    for (double z = -3.0; z <= 3.0; z += 0.25) {
        const double w = mean + z * sd;
        const auto ctx = solve_saddle(*k, w);
        EXPECT_LE(std::abs(ctx.residual), 1e-10 * std::max(std::abs(w), sd));
    }
    // far tail: the saddle approaches the strip edge but stays inside
    const auto single = case_a_cgf(exp_pair(3.0));
    EXPECT_NO_THROW(solve_saddle(*single, 50.0));
}

TEST(Wbb, GaussianExactness) {
    std::mt19937_64 g(21);
    std::uniform_real_distribution<double> u(-5.0, 5.0), v(0.1, 9.0);
    for (int i = 0; i < 40; ++i) {
        const double mu = u(g), var = v(g), w = u(g);
        const GaussianCgf k(mu, var);
        const auto ctx = solve_saddle(k, w);
        const double F = wbb_cdf(ctx, base_params(ctx, BaseKind::normal));
        EXPECT_NEAR(F, specfun::normal_cdf((w - mu) / std::sqrt(var)), 1e-12);
    }
    const GaussianCgf k(-1.0, 1.0);
    const auto ctx = solve_saddle(k, 0.0);
    EXPECT_NEAR(wbb_cdf(ctx, base_params(ctx, BaseKind::normal)), 0.8413447460685429, 1e-12);
}

TEST(Wbb, MeanLimitValue) {
    const auto k = case_a_cgf(poisson(2.0, 3.0, 1.5, 0.7));
    const double mean = -k->deriv(1, 0.0);
    const auto ctx = solve_saddle(*k, mean);
    const double want = 0.5 + ctx.k3 / (6.0 * std::sqrt(2.0 * std::numbers::pi) * std::pow(ctx.k2, 1.5));
    EXPECT_NEAR(wbb_cdf(ctx, base_params(ctx, BaseKind::normal)), want, 1e-12);
    const GaussianCgf gk(0.3, 2.0);
    const auto gc = solve_saddle(gk, 0.3);
    EXPECT_NEAR(wbb_cdf(gc, base_params(gc, BaseKind::normal)), 0.5, 1e-14);
}

TEST(OutageSpa, ExponentialPair) {
    for (double theta : {0.5, 1.0, 3.0, 10.0}) {
        const auto r = outage_spa(*case_a_cgf(exp_pair(theta)), 0.0, BaseKind::normal);
        EXPECT_NEAR(r.p_out, theta / (1.0 + theta), 5e-3) << theta;
        EXPECT_EQ(r.method, Method::spa_normal);
        EXPECT_TRUE(r.diag.saddle.has_value());
    }
}

TEST(OutageSpa, SymmetricCaseA) {
    const auto k = case_a_cgf(poisson(2.0, 2.0, 1.7, 1.0));
    EXPECT_NEAR(outage_spa(*k, 0.0, BaseKind::normal).p_out, 0.5, 5e-3);
}

TEST(OutageSpa, BinomialAgreesWithGilPelaez) {
    const auto k = case_a_cgf(binomial(20, 0.1, 1.0, 0.1));
    const double spa = outage_spa(*k, 0.0, BaseKind::normal).p_out;
    const double gp = outage_gp(*k, 0.0).p_out;
    EXPECT_NEAR(spa, gp, 0.01);
}

TEST(OutageSpa, LugannaniRiceMatchesIndependentOracle) {
    // L = 10 binomial, mpmath saddle point value from tests/oracles/compute_oracles.py
    const auto k = case_a_cgf(binomial(10, 0.1, 1.0, 0.1));
    EXPECT_NEAR(outage_spa(*k, 0.0, BaseKind::normal).p_out, 0.60117231405219841, 1e-9);
}

TEST(OutageSpa, TailOrientation) {
    for (const auto& m : {poisson(3.0, 5.0, 2.0, 0.5), binomial(6, 0.6, 2.0, 1.0)}) {
        const auto k = case_a_cgf(m);
        const double mean = -k->deriv(1, 0.0), sd = std::sqrt(k->deriv(2, 0.0));
        for (BaseKind b : {BaseKind::normal, BaseKind::chi_square, BaseKind::inverse_gaussian, BaseKind::nig}) {
            double prev = -1.0;
            for (int i = 0; i < 50; ++i) {
                const double w = mean + (-4.0 + 8.0 * i / 49.0) * sd;
                const double F = 1.0 - outage_spa(*k, w, b).p_out;
                EXPECT_GE(F, prev - 1e-6) << to_string(b) << " w=" << w;
                prev = F;
            }
        }
    }
}

TEST(OutageSpa, NearMeanContinuity) {
    const auto k = case_a_cgf(poisson(3.0, 5.0, 2.0, 0.5));
    const double mean = -k->deriv(1, 0.0), sd = std::sqrt(k->deriv(2, 0.0));
    const double f0 = outage_spa(*k, mean, BaseKind::normal).p_out;
    EXPECT_LE(std::abs(outage_spa(*k, mean + 1e-6 * sd, BaseKind::normal).p_out - f0), 1e-4);
    EXPECT_LE(std::abs(outage_spa(*k, mean - 1e-6 * sd, BaseKind::normal).p_out - f0), 1e-4);
    // just outside the patch the plain formula takes over without a jump
    EXPECT_LE(std::abs(outage_spa(*k, mean + 3e-3 * sd, BaseKind::normal).p_out - f0), 2e-3);
}

TEST(BaseParams, NormalAndGaussianLimit) {
    const GaussianCgf g(0.0, 1.0);
    const auto ctx = solve_saddle(g, 0.7);
    const auto b = base_params(ctx, BaseKind::normal);
    EXPECT_EQ(b.kind, BaseKind::normal);
    EXPECT_NEAR(b.z_hat, 0.7, 1e-14);
    EXPECT_THROW(base_params(ctx, BaseKind::chi_square), CapabilityError);
    EXPECT_THROW(base_params(ctx, BaseKind::inverse_gaussian), CapabilityError);
    // the outage routine falls back and says so
    const auto r = outage_spa(g, 0.7, BaseKind::chi_square);
    EXPECT_EQ(r.diag.base, "normal");
    ASSERT_FALSE(r.diag.notes.empty());
    EXPECT_NE(r.diag.notes.front().find("fallback"), std::string::npos);
    EXPECT_NEAR(r.p_out, 1.0 - specfun::normal_cdf(0.7), 1e-12);
}

TEST(BaseParams, NigSelfConsistency) {
    CaseCModel m;
    m.geom.lambda = 200.0 / (std::numbers::pi * 1e6);
    m.geom.a = 30.0;
    m.geom.R = 150.0;
    m.geom.alpha = 4.0;
    m.geom.window = 1000.0;
    m.theta = 1.0;
    m.fading = FadingModel::gamma(1.0, 1.0);
    int valid = 0;
    for (const auto& k : {case_a_cgf(binomial(6, 0.6, 2.0, 1.0)), case_c_cgf(m)}) {
        const double mean = -k->deriv(1, 0.0), sd = std::sqrt(k->deriv(2, 0.0));
        for (double z : {-1.5, -0.5, 0.5, 1.0, 2.0}) {
            const auto ctx = solve_saddle(*k, mean + z * sd);
            BaseDistribution b;
            try {
                b = base_params(ctx, BaseKind::nig);
            } catch (const Error&) {
                const auto r = outage_spa(*k, mean + z * sd, BaseKind::nig);
                EXPECT_EQ(r.diag.base, "normal");
                ASSERT_FALSE(r.diag.notes.empty());
                EXPECT_EQ(r.diag.notes[0].rfind("fallback to normal base: ", 0), 0u);
                continue;
            }
            ++valid;
            ASSERT_EQ(b.kind, BaseKind::nig);
            EXPECT_LT(std::abs(b.beta), b.alpha);
            const double q = b.alpha * b.alpha - (b.beta + b.s_breve) * (b.beta + b.s_breve);
            ASSERT_GT(q, 0.0);
            EXPECT_NEAR((b.beta + b.s_breve) / std::sqrt(q), b.z_hat, 1e-10 * std::max(1.0, std::abs(b.z_hat)));
            const double L2 = b.alpha * b.alpha / std::pow(q, 1.5);
            EXPECT_GT(L2, 0.0);
            EXPECT_NEAR(L2, b.L2, 1e-10 * L2);
            // base Legendre-Fenchel value equals the target's
            const double L = std::sqrt(b.alpha * b.alpha - b.beta * b.beta) - std::sqrt(q);
            EXPECT_NEAR(b.s_breve * b.z_hat - L, ctx.c, 1e-10 * std::max(1.0, ctx.c));
        }
    }
    EXPECT_GE(valid, 5);
}

TEST(BaseParams, ChiSquareBranchSelection) {
    const auto k = case_a_cgf(poisson(3.0, 5.0, 2.0, 0.5));
    const double mean = -k->deriv(1, 0.0), sd = std::sqrt(k->deriv(2, 0.0));
    for (double z : {-1.0, 1.0}) {
        const auto ctx = solve_saddle(*k, mean + z * sd);
        auto b = base_params(ctx, BaseKind::chi_square);
        const double s = b.reflected ? -ctx.s_hat : ctx.s_hat;
        // below the base mean alpha for negative saddles, above for positive
        if (s < 0.0) EXPECT_LT(b.z_hat, b.alpha); else EXPECT_GT(b.z_hat, b.alpha);
    }
}

TEST(BaseAgreement, MildlySkewedCaseA) {
    const auto k = case_a_cgf(poisson(3.0, 5.0, 2.0, 0.5));
    const double gp = outage_gp(*k, 0.0).p_out;
    std::vector<double> v;
    for (BaseKind b : {BaseKind::normal, BaseKind::chi_square, BaseKind::inverse_gaussian, BaseKind::nig}) {
        v.push_back(outage_spa(*k, 0.0, b).p_out);
        EXPECT_NEAR(v.back(), gp, 0.02) << to_string(b);
    }
    for (double a : v)
        for (double b : v) EXPECT_LE(std::abs(a - b), 0.02);
}

TEST(Nig, DensityAndDistribution) {
    const double a = 2.3, b = -0.8;
    auto f = [&](double x) { return nig_pdf(x, a, b); };
    const double total = quad::integrate(f, -60.0, 60.0, {0.0, 1e-12, 4000, 60}).value;
    EXPECT_NEAR(total, 1.0, 1e-10);
    for (double x : {-2.0, 0.0, 0.4, 3.0}) {
        const double want = quad::integrate(f, -60.0, x, {0.0, 1e-12, 4000, 60}).value;
        EXPECT_NEAR(nig_cdf(x, a, b), want, 1e-9);
    }
    EXPECT_THROW(nig_cdf(0.0, 1.0, 1.5), DomainError);
}
