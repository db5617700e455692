#include "outage/errors.hpp"
#include "outage/gilpelaez.hpp"
#include "outage/montecarlo.hpp"
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

CaseBModel experiment_case_b(double theta = 1.0) {
    CaseBModel m;
    m.geom.lambda = 200.0 / (std::numbers::pi * 1e6);
    m.geom.a = 30.0;
    m.geom.R = 150.0;
    m.geom.alpha = 4.0;
    m.geom.window = 1000.0;
    m.theta = theta;
    return m;
}

} // namespace

TEST(Ccdf, Gaussian) {
    const GaussianCgf g(-1.0, 1.0);
    const auto v = ccdf(g, 0.0);
    EXPECT_NEAR(v.q, 0.15865525393145705, 1e-8);
    EXPECT_GT(v.panels, 0);
}

TEST(Ccdf, GaussianAwayFromZero) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-3.0, 3.0), s(0.3, 3.0);
    for (int i = 0; i < 20; ++i) {
        const double mu = u(rng), sd = s(rng), w = u(rng);
        const auto v = ccdf(GaussianCgf(mu, sd * sd), w);
        EXPECT_NEAR(v.q, specfun::normal_cdf((mu - w) / sd), std::max(1e-8, v.err_estimate));
    }
}

TEST(Ccdf, ExponentialPair) {
    for (double theta : {0.5, 1.0, 3.0, 10.0}) {
        const auto v = ccdf(*case_a_cgf(exp_pair(theta)), 0.0);
        EXPECT_NEAR(v.q, theta / (1.0 + theta), std::max(1e-8, v.err_estimate)) << theta;
        EXPECT_GE(v.raw, -1e-9);
        EXPECT_LE(v.raw, 1.0 + 1e-9);
    }
}

TEST(Ccdf, SymmetricCaseAGivesMidpoint) {
    CaseAModel m;
    m.lambda1 = m.lambda2 = 2.0;
    m.fading = FadingModel::gamma(1.5, 1.0);
    m.theta = 1.0;
    const auto k = case_a_cgf(m);
    EXPECT_NEAR(ccdf(*k, 0.0).q, 0.5, 1e-8);
    // strict outage removes half of the atom P(no nodes at all)
    const auto r = outage_gp(*k, 0.0);
    EXPECT_NEAR(r.p_out, 0.5 - 0.5 * std::exp(-4.0), 1e-8);
    ASSERT_FALSE(r.diag.notes.empty());
}

TEST(OutageGp, IndependentOracles) {
    // mpmath Gil-Pelaez values from tests/oracles/compute_oracles.py
    CaseAModel b;
    b.aggregation = CaseAModel::Aggregation::binomial;
    b.L = 10;
    b.p = 0.1;
    b.theta = 0.1;
    EXPECT_NEAR(outage_gp(*case_a_cgf(b), 0.0).p_out, 0.61984029029205518, 1e-8);
    CaseAModel p;
    p.lambda1 = 3.0;
    p.lambda2 = 5.0;
    p.fading = FadingModel::gamma(2.0, 1.0);
    p.theta = 0.5;
    EXPECT_NEAR(outage_gp(*case_a_cgf(p), 0.0).p_out, 0.44846549970316569, 1e-8);
}

TEST(OutageGp, SinrEvaluationPoint) {
    // P(Omega > -theta sigma^2) for a Gaussian Omega
    const GaussianCgf g(-0.4, 0.25);
    const double theta = 2.0, noise = 0.1;
    const auto r = outage_gp(g, -theta * noise);
    EXPECT_NEAR(r.p_out, specfun::normal_cdf((-0.4 + theta * noise) / 0.5), 1e-8);
    EXPECT_EQ(r.method, Method::gil_pelaez);
    EXPECT_GT(r.diag.panels, 0);
}

TEST(OutageGp, RichardsonCheck) {
    const auto k = case_b_cgf(experiment_case_b());
    InversionConfig c1;
    c1.rel_tol = 1e-6;
    InversionConfig c2;
    c2.rel_tol = 5e-7;
    const auto a = ccdf(*k, 0.0, c1), b = ccdf(*k, 0.0, c2);
    EXPECT_LE(std::abs(a.q - b.q), std::max(a.err_estimate, 1e-12));
}

TEST(OutageGp, ConfigValidation) {
    InversionConfig c;
    c.rel_tol = 0.5;
    EXPECT_THROW(ccdf(GaussianCgf(0.0, 1.0), 0.0, c), ArgumentError);
    c.rel_tol = 1e-8;
    c.max_panels = 4;
    EXPECT_THROW(ccdf(GaussianCgf(0.0, 1.0), 0.0, c), ArgumentError);
}

TEST(OutageGp, PanelBudgetExhaustion) {
    InversionConfig c;
    c.rel_tol = 1e-11;
    c.max_panels = 8;
    try {
        ccdf(*case_b_cgf(experiment_case_b()), 0.0, c);
        FAIL() << "expected AccuracyError";
    } catch (const AccuracyError& e) {
        EXPECT_GT(e.err_estimate(), 0.0);
        EXPECT_TRUE(std::isfinite(e.partial()));
    }
}

TEST(OutageGp, CaseBAgreesWithMonteCarlo) {
    const auto m = experiment_case_b();
    const double gp = outage_gp(*case_b_cgf(m), 0.0).p_out;
    SimConfig cfg;
    cfg.trials = 1000000;
    cfg.seed = 77;
    cfg.model = m;
    const auto e = simulate(cfg);
    EXPECT_NEAR(e.p_hat, gp, 4.0 * e.std_err);
}
