#include "outage/cumulants.hpp"
#include "outage/errors.hpp"
#include "outage/montecarlo.hpp"

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

CaseBModel experiment_case_b(double window = 1000.0) {
    CaseBModel m;
    m.geom.lambda = 200.0 / (std::numbers::pi * 1e6);
    m.geom.a = 30.0;
    m.geom.R = 150.0;
    m.geom.alpha = 4.0;
    m.geom.window = window;
    m.theta = 1.0;
    return m;
}

} // namespace

TEST(SplitMix, ReferenceOutput) {
    EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
    EXPECT_NE(splitmix64(1), splitmix64(2));
}

TEST(Simulate, SymmetricCaseA) {
    CaseAModel m;
    m.lambda1 = m.lambda2 = 5.0;
    m.fading = FadingModel::gamma(2.0, 1.0);
    SimConfig cfg;
    cfg.seed = 3;
    cfg.model = m;
    const auto r = simulate(cfg);
    // strict outage: half of everything except the atom where both counts are zero
    EXPECT_NEAR(r.p_hat, 0.5 * (1.0 - std::exp(-10.0)), 4.0 * r.std_err);
    EXPECT_EQ(r.trials, 1000000);
}

TEST(Simulate, ExponentialPair) {
    SimConfig cfg;
    cfg.seed = 4;
    cfg.model = exp_pair(3.0);
    const auto r = simulate(cfg);
    EXPECT_NEAR(r.p_hat, 0.75, 4.0 * r.std_err);
    EXPECT_NEAR(r.std_err, std::sqrt(r.p_hat * (1.0 - r.p_hat) / 1e6), 1e-15);
}

TEST(Simulate, ReproducibleAcrossWorkerCounts) {
    SimConfig cfg;
    cfg.trials = 50000;
    cfg.seed = 99;
    cfg.model = experiment_case_b();
    cfg.workers = 1;
    const auto a = simulate(cfg);
    cfg.workers = 3;
    const auto b = simulate(cfg);
    cfg.workers = 8;
    const auto c = simulate(cfg);
    EXPECT_EQ(a.outages, b.outages);
    EXPECT_EQ(a.outages, c.outages);
    EXPECT_EQ(a.p_hat, c.p_hat);
    cfg.seed = 100;
    EXPECT_NE(simulate(cfg).outages, a.outages);
}

TEST(Simulate, WindowTruncationSensitivity) {
    // interference mean beyond 1000 m is a small fraction for alpha = 4
    const auto m = experiment_case_b(kInf);
    const double tail = campbell_cumulant(1, m.geom, FadingModel::unit(), 1000.0, kInf);
    const double inside = campbell_cumulant(1, m.geom, FadingModel::unit(), m.geom.R, 1000.0);
    EXPECT_LT(tail / inside, 0.03);
    SimConfig cfg;
    cfg.trials = 200000;
    cfg.seed = 5;
    cfg.model = m;
    cfg.window_radius = 1000.0;
    const auto a = simulate(cfg);
    cfg.window_radius = 2000.0;
    const auto b = simulate(cfg);
    EXPECT_LT(std::abs(a.p_hat - b.p_hat), 2.0 * std::hypot(a.std_err, b.std_err));
}

TEST(Simulate, CoverageCalibration) {
    int covered = 0;
    SimConfig cfg;
    cfg.trials = 10000;
    cfg.model = exp_pair(3.0);
    for (int s = 0; s < 200; ++s) {
        cfg.seed = 1000 + s;
        const auto r = simulate(cfg);
        covered += std::abs(r.p_hat - 0.75) <= 2.0 * r.std_err;
    }
    EXPECT_GE(covered, 180);
    EXPECT_LE(covered, 198);
}

TEST(Simulate, SinrNoiseRaisesOutage) {
    SimConfig cfg;
    cfg.trials = 100000;
    cfg.model = exp_pair(1.0);
    const double sir = simulate(cfg).p_hat;
    cfg.noise = 0.5;
    const auto r = simulate(cfg);
    // P(X < Y + 1/2) for unit exponentials = 1 - e^{-1/2}/2
    EXPECT_GT(r.p_hat, sir);
    EXPECT_NEAR(r.p_hat, 1.0 - 0.5 * std::exp(-0.5), 4.0 * r.std_err);
}

TEST(Simulate, CountModes) {
    SimConfig cfg;
    cfg.trials = 20000;
    cfg.store_samples = true;
    cfg.model = CaseCModel{experiment_case_b().geom, 1.0, FadingModel::gamma(1.0, 1.0)};
    cfg.count_mode = SimConfig::CountMode::fixed;
    const auto fixed = simulate(cfg);
    cfg.count_mode = SimConfig::CountMode::poisson;
    const auto pois = simulate(cfg);
    EXPECT_GT(fixed.p_hat, 0.0);
    // a fixed count removes the count noise, so the aggregate variance is smaller
    EXPECT_LT(fixed.sample_cumulants_y->k(2), pois.sample_cumulants_y->k(2));
}

TEST(Simulate, BinomialModes) {
    CaseAModel m;
    m.aggregation = CaseAModel::Aggregation::binomial;
    m.L = 8;
    m.p = 0.3;
    SimConfig cfg;
    cfg.trials = 100000;
    cfg.store_samples = true;
    cfg.model = m;
    const auto ind = simulate(cfg);
    cfg.binomial_mode = SimConfig::BinomialMode::coupled;
    const auto cpl = simulate(cfg);
    // E X = L p, E Y = L q in both modes
    EXPECT_NEAR(ind.sample_cumulants_x->k(1), 2.4, 0.05);
    EXPECT_NEAR(ind.sample_cumulants_y->k(1), 5.6, 0.05);
    EXPECT_NEAR(cpl.sample_cumulants_x->k(1), 2.4, 0.05);
    EXPECT_NEAR(cpl.sample_cumulants_y->k(1), 5.6, 0.05);
}

TEST(Simulate, Validation) {
    SimConfig cfg;
    cfg.trials = 0;
    EXPECT_THROW(simulate(cfg), ArgumentError);
    cfg.trials = 10;
    cfg.model = experiment_case_b(kInf);
    cfg.window_radius = 100.0;
    EXPECT_THROW(simulate(cfg), ArgumentError);
    cfg.window_radius = 1000.0;
    cfg.noise = -1.0;
    EXPECT_THROW(simulate(cfg), ArgumentError);
}

TEST(SampleCumulants, Constant) {
    const auto k = sample_cumulants(std::vector<double>(20, 3.5));
    EXPECT_DOUBLE_EQ(k.k(1), 3.5);
    EXPECT_EQ(k.k(2), 0.0);
    EXPECT_EQ(k.k(3), 0.0);
    EXPECT_EQ(k.k(4), 0.0);
    EXPECT_THROW(sample_cumulants(std::vector<double>(9, 1.0)), ArgumentError);
    EXPECT_THROW(sample_cumulants(std::vector<double>(20, 1.0), 5), ArgumentError);
}

TEST(SampleCumulants, Unbiasedness) {
    // small-sample k-statistics averaged over many replicates
    std::mt19937_64 g(17);
    std::exponential_distribution<double> e(1.0);
    double s3 = 0.0, q3 = 0.0, s4 = 0.0, q4 = 0.0;
    const int reps = 40000;
    for (int r = 0; r < reps; ++r) {
        std::vector<double> v(12);
        for (auto& x : v) x = e(g);
        const auto k = sample_cumulants(v);
        s3 += k.k(3);
        q3 += k.k(3) * k.k(3);
        s4 += k.k(4);
        q4 += k.k(4) * k.k(4);
    }
    const double m3 = s3 / reps, m4 = s4 / reps;
    const double se3 = std::sqrt((q3 / reps - m3 * m3) / reps), se4 = std::sqrt((q4 / reps - m4 * m4) / reps);
    EXPECT_NEAR(m3, 2.0, 4.0 * se3);
    EXPECT_NEAR(m4, 6.0, 4.0 * se4);
}

TEST(SampleCumulants, NormalSample) {
    std::mt19937_64 g(18);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<double> v(1000000);
    for (auto& x : v) x = n(g);
    const auto k = sample_cumulants(v);
    const double N = static_cast<double>(v.size());
    EXPECT_NEAR(k.k(3), 0.0, 4.0 * std::sqrt(6.0 / N));
    EXPECT_NEAR(k.k(4), 0.0, 4.0 * std::sqrt(24.0 / N));
}

TEST(SampleCumulants, ExponentialSample) {
    std::mt19937_64 g(19);
    std::exponential_distribution<double> e(1.0);
    std::vector<double> v(1000000);
    for (auto& x : v) x = e(g);
    const auto k = sample_cumulants(v);
    const double N = static_cast<double>(v.size());
    const CumulantSet pop{{1.0, 1.0, 2.0, 6.0}};
    EXPECT_NEAR(k.k(1), 1.0, 4.0 * kstat_se1(pop, v.size()));
    EXPECT_NEAR(k.k(2), 1.0, 4.0 * kstat_se2(pop, v.size()));
    // large-sample variances of k3, k4 from the population cumulants of Exp(1)
    EXPECT_NEAR(k.k(3), 2.0, 4.0 * std::sqrt(216.0 / N));
    EXPECT_NEAR(k.k(4), 6.0, 4.0 * std::sqrt(11520.0 / N));
}
