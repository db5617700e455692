#pragma once

// Monte Carlo simulator for cases A, B and C.
//
// Random streams: trials are grouped in fixed blocks of kBlockTrials. Block b
// uses std::mt19937_64 seeded with splitmix64(seed ^ splitmix64(b)), so the
// result depends on (seed, trials, model) only and not on the worker count.

#include "outage/cgf.hpp"
#include "outage/cumulants.hpp"

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace outage {

using SimModel = std::variant<CaseAModel, CaseBModel, CaseCModel>;

struct SimConfig {
    enum class CountMode { poisson, fixed };
    enum class BinomialMode { independent, coupled };

    std::int64_t trials = 1000000;
    std::uint64_t seed = 1;
    double window_radius = 1000.0;  // used when the model geometry has no finite window
    double noise = 0.0;             // sigma^2; outage is theta (Y + sigma^2) > X
    CountMode count_mode = CountMode::poisson;
    BinomialMode binomial_mode = BinomialMode::independent;
    bool store_samples = false;     // keep X, Y per trial for sample cumulants
    int workers = 0;                // 0: hardware concurrency, capped by OUTAGE_WORKERS
    SimModel model = CaseAModel{};

    void validate() const;
};

struct EmpiricalResult {
    double p_hat = 0.0;
    double std_err = 0.0;
    std::int64_t outages = 0;
    std::int64_t trials = 0;
    std::optional<CumulantSet> sample_cumulants_x;
    std::optional<CumulantSet> sample_cumulants_y;
    std::optional<CumulantSet> sample_cumulants_omega;  // of theta Y - X
};

inline constexpr std::int64_t kBlockTrials = 4096;

std::uint64_t splitmix64(std::uint64_t x);

EmpiricalResult simulate(const SimConfig& cfg);

// Unbiased k-statistics k_1..k_max_order (max_order <= 4), at least 10 values.
CumulantSet sample_cumulants(const std::vector<double>& values, int max_order = 4);

// Standard errors of k_1 and k_2 from population cumulants and sample size.
double kstat_se1(const CumulantSet& k, std::int64_t n);
double kstat_se2(const CumulantSet& k, std::int64_t n);

} // namespace outage
