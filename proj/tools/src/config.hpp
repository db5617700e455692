#pragma once

// Run configuration: flat `key = value` lines under [model], [methods] and
// [sweep] headers. '#' and ';' start comments.

#include "outage/cgf.hpp"
#include "outage/charlier.hpp"
#include "outage/gilpelaez.hpp"
#include "outage/montecarlo.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace outage::cli {

class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, int column, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_, column_;
};

enum class CaseKind { a_poisson, a_binomial, a_single, b, c };

struct ModelSpec {
    CaseKind kind = CaseKind::b;
    double theta = 1.0;
    double power = 1.0;
    double noise = 0.0;
    // case A
    double lambda1 = 1.0, lambda2 = 1.0;
    int L = 1;
    double p_coop = 0.5;
    // cases B, C
    double a = 30.0, R = 150.0, alpha = 4.0, window = 1000.0;
    std::optional<double> lambda, num_bs;
    // fading: gamma(shape, rate) for A and C; lognormal for C (cumulant methods and mc only)
    std::string fading = "gamma";
    double fading_shape = 1.0, fading_rate = 1.0;
    double ln_mu = 0.0, ln_sigma = 1.0;
    int cumulant_order = 8;

    double intensity() const;  // BS intensity from lambda or num_bs
};

struct MethodSpec {
    std::vector<std::string> use;  // method names in output order
    InversionConfig gp;
    int charlier_order = 6;
    CharlierMode charlier_mode = CharlierMode::standardized;
    std::int64_t mc_trials = 100000;
    std::uint64_t mc_seed = 1;
    SimConfig::CountMode mc_count = SimConfig::CountMode::poisson;
    SimConfig::BinomialMode mc_binomial = SimConfig::BinomialMode::independent;
    int mc_workers = 0;
};

struct SweepSpec {
    std::string variable;  // empty: single point
    std::vector<double> values;
};

struct RunConfig {
    ModelSpec model;
    MethodSpec methods;
    SweepSpec sweep;
};

inline constexpr const char* kMethodNames[] = {"gil_pelaez", "spa:normal", "spa:chisq", "spa:ig",
                                                "spa:nig", "charlier:hermite", "charlier:t", "mc"};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Model with the sweep variable set to value.
ModelSpec apply_sweep(const ModelSpec& m, const std::string& variable, double value);

double db_to_linear(double db);

} // namespace outage::cli
