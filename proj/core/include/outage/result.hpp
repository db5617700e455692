#pragma once

#include <optional>
#include <string>
#include <vector>

namespace outage {

enum class Method {
    gil_pelaez,
    spa_normal,
    spa_chisq,
    spa_ig,
    spa_nig,
    charlier_hermite,
    charlier_t,
    monte_carlo,
};

std::string to_string(Method m);

struct Diagnostics {
    double err_estimate = 0.0;          // quadrature error or MC standard error
    int panels = 0;                     // quadrature panels used
    std::optional<double> saddle;       // forward-convention saddle point
    std::optional<double> lf_value;     // Legendre-Fenchel value c
    std::optional<int> order;           // Charlier truncation order
    std::optional<double> min_density;  // min of the reconstructed density on [-6, 6]
    std::string base;                   // base distribution actually used
    bool clamped = false;
    std::vector<std::string> notes;     // fallbacks, warnings
};

struct OutageResult {
    double p_out = 0.0;
    Method method = Method::gil_pelaez;
    Diagnostics diag;
};

} // namespace outage
