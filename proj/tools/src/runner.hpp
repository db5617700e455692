#pragma once

#include "config.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace outage::cli {

struct Cell {
    std::optional<double> sweep_value;
    std::string method;
    std::optional<double> p_out;  // empty: not computable
    std::optional<double> err;
    std::string note;
};

// Evaluates every (sweep point, method) cell in sweep order, then method order.
// Per-cell failures become empty p_out with the reason in note and on `log`.
std::vector<Cell> run_cells(const RunConfig& cfg, std::ostream& log);

void write_csv(const std::vector<Cell>& cells, std::ostream& out);

// kappa_1..kappa_N, their u -> infinity limits (cases b, c), skewness and excess kurtosis.
void write_cumulants(const RunConfig& cfg, std::ostream& out);

std::string format_number(double v);

} // namespace outage::cli
