#pragma once

#include "outage/cgf.hpp"
#include "outage/result.hpp"

namespace outage {

struct InversionConfig {
    double rel_tol = 1e-8;   // target accuracy of the probability
    int max_panels = 20000;  // total quadrature panels across all segments

    void validate() const;
};

struct CcdfValue {
    double q;             // P(Omega > omega), clamped to [0, 1]
    double raw;           // before clamping
    double err_estimate;
    int panels;
};

// Q(omega) = 1/2 - (1/pi) int_0^inf Im{ exp(K(jt) + j t omega) } dt / t
// At an atom of Omega this is P(Omega > omega) + P(Omega = omega) / 2.
CcdfValue ccdf(const CgfModel& cgf, double omega, const InversionConfig& cfg = {});

// P_out = P(Omega > eval_point); eval_point = 0 for SIR, -theta sigma^2 for SINR.
OutageResult outage_gp(const CgfModel& cgf, double eval_point, const InversionConfig& cfg = {});

} // namespace outage
