#pragma once

// Saddle point CDF approximations (Lugannani-Rice and Wood-Booth-Butler).
// Everything here uses the forward CGF Kf(s) = K(-s) = log E[exp(s Omega)].

#include "outage/cgf.hpp"
#include "outage/result.hpp"

namespace outage {

struct SaddleContext {
    double omega = 0.0;
    double s_hat = 0.0;  // root of Kf'(s) = omega
    double c = 0.0;      // s_hat omega - Kf(s_hat) >= 0
    double k2 = 0.0, k3 = 0.0, k4 = 0.0;  // Kf'', Kf''', Kf'''' at s_hat
    double eta = 0.0;    // k3^2 / k2^3
    double rho = 0.0;    // k4 / k2^2
    double residual = 0.0;
    bool reduced_order = false;  // k3/k4 by finite differences
};

enum class BaseKind { normal, chi_square, inverse_gaussian, nig };

std::string to_string(BaseKind k);

struct BaseDistribution {
    BaseKind kind = BaseKind::normal;
    bool reflected = false;  // parameters describe -Omega
    double z_hat = 0.0;      // base quantile matched to omega
    double s_breve = 0.0;    // base saddle point at z_hat
    double L2 = 1.0;         // base L''(s_breve)
    double alpha = 0.0;      // chi-square dof, or NIG alpha
    double mu = 0.0;         // inverse-Gaussian mean
    double beta = 0.0;       // NIG beta
    double d = 0.0, e = 0.0; // NIG helpers
};

SaddleContext solve_saddle(const CgfModel& cgf, double omega);

// Throws CapabilityError when the base cannot be matched (caller falls back).
BaseDistribution base_params(const SaddleContext& ctx, BaseKind kind);

double wbb_cdf(const SaddleContext& ctx, const BaseDistribution& base);

OutageResult outage_spa(const CgfModel& cgf, double eval_point, BaseKind base);

// NIG(alpha, beta, mu = 0, delta = 1) density and distribution function.
double nig_pdf(double x, double alpha, double beta);
double nig_cdf(double x, double alpha, double beta);

} // namespace outage
