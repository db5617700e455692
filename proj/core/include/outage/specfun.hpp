#pragma once

// Scalar special functions. Accuracy targets are part of the contract and are
// exercised by tests/test_specfun.cpp.

namespace outage::specfun {

double log_gamma(double x);                 // x > 0
double gamma_fn(double x);                  // any non-pole x
double beta_fn(double a, double b);         // a, b > 0

// Upper incomplete gamma Gamma(a, z), any real a, z > 0.
double inc_gamma_upper(double a, double z);
// Lower incomplete gamma gamma(a, z); a must not be 0, -1, -2, ...
double inc_gamma_lower(double a, double z);
// Regularized lower incomplete gamma P(a, z), a > 0, z >= 0.
double gamma_p(double a, double z);

// Regularized incomplete beta I_x(a, b).
double inc_beta_reg(double a, double b, double x);

double normal_pdf(double z);
double normal_cdf(double z);
double log_normal_cdf(double z);            // stays finite far in the left tail

enum class WBranch { principal, lower };
double lambert_w(double x, WBranch branch);

double bessel_k1(double x);                 // x > 0
double bessel_k1_scaled(double x);          // e^x K_1(x), x > 0

// Int_0^z x^(b-1) e^x dx for b > 0, z >= 0 (positive-term series).
double exp_power_integral(double b, double z);

} // namespace outage::specfun
