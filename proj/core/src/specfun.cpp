#include "outage/specfun.hpp"

#include "outage/errors.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/lambert_w.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace outage::specfun {

namespace {

bool is_nonpositive_integer(double a) { return a <= 0.0 && a == std::floor(a); }

[[noreturn]] void domain(const char* fn, double x) {
    throw DomainError(std::string(fn) + ": argument out of domain (" + std::to_string(x) + ")");
}

} // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) domain("log_gamma", x);
    return boost::math::lgamma(x);
}

double gamma_fn(double x) {
    if (is_nonpositive_integer(x) || std::isnan(x)) domain("gamma_fn", x);
    return boost::math::tgamma(x);
}

double beta_fn(double a, double b) {
    if (!(a > 0.0)) domain("beta_fn", a);
    if (!(b > 0.0)) domain("beta_fn", b);
    return boost::math::beta(a, b);
}

double inc_gamma_upper(double a, double z) {
    if (!(z > 0.0)) domain("inc_gamma_upper", z);
    if (a > 0.0) return boost::math::tgamma(a, z);

    // Walk down from a0 in [0, 1) with Gamma(a, z) = (Gamma(a+1, z) - z^a e^-z) / a.
    const int steps = static_cast<int>(std::ceil(-a));
    double a0 = a + steps;
    double g;
    if (a0 <= 0.0) {
        a0 = 0.0;
        g = boost::math::expint(1, z);
    } else {
        g = boost::math::tgamma(a0, z);
    }
    const double ez = std::exp(-z);
    for (int k = 1; k <= steps; ++k) {
        const double b = a0 - k;
        g = (g - std::pow(z, b) * ez) / b;
    }
    return g;
}

double inc_gamma_lower(double a, double z) {
    if (!(z > 0.0)) domain("inc_gamma_lower", z);
    if (is_nonpositive_integer(a)) domain("inc_gamma_lower", a);
    if (a > 0.0) return boost::math::tgamma_lower(a, z);
    return boost::math::tgamma(a) - inc_gamma_upper(a, z);
}

double gamma_p(double a, double z) {
    if (!(a > 0.0)) domain("gamma_p", a);
    if (z < 0.0) domain("gamma_p", z);
    if (z == 0.0) return 0.0;
    return boost::math::gamma_p(a, z);
}

double inc_beta_reg(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) domain("inc_beta_reg", a > 0.0 ? b : a);
    if (x < 0.0 || x > 1.0) domain("inc_beta_reg", x);
    return boost::math::ibeta(a, b, x);
}

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double log_normal_cdf(double z) {
    if (z > -30.0) return std::log(normal_cdf(z));
    // Mills-ratio asymptotic series; at z <= -30 the truncation is below 1e-12.
    const double r = 1.0 / (z * z);
    const double series = 1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r)));
    return -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi) - std::log(-z) + std::log(series);
}

double lambert_w(double x, WBranch branch) {
    const double branch_pt = -std::exp(-1.0);
    if (std::isnan(x) || x < branch_pt) {
        // Tolerate the rounding of -1/e itself.
        if (x >= branch_pt * (1.0 + 4.0 * std::numeric_limits<double>::epsilon())) return -1.0;
        domain("lambert_w", x);
    }
    if (x == branch_pt) return -1.0;
    if (branch == WBranch::principal) return boost::math::lambert_w0(x);
    if (!(x < 0.0)) domain("lambert_w(lower)", x);
    return boost::math::lambert_wm1(x);
}

double bessel_k1(double x) {
    if (!(x > 0.0)) domain("bessel_k1", x);
    return boost::math::cyl_bessel_k(1, x);
}

double bessel_k1_scaled(double x) {
    if (!(x > 0.0)) domain("bessel_k1_scaled", x);
    if (x <= 50.0) return std::exp(x) * boost::math::cyl_bessel_k(1, x);
    // Hankel expansion, mu = 4 nu^2 = 4.
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 30; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (4.0 - odd * odd) / (k * 8.0 * x);
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::sqrt(std::numbers::pi / (2.0 * x)) * sum;
}

double exp_power_integral(double b, double z) {
    if (!(b > 0.0)) domain("exp_power_integral", b);
    if (z < 0.0) domain("exp_power_integral", z);
    if (z == 0.0) return 0.0;
    double term = 1.0;  // z^k / k!
    double sum = 1.0 / b;
    for (int k = 1; k < 5000; ++k) {
        term *= z / k;
        const double add = term / (b + k);
        sum += add;
        if (add < 1e-17 * sum && k > z) break;
    }
    return std::exp(b * std::log(z)) * sum;
}

} // namespace outage::specfun
