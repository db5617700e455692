#pragma once

#include <complex>
#include <limits>
#include <utility>
#include <vector>

namespace outage {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// PPP downlink geometry. Signal region [a, R), interference [R, window).
struct NetworkGeometry {
    double lambda = 0.0;   // BS intensity, 1/m^2
    double a = 0.0;        // exclusion radius, m
    double R = 0.0;        // cooperation radius, m
    double alpha = 4.0;    // path-loss exponent
    double P = 1.0;        // transmit power, W
    double window = kInf;  // outer radius of the interference field

    void validate() const;
    double u() const { return R / a; }
};

class FadingModel {
public:
    enum class Kind { unit, gamma, lognormal };

    static FadingModel unit();
    static FadingModel gamma(double shape, double rate);
    static FadingModel lognormal(double mu_ln, double sigma_ln);

    Kind kind() const { return kind_; }
    double shape() const { return p1_; }
    double rate() const { return p2_; }
    double mu_ln() const { return p1_; }
    double sigma_ln() const { return p2_; }
    bool has_mgf() const { return kind_ != Kind::lognormal; }

    // mu_n(G) = E[G^n]
    double moment(int n) const;

    // E[G^n exp(-s G)]; n = 0 is the Laplace MGF. Throws CapabilityError for
    // lognormal and StripError outside the MGF domain.
    double tilted_moment(int n, double s) const;
    std::complex<double> tilted_moment(int n, std::complex<double> s) const;

private:
    FadingModel(Kind k, double p1, double p2) : kind_(k), p1_(p1), p2_(p2) {}
    Kind kind_;
    double p1_, p2_;
};

// kappa_1..kappa_N stored 0-based; k(n) is 1-based.
struct CumulantSet {
    std::vector<double> kappa;

    int order() const { return static_cast<int>(kappa.size()); }
    double k(int n) const { return kappa.at(static_cast<std::size_t>(n - 1)); }
    double skewness() const;
    double ex_kurtosis() const;
};

// mu_0..mu_N, mu_0 = 1.
struct MomentSet {
    std::vector<double> mu;

    int order() const { return static_cast<int>(mu.size()) - 1; }
    double m(int n) const { return mu.at(static_cast<std::size_t>(n)); }
};

// Partial exponential Bell polynomial B_{n,k}(x_1, ..., x_{n-k+1}); x[0] is x_1.
double bell_partial(int n, int k, const std::vector<double>& x);

// Table B[m][j] for 0 <= j <= m <= n, computed by the same recursion.
std::vector<std::vector<double>> bell_table(int n, const std::vector<double>& x);

MomentSet cumulants_to_moments(const CumulantSet& k);
CumulantSet moments_to_cumulants(const MomentSet& m);

// 2 pi lambda mu_n(G) int_{r_lo}^{r_hi} (P r^-alpha)^n r dr.
double campbell_cumulant(int n, const NetworkGeometry& geom, const FadingModel& fading,
                         double r_lo, double r_hi);

// kappa_n(Omega) = theta^n kappa_n(Y) + (-1)^n kappa_n(X), Omega = theta Y - X.
double omega_cumulant(int n, const NetworkGeometry& geom, const FadingModel& fading, double theta);

// Closed form kappa^lim [1 + ((-theta)^n - 1) u^(2 - n alpha) - (-theta)^n (window/a)^(2 - n alpha)].
double omega_cumulant_closed(int n, const NetworkGeometry& geom, const FadingModel& fading,
                             double theta);

// u -> infinity limit (window at infinity).
double omega_cumulant_lim(int n, const NetworkGeometry& geom, const FadingModel& fading);

CumulantSet omega_cumulants(const NetworkGeometry& geom, const FadingModel& fading, double theta,
                            int order = 8);

struct ShapeStats {
    double skew2;
    double ex_kurt;
};

// Small-a/R limit of Skew^2 and excess kurtosis of Omega.
ShapeStats omega_shape_stats(const NetworkGeometry& geom, const FadingModel& fading);

} // namespace outage
