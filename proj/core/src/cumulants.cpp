#include "outage/cumulants.hpp"

#include "outage/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace outage {

void NetworkGeometry::validate() const {
    if (!(lambda > 0.0)) throw ArgumentError("geometry: lambda must be positive");
    if (!(a > 0.0) || !(a < R)) throw ArgumentError("geometry: need 0 < a < R");
    if (!(alpha > 2.0)) throw ArgumentError("geometry: path-loss exponent must exceed 2");
    if (!(P > 0.0)) throw ArgumentError("geometry: power must be positive");
    if (!(window > R)) throw ArgumentError("geometry: window radius must exceed R");
}

FadingModel FadingModel::unit() { return {Kind::unit, 1.0, 0.0}; }

FadingModel FadingModel::gamma(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0)) throw ArgumentError("gamma fading: shape and rate must be positive");
    return {Kind::gamma, shape, rate};
}

FadingModel FadingModel::lognormal(double mu_ln, double sigma_ln) {
    if (!(sigma_ln > 0.0)) throw ArgumentError("lognormal fading: sigma must be positive");
    return {Kind::lognormal, mu_ln, sigma_ln};
}

double FadingModel::moment(int n) const {
    if (n < 0) throw ArgumentError("moment order must be non-negative");
    switch (kind_) {
    case Kind::unit:
        return 1.0;
    case Kind::gamma: {
        double m = 1.0;
        for (int i = 0; i < n; ++i) m *= (p1_ + i) / p2_;
        return m;
    }
    case Kind::lognormal:
        return std::exp(n * p1_ + 0.5 * n * n * p2_ * p2_);
    }
    return 0.0;
}

namespace {

double rising(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x + i;
    return r;
}

} // namespace

double FadingModel::tilted_moment(int n, double s) const {
    switch (kind_) {
    case Kind::unit:
        return std::exp(-s);
    case Kind::gamma: {
        const double base = 1.0 + s / p2_;
        if (!(base > 0.0)) throw StripError("gamma MGF evaluated outside its strip");
        return rising(p1_, n) * std::pow(p2_, -n) * std::pow(base, -p1_ - n);
    }
    case Kind::lognormal:
        break;
    }
    throw CapabilityError("lognormal fading has no MGF");
}

std::complex<double> FadingModel::tilted_moment(int n, std::complex<double> s) const {
    switch (kind_) {
    case Kind::unit:
        return std::exp(-s);
    case Kind::gamma: {
        const std::complex<double> base = 1.0 + s / p2_;
        if (!(base.real() > 0.0)) throw StripError("gamma MGF evaluated outside its strip");
        return rising(p1_, n) * std::pow(p2_, -n) * std::pow(base, -p1_ - n);
    }
    case Kind::lognormal:
        break;
    }
    throw CapabilityError("lognormal fading has no MGF");
}

double CumulantSet::skewness() const {
    if (order() < 3) throw ArgumentError("skewness needs three cumulants");
    return k(3) / std::pow(k(2), 1.5);
}

double CumulantSet::ex_kurtosis() const {
    if (order() < 4) throw ArgumentError("kurtosis needs four cumulants");
    return k(4) / (k(2) * k(2));
}

std::vector<std::vector<double>> bell_table(int n, const std::vector<double>& x) {
    if (n < 0) throw ArgumentError("bell_table: negative order");
    if (static_cast<int>(x.size()) < n) throw ArgumentError("bell_table: too few arguments");
    // binom[i] holds C(m-1, i) for the current row m.
    std::vector<std::vector<double>> B(n + 1, std::vector<double>(n + 1, 0.0));
    B[0][0] = 1.0;
    std::vector<double> binom;
    for (int m = 1; m <= n; ++m) {
        binom.assign(m, 1.0);
        for (int i = 1; i < m; ++i) binom[i] = binom[i - 1] * (m - i) / i;
        for (int j = 1; j <= m; ++j) {
            double s = 0.0;
            for (int i = 1; i <= m - j + 1; ++i) s += binom[i - 1] * x[i - 1] * B[m - i][j - 1];
            B[m][j] = s;
        }
    }
    return B;
}

double bell_partial(int n, int k, const std::vector<double>& x) {
    if (n < 0 || k < 0 || k > n) {
        throw ArgumentError("bell_partial: need 0 <= k <= n (n=" + std::to_string(n) +
                            ", k=" + std::to_string(k) + ")");
    }
    if (n == 0) return 1.0;
    if (k == 0) return 0.0;
    const int need = n - k + 1;
    if (static_cast<int>(x.size()) < need) throw ArgumentError("bell_partial: too few arguments");
    std::vector<double> xs(x.begin(), x.begin() + need);
    xs.resize(n, 0.0);  // entries beyond n-k+1 never reach B_{n,k}
    return bell_table(n, xs)[n][k];
}

MomentSet cumulants_to_moments(const CumulantSet& k) {
    const int n = k.order();
    if (n < 1) throw ArgumentError("cumulants_to_moments: empty cumulant set");
    const auto B = bell_table(n, k.kappa);
    MomentSet m;
    m.mu.assign(n + 1, 0.0);
    m.mu[0] = 1.0;
    for (int i = 1; i <= n; ++i) {
        double s = 0.0;
        for (int j = 1; j <= i; ++j) s += B[i][j];
        m.mu[i] = s;
    }
    return m;
}

CumulantSet moments_to_cumulants(const MomentSet& m) {
    const int n = m.order();
    if (n < 1) throw ArgumentError("moments_to_cumulants: empty moment set");
    std::vector<double> x(m.mu.begin() + 1, m.mu.end());
    const auto B = bell_table(n, x);
    CumulantSet k;
    k.kappa.assign(n, 0.0);
    for (int i = 1; i <= n; ++i) {
        double s = 0.0, fact = 1.0;  // (j-1)!
        for (int j = 1; j <= i; ++j) {
            if (j > 1) fact *= (j - 1);
            s += ((j % 2 == 1) ? 1.0 : -1.0) * fact * B[i][j];
        }
        k.kappa[i - 1] = s;
    }
    return k;
}

double campbell_cumulant(int n, const NetworkGeometry& geom, const FadingModel& fading,
                         double r_lo, double r_hi) {
    if (n < 1) throw ArgumentError("campbell_cumulant: order must be >= 1");
    if (!(r_lo > 0.0) || !(r_lo < r_hi)) throw ArgumentError("campbell_cumulant: need 0 < r_lo < r_hi");
    const double e = n * geom.alpha - 2.0;
    if (!(e > 0.0)) throw DivergenceError("campbell_cumulant: n*alpha <= 2, integral diverges");
    auto piece = [&](double r) {
        if (std::isinf(r)) return 0.0;
        return std::pow(geom.P * std::pow(r, -geom.alpha), n) * r * r;
    };
    return 2.0 * std::numbers::pi * geom.lambda * fading.moment(n) * (piece(r_lo) - piece(r_hi)) / e;
}

double omega_cumulant(int n, const NetworkGeometry& geom, const FadingModel& fading, double theta) {
    if (!(theta > 0.0)) throw ArgumentError("omega_cumulant: theta must be positive");
    geom.validate();
    const double y = campbell_cumulant(n, geom, fading, geom.R, geom.window);
    const double x = campbell_cumulant(n, geom, fading, geom.a, geom.R);
    return std::pow(theta, n) * y + ((n % 2 == 0) ? x : -x);
}

double omega_cumulant_lim(int n, const NetworkGeometry& geom, const FadingModel& fading) {
    geom.validate();
    const double e = n * geom.alpha - 2.0;
    if (!(e > 0.0)) throw DivergenceError("omega_cumulant_lim: n*alpha <= 2");
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign * 2.0 * std::numbers::pi * geom.lambda * fading.moment(n) *
           std::pow(geom.P * std::pow(geom.a, -geom.alpha), n) * geom.a * geom.a / e;
}

double omega_cumulant_closed(int n, const NetworkGeometry& geom, const FadingModel& fading,
                             double theta) {
    if (!(theta > 0.0)) throw ArgumentError("omega_cumulant_closed: theta must be positive");
    const double lim = omega_cumulant_lim(n, geom, fading);
    const double e = 2.0 - n * geom.alpha;
    const double mth = std::pow(-theta, n);
    const double wterm = std::isinf(geom.window) ? 0.0 : std::pow(geom.window / geom.a, e);
    return lim * (1.0 + (mth - 1.0) * std::pow(geom.u(), e) - mth * wterm);
}

CumulantSet omega_cumulants(const NetworkGeometry& geom, const FadingModel& fading, double theta,
                            int order) {
    if (order < 1 || order > 16) throw ArgumentError("omega_cumulants: order must be in 1..16");
    CumulantSet k;
    for (int n = 1; n <= order; ++n) k.kappa.push_back(omega_cumulant(n, geom, fading, theta));
    return k;
}

ShapeStats omega_shape_stats(const NetworkGeometry& geom, const FadingModel& fading) {
    geom.validate();
    if (fading.kind() == FadingModel::Kind::unit) {
        throw ArgumentError("omega_shape_stats: deterministic fading has zero variance");
    }
    const double al = geom.alpha;
    const double pla2 = std::numbers::pi * geom.lambda * geom.a * geom.a;
    const double m2 = fading.moment(2), m3 = fading.moment(3), m4 = fading.moment(4);
    const double skew2 = 4.0 / pla2 * std::pow(al - 1.0, 3) / ((3.0 * al - 2.0) * (3.0 * al - 2.0)) *
                         m3 * m3 / (m2 * m2 * m2);
    const double kurt = 1.0 / pla2 * (al - 1.0) * (al - 1.0) / (2.0 * al - 1.0) * m4 / (m2 * m2);
    return {skew2, kurt};
}

} // namespace outage
