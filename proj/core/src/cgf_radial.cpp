#include "outage/cgf.hpp"

#include "outage/errors.hpp"
#include "outage/quadrature.hpp"
#include "outage/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <type_traits>
#include <vector>

namespace outage {

namespace {

constexpr cplx J(0.0, 1.0);

double magnitude(double v) { return std::abs(v); }
double magnitude(cplx v) { return std::abs(v); }

double expm1_(double z) { return std::expm1(z); }
double log1p_(double z) { return std::log1p(z); }

cplx expm1_(cplx z) {
    if (std::abs(z) > 0.1) return std::exp(z) - 1.0;
    cplx term = z, sum = z;
    for (int k = 2; k < 30 && std::abs(term) > 1e-18 * std::abs(sum); ++k) {
        term *= z / static_cast<double>(k);
        sum += term;
    }
    return sum;
}

cplx log1p_(cplx z) {
    if (std::abs(z) > 0.1) return std::log(1.0 + z);
    cplx pw = z, sum = z;
    for (int k = 2; k < 60 && std::abs(pw) > 1e-18 * std::abs(sum); ++k) {
        pw *= -z;
        sum += pw / static_cast<double>(k);
    }
    return sum;
}

// M_G(s) - 1 = E[exp(-s G)] - 1 without cancellation for small s.
template <class T>
T mgf_minus_one(const FadingModel& f, T s) {
    if (f.kind() == FadingModel::Kind::unit) return expm1_(-s);
    return expm1_(-f.shape() * log1p_(s / f.rate()));
}

} // namespace

RadialCgf::RadialCgf(const NetworkGeometry& geom, double theta, const FadingModel& fading,
                     double rel_tol)
    : geom_(geom), theta_(theta), fading_(fading), rel_tol_(rel_tol) {
    geom_.validate();
    if (!(theta > 0.0)) throw ArgumentError("radial CGF: theta must be positive");
    if (!fading_.has_mgf()) throw CapabilityError("case C needs a fading MGF; lognormal has none");
    const double al = geom_.alpha, P = geom_.P;
    if (fading_.kind() == FadingModel::Kind::gamma) {
        const double beta = fading_.rate();
        strip_ = {-beta * std::pow(geom_.R, al) / (theta_ * P), beta * std::pow(geom_.a, al) / P};
    } else {
        strip_ = {-kInf, kInf};
        b_ = -2.0 / al;
        c0_ = 2.0 * std::numbers::pi;
        // G(c0) by series, E(c0) by the rotated contour; both reused for every x > c0.
        cplx sum = 0.0, term = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= J * c0_ / static_cast<double>(k);
            sum += term / (k + b_);
            if (std::abs(term) < 1e-18 && k > c0_) break;
        }
        g_c0_ = sum * std::pow(c0_, b_);
        const double x = c0_, bm1 = b_ - 1.0;
        auto f = [x, bm1](double u) { return std::exp(-u) * std::pow(cplx(x, u), bm1); };
        quad::Options opt{0.0, 1e-14, 400, 60};
        const auto r = quad::integrate(f, 0.0, 60.0, opt);
        e_c0_ = J * std::exp(J * x) * r.value;
    }
}

double RadialCgf::scale() const { return std::pow(geom_.a, geom_.alpha) / geom_.P; }

std::string RadialCgf::name() const {
    return fading_.kind() == FadingModel::Kind::unit ? "case_b" : "case_c";
}

CumulantSet RadialCgf::cumulants(int order) const {
    return omega_cumulants(geom_, fading_, theta_, order);
}

// n-th t-derivative of 2 pi lambda [ int_a^R (M_G(-t c) - 1) r dr + int_R^W (M_G(theta t c) - 1) r dr ],
// c = P r^-alpha, integrated in u = log r.
template <class T>
T RadialCgf::radial(int n, T t) const {
    if (n == 0 && t == T{}) return T{};
    const double al = geom_.alpha, P = geom_.P, th = theta_;
    const bool unit = fading_.kind() == FadingModel::Kind::unit;
    const double beta = unit ? 1.0 : fading_.rate();
    const double shape = unit ? 0.0 : fading_.shape();
    const double tabs = magnitude(t);
    const double nsign = (n % 2 == 0) ? 1.0 : -1.0;

    quad::Options opt{0.0, rel_tol_, 3000, 60};
    // Integrates f(x), x = u - u0 over [0, span], split at the given offsets. Offsets keep the
    // resolution near u0 that absolute u coordinates would lose.
    auto run = [&](auto&& f, double span, std::vector<double> cuts) {
        T acc{};
        double lo = 0.0;
        std::sort(cuts.begin(), cuts.end());
        cuts.push_back(span);
        for (double c : cuts) {
            if (c <= lo || c > span) continue;
            const auto r = quad::integrate(f, lo, c, opt);
            if (!r.converged) {
                throw AccuracyError("radial CGF quadrature did not converge", magnitude(r.value), r.error);
            }
            acc += r.value;
            lo = c;
        }
        return acc;
    };
    auto knee = [&](double mult) {
        // radius where |t| mult P r^-alpha / beta = 1
        if (tabs == 0.0) return -kInf;
        return std::log(tabs * mult * P / beta) / al;
    };

    const double la = std::log(geom_.a), lR = std::log(geom_.R);

    // Real gamma case: the MGF base 1 + s/beta is rebuilt as edge + slope (1 - (r0/r)^alpha), which
    // avoids cancellation when t approaches a strip edge. edge = base at r0.
    double rise = 1.0;
    for (int j = 0; j < n; ++j) rise *= (shape + j) / beta;
    auto stable_gamma = [&](double s, double edge, double slope, double du) -> double {
        const double base = edge + slope * -std::expm1(-al * du);
        if (n == 0) return std::abs(s / beta) < 0.5 ? std::expm1(-shape * std::log1p(s / beta)) : std::pow(base, -shape) - 1.0;
        return rise * std::pow(base, -shape - n);
    };
    auto gain_term = [&](T s, double edge, double slope, double du) -> T {
        if constexpr (std::is_same_v<T, double>) {
            if (!unit) return stable_gamma(s, edge, slope, du);
        }
        return n == 0 ? mgf_minus_one(fading_, s) : fading_.tilted_moment(n, s);
    };
    // signal base 1 - t c / beta = (1 - t/ts) + (t/ts)(1 - (a/r)^alpha), ts = beta a^alpha / P
    const double ts = beta * std::pow(geom_.a, al) / P;
    const double ti = beta * std::pow(geom_.R, al) / (th * P);
    double rt = 0.0;
    if constexpr (std::is_same_v<T, double>) rt = t;

    auto signal = [&](double x) -> T {
        const double r = geom_.a * std::exp(x);
        const double c = P * std::pow(r, -al);
        const T g = gain_term(T(-t * c), 1.0 - rt / ts, rt / ts, x);
        return std::pow(c, n) * g * (r * r);
    };
    // interference base 1 + theta t c / beta = (1 + t/ti) - (t/ti)(1 - (R/r)^alpha)
    auto interference = [&](double x) -> T {
        const double r = geom_.R * std::exp(x);
        const double c = P * std::pow(r, -al);
        const T g = gain_term(T(th * t * c), 1.0 + rt / ti, -rt / ti, x);
        return nsign * std::pow(th * c, n) * g * (r * r);
    };

    // Near a strip edge the integrand peaks within edge/alpha of the inner endpoint; grade the panels there.
    auto cuts = [&](double span, double edge, double knee_offset) {
        std::vector<double> c{knee_offset};
        if (edge > 0.0 && edge < 0.1) {
            for (double w = edge / al; w < span; w *= 4.0) c.push_back(w);
        }
        return c;
    };
    T sig = run(signal, lR - la, cuts(lR - la, rt > 0.0 ? 1.0 - rt / ts : 0.0, knee(1.0) - la));

    T intf{};
    if (std::isfinite(geom_.window)) {
        const double lW = std::log(geom_.window);
        intf = run(interference, lW - lR, cuts(lW - lR, rt < 0.0 ? 1.0 + rt / ti : 0.0, knee(th) - lR));
    } else {
        // Numerical part up to r_T, then the moment series for the far field.
        const double growth = unit ? 1.0 : (shape + n + 1.0) / beta;
        const double y_R = tabs * th * P * std::pow(geom_.R, -al) * growth;
        const double rT = geom_.R * std::max(1.0, std::pow(y_R / 0.05, 1.0 / al));
        const double lT = std::log(rT);
        if (lT > lR) intf = run(interference, lT - lR, cuts(lT - lR, rt < 0.0 ? 1.0 + rt / ti : 0.0, knee(th) - lR));
        const double cT = P * std::pow(rT, -al);
        T tail{};
        T pw = T{1.0};  // (-theta t)^k / k!
        for (int k = 0; k < 400; ++k) {
            if (k > 0) pw *= -th * t / static_cast<double>(k);
            if (n + k == 0) continue;
            const int m = n + k;
            const T term = nsign * std::pow(th, n) * fading_.moment(m) * pw * std::pow(cT, m) * (rT * rT) /
                           (m * al - 2.0);
            tail += term;
            if (k > 2 && magnitude(term) <= 1e-17 * magnitude(tail)) break;
        }
        intf += tail;
    }
    return 2.0 * std::numbers::pi * geom_.lambda * (sig + intf);
}

double RadialCgf::deriv_quadrature(int n, double t) const {
    if (n < 0 || n > 8) throw ArgumentError("radial deriv: order must be 0..8");
    if (!strip_.contains(t)) throw StripError("radial CGF derivative outside strip");
    return radial<double>(n, t);
}

double RadialCgf::deriv(int n, double t) const { return deriv_quadrature(n, t); }

cplx RadialCgf::eval_quadrature(cplx t) const {
    if (!strip_.contains(t.real())) throw StripError("radial CGF evaluated outside strip");
    if (t.imag() == 0.0) return radial<double>(0, t.real());
    return radial<cplx>(0, t);
}

cplx RadialCgf::eval(cplx t) const {
    if (fading_.kind() == FadingModel::Kind::unit && t.real() == 0.0) return eval_imag_unit(t.imag());
    return eval_quadrature(t);
}

// G(x) = int_0^x (e^{jy} - 1) y^(b-1) dy
cplx RadialCgf::g_unit(double x) const {
    if (x == 0.0) return 0.0;
    if (x <= c0_) {
        cplx sum = 0.0, term = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= J * x / static_cast<double>(k);
            const cplx add = term / (k + b_);
            sum += add;
            if (k > x && std::abs(add) <= 1e-17 * std::abs(sum)) break;
        }
        return sum * std::pow(x, b_);
    }
    // int_x^inf e^{jy} y^(b-1) dy = j e^{jx} int_0^inf e^{-u} (x + ju)^(b-1) du
    const double bm1 = b_ - 1.0;
    auto f = [x, bm1](double u) { return std::exp(-u) * std::pow(cplx(x, u), bm1); };
    quad::Options opt{0.0, 1e-13, 400, 60};
    const auto r = quad::integrate(f, 0.0, 60.0, opt);
    const cplx e_x = J * std::exp(J * x) * r.value;
    return g_c0_ + e_c0_ - e_x - (std::pow(x, b_) - std::pow(c0_, b_)) / b_;
}

cplx RadialCgf::eval_imag_unit(double tau) const {
    if (tau == 0.0) return 0.0;
    const double s = std::abs(tau), al = geom_.alpha, P = geom_.P, th = theta_;
    const double xa = s * P * std::pow(geom_.a, -al);
    const double xR = s * P * std::pow(geom_.R, -al);
    const double yR = th * xR;
    const double yW = std::isfinite(geom_.window) ? th * s * P * std::pow(geom_.window, -al) : 0.0;
    const cplx sig = std::pow(s * P, 2.0 / al) * (g_unit(xa) - g_unit(xR));
    const cplx intf = std::pow(th * s * P, 2.0 / al) * std::conj(g_unit(yR) - g_unit(yW));
    const cplx k = 2.0 * std::numbers::pi * geom_.lambda / al * (sig + intf);
    return tau > 0.0 ? k : std::conj(k);
}

double RadialCgf::deriv_closed(int n, double t) const {
    if (fading_.kind() != FadingModel::Kind::unit) throw CapabilityError("closed-form derivative needs unit gain");
    if (n < 1) throw ArgumentError("closed-form derivative needs n >= 1");
    if (!(t > 0.0)) throw StripError("closed-form derivative needs t > 0");
    const double al = geom_.alpha, P = geom_.P, th = theta_;
    const double b = n - 2.0 / al;
    const double xa = t * P * std::pow(geom_.a, -al);
    const double xR = t * P * std::pow(geom_.R, -al);
    const double yR = th * xR;
    const double yW = std::isfinite(geom_.window) ? th * t * P * std::pow(geom_.window, -al) : 0.0;
    const double tn = std::pow(t, -n);
    const double sig = std::pow(t * P, 2.0 / al) * tn *
                       (specfun::exp_power_integral(b, xa) - specfun::exp_power_integral(b, xR));
    const double low_W = yW > 0.0 ? specfun::inc_gamma_lower(b, yW) : 0.0;
    const double intf = ((n % 2 == 0) ? 1.0 : -1.0) * std::pow(th * t * P, 2.0 / al) * tn *
                        (specfun::inc_gamma_lower(b, yR) - low_W);
    return 2.0 * std::numbers::pi * geom_.lambda / al * (sig + intf);
}

CgfPtr case_b_cgf(const CaseBModel& model) {
    return std::make_shared<RadialCgf>(model.geom, model.theta, FadingModel::unit());
}

CgfPtr case_c_cgf(const CaseCModel& model) {
    return std::make_shared<RadialCgf>(model.geom, model.theta, model.fading);
}

} // namespace outage
