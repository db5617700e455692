#include "outage/spa.hpp"

#include "outage/errors.hpp"
#include "outage/quadrature.hpp"
#include "outage/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace outage {

std::string to_string(BaseKind k) {
    switch (k) {
    case BaseKind::normal: return "normal";
    case BaseKind::chi_square: return "chisq";
    case BaseKind::inverse_gaussian: return "ig";
    case BaseKind::nig: return "nig";
    }
    return "unknown";
}

namespace {

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

// Laplace-convention derivative with a finite-difference fallback for n = 3, 4.
double laplace_deriv(const CgfModel& cgf, int n, double t, bool& reduced) {
    try {
        return cgf.deriv(n, t);
    } catch (const ArgumentError&) {
        if (n < 3) throw;
    }
    reduced = true;
    const double h = 1e-3 * cgf.scale();
    const double lo = cgf.deriv(n - 2, t - h), mid = cgf.deriv(n - 2, t), hi = cgf.deriv(n - 2, t + h);
    return (hi - 2.0 * mid + lo) / (h * h);
}

} // namespace

SaddleContext solve_saddle(const CgfModel& cgf, double omega) {
    const Strip st = cgf.strip();
    // forward variable s = -t, so the s-strip is (-hi, -lo)
    const double eps = std::isfinite(st.width()) ? 1e-9 * st.width() : 0.0;
    double s_lo = -st.hi + eps, s_hi = -st.lo - eps;
    auto kf1 = [&](double s) { return -cgf.deriv(1, -s); };
    auto kf2 = [&](double s) { return cgf.deriv(2, -s); };

    const double k1 = kf1(0.0);
    const double sd = std::sqrt(kf2(0.0));
    const double tol = 1e-10 * std::max(std::abs(omega), sd);

    double s = std::numeric_limits<double>::quiet_NaN();
    if (omega == 0.0) {
        if (auto t = cgf.closed_form_saddle()) {
            const double cand = -*t;
            if (std::abs(kf1(cand) - omega) <= tol) s = cand;
        }
    }

    if (std::isnan(s)) {
        s = std::clamp((omega - k1) / (sd * sd), std::isfinite(s_lo) ? s_lo : -kInf,
                       std::isfinite(s_hi) ? s_hi : kInf);
        // Bracket the root; infinite sides are expanded geometrically.
        double a = s, b = s;
        double fa = kf1(a) - omega;
        if (fa == 0.0) {
            b = a;
        } else {
            double step = 1.0 / sd;
            const double dir = fa < 0.0 ? 1.0 : -1.0;
            double fb = fa;
            for (int i = 0; i < 200 && sgn(fb) == sgn(fa); ++i) {
                double nb = b + dir * step;
                if (dir > 0 && nb >= s_hi) nb = std::isfinite(s_hi) ? s_hi : nb;
                if (dir < 0 && nb <= s_lo) nb = std::isfinite(s_lo) ? s_lo : nb;
                if (nb == b) break;
                a = b;
                fa = fb;
                b = nb;
                fb = kf1(b) - omega;
                step *= 2.0;
            }
            if (sgn(fb) == sgn(fa) && fb != 0.0) {
                throw SaddleError("solve_saddle: omega outside the range of K'(s) on the strip");
            }
            if (a > b) std::swap(a, b);
        }
        // safeguarded Newton inside [a, b]
        for (int it = 0; it < 200; ++it) {
            const double g = kf1(s) - omega;
            if (g == 0.0) break;
            if (g < 0.0) a = std::max(a, s); else b = std::min(b, s);
            double ns = s - g / kf2(s);
            if (!(ns > a && ns < b)) ns = 0.5 * (a + b);
            const double ds = std::abs(ns - s);
            s = ns;
            if (ds <= 4e-16 * std::abs(s) || ds == 0.0 || b - a <= 4e-16 * std::abs(s)) break;
        }
    }

    SaddleContext ctx;
    ctx.omega = omega;
    ctx.s_hat = s;
    ctx.residual = kf1(s) - omega;
    if (std::abs(ctx.residual) > tol) {
        throw SaddleError("solve_saddle: residual " + std::to_string(ctx.residual) + " above tolerance");
    }
    ctx.c = std::max(0.0, s * omega - cgf.deriv(0, -s));
    bool reduced = false;
    ctx.k2 = laplace_deriv(cgf, 2, -s, reduced);
    ctx.k3 = -laplace_deriv(cgf, 3, -s, reduced);
    ctx.k4 = laplace_deriv(cgf, 4, -s, reduced);
    ctx.reduced_order = reduced;
    ctx.eta = ctx.k3 * ctx.k3 / (ctx.k2 * ctx.k2 * ctx.k2);
    ctx.rho = ctx.k4 / (ctx.k2 * ctx.k2);
    return ctx;
}

namespace {

SaddleContext reflect(const SaddleContext& c) {
    SaddleContext r = c;
    r.omega = -c.omega;
    r.s_hat = -c.s_hat;
    r.k3 = -c.k3;
    return r;
}

BaseDistribution params_oriented(const SaddleContext& ctx, BaseKind kind) {
    BaseDistribution b;
    b.kind = kind;
    const double s = ctx.s_hat, c = ctx.c;
    switch (kind) {
    case BaseKind::normal:
        b.z_hat = sgn(s) * std::sqrt(2.0 * c);
        b.s_breve = b.z_hat;
        b.L2 = 1.0;
        break;
    case BaseKind::chi_square: {
        if (!(ctx.eta > 1e-8)) throw CapabilityError("chi-square base: skewness too small (Gaussian limit)");
        const double a = 8.0 / ctx.eta;
        double z = a;
        if (s != 0.0) {
            const double arg = -std::exp(-2.0 * c / a - 1.0);
            const auto br = s < 0.0 ? specfun::WBranch::principal : specfun::WBranch::lower;
            z = -a * specfun::lambert_w(arg, br);
        }
        b.alpha = a;
        b.z_hat = z;
        b.s_breve = 0.5 * (1.0 - a / z);
        b.L2 = 2.0 * z * z / a;
        break;
    }
    case BaseKind::inverse_gaussian: {
        if (!(ctx.eta > 1e-8)) throw CapabilityError("inverse-Gaussian base: skewness too small (Gaussian limit)");
        const double z = ctx.eta / 9.0;
        const double root = std::sqrt(2.0 * c * z);
        double mu = z;
        if (s > 0.0) {
            mu = z / (1.0 + root);
        } else if (s < 0.0) {
            if (!(root < 1.0)) throw CapabilityError("inverse-Gaussian base: lower tail beyond the base support");
            mu = z / (1.0 - root);
        }
        b.mu = mu;
        b.z_hat = z;
        b.s_breve = 0.5 * (1.0 / (mu * mu) - 1.0 / (z * z));
        b.L2 = z * z * z;
        break;
    }
    case BaseKind::nig: {
        const double eta = ctx.eta, rho = ctx.rho;
        if (!(rho > 0.0) || !(3.0 * rho > 5.0 * eta)) {
            throw CapabilityError("NIG base: needs 3 rho > 5 eta");
        }
        const double z = eta > 0.0 ? sgn(ctx.k3) / std::sqrt(3.0 * rho / eta - 5.0) : 0.0;
        const double a = 9.0 / std::sqrt((3.0 * rho - 5.0 * eta) * (3.0 * rho - 4.0 * eta));
        const double q = std::sqrt(1.0 + z * z);
        const double ep = a * q - c;
        const double disc = c * (2.0 * a * q - c);
        if (disc < 0.0) throw CapabilityError("NIG base: Legendre-Fenchel value beyond the base range");
        const double sq = std::sqrt(disc);
        bool found = false;
        for (double sign : {1.0, -1.0}) {
            const double beta = (ep * z + sign * sq) / (q * q);
            const double gam = ep - beta * z;
            const double sb = -beta + a * z / q;
            if (!(std::abs(beta) < a) || !(gam > 0.0)) continue;
            if (s != 0.0 && sgn(sb) != sgn(s) && std::abs(sb) > 1e-14 * a) continue;
            b.alpha = a;
            b.beta = beta;
            b.z_hat = z;
            b.s_breve = sb;
            b.L2 = q * q * q / a;
            b.d = std::sqrt(a * a - beta * beta) - c;
            b.e = c + a * q;
            found = true;
            break;
        }
        if (!found) throw CapabilityError("NIG base: no admissible beta");
        break;
    }
    }
    return b;
}

double base_cdf(const BaseDistribution& b) {
    const double z = b.z_hat;
    switch (b.kind) {
    case BaseKind::normal:
        return specfun::normal_cdf(z);
    case BaseKind::chi_square:
        return specfun::gamma_p(0.5 * b.alpha, 0.5 * z);
    case BaseKind::inverse_gaussian: {
        const double r = std::sqrt(1.0 / z);
        const double t1 = specfun::normal_cdf(r * (z / b.mu - 1.0));
        const double t2 = std::exp(2.0 / b.mu + specfun::log_normal_cdf(-r * (z / b.mu + 1.0)));
        return t1 + t2;
    }
    case BaseKind::nig:
        return nig_cdf(z, b.alpha, b.beta);
    }
    return 0.0;
}

double base_pdf(const BaseDistribution& b) {
    const double z = b.z_hat;
    switch (b.kind) {
    case BaseKind::normal:
        return specfun::normal_pdf(z);
    case BaseKind::chi_square: {
        const double h = 0.5 * b.alpha;
        return std::exp((h - 1.0) * std::log(z) - 0.5 * z - h * std::log(2.0) - specfun::log_gamma(h));
    }
    case BaseKind::inverse_gaussian: {
        const double dz = z - b.mu;
        return std::exp(-dz * dz / (2.0 * b.mu * b.mu * z)) / std::sqrt(2.0 * std::numbers::pi * z * z * z);
    }
    case BaseKind::nig:
        return nig_pdf(z, b.alpha, b.beta);
    }
    return 0.0;
}

struct Cdf {
    double value;
    bool clamped;
};

Cdf wbb_raw(const SaddleContext& ctx, const BaseDistribution& base) {
    if (base.reflected) {
        const auto r = wbb_raw(reflect(ctx), [&] {
            BaseDistribution b = base;
            b.reflected = false;
            return b;
        }());
        return {1.0 - r.value, r.clamped};
    }
    double F;
    if (std::sqrt(2.0 * ctx.c) < 1e-4 || ctx.s_hat == 0.0) {
        F = 0.5 + ctx.k3 / (6.0 * std::sqrt(2.0 * std::numbers::pi) * std::pow(ctx.k2, 1.5));
    } else {
        const double u = ctx.s_hat * std::sqrt(ctx.k2 / base.L2);
        F = base_cdf(base) + base_pdf(base) * (1.0 / base.s_breve - 1.0 / u);
    }
    if (F < 0.0 || F > 1.0) return {std::clamp(F, 0.0, 1.0), true};
    return {F, false};
}

} // namespace

BaseDistribution base_params(const SaddleContext& ctx, BaseKind kind) {
    const bool skew_base = kind == BaseKind::chi_square || kind == BaseKind::inverse_gaussian;
    if (skew_base && ctx.k3 < 0.0) {
        BaseDistribution b = params_oriented(reflect(ctx), kind);
        b.reflected = true;
        return b;
    }
    return params_oriented(ctx, kind);
}

double wbb_cdf(const SaddleContext& ctx, const BaseDistribution& base) {
    // Near the mean, use the limit value with the unreflected context.
    if (std::sqrt(2.0 * ctx.c) < 1e-4 || ctx.s_hat == 0.0) {
        const double F = 0.5 + ctx.k3 / (6.0 * std::sqrt(2.0 * std::numbers::pi) * std::pow(ctx.k2, 1.5));
        return std::clamp(F, 0.0, 1.0);
    }
    return wbb_raw(ctx, base).value;
}

namespace {

Method method_of(BaseKind k) {
    switch (k) {
    case BaseKind::normal: return Method::spa_normal;
    case BaseKind::chi_square: return Method::spa_chisq;
    case BaseKind::inverse_gaussian: return Method::spa_ig;
    case BaseKind::nig: return Method::spa_nig;
    }
    return Method::spa_normal;
}

// F at omega away from the mean, with the fallback ladder.
Cdf spa_cdf(const SaddleContext& ctx, BaseKind kind, Diagnostics& diag) {
    BaseDistribution base;
    try {
        base = base_params(ctx, kind);
    } catch (const CapabilityError& e) {
        diag.notes.push_back(std::string("fallback to normal base: ") + e.what());
        base = base_params(ctx, BaseKind::normal);
    }
    diag.base = to_string(base.kind);
    if (base.reflected) diag.notes.push_back("negative skew: base applied to -Omega");
    return wbb_raw(ctx, base);
}

} // namespace

OutageResult outage_spa(const CgfModel& cgf, double eval_point, BaseKind kind) {
    OutageResult res;
    res.method = method_of(kind);
    const SaddleContext ctx = solve_saddle(cgf, eval_point);
    res.diag.saddle = ctx.s_hat;
    res.diag.lf_value = ctx.c;
    res.diag.err_estimate = std::abs(ctx.residual);
    if (ctx.reduced_order) res.diag.notes.push_back("k3/k4 by finite differences");

    Cdf F;
    constexpr double patch = 1e-3;
    if (std::sqrt(2.0 * ctx.c) < patch) {
        // Interpolate between the analytic value at the mean and a point just
        // outside the patch, where the WBB formula is numerically safe.
        const double k1 = -cgf.deriv(1, 0.0);
        const double k2 = cgf.deriv(2, 0.0);
        const double k3 = -cgf.deriv(3, 0.0);
        const double sd = std::sqrt(k2);
        const double f_mean = 0.5 + k3 / (6.0 * std::sqrt(2.0 * std::numbers::pi) * std::pow(k2, 1.5));
        const double dir = eval_point >= k1 ? 1.0 : -1.0;
        const double w_b = k1 + dir * 2.0 * patch * sd;
        const auto ctx_b = solve_saddle(cgf, w_b);
        const Cdf Fb = spa_cdf(ctx_b, kind, res.diag);
        const double w = (eval_point - k1) / (w_b - k1);
        F = {f_mean + w * (Fb.value - f_mean), Fb.clamped};
        res.diag.notes.push_back("near-mean patch");
    } else {
        F = spa_cdf(ctx, kind, res.diag);
    }
    res.diag.clamped = F.clamped;
    if (F.clamped) res.diag.notes.push_back("result clamped to [0,1]");
    res.p_out = 1.0 - F.value;
    return res;
}

double nig_pdf(double x, double alpha, double beta) {
    const double q = std::sqrt(1.0 + x * x);
    const double y = alpha * q;
    const double gam = std::sqrt(alpha * alpha - beta * beta);
    const double logf = std::log(alpha / std::numbers::pi) + gam + beta * x - y +
                        std::log(specfun::bessel_k1_scaled(y)) - std::log(q);
    return std::exp(logf);
}

double nig_cdf(double x, double alpha, double beta) {
    if (!(alpha > 0.0) || !(std::abs(beta) < alpha)) throw DomainError("nig_cdf: need |beta| < alpha");
    const double gam = std::sqrt(alpha * alpha - beta * beta);
    const double mean = beta / gam;
    const double sd = std::sqrt(alpha * alpha / (gam * gam * gam));
    quad::Options opt{1e-12, 1e-10, 2000, 60};
    if (x <= mean) {
        auto f = [&](double y) { return nig_pdf(x - y, alpha, beta); };
        return quad::integrate_to_inf(f, 0.0, sd, opt).value;
    }
    auto f = [&](double y) { return nig_pdf(x + y, alpha, beta); };
    return 1.0 - quad::integrate_to_inf(f, 0.0, sd, opt).value;
}

} // namespace outage
