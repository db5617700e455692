#include "outage/charlier.hpp"

#include "outage/errors.hpp"
#include "outage/quadrature.hpp"
#include "outage/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace outage {

double Polynomial::operator()(double x) const {
    double s = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) s = s * x + *it;
    return s;
}

Polynomial Polynomial::derivative() const {
    Polynomial d;
    if (coeffs.size() <= 1) {
        d.coeffs = {0.0};
        return d;
    }
    d.coeffs.resize(coeffs.size() - 1);
    for (std::size_t i = 1; i < coeffs.size(); ++i) d.coeffs[i - 1] = static_cast<double>(i) * coeffs[i];
    return d;
}

Polynomial Polynomial::monic() const {
    Polynomial m = *this;
    const double l = lead();
    for (auto& c : m.coeffs) c /= l;
    return m;
}

namespace {

Polynomial mul(const Polynomial& p, const Polynomial& q) {
    Polynomial r;
    r.coeffs.assign(p.coeffs.size() + q.coeffs.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.coeffs.size(); ++i)
        for (std::size_t j = 0; j < q.coeffs.size(); ++j) r.coeffs[i + j] += p.coeffs[i] * q.coeffs[j];
    return r;
}

Polynomial add(const Polynomial& p, const Polynomial& q, double b = 1.0) {
    Polynomial r;
    r.coeffs.assign(std::max(p.coeffs.size(), q.coeffs.size()), 0.0);
    for (std::size_t i = 0; i < p.coeffs.size(); ++i) r.coeffs[i] += p.coeffs[i];
    for (std::size_t i = 0; i < q.coeffs.size(); ++i) r.coeffs[i] += b * q.coeffs[i];
    while (r.coeffs.size() > 1 && r.coeffs.back() == 0.0) r.coeffs.pop_back();
    return r;
}

Polynomial shift_x(const Polynomial& p) {  // x p(x)
    Polynomial r;
    r.coeffs.assign(p.coeffs.size() + 1, 0.0);
    for (std::size_t i = 0; i < p.coeffs.size(); ++i) r.coeffs[i + 1] = p.coeffs[i];
    return r;
}

const quad::Options kQuadOpt{0.0, 1e-13, 4000, 60};

// int p(x) w(x) dx over the real line.
double weighted_integral(const OrthogonalSystem& sys, const Polynomial& p) {
    if (sys.family == OrthogonalSystem::Family::hermite) {
        auto f = [&](double x) { return (p(x) + p(-x)) * specfun::normal_pdf(x); };
        return quad::integrate_to_inf(f, 0.0, 2.0, kQuadOpt).value;
    }
    if (sys.family == OrthogonalSystem::Family::krishnamoorthy) {
        // x = sqrt(v) tan(phi): dx w(x) = sqrt(v) cos^(v-1)(phi) dphi
        const double v = sys.v, sv = std::sqrt(v);
        auto f = [&](double phi) {
            const double s = std::sin(phi), c = std::cos(phi);
            double acc = 0.0;
            for (int i = p.degree(); i >= 0; --i) {
                if (p.coeffs[i] == 0.0) continue;
                acc += p.coeffs[i] * std::pow(sv, i) * std::pow(s, i) * std::pow(c, v - 1.0 - i);
            }
            return sv * acc;
        };
        const double h = 0.5 * std::numbers::pi;
        return quad::integrate(f, -h, h, kQuadOpt).value;
    }
    throw CapabilityError("weighted_integral: no weight available for a general Pearson system");
}

} // namespace

double OrthogonalSystem::weight(double x) const {
    switch (family) {
    case Family::hermite: return specfun::normal_pdf(x);
    case Family::krishnamoorthy: return std::pow(1.0 + x * x / v, -(v + 1.0) / 2.0);
    case Family::pearson: break;
    }
    throw CapabilityError("OrthogonalSystem::weight: not available for a general Pearson system");
}

OrthogonalSystem hermite_system(int max_order) {
    if (max_order < 0) throw ArgumentError("hermite_system: max_order must be >= 0");
    OrthogonalSystem s;
    s.family = OrthogonalSystem::Family::hermite;
    s.polys.push_back({{1.0}});
    s.norms.push_back(1.0);
    if (max_order >= 1) {
        s.polys.push_back({{0.0, 1.0}});
        s.norms.push_back(1.0);
    }
    for (int n = 1; n < max_order; ++n) {
        s.polys.push_back(add(shift_x(s.polys[n]), s.polys[n - 1], -static_cast<double>(n)));
        s.norms.push_back(s.norms.back() * (n + 1));
    }
    return s;
}

double krishnamoorthy_norm_formula(int v, int n) {
    const double lg = (1.0 - v + 2.0 * n) * std::log(2.0) + std::log(std::numbers::pi) + 0.5 * std::log(double(v)) -
                      std::log(double(v - 2 * n)) + specfun::log_gamma(n + 1.0) + specfun::log_gamma(v - n + 1.0) -
                      2.0 * specfun::log_gamma((v + 1.0) / 2.0 - n);
    return std::exp(lg);
}

OrthogonalSystem krishnamoorthy_system(int v, int max_order) {
    if (v < 5) throw ArgumentError("krishnamoorthy_system: v must be >= 5");
    int top = (v - 1) / 2;
    if (max_order >= 0) top = std::min(top, max_order);
    OrthogonalSystem s;
    s.family = OrthogonalSystem::Family::krishnamoorthy;
    s.v = v;
    const double dv = v;
    s.polys.push_back({{1.0}});
    if (top >= 1) s.polys.push_back({{0.0, 1.0}});
    for (int n = 1; n < top; ++n) {
        const double g = n * dv * (dv - n + 1.0) / ((dv - 2.0 * n) * (dv - 2.0 * n + 2.0));
        s.polys.push_back(add(shift_x(s.polys[n]), s.polys[n - 1], -g));
    }
    for (int n = 0; n <= top; ++n) {
        const double cq = weighted_integral(s, mul(s.polys[n], s.polys[n]));
        const double cf = krishnamoorthy_norm_formula(v, n);
        if (std::abs(cf - cq) > 1e-6 * std::abs(cq)) {
            std::ostringstream os;
            os << "krishnamoorthy v=" << v << ": norm C_" << n << " formula " << cf << " vs quadrature " << cq
               << ", using quadrature";
            s.warnings.push_back(os.str());
        }
        s.norms.push_back(cq);
    }
    return s;
}

OrthogonalSystem pearson_orthopoly(double a0, double a1, double b0, double b1, double b2, int max_order) {
    if (max_order < 1) throw ArgumentError("pearson_orthopoly: max_order must be >= 1");
    OrthogonalSystem s;
    s.family = OrthogonalSystem::Family::pearson;
    s.pearson = {a0, a1, b0, b1, b2};
    const Polynomial D{{b0, b1, b2}};
    s.polys.push_back({{1.0}});
    s.polys.push_back({{a0 + b1, a1 + 2.0 * b2}});
    if (a1 + 2.0 * b2 == 0.0) throw ArgumentError("pearson_orthopoly: degenerate parameters (a1 + 2 b2 = 0)");
    for (int n = 1; n < max_order; ++n) {
        const Polynomial tau_n{{a0 + b1 + n * b1, a1 + 2.0 * b2 + 2.0 * n * b2}};
        const double dtau_n = tau_n.coeffs[1];
        const double lambda_n = -n * (a1 + 2.0 * b2) - n * (n - 1.0) * b2;
        if (lambda_n == 0.0) throw ArgumentError("pearson_orthopoly: degenerate eigenvalue");
        const Polynomial& y = s.polys[n];
        s.polys.push_back(add(mul(tau_n, y), mul(D, y.derivative()), -n * dtau_n / lambda_n));
    }
    return s;
}

double inner_product(const OrthogonalSystem& sys, int m, int n) {
    return weighted_integral(sys, mul(sys.polys.at(m), sys.polys.at(n)));
}

double orthogonality_residual(const OrthogonalSystem& sys) {
    double worst = 0.0;
    const int top = sys.max_degree();
    std::vector<double> c(top + 1);
    for (int n = 0; n <= top; ++n) c[n] = inner_product(sys, n, n);
    for (int m = 0; m <= top; ++m)
        for (int n = m + 1; n <= top; ++n)
            worst = std::max(worst, std::abs(inner_product(sys, m, n)) / std::sqrt(c[m] * c[n]));
    return worst;
}

std::vector<double> orthogonal_moments(const OrthogonalSystem& sys, const MomentSet& moments) {
    if (sys.norms.size() != sys.polys.size()) throw ArgumentError("orthogonal_moments: system has no norms");
    if (moments.order() < sys.max_degree()) {
        throw ArgumentError("orthogonal_moments: need moments through order " + std::to_string(sys.max_degree()));
    }
    std::vector<double> a(sys.polys.size());
    for (std::size_t k = 0; k < sys.polys.size(); ++k) {
        double s = 0.0;
        const auto& p = sys.polys[k].coeffs;
        for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * moments.mu[i];
        a[k] = s / sys.norms[k];
    }
    return a;
}

std::vector<double> hermite_incomplete_moments(double w, int nmax, bool upper) {
    if (nmax < 0) throw ArgumentError("hermite_incomplete_moments: nmax must be >= 0");
    // Recurrence runs on the tail away from the bulk; the other side is the complement.
    const bool tail_upper = w >= 0.0;
    const double sg = tail_upper ? 1.0 : -1.0;
    const double pdf = std::isfinite(w) ? specfun::normal_pdf(w) : 0.0;
    std::vector<double> I(nmax + 1);
    I[0] = specfun::normal_cdf(-std::abs(w));
    if (nmax >= 1) I[1] = sg * pdf;
    double wp = std::isfinite(w) ? w : 0.0;  // w^(n-1)
    for (int n = 2; n <= nmax; ++n) {
        I[n] = sg * wp * pdf + (n - 1) * I[n - 2];
        wp *= w;
    }
    if (tail_upper == upper) return I;
    double full = 1.0;  // (n-1)!! for even n
    for (int n = 0; n <= nmax; ++n) {
        if (n % 2 == 0 && n > 0) full *= n - 1;
        I[n] = (n % 2 ? 0.0 : full) - I[n];
    }
    return I;
}

namespace {

double t_full_moment(int n, int v) {  // int x^n (1+x^2/v)^(-(v+1)/2) dx, n < v
    if (n % 2) return 0.0;
    const int k = n / 2;
    return std::pow(double(v), k + 0.5) * specfun::beta_fn(k + 0.5, v / 2.0 - k);
}

} // namespace

std::vector<double> t_incomplete_moments(double w, int v, int nmax, bool upper) {
    if (v < 2) throw ArgumentError("t_incomplete_moments: v must be >= 2");
    if (nmax >= v) throw ArgumentError("t_incomplete_moments: moments of order >= v diverge");
    const double dv = v;
    // Recurrence runs on the tail away from the bulk; the other side is the complement.
    const bool tail_upper = w >= 0.0;
    const double c0 = t_full_moment(0, v);
    std::vector<double> T(nmax + 1);
    const double U = std::isfinite(w) ? std::pow(1.0 + w * w / dv, -(dv - 1.0) / 2.0) : 0.0;
    const double tail = std::isfinite(w) ? 0.5 * specfun::inc_beta_reg(dv / 2.0, 0.5, dv / (dv + w * w)) : 0.0;
    // T_n = int over the tail on the side of w (upper if w >= 0) of x^n u(x) dx
    const double sg = tail_upper ? 1.0 : -1.0;
    T[0] = c0 * tail;
    if (nmax >= 1) T[1] = sg * dv / (dv - 1.0) * U;
    double wp = std::isfinite(w) ? w : 0.0;
    for (int n = 2; n <= nmax; ++n) {
        T[n] = (sg * dv * wp * U + dv * (n - 1.0) * T[n - 2]) / (dv - n);
        wp *= w;
    }
    if (tail_upper == upper) return T;
    for (int n = 0; n <= nmax; ++n) T[n] = t_full_moment(n, v) - T[n];
    return T;
}

int t_dof_from_kurtosis(double ex_kurt) {
    if (!(ex_kurt > 0.0)) {
        throw CapabilityError("Student-t base needs positive excess kurtosis; use charlier:hermite");
    }
    const double v = 6.0 / ex_kurt + 4.0;
    if (v > 1e6) return 1000000;
    return std::max(5, static_cast<int>(std::lround(v)));
}

namespace {

// Standardized moments of (Omega - k1) scale / sqrt(k2).
MomentSet standardized_moments(const CumulantSet& k, int order, double scale) {
    if (k.order() < order) throw ArgumentError("charlier: need cumulants through order " + std::to_string(order));
    const double k2 = k.k(2);
    if (!(k2 > 0.0)) throw DomainError("charlier: non-positive variance");
    CumulantSet s;
    s.kappa.resize(order);
    const double sd = std::sqrt(k2);
    for (int n = 1; n <= order; ++n) {
        s.kappa[n - 1] = n == 1 ? 0.0 : k.k(n) * std::pow(scale / sd, n);
    }
    return cumulants_to_moments(s);
}

MomentSet truncate(const MomentSet& m, int order) {
    if (m.order() < order) throw ArgumentError("charlier: need moments through order " + std::to_string(order));
    MomentSet r;
    r.mu.assign(m.mu.begin(), m.mu.begin() + order + 1);
    return r;
}

double series_tail(const OrthogonalSystem& sys, const std::vector<double>& a, const std::vector<double>& U) {
    double p = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const auto& c = sys.polys[k].coeffs;
        double s = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * U[i];
        p += a[k] * s;
    }
    return p;
}

double min_density(const OrthogonalSystem& sys, const std::vector<double>& a) {
    double m = kInf;
    for (int i = 0; i <= 240; ++i) {
        const double x = -6.0 + 0.05 * i;
        double s = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * sys.polys[k](x);
        m = std::min(m, s * sys.weight(x));
    }
    return m;
}

void finish(OutageResult& res, double raw) {
    res.p_out = std::clamp(raw, 0.0, 1.0);
    if (raw != res.p_out) {
        res.diag.clamped = true;
        res.diag.notes.push_back("result clamped to [0,1]");
    }
    if (res.diag.min_density && *res.diag.min_density < 0.0) {
        res.diag.notes.push_back("reconstructed density is negative somewhere on [-6, 6]");
    }
}

} // namespace

OutageResult outage_hermite(const MomentSet& moments, double eval_point, int max_order, CharlierMode mode) {
    if (max_order < 2 || max_order > 16) throw ArgumentError("outage_hermite: max_order must lie in [2, 16]");
    if (moments.order() < max_order) {
        throw ArgumentError("outage_hermite: need moments through order " + std::to_string(max_order));
    }
    MomentSet mu;
    double w = eval_point;
    if (mode == CharlierMode::standardized) {
        const CumulantSet k = moments_to_cumulants(truncate(moments, max_order));
        mu = standardized_moments(k, max_order, 1.0);
        w = (eval_point - k.k(1)) / std::sqrt(k.k(2));
    } else {
        mu = truncate(moments, max_order);
    }
    const auto sys = hermite_system(max_order);
    const auto a = orthogonal_moments(sys, mu);
    const auto U = hermite_incomplete_moments(w, max_order, true);

    OutageResult res;
    res.method = Method::charlier_hermite;
    res.diag.order = max_order;
    res.diag.base = "hermite";
    res.diag.min_density = min_density(sys, a);
    if (mode == CharlierMode::paper_literal) res.diag.notes.push_back("paper-literal: raw moments on N(0,1)");
    finish(res, series_tail(sys, a, U));
    return res;
}

OutageResult outage_hermite(const CumulantSet& k, double eval_point, int max_order, CharlierMode mode) {
    return outage_hermite(cumulants_to_moments(k), eval_point, max_order, mode);
}

OutageResult outage_krishnamoorthy(const MomentSet& moments, const CumulantSet& cumulants, double eval_point,
                                   CharlierMode mode) {
    const int v = t_dof_from_kurtosis(cumulants.ex_kurtosis());
    const int avail = mode == CharlierMode::standardized ? cumulants.order() : moments.order();
    const int K = std::min((v - 1) / 2, avail);
    if (K < 2) throw ArgumentError("outage_krishnamoorthy: need at least two moments");
    const auto sys = krishnamoorthy_system(v, K);

    MomentSet mu;
    double w = eval_point;
    if (mode == CharlierMode::standardized) {
        // match the base variance v/(v-2) as well as the mean
        const double scale = std::sqrt(v / (v - 2.0));
        mu = standardized_moments(cumulants, K, scale);
        w = scale * (eval_point - cumulants.k(1)) / std::sqrt(cumulants.k(2));
    } else {
        mu = truncate(moments, K);
    }
    const auto a = orthogonal_moments(sys, mu);
    const auto U = t_incomplete_moments(w, v, K, true);

    OutageResult res;
    res.method = Method::charlier_t;
    res.diag.order = K;
    res.diag.base = "t(v=" + std::to_string(v) + ")";
    res.diag.min_density = min_density(sys, a);
    res.diag.notes = sys.warnings;
    if (mode == CharlierMode::paper_literal) res.diag.notes.push_back("paper-literal: raw moments on t base");
    finish(res, series_tail(sys, a, U));
    return res;
}

OutageResult outage_krishnamoorthy(const CumulantSet& k, double eval_point, CharlierMode mode) {
    return outage_krishnamoorthy(cumulants_to_moments(k), k, eval_point, mode);
}

} // namespace outage
