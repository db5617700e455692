#include "outage/cgf.hpp"

#include "outage/errors.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace outage {

// ---------------------------------------------------------------- Gaussian

GaussianCgf::GaussianCgf(double k1, double k2) : k1_(k1), k2_(k2) {
    if (!(k2 > 0.0)) throw ArgumentError("GaussianCgf: variance must be positive");
}

cplx GaussianCgf::eval(cplx t) const { return -k1_ * t + 0.5 * k2_ * t * t; }

double GaussianCgf::deriv(int n, double t) const {
    switch (n) {
    case 0: return -k1_ * t + 0.5 * k2_ * t * t;
    case 1: return -k1_ + k2_ * t;
    case 2: return k2_;
    case 3:
    case 4: return 0.0;
    default: throw ArgumentError("GaussianCgf::deriv: order must be 0..4");
    }
}

CumulantSet GaussianCgf::cumulants(int order) const {
    CumulantSet k;
    k.kappa.assign(order, 0.0);
    if (order >= 1) k.kappa[0] = k1_;
    if (order >= 2) k.kappa[1] = k2_;
    return k;
}

double GaussianCgf::scale() const { return 1.0 / std::sqrt(k2_); }

// ---------------------------------------------------------------- compound

cplx compound_cgf(const std::function<cplx(cplx)>& count_cgf,
                  const std::function<cplx(cplx)>& increment_cgf, cplx t) {
    return count_cgf(-increment_cgf(t));
}

cplx compound_poisson_cgf(double lambda, const FadingModel& g, cplx t) {
    return lambda * (g.tilted_moment(0, t) - 1.0);
}

cplx compound_binomial_cgf(int L, double p, const FadingModel& g, cplx t) {
    return static_cast<double>(L) * std::log((1.0 - p) + p * g.tilted_moment(0, t));
}

// ---------------------------------------------------------------- Case A

void CaseAModel::validate() const {
    if (fading.kind() != FadingModel::Kind::gamma) throw CapabilityError("case A needs gamma fading");
    if (!(theta > 0.0)) throw ArgumentError("case A: theta must be positive");
    switch (aggregation) {
    case Aggregation::poisson:
        if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) throw ArgumentError("case A: lambda1, lambda2 must be positive");
        break;
    case Aggregation::binomial:
        if (L < 1) throw ArgumentError("case A: L must be >= 1");
        if (!(p > 0.0 && p < 1.0)) throw ArgumentError("case A: p must lie in (0, 1)");
        break;
    case Aggregation::single:
        break;
    }
}

namespace {

// n-th derivative of log f from f and f', ..., f^(n) (Faa di Bruno).
double log_deriv(int n, double f0, const std::vector<double>& f) {
    const auto B = bell_table(n, f);
    double s = 0.0, fact = 1.0, fk = 1.0;
    for (int k = 1; k <= n; ++k) {
        if (k > 1) fact *= (k - 1);
        fk /= f0;
        s += ((k % 2 == 1) ? 1.0 : -1.0) * fact * fk * B[n][k];
    }
    return s;
}

class CaseACgf final : public CgfModel {
public:
    explicit CaseACgf(const CaseAModel& m) : m_(m) {
        m_.validate();
        beta_ = m_.fading.rate();
        shape_ = m_.fading.shape();
    }

    cplx eval(cplx t) const override {
        check(t.real());
        const auto& g = m_.fading;
        const double th = m_.theta;
        switch (m_.aggregation) {
        case CaseAModel::Aggregation::poisson:
            return compound_poisson_cgf(m_.lambda2, g, th * t) + compound_poisson_cgf(m_.lambda1, g, -t);
        case CaseAModel::Aggregation::binomial:
            // interferers ~ Bin(L, q), cooperating ~ Bin(L, p)
            return compound_binomial_cgf(m_.L, 1.0 - m_.p, g, th * t) +
                   compound_binomial_cgf(m_.L, m_.p, g, -t);
        case CaseAModel::Aggregation::single:
            return -shape_ * (std::log(1.0 + th * t / beta_) + std::log(1.0 - t / beta_));
        }
        return {};
    }

    double deriv(int n, double t) const override {
        if (n < 0 || n > 8) throw ArgumentError("case A deriv: order must be 0..8");
        check(t);
        if (n == 0) return eval(cplx(t, 0.0)).real();
        const double th = m_.theta;
        // M^(j)(s) = (-1)^j E[G^j e^{-sG}]
        auto mder = [&](int j, double s) {
            return ((j % 2 == 0) ? 1.0 : -1.0) * m_.fading.tilted_moment(j, s);
        };
        switch (m_.aggregation) {
        case CaseAModel::Aggregation::poisson: {
            const double sg = (n % 2 == 0) ? 1.0 : -1.0;
            return m_.lambda2 * std::pow(th, n) * mder(n, th * t) + m_.lambda1 * sg * mder(n, -t);
        }
        case CaseAModel::Aggregation::binomial: {
            const double p = m_.p, q = 1.0 - p;
            std::vector<double> fy(n), fx(n);
            for (int j = 1; j <= n; ++j) {
                fy[j - 1] = q * std::pow(th, j) * mder(j, th * t);
                fx[j - 1] = p * ((j % 2 == 0) ? 1.0 : -1.0) * mder(j, -t);
            }
            const double y0 = p + q * mder(0, th * t);
            const double x0 = q + p * mder(0, -t);
            return m_.L * (log_deriv(n, y0, fy) + log_deriv(n, x0, fx));
        }
        case CaseAModel::Aggregation::single: {
            double fact = 1.0;
            for (int j = 2; j < n; ++j) fact *= j;
            const double sg = (n % 2 == 1) ? 1.0 : -1.0;  // (-1)^(n-1)
            const double y = std::pow(th / beta_, n) * std::pow(1.0 + th * t / beta_, -n);
            const double x = std::pow(-1.0 / beta_, n) * std::pow(1.0 - t / beta_, -n);
            return -shape_ * sg * fact * (y + x);
        }
        }
        return 0.0;
    }

    Strip strip() const override { return {-beta_ / m_.theta, beta_}; }

    CumulantSet cumulants(int order) const override {
        const auto& g = m_.fading;
        const double th = m_.theta;
        std::vector<double> ky(order), kx(order);
        switch (m_.aggregation) {
        case CaseAModel::Aggregation::poisson:
            for (int n = 1; n <= order; ++n) {
                ky[n - 1] = m_.lambda2 * g.moment(n);
                kx[n - 1] = m_.lambda1 * g.moment(n);
            }
            break;
        case CaseAModel::Aggregation::binomial: {
            // per node: Bernoulli-thinned gain
            MomentSet my, mx;
            my.mu.assign(order + 1, 1.0);
            mx.mu.assign(order + 1, 1.0);
            for (int n = 1; n <= order; ++n) {
                my.mu[n] = (1.0 - m_.p) * g.moment(n);
                mx.mu[n] = m_.p * g.moment(n);
            }
            const auto cy = moments_to_cumulants(my), cx = moments_to_cumulants(mx);
            for (int n = 0; n < order; ++n) {
                ky[n] = m_.L * cy.kappa[n];
                kx[n] = m_.L * cx.kappa[n];
            }
            break;
        }
        case CaseAModel::Aggregation::single: {
            double fact = 1.0;
            for (int n = 1; n <= order; ++n) {
                if (n > 1) fact *= (n - 1);
                ky[n - 1] = kx[n - 1] = shape_ * fact * std::pow(beta_, -n);
            }
            break;
        }
        }
        CumulantSet k;
        for (int n = 1; n <= order; ++n) {
            k.kappa.push_back(std::pow(th, n) * ky[n - 1] + ((n % 2 == 0) ? 1.0 : -1.0) * kx[n - 1]);
        }
        return k;
    }

    std::optional<double> closed_form_saddle() const override { return case_a_saddle(m_).t_hat; }

    double scale() const override { return 1.0 / std::sqrt(cumulants(2).k(2)); }

    double atom(double omega) const override {
        if (omega != 0.0) return 0.0;
        switch (m_.aggregation) {
        case CaseAModel::Aggregation::poisson: return std::exp(-m_.lambda1 - m_.lambda2);
        case CaseAModel::Aggregation::binomial: return std::pow(m_.p * (1.0 - m_.p), m_.L);
        case CaseAModel::Aggregation::single: return 0.0;
        }
        return 0.0;
    }

    std::string name() const override {
        switch (m_.aggregation) {
        case CaseAModel::Aggregation::poisson: return "case_a_poisson";
        case CaseAModel::Aggregation::binomial: return "case_a_binomial";
        case CaseAModel::Aggregation::single: return "case_a_single";
        }
        return "case_a";
    }

private:
    void check(double re_t) const {
        if (!strip().contains(re_t)) {
            throw StripError("case A CGF evaluated outside its strip at t=" + std::to_string(re_t));
        }
    }

    CaseAModel m_;
    double beta_ = 1.0, shape_ = 1.0;
};

// Binomial saddle equation in x = t / beta:
// p^2 A^(m+1) + pq (A - theta B) - theta q^2 B^(m+1) = 0, A = 1 + theta x, B = 1 - x.
double binomial_saddle_x(double p, double theta, double m) {
    const double q = 1.0 - p;
    auto h = [&](double x) {
        const double A = 1.0 + theta * x, B = 1.0 - x;
        return p * p * std::pow(A, m + 1.0) + p * q * (A - theta * B) - theta * q * q * std::pow(B, m + 1.0);
    };
    auto dh = [&](double x) {
        const double A = 1.0 + theta * x, B = 1.0 - x;
        return p * p * (m + 1.0) * theta * std::pow(A, m) + 2.0 * p * q * theta +
               theta * q * q * (m + 1.0) * std::pow(B, m);
    };
    double lo = -1.0 / theta, hi = 1.0;
    double x = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double v = h(x);
        if (v == 0.0) return x;
        if (v < 0.0) lo = x; else hi = x;
        double nx = x - v / dh(x);
        if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
        if (std::abs(nx - x) <= 1e-16 * std::max(1.0, std::abs(x))) return nx;
        x = nx;
    }
    return x;
}

} // namespace

CgfPtr case_a_cgf(const CaseAModel& model) { return std::make_shared<CaseACgf>(model); }

SaddleSolution case_a_saddle(const CaseAModel& m) {
    m.validate();
    const double beta = m.fading.rate(), shape = m.fading.shape(), th = m.theta;
    double t = 0.0;
    SaddleMethod method = SaddleMethod::closed_form;
    switch (m.aggregation) {
    case CaseAModel::Aggregation::poisson: {
        const double r = std::pow(th * m.lambda2 / m.lambda1, 1.0 / (shape + 1.0));
        t = beta * (r - 1.0) / (r + th);
        break;
    }
    case CaseAModel::Aggregation::single:
        t = beta * (th - 1.0) / (2.0 * th);
        break;
    case CaseAModel::Aggregation::binomial: {
        const double p = m.p, q = 1.0 - p;
        if (shape == 1.0) {
            // theta(theta p^2 - q^2) x^2 + 2 theta (1 - pq) x + (p - theta q) = 0
            const double A2 = th * (th * p * p - q * q);
            const double A1 = 2.0 * th * (1.0 - p * q);
            const double A0 = p - th * q;
            double x;
            if (std::abs(A2) < 1e-14 * A1) {
                x = -A0 / A1;
            } else {
                const double disc = std::sqrt(A1 * A1 - 4.0 * A2 * A0);
                const double qq = -0.5 * (A1 + std::copysign(disc, A1));
                const double r1 = qq / A2, r2 = A0 / qq;
                x = (r1 > -1.0 / th && r1 < 1.0) ? r1 : r2;
            }
            t = beta * x;
        } else {
            t = beta * binomial_saddle_x(p, th, shape);
            method = SaddleMethod::numeric;
        }
        break;
    }
    }
    if (!(t > -beta / th && t < beta)) throw SaddleError("case A saddle point left the strip");
    return {t, method};
}

} // namespace outage
