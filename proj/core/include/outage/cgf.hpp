#pragma once

// CGF models of Omega = theta*Y - X in the Laplace convention
// K(t) = log E[exp(-t Omega)], so deriv(n, 0) = (-1)^n kappa_n(Omega).

#include "outage/cumulants.hpp"

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace outage {

using cplx = std::complex<double>;

struct Strip {
    double lo;  // may be -inf
    double hi;  // may be +inf
    bool contains(double t) const { return t > lo && t < hi; }
    double width() const { return hi - lo; }
};

class CgfModel {
public:
    virtual ~CgfModel() = default;

    virtual cplx eval(cplx t) const = 0;
    // n = 0..4; n = 0 is the real value K(t).
    virtual double deriv(int n, double t) const = 0;
    virtual Strip strip() const = 0;
    virtual CumulantSet cumulants(int order) const = 0;
    // Root of K'(t) = 0 when the model has one in closed form.
    virtual std::optional<double> closed_form_saddle() const { return std::nullopt; }
    // False when deriv() goes through quadrature (accuracy ~1e-12 relative).
    virtual bool exact_derivatives() const { return true; }
    // P(Omega = omega); non-zero only where empty point sets give Omega = 0.
    virtual double atom(double /*omega*/) const { return 0.0; }
    // Natural unit of t (roughly 1/spread of Omega).
    virtual double scale() const = 0;
    virtual std::string name() const = 0;
};

using CgfPtr = std::shared_ptr<const CgfModel>;

// Gaussian Omega with mean k1 and variance k2.
class GaussianCgf final : public CgfModel {
public:
    GaussianCgf(double k1, double k2);
    cplx eval(cplx t) const override;
    double deriv(int n, double t) const override;
    Strip strip() const override { return {-kInf, kInf}; }
    CumulantSet cumulants(int order) const override;
    std::optional<double> closed_form_saddle() const override { return k1_ / k2_; }
    double scale() const override;
    std::string name() const override { return "gaussian"; }

private:
    double k1_, k2_;
};

// --- compound CGFs (Laplace convention) ---

// K_Y(t) = K_N(-K_X(t)) for a count CGF K_N and an increment CGF K_X.
cplx compound_cgf(const std::function<cplx(cplx)>& count_cgf,
                  const std::function<cplx(cplx)>& increment_cgf, cplx t);
// lambda (M_G(t) - 1)
cplx compound_poisson_cgf(double lambda, const FadingModel& g, cplx t);
// L log(q + p M_G(t))
cplx compound_binomial_cgf(int L, double p, const FadingModel& g, cplx t);

// --- Case A: random counts, gamma gains ---

struct CaseAModel {
    enum class Aggregation { poisson, binomial, single };

    FadingModel fading = FadingModel::gamma(1.0, 1.0);
    Aggregation aggregation = Aggregation::poisson;
    double lambda1 = 1.0;  // mean signal count (poisson)
    double lambda2 = 1.0;  // mean interferer count (poisson)
    int L = 1;             // total nodes (binomial)
    double p = 0.5;        // cooperation probability (binomial)
    double theta = 1.0;

    void validate() const;
};

enum class SaddleMethod { closed_form, numeric };

struct SaddleSolution {
    double t_hat;
    SaddleMethod method;
};

CgfPtr case_a_cgf(const CaseAModel& model);
SaddleSolution case_a_saddle(const CaseAModel& model);

// --- Cases B and C: PPP shot noise over the annulus ---

struct CaseBModel {
    NetworkGeometry geom;
    double theta = 1.0;
};

struct CaseCModel {
    NetworkGeometry geom;
    double theta = 1.0;
    FadingModel fading = FadingModel::gamma(1.0, 1.0);
};

// Radial shot-noise CGF shared by cases B and C. Unit-gain evaluation on the
// imaginary axis uses a contour-rotated closed form; everything else goes
// through Gauss-Kronrod quadrature in log r.
class RadialCgf final : public CgfModel {
public:
    RadialCgf(const NetworkGeometry& geom, double theta, const FadingModel& fading,
              double rel_tol = 1e-12);

    cplx eval(cplx t) const override;
    double deriv(int n, double t) const override;
    Strip strip() const override { return strip_; }
    CumulantSet cumulants(int order) const override;
    bool exact_derivatives() const override { return false; }
    double scale() const override;
    std::string name() const override;

    // Quadrature path, n >= 0, real t.
    double deriv_quadrature(int n, double t) const;
    // Closed-form derivative via incomplete gamma / confluent series.
    // Unit gain only, n >= 1, t > 0.
    double deriv_closed(int n, double t) const;
    // Quadrature of the radial integrals at complex t (bypasses the contour path).
    cplx eval_quadrature(cplx t) const;

    const NetworkGeometry& geometry() const { return geom_; }
    double theta() const { return theta_; }
    const FadingModel& fading() const { return fading_; }

private:
    template <class T>
    T radial(int n, T t) const;
    cplx eval_imag_unit(double tau) const;
    cplx g_unit(double x) const;

    NetworkGeometry geom_;
    double theta_;
    FadingModel fading_;
    double rel_tol_;
    Strip strip_;
    // Contour-path constants for unit gain.
    double b_ = 0.0, c0_ = 0.0;
    cplx g_c0_{}, e_c0_{};
};

CgfPtr case_b_cgf(const CaseBModel& model);
CgfPtr case_c_cgf(const CaseCModel& model);

} // namespace outage
