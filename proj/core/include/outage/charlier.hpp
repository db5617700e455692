#pragma once

// Charlier (orthogonal-polynomial) reconstruction of the distribution of Omega
// on a Gaussian or Student-t base.

#include "outage/cumulants.hpp"
#include "outage/result.hpp"

#include <array>
#include <string>
#include <vector>

namespace outage {

struct Polynomial {
    std::vector<double> coeffs;  // coeffs[i] multiplies x^i

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    double lead() const { return coeffs.back(); }
    double operator()(double x) const;
    Polynomial derivative() const;
    Polynomial monic() const;
};

struct OrthogonalSystem {
    enum class Family { hermite, krishnamoorthy, pearson };

    Family family = Family::hermite;
    double v = 0.0;                     // t degrees of freedom
    std::array<double, 5> pearson{};    // a0, a1, b0, b1, b2
    std::vector<Polynomial> polys;
    std::vector<double> norms;          // int phi_k^2 w dx (empty for pearson)
    std::vector<std::string> warnings;

    int max_degree() const { return static_cast<int>(polys.size()) - 1; }
    // Hermite: standard normal density. Krishnamoorthy: (1 + x^2/v)^(-(v+1)/2).
    double weight(double x) const;
};

OrthogonalSystem hermite_system(int max_order);
// Monic, orders 0..floor((v-1)/2); v >= 5.
// max_order < 0 builds the whole family.
OrthogonalSystem krishnamoorthy_system(int v, int max_order = -1);
// Rodrigues family of the Pearson weight w'/w = (a0 + a1 x)/(b0 + b1 x + b2 x^2).
OrthogonalSystem pearson_orthopoly(double a0, double a1, double b0, double b1, double b2, int max_order);

// Norm formula from the literature, kept for comparison with quadrature.
double krishnamoorthy_norm_formula(int v, int n);

// Quadrature value of int phi_m phi_n w dx.
double inner_product(const OrthogonalSystem& sys, int m, int n);
// max over m != n of |<phi_m, phi_n>| / sqrt(C_m C_n).
double orthogonality_residual(const OrthogonalSystem& sys);

std::vector<double> orthogonal_moments(const OrthogonalSystem& sys, const MomentSet& moments);

enum class CharlierMode { standardized, paper_literal };

// Incomplete moments int_{-inf}^w x^n w(x) dx for n = 0..nmax (upper: int_w^inf).
std::vector<double> hermite_incomplete_moments(double w, int nmax, bool upper = false);
std::vector<double> t_incomplete_moments(double w, int v, int nmax, bool upper = false);

int t_dof_from_kurtosis(double ex_kurt);

OutageResult outage_hermite(const MomentSet& moments, double eval_point, int max_order = 6,
                            CharlierMode mode = CharlierMode::standardized);
OutageResult outage_krishnamoorthy(const MomentSet& moments, const CumulantSet& cumulants,
                                   double eval_point, CharlierMode mode = CharlierMode::standardized);

// Convenience overloads from cumulants.
OutageResult outage_hermite(const CumulantSet& k, double eval_point, int max_order = 6,
                            CharlierMode mode = CharlierMode::standardized);
OutageResult outage_krishnamoorthy(const CumulantSet& k, double eval_point,
                                   CharlierMode mode = CharlierMode::standardized);

} // namespace outage
