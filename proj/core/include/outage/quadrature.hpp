#pragma once

// Globally adaptive 21-point Gauss-Kronrod quadrature for real or complex
// integrands. Panels are refined worst-first until the summed |K21 - G10|
// estimate meets the tolerance or the panel budget runs out.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <type_traits>
#include <vector>

namespace outage::quad {

struct Options {
    double abs_tol = 0.0;
    double rel_tol = 1e-10;
    int max_panels = 4000;
    int max_depth = 60;
};

template <class T>
struct Result {
    T value{};
    double error = 0.0;  // sum of panel |K - G|
    double l1 = 0.0;     // Kronrod estimate of the integral of |f|
    int panels = 0;
    bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 11> xgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> wgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980108816, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for xgk[1], xgk[3], ..., xgk[9].
inline constexpr std::array<double, 5> wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class T>
struct Panel {
    double a, b;
    T value;
    double err;
    double l1;
    int depth;
};

template <class T, class F>
Panel<T> gk21(F& f, double a, double b, int depth) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const T fc = f(c);
    T kron = fc * wgk[10];
    T gauss{};
    double l1 = magnitude(fc) * wgk[10];
    for (int i = 0; i < 10; ++i) {
        const double dx = h * xgk[i];
        const T f1 = f(c - dx);
        const T f2 = f(c + dx);
        kron += (f1 + f2) * wgk[i];
        l1 += (magnitude(f1) + magnitude(f2)) * wgk[i];
        if (i % 2 == 1) gauss += (f1 + f2) * wg[i / 2];
    }
    kron *= h;
    gauss *= h;
    return {a, b, kron, magnitude(kron - gauss), l1 * std::abs(h), depth};
}

} // namespace detail

template <class F>
auto integrate(F&& f, double a, double b, const Options& opt = {})
    -> Result<std::decay_t<decltype(f(a))>> {
    using T = std::decay_t<decltype(f(a))>;
    using P = detail::Panel<T>;
    Result<T> res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    auto worse = [](const P& x, const P& y) { return x.err < y.err; };
    std::priority_queue<P, std::vector<P>, decltype(worse)> heap(worse);
    std::vector<P> frozen;

    P first = detail::gk21<T>(f, a, b, 0);
    T total = first.value;
    double err = first.err;
    heap.push(first);
    int panels = 1;

    auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(total)); };

    while (!heap.empty() && err > target() && panels < opt.max_panels) {
        P worst = heap.top();
        heap.pop();
        if (worst.depth >= opt.max_depth) {
            frozen.push_back(worst);
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        P left = detail::gk21<T>(f, worst.a, mid, worst.depth + 1);
        P right = detail::gk21<T>(f, mid, worst.b, worst.depth + 1);
        total += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        ++panels;
    }

    // Re-sum in interval order so the result does not depend on heap layout.
    std::vector<P> all = std::move(frozen);
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const P& x, const P& y) { return x.a < y.a; });
    T sum{};
    double e = 0.0, l1 = 0.0;
    for (const auto& p : all) {
        sum += p.value;
        e += p.err;
        l1 += p.l1;
    }
    res.value = sum;
    res.error = e;
    res.l1 = l1;
    res.panels = static_cast<int>(all.size());
    res.converged = e <= std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(sum));
    return res;
}

// Integral over [a, inf) through x = a + scale * s / (1 - s).
template <class F>
auto integrate_to_inf(F&& f, double a, double scale, const Options& opt = {}) {
    auto g = [&](double s) {
        const double one_minus = 1.0 - s;
        const double x = a + scale * s / one_minus;
        using T = std::decay_t<decltype(f(a))>;
        if (!std::isfinite(x)) return T{};
        return f(x) * (scale / (one_minus * one_minus));
    };
    return integrate(g, 0.0, 1.0, opt);
}

} // namespace outage::quad
