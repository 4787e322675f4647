// Test-side oracles, independent of the library implementation paths they
// check.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "weylscale/grid.hpp"

namespace oracles {

using weylscale::complexd;
using weylscale::Grid;
using weylscale::GridFunction;

// Rebuild a closed-form function on a k-times refined grid and evaluate the
// defining norm integral there with the same quadrature family.  Used as the
// refinement oracle for mass norms and inner products.
inline GridFunction refine(const GridFunction& f, int factor) {
    if (!f.closed_form) throw std::runtime_error("refinement oracle needs a closed form");
    Grid fine(f.grid.n * factor, f.grid.half_width);
    std::vector<complexd> v(fine.n);
    for (int j = 0; j < fine.n; ++j) v[j] = f.closed_form(fine.x(j));
    return GridFunction(fine, std::move(v), f.support_lo, f.support_hi, f.closed_form);
}

// Direct quadrature of the defining mass-norm integral on the (refined) grid:
// 1/2 Int dp |w^{-1/2}(Re f)^ + i w^{1/2}(Im f)^|^2 with plain node weights
// away from p = 0 and the exact cell integral of 1/omega at p = 0.
inline double mass_norm_sq_quadrature(const GridFunction& f, double m) {
    const auto fr = weylscale::fourier(f.real_part());
    const auto fi = weylscale::fourier(f.imag_part());
    const Grid& g = f.grid;
    double acc = 0.0;
    for (int j = 1; j < g.n; ++j) {
        const double om = std::sqrt(g.p(j) * g.p(j) + m * m);
        const complexd a = fr.values[j] / std::sqrt(om) +
                           complexd(0, 1) * std::sqrt(om) * fi.values[j];
        acc += std::norm(a);
    }
    acc *= g.dp();
    acc += std::norm(fr.values[0]) * 2.0 * std::asinh(g.dp() / (2.0 * m)) +
           m * std::norm(fi.values[0]) * g.dp();
    return 0.5 * acc;
}

// 50-term extended-precision ascending series for K0/K1 (valid to x ~ 2),
// evaluated in long double.  Independent of the library's Bessel evaluator.
inline long double k0_series_ld(long double x) {
    const long double gamma_e = 0.5772156649015328606065120900824024L;
    const long double q = x * x / 4.0L;
    long double term = 1.0L, i0 = 1.0L, h = 0.0L, s = 0.0L;
    for (int k = 1; k <= 50; ++k) {
        term *= q / (static_cast<long double>(k) * k);
        h += 1.0L / k;
        i0 += term;
        s += term * h;
    }
    return -(std::log(x / 2.0L) + gamma_e) * i0 + s;
}

inline long double k1_series_ld(long double x) {
    const long double gamma_e = 0.5772156649015328606065120900824024L;
    const long double q = x * x / 4.0L;
    long double term = 1.0L, i1 = 1.0L, h = 0.0L, s = 1.0L - 2.0L * gamma_e;
    for (int k = 1; k <= 50; ++k) {
        term *= q / (static_cast<long double>(k) * (k + 1.0L));
        h += 1.0L / k;
        i1 += term;
        s += term * (2.0L * h + 1.0L / (k + 1.0L) - 2.0L * gamma_e);
    }
    const long double i1v = 0.5L * x * i1;
    return std::log(x / 2.0L) * i1v + 1.0L / x - 0.25L * x * s;
}

// Extended-precision K_n(x) for any x > 0: series below 2, high-order
// Gauss-Legendre panels on the cosh integral representation above.
inline long double bessel_k_oracle(int order, double x) {
    if (x <= 2.0) return order == 0 ? k0_series_ld(x) : k1_series_ld(x);
    // 96 nodes per panel via iterated midpoint refinement of Simpson
    auto f = [order, x](long double t) {
        return std::exp(-x * std::cosh(t)) * std::cosh(static_cast<long double>(order) * t);
    };
    long double tmax = x < 750.0 ? std::max(3.5L, (long double)std::acosh(750.0 / x)) : 3.5L;
    const int n = 6000;
    const long double h = tmax / n;
    long double acc = 0.5L * (f(0.0L) + f(tmax));
    for (int i = 1; i < n; ++i) acc += f(i * h);
    return acc * h;
}

}  // namespace oracles
