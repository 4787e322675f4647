#pragma once

#include <array>
#include <cmath>

#include "weylscale/errors.hpp"

namespace weylscale {

inline constexpr double kEulerGamma = 0.57721566490153286060651209;

namespace detail {

// 48-point Gauss-Legendre nodes/weights on [-1,1] (positive half; symmetric).
struct GaussLegendre48 {
    std::array<double, 24> x;
    std::array<double, 24> w;
    GaussLegendre48() {
        // Newton iteration on Legendre P_48 roots
        constexpr int n = 48;
        for (int i = 0; i < 24; ++i) {
            double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 0; j < n; ++j) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
                }
                pp = n * (z * p0 - p1) / (z * z - 1.0);
                const double dz = p0 / pp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            x[i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        }
    }
};

inline const GaussLegendre48& gl48() {
    static const GaussLegendre48 g;
    return g;
}

template <typename F>
double gl_integrate(F&& f, double a, double b) {
    const auto& g = gl48();
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 24; ++i)
        acc += g.w[i] * (f(mid + half * g.x[i]) + f(mid - half * g.x[i]));
    return acc * half;
}

// Ascending series, x <= 2 (A&S 9.6.10-13 structure); terms are positive so
// there is no cancellation in this range.
inline double k0_series(double x) {
    const double q = x * x / 4.0;
    double term = 1.0, i0 = 1.0, hsum = 0.0, s = 0.0;
    for (int k = 1; k < 40; ++k) {
        term *= q / (k * k);
        hsum += 1.0 / k;
        i0 += term;
        s += term * hsum;
        if (term < 1e-18) break;
    }
    return -(std::log(x / 2.0) + kEulerGamma) * i0 + s;
}

inline double k1_series(double x) {
    const double q = x * x / 4.0;
    double term = 1.0, i1 = 1.0, hsum = 0.0, s = 1.0 - 2.0 * kEulerGamma;
    for (int k = 1; k < 40; ++k) {
        term *= q / (k * (k + 1.0));
        hsum += 1.0 / k;
        i1 += term;
        s += term * (2.0 * hsum + 1.0 / (k + 1.0) - 2.0 * kEulerGamma);
        if (term < 1e-18) break;
    }
    const double i1v = 0.5 * x * i1;
    return std::log(x / 2.0) * i1v + 1.0 / x - 0.25 * x * s;
}

// Integral representation K_nu(x) = Int_0^inf e^{-x cosh t} cosh(nu t) dt,
// panel Gauss-Legendre.  The asymptotic expansion cannot reach 1e-10 below
// x ~ 12, while this converges uniformly for x >= 2.
inline double kn_integral(double x, int order) {
    double tmax = 3.5;
    if (x < 750.0) tmax = std::max(3.5, std::acosh(750.0 / x));
    auto f = [x, order](double t) {
        return std::exp(-x * std::cosh(t)) * std::cosh(order * t);
    };
    return gl_integrate(f, 0.0, 1.0) + gl_integrate(f, 1.0, 2.5) +
           gl_integrate(f, 2.5, tmax);
}

}  // namespace detail

// Modified Bessel function K_0 or K_1; relative accuracy ~1e-13 across the
// positive axis.
inline double bessel_k(int order, double x) {
    if (order != 0 && order != 1) throw invalid_input("bessel order must be 0 or 1");
    if (x <= 0) throw invalid_input("bessel argument must be positive");
    if (x > 705.0) return 0.0;  // underflows double
    if (x <= 2.0) return order == 0 ? detail::k0_series(x) : detail::k1_series(x);
    return detail::kn_integral(x, order);
}

namespace detail {

// Int_0^x K0(m u) du by the ascending series; valid for m x <= 2.
inline double cum_k0_series(double x, double m) {
    const double lg = std::log(m * x / 2.0);
    double term = x, hsum = 0.0, s = 0.0;
    for (int k = 0; k < 60; ++k) {
        if (k > 0) {
            hsum += 1.0 / k;
            term *= (m * m / 4.0) * x * x / (k * k);
        }
        const double c = (hsum - kEulerGamma - lg + 1.0 / (2.0 * k + 1.0)) / (2.0 * k + 1.0);
        s += term * c;
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(s))) break;
    }
    return s;
}

}  // namespace detail

// Int_0^x K0(m u) du: series through the log singularity, then smooth panels.
inline double cumulative_k0(double x, double m) {
    if (x < 0 || m <= 0) throw invalid_input("cumulative_k0 needs x >= 0, m > 0");
    if (x == 0.0) return 0.0;
    const double split = 1.0 / m;
    if (x <= split) return detail::cum_k0_series(x, m);
    double acc = detail::cum_k0_series(split, m);
    double a = split;
    while (a < x) {
        const double b = std::min(x, a * 2.0);
        if (m * a > 705.0) break;  // integrand underflows
        acc += detail::gl_integrate([m](double u) { return bessel_k(0, m * u); }, a, b);
        a = b;
    }
    return acc;
}

}  // namespace weylscale
