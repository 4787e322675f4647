#pragma once

#include <cmath>
#include <vector>

#include "weylscale/grid.hpp"
#include "weylscale/norms.hpp"
#include "weylscale/weyl.hpp"

namespace weylscale {

namespace detail {

// sin(t w)/w, finite at w = 0.
inline double sinc_t(double t, double om) {
    const double z = t * om;
    if (std::abs(z) < 1e-8) return t * (1.0 - z * z / 6.0);
    return std::sin(z) / om;
}

struct EvolvedSpectra {
    Spectrum re, im;
};

// Momentum-side Klein-Gordon Cauchy evolution:
//   (Re f)^ -> cos(tw)(Re f)^ - w sin(tw)(Im f)^
//   (Im f)^ -> w^{-1} sin(tw)(Re f)^ + cos(tw)(Im f)^
inline EvolvedSpectra evolve_spectra(const Spectrum& fr, const Spectrum& fi, double t,
                                     double m) {
    const Grid& g = fr.grid;
    Spectrum nr{g, std::vector<complexd>(g.n)}, ni{g, std::vector<complexd>(g.n)};
    for (int j = 0; j < g.n; ++j) {
        const double om = omega_m(g.p(j), m);
        const double c = std::cos(t * om);
        const double s = std::sin(t * om);
        nr.values[j] = c * fr.values[j] - om * s * fi.values[j];
        ni.values[j] = sinc_t(t, om) * fr.values[j] + c * fi.values[j];
    }
    return {std::move(nr), std::move(ni)};
}

inline GridFunction from_re_im_spectra(const Spectrum& re, const Spectrum& im,
                                       double lo, double hi) {
    auto vr = inverse_fourier_samples(re);
    auto vi = inverse_fourier_samples(im);
    const Grid& g = re.grid;
    std::vector<complexd> v(g.n);
    for (int j = 0; j < g.n; ++j) {
        double x = g.x(j);
        if (x < lo || x > hi)
            v[j] = 0.0;  // outside the propagation cone; clip spectral dust
        else
            v[j] = complexd(vr[j].real(), vi[j].real());
    }
    return GridFunction(g, std::move(v), lo, hi);
}

}  // namespace detail

// tau_t^{(m)}: unit-speed propagation widens the declared support by |t|.
inline GridFunction time_translate(const GridFunction& f, double t, double m) {
    if (m < 0) throw invalid_input("mass must be nonnegative");
    const Grid& g = f.grid;
    if (f.support_radius() + std::abs(t) >= g.half_width)
        throw numerical_guard("headroom", "time translation exceeds grid headroom");
    const Spectrum fr = fourier(f.real_part()), fi = fourier(f.imag_part());
    auto ev = detail::evolve_spectra(fr, fi, t, m);
    return detail::from_re_im_spectra(ev.re, ev.im, f.support_lo - std::abs(t),
                                      f.support_hi + std::abs(t));
}

// tau_x: mass-independent spectral phase shift.
inline GridFunction space_translate(const GridFunction& f, double a) {
    const Grid& g = f.grid;
    if (f.support_lo + a <= -g.half_width || f.support_hi + a >= g.half_width)
        throw numerical_guard("headroom", "space translation escapes grid domain");
    Spectrum fr = fourier(f.real_part()), fi = fourier(f.imag_part());
    for (int j = 0; j < g.n; ++j) {
        const complexd ph = std::polar(1.0, -g.p(j) * a);
        fr.values[j] *= ph;
        fi.values[j] *= ph;
    }
    auto out = detail::from_re_im_spectra(fr, fi, f.support_lo + a, f.support_hi + a);
    if (f.closed_form) {
        auto cf = f.closed_form;
        out.closed_form = [cf, a](double x) { return cf(x - a); };
    }
    return out;
}

// tau_{(t,x)} = tau_t tau_x.
inline GridFunction translate2(const GridFunction& f, double t, double a, double m) {
    return time_translate(space_translate(f, a), t, m);
}

// Dilation (delta_lambda f)(x) = lambda^{-1}(Re f)(x/lambda) + i (Im f)(x/lambda).
// The grading ||delta_lambda f||_m = ||f||_{lambda m} and the symplectic
// invariance pin this scaling; resampling is exact when f carries a closed
// form, 11-point Lagrange otherwise.
inline GridFunction dilate(const GridFunction& f, double lambda) {
    if (lambda <= 0) throw invalid_input("dilation parameter must be positive");
    const Grid& g = f.grid;
    if (lambda * f.support_lo <= -g.half_width || lambda * f.support_hi >= g.half_width)
        throw numerical_guard("headroom", "dilated support escapes grid domain");
    std::vector<complexd> v(g.n);
    const double lo = lambda * f.support_lo, hi = lambda * f.support_hi;
    for (int j = 0; j < g.n; ++j) {
        const double x = g.x(j);
        if (x < lo || x > hi) {
            v[j] = 0.0;
            continue;
        }
        const complexd val = evaluate(f, x / lambda);
        v[j] = complexd(val.real() / lambda, val.imag());
    }
    std::function<complexd(double)> cf;
    if (f.closed_form) {
        auto base = f.closed_form;
        cf = [base, lambda](double x) {
            const complexd val = base(x / lambda);
            return complexd(val.real() / lambda, val.imag());
        };
    }
    return GridFunction(g, std::move(v), lo, hi, std::move(cf));
}

// Node-wise defect of the exchange rule delta_l tau^{(l m)}_{(t,x)} = tau^{(m)}_{(l t, l x)} delta_l.
inline double scaled_translate_commute(const GridFunction& f, double lambda, double t,
                                       double a, double m) {
    GridFunction lhs = dilate(translate2(f, t, a, lambda * m), lambda);
    GridFunction rhs = translate2(dilate(f, lambda), lambda * t, lambda * a, m);
    double worst = 0.0;
    for (int j = 0; j < f.grid.n; ++j)
        worst = std::max(worst, std::abs(lhs.samples[j] - rhs.samples[j]));
    return worst;
}

// Compactly supported 2D weight h(t,x) on a rectangle, tensor-trapezoid nodes.
// weights[i*nx+j] already contains h(t_i,x_j) dt dx with trapezoid end factors.
struct Weight2D {
    double t0 = 0.0, t1 = 0.0, x0 = 0.0, x1 = 0.0;
    int nt = 33, nx = 33;
    std::vector<double> weights;

    Weight2D() = default;
    Weight2D(double t0_, double t1_, double x0_, double x1_, int nt_, int nx_,
             const std::function<double(double, double)>& h)
        : t0(t0_), t1(t1_), x0(x0_), x1(x1_), nt(nt_), nx(nx_) {
        if (nt < 1 || nx < 1) throw invalid_input("weight needs at least one node");
        if (!(t0 <= t1) || !(x0 <= x1)) throw invalid_input("bad weight rectangle");
        weights.resize(static_cast<std::size_t>(nt) * nx);
        const double dt = nt > 1 ? (t1 - t0) / (nt - 1) : 1.0;
        const double dxq = nx > 1 ? (x1 - x0) / (nx - 1) : 1.0;
        for (int i = 0; i < nt; ++i) {
            const double wt = (nt > 1 && (i == 0 || i == nt - 1)) ? 0.5 : 1.0;
            for (int j = 0; j < nx; ++j) {
                const double wx = (nx > 1 && (j == 0 || j == nx - 1)) ? 0.5 : 1.0;
                weights[static_cast<std::size_t>(i) * nx + j] =
                    wt * wx * dt * dxq * h(tnode(i), xnode(j));
            }
        }
    }

    // single point mass at (t,x)
    static Weight2D point(double t, double x, double mass = 1.0) {
        Weight2D w;
        w.t0 = w.t1 = t;
        w.x0 = w.x1 = x;
        w.nt = w.nx = 1;
        w.weights = {mass};
        return w;
    }

    double tnode(int i) const { return nt > 1 ? t0 + i * (t1 - t0) / (nt - 1) : t0; }
    double xnode(int j) const { return nx > 1 ? x0 + j * (x1 - x0) / (nx - 1) : x0; }
    double w(int i, int j) const { return weights[static_cast<std::size_t>(i) * nx + j]; }

    double abs_mass() const {
        double acc = 0.0;
        for (double v : weights) acc += std::abs(v);
        return acc;
    }
};

// Smeared rescaled Weyl operator: weight h, symbol f, scale lambda, mass m.
struct SmearedOperator {
    Weight2D weight;
    GridFunction symbol;
    double lambda = 1.0;
    double mass = 1.0;
};

// Standard smooth bump-profile weight on a rectangle.
inline Weight2D bump_weight(double t0, double t1, double x0, double x1, int nodes = 33) {
    auto prof = [=](double t, double x) {
        const double ut = (t1 > t0) ? (2.0 * t - (t0 + t1)) / (t1 - t0) : 0.0;
        const double ux = (x1 > x0) ? (2.0 * x - (x0 + x1)) / (x1 - x0) : 0.0;
        return detail::bump_profile(ut) * detail::bump_profile(ux);
    };
    return Weight2D(t0, t1, x0, x1, nodes, nodes, prof);
}

}  // namespace weylscale
