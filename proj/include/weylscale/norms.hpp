#pragma once

#include <cmath>
#include <optional>

#include "weylscale/grid.hpp"

namespace weylscale {

inline double omega_m(double p, double m) { return std::sqrt(p * p + m * m); }

// Finite value or a flagged infrared divergence (massless norm evaluated on a
// function with nonvanishing real zero mode).
struct MassNormValue {
    bool divergent = false;
    double value = 0.0;  // meaningful iff !divergent

    static MassNormValue finite(double v) { return {false, v}; }
    static MassNormValue infinite() { return {true, 0.0}; }
};

namespace detail {

// Exact integral of 1/omega_m over the p = 0 cell [-dp/2, dp/2].  Using the
// closed form instead of the node value keeps the |log m| divergence of the
// norm intact when m falls below the momentum spacing.
inline double inv_omega_zero_cell(double dp, double m) {
    return 2.0 * std::asinh(dp / (2.0 * m));
}

struct InnerAccum {
    double rr = 0.0;       // omega^{-1}-weighted conj(ReF) ReG, nodes k != 0
    double ii = 0.0;       // omega^{+1}-weighted conj(ImF) ImG, all nodes
    complexd cross = 0.0;  // weight-1 cross terms, all nodes
    complexd rr0 = 0.0;    // conj(ReF)ReG at p = 0 (cell handled separately)
    complexd rr1 = 0.0;    // at p = +dp and -dp (massless central-cell estimate)
};

inline InnerAccum accumulate_inner(const Spectrum& fr, const Spectrum& fi,
                                   const Spectrum& gr, const Spectrum& gi, double m) {
    const Grid& g = fr.grid;
    InnerAccum a;
    for (int j = 0; j < g.n; ++j) {
        const complexd rr = std::conj(fr.values[j]) * gr.values[j];
        const complexd ii = std::conj(fi.values[j]) * gi.values[j];
        a.cross += complexd(0.0, 1.0) * (std::conj(fr.values[j]) * gi.values[j] -
                                         std::conj(fi.values[j]) * gr.values[j]);
        const double om = omega_m(g.p(j), m);
        a.ii += om * ii.real();
        if (j == 0) {
            a.rr0 = rr;
        } else {
            a.rr += rr.real() / om;
            if (j == 1 || j == g.n - 1) a.rr1 += rr;
        }
    }
    return a;
}

}  // namespace detail

// <f,g>_m, the R-bilinear sesquilinear form
//   1/2 Int dp conj[w^{-1/2}(Re f)^ + i w^{1/2}(Im f)^][w^{-1/2}(Re g)^ + i w^{1/2}(Im g)^].
// The p = 0 cell of the w^{-1} piece uses the exact cell integral; at m = 0
// that cell is replaced by the smooth-limit estimate (values at +-dp)/8,
// valid because the zero mode vanishes there by precondition.
inline complexd mass_inner(const GridFunction& f, const GridFunction& g, double m) {
    if (f.grid != g.grid) throw invalid_input("grid mismatch in mass inner product");
    if (m < 0) throw invalid_input("mass must be nonnegative");
    if (m == 0.0 && (has_real_zero_mode(f) || has_real_zero_mode(g)))
        throw numerical_guard("massless_zero_mode",
                              "divergent operand in massless inner product");
    const Spectrum fr = fourier(f.real_part()), fi = fourier(f.imag_part());
    const Spectrum gr = fourier(g.real_part()), gi = fourier(g.imag_part());
    const auto a = detail::accumulate_inner(fr, fi, gr, gi, m);
    const double dp = f.grid.dp();
    complexd total = (a.rr + a.ii) * dp + a.cross * dp;
    if (m > 0.0)
        total += a.rr0 * detail::inv_omega_zero_cell(dp, m);
    else
        total += a.rr1 / 8.0;
    return 0.5 * total;
}

// ||f||_m as a tagged value; the massless norm is declared divergent when the
// real zero mode survives the grid tolerance.
inline MassNormValue mass_norm(const GridFunction& f, double m) {
    if (m < 0) throw invalid_input("mass must be nonnegative");
    if (m == 0.0 && has_real_zero_mode(f)) return MassNormValue::infinite();
    const double sq = mass_inner(f, f, m).real();
    return MassNormValue::finite(std::sqrt(std::max(0.0, sq)));
}

inline double mass_norm_sq_finite(const GridFunction& f, double m) {
    MassNormValue v = mass_norm(f, m);
    if (v.divergent)
        throw numerical_guard("massless_zero_mode", "norm divergent at m = 0");
    return v.value * v.value;
}

// ||f||_{m,s}^2 = Int dp omega_m(p)^s |fhat(p)|^2 for real f and s = +-1.
inline MassNormValue sobolev_norm(const GridFunction& f, double m, int s) {
    if (s != 1 && s != -1) throw invalid_input("sobolev exponent must be +1 or -1");
    if (m < 0) throw invalid_input("mass must be nonnegative");
    for (const auto& v : f.samples)
        if (std::abs(v.imag()) > 1e-12 * (1.0 + std::abs(v.real())))
            throw invalid_input("sobolev norm requires a real-valued function");
    if (s == -1 && m == 0.0 && has_real_zero_mode(f)) return MassNormValue::infinite();
    const Spectrum fh = fourier(f);
    const Grid& g = f.grid;
    const double dp = g.dp();
    double acc = 0.0;
    if (s == 1) {
        for (int j = 0; j < g.n; ++j) acc += omega_m(g.p(j), m) * std::norm(fh.values[j]);
        acc *= dp;
    } else {
        for (int j = 1; j < g.n; ++j) acc += std::norm(fh.values[j]) / omega_m(g.p(j), m);
        acc *= dp;
        if (m > 0.0)
            acc += std::norm(fh.values[0]) * detail::inv_omega_zero_cell(dp, m);
        else
            acc += (std::norm(fh.values[1]) + std::norm(fh.values[g.n - 1])) / 8.0;
    }
    return MassNormValue::finite(std::sqrt(acc));
}

// f_eps(x) = f(x) - moment(f) * eps * chi(eps x): subtracts the zero mode with
// a scaled correction, supported in supp(chi)/eps.
inline GridFunction null_integral_approx(const GridFunction& f, double eps,
                                         const GridFunction& chi) {
    if (eps <= 0) throw invalid_input("eps must be positive");
    for (const auto& v : chi.samples)
        if (std::abs(v.imag()) > 1e-14) throw invalid_input("chi must be real");
    const complexd mchi = moment(chi);
    if (std::abs(mchi - 1.0) > 1e-8)
        throw invalid_input("chi must have unit integral");
    const Grid& g = f.grid;
    if (chi.support_lo / eps <= -g.half_width || chi.support_hi / eps >= g.half_width)
        throw numerical_guard("support_escape",
                              "scaled correction support escapes grid domain");
    const complexd alpha = moment(f);
    // sample the scaled correction and normalize by its own grid moment so the
    // discrete moment of f_eps vanishes exactly
    std::vector<complexd> corr(g.n);
    complexd cmom = 0.0;
    for (int j = 0; j < g.n; ++j) {
        corr[j] = evaluate(chi, eps * g.x(j));
        cmom += corr[j];
    }
    cmom *= g.dx();  // ~ 1/eps for a unit-integral chi
    std::vector<complexd> v(g.n);
    for (int j = 0; j < g.n; ++j) v[j] = f.samples[j] - (alpha / cmom) * corr[j];
    double lo = std::min(f.support_lo, chi.support_lo / eps);
    double hi = std::max(f.support_hi, chi.support_hi / eps);
    return GridFunction(g, std::move(v), lo, hi);
}

}  // namespace weylscale
