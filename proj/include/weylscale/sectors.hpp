#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "weylscale/dynamics.hpp"
#include "weylscale/grid.hpp"

namespace weylscale {

namespace detail {

// Normalized primitive of the standard bump: S(u) monotone 0 -> 1 on [0,1],
// flat to all orders at both ends.  Tabulated once (composite Simpson) and
// interpolated cubically; the table is dense enough that interpolation error
// is far below the phase tolerances.
class BumpRamp {
  public:
    static double eval(double u) {
        static const BumpRamp table;
        if (u <= 0.0) return 0.0;
        if (u >= 1.0) return 1.0;
        return table.interp(u);
    }

  private:
    static constexpr int kN = 8192;  // intervals
    std::array<double, kN + 1> cum_{};

    BumpRamp() {
        // integrate B(2v-1) over [0,u] with per-interval Simpson
        auto b = [](double v) { return bump_profile(2.0 * v - 1.0); };
        const double h = 1.0 / kN;
        cum_[0] = 0.0;
        for (int i = 0; i < kN; ++i) {
            const double a = i * h;
            cum_[i + 1] = cum_[i] + h / 6.0 * (b(a) + 4.0 * b(a + 0.5 * h) + b(a + h));
        }
        const double total = cum_[kN];
        for (auto& v : cum_) v /= total;
    }

    double interp(double u) const {
        const double s = u * kN;
        int i = std::clamp(static_cast<int>(s), 1, kN - 2);
        const double t = s - i;
        // Catmull-Rom cubic through cum_[i-1..i+2]
        const double m1 = cum_[i - 1], p0 = cum_[i], p1 = cum_[i + 1], p2 = cum_[i + 2];
        return p0 + t * (0.5 * (p1 - m1) +
                         t * ((m1 - 2.5 * p0 + 2.0 * p1 - 0.5 * p2) +
                              t * (-0.5 * m1 + 1.5 * p0 - 1.5 * p1 + 0.5 * p2)));
    }
};

}  // namespace detail

using RampFunction = std::function<double(double)>;  // monotone 0->1 on [0,1]

inline double integrated_bump_ramp(double u) { return detail::BumpRamp::eval(u); }

// Polynomial C^3 alternative ramp, used to check ramp independence.
inline double smoothstep_ramp(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * u * u * (35.0 - 84.0 * u + 70.0 * u * u - 20.0 * u * u * u);
}

// Charge-profile family u_n: 0 left of -a, a fixed smooth ramp on (-a,a)
// (independent of n), the constant q on [a, na], and a smooth decay to 0 on
// [na, na+a] that keeps u_n compactly supported.
struct ChargeProfile {
    double charge = 1.0;      // q
    double radius = 1.0;      // a > 0
    int plateau = 2;          // n >= 1
    RampFunction ramp = integrated_bump_ramp;

    ChargeProfile(double q, double a, int n, RampFunction r = integrated_bump_ramp)
        : charge(q), radius(a), plateau(n), ramp(std::move(r)) {
        if (radius <= 0) throw invalid_input("localization radius must be positive");
        if (plateau < 1) throw invalid_input("plateau multiplier must be >= 1");
    }

    double u_n(double x) const { return u_n_at(plateau, x); }

    double u_n_at(int n, double x) const {
        const double a = radius;
        if (x <= -a) return 0.0;
        if (x < a) return charge * ramp((x + a) / (2.0 * a));
        if (x <= n * a) return charge;
        if (x < n * a + a) return charge * (1.0 - ramp((x - n * a) / a));
        return 0.0;
    }

    // u_inf = lim_n u_n: the two-sided step completed by the ramp.
    double u_infinity(double x) const {
        const double a = radius;
        if (x <= -a) return 0.0;
        if (x < a) return charge * ramp((x + a) / (2.0 * a));
        return charge;
    }
};

// Sample u_n on a grid.  Errors out when the plateau (plus decay) leaves the
// grid domain.
inline GridFunction build_un(const ChargeProfile& p, const Grid& g) {
    const double hi = p.plateau * p.radius + p.radius;
    if (hi >= g.half_width || p.radius >= g.half_width)
        throw numerical_guard("support_escape", "plateau exceeds grid domain");
    std::vector<complexd> v(g.n);
    for (int j = 0; j < g.n; ++j) v[j] = p.u_n(g.x(j));
    auto prof = p;
    return GridFunction(g, std::move(v), -p.radius, hi,
                        [prof](double x) { return complexd(prof.u_n(x)); });
}

// Phase of the sector automorphism on W(f): e^{-i Int u_inf(x) Re f(x) dx}.
inline complexd sector_phase(const ChargeProfile& p, const GridFunction& f) {
    double acc = 0.0;
    const Grid& g = f.grid;
    for (int j = 0; j < g.n; ++j) acc += p.u_infinity(g.x(j)) * f.samples[j].real();
    return std::polar(1.0, -acc * g.dx());
}

// Phase of rho(lambda) on W(f): e^{-i Int u_inf(x/lambda) Re f(x) dx}.
inline complexd rho_of_lambda_phase(const ChargeProfile& p, const GridFunction& f,
                                    double lambda) {
    if (lambda <= 0) throw invalid_input("lambda must be positive");
    double acc = 0.0;
    const Grid& g = f.grid;
    for (int j = 0; j < g.n; ++j)
        acc += p.u_infinity(g.x(j) / lambda) * f.samples[j].real();
    return std::polar(1.0, -acc * g.dx());
}

struct PhasedSymbol {
    complexd phase;
    GridFunction symbol;
};

// rho_lambda(W(f)) = e^{-i Int u_inf Re f} W(delta_lambda f); the phase is
// lambda independent.
inline PhasedSymbol rho_lambda_symbol(const ChargeProfile& p, const GridFunction& f,
                                      double lambda) {
    return PhasedSymbol{sector_phase(p, f), dilate(f, lambda)};
}

// Middle form of the same phase, e^{-i Int u_inf(x/lambda) Re(delta_lambda f)};
// equals sector_phase by the change of variables, kept as a cross-check.
inline complexd rho_lambda_middle_phase(const ChargeProfile& p, const GridFunction& f,
                                        double lambda) {
    return rho_of_lambda_phase(p, dilate(f, lambda), lambda);
}

// lim_{lambda->0} rho(lambda) phase: e^{-i q Int_0^inf Re f}.
inline complexd limit_morphism_phase(const ChargeProfile& p, const GridFunction& f) {
    const Grid& g = f.grid;
    // first node strictly right of 0 (0 itself is never a node: N is even)
    int j1 = g.index_below(0.0) + 1;
    j1 = std::clamp(j1, 1, g.n - 1);
    // trapezoid on [x_{j1}, L] (f vanishes at the right boundary) ...
    double acc = 0.5 * f.samples[j1].real();
    for (int j = j1 + 1; j < g.n; ++j) acc += f.samples[j].real();
    acc *= g.dx();
    // ... plus the partial cell [0, x_{j1}] with f(0) linearly interpolated
    const double x1 = g.x(j1);
    const double f0 = f.samples[j1 - 1].real() +
                      (f.samples[j1].real() - f.samples[j1 - 1].real()) *
                          (0.0 - g.x(j1 - 1)) / g.dx();
    acc += 0.5 * (f0 + f.samples[j1].real()) * x1;
    return std::polar(1.0, -p.charge * acc);
}

// Smallest n at which the conjugation phase e^{i sigma(i u_n, f)} stops moving
// (successive differences below 1e-10).  Exact once supp f lies left of na.
inline int stabilization_index(const ChargeProfile& p, const GridFunction& f) {
    const Grid& g = f.grid;
    auto phase_at = [&](int n) {
        double acc = 0.0;
        for (int j = 0; j < g.n; ++j) acc += p.u_n_at(n, g.x(j)) * f.samples[j].real();
        return std::polar(1.0, -acc * g.dx());
    };
    const int n_max = static_cast<int>(std::floor(g.half_width / p.radius)) - 1;
    if (n_max < 2)
        throw numerical_guard("support_escape", "profile radius too large for grid");
    complexd prev = phase_at(1);
    for (int n = 1; n < n_max; ++n) {
        const complexd next = phase_at(n + 1);
        if (std::abs(next - prev) < 1e-10) return n;
        prev = next;
    }
    throw numerical_guard("stabilization", "phase did not stabilize within the grid");
}

}  // namespace weylscale
