#pragma once

#include <cmath>
#include <vector>

#include "weylscale/grid.hpp"
#include "weylscale/norms.hpp"

namespace weylscale {

// sigma(f,g) = Im Int conj(f) g, trapezoid on the grid.
inline double symplectic(const GridFunction& f, const GridFunction& g) {
    if (f.grid != g.grid) throw invalid_input("grid mismatch in symplectic form");
    complexd acc = 0.0;
    for (int j = 0; j < f.grid.n; ++j) acc += std::conj(f.samples[j]) * g.samples[j];
    return (acc * f.grid.dx()).imag();
}

// Ordered product of Weyl symbols with an accumulated unit-modulus phase.
// The empty word with phase 1 is the identity.
struct WeylWord {
    std::vector<GridFunction> factors;
    complexd phase = 1.0;

    static WeylWord identity() { return WeylWord{}; }

    static WeylWord single(GridFunction f) {
        WeylWord w;
        w.factors.push_back(std::move(f));
        return w;
    }

    WeylWord& append(const GridFunction& f) {
        factors.push_back(f);
        return *this;
    }
};

// Product of two words: concatenation, phases multiply.
inline WeylWord operator*(const WeylWord& a, const WeylWord& b) {
    WeylWord w;
    w.phase = a.phase * b.phase;
    w.factors = a.factors;
    w.factors.insert(w.factors.end(), b.factors.begin(), b.factors.end());
    return w;
}

// Adjoint: reverse order, negate symbols, conjugate phase.
inline WeylWord adjoint(const WeylWord& w) {
    WeylWord out;
    out.phase = std::conj(w.phase);
    for (auto it = w.factors.rbegin(); it != w.factors.rend(); ++it)
        out.factors.push_back(complexd(-1.0) * (*it));
    return out;
}

struct NormalForm {
    complexd phase = 1.0;
    GridFunction symbol;
};

// Strict left-to-right reduction by W(f)W(g) = e^{-(i/2) sigma(f,g)} W(f+g).
inline NormalForm normal_form(const WeylWord& w, const Grid& grid_if_empty = Grid()) {
    if (w.factors.empty())
        return NormalForm{w.phase, GridFunction::zero(grid_if_empty)};
    GridFunction sum = w.factors.front();
    complexd phase = w.phase;
    for (std::size_t i = 1; i < w.factors.size(); ++i) {
        phase *= std::polar(1.0, -0.5 * symplectic(sum, w.factors[i]));
        sum = sum + w.factors[i];
    }
    return NormalForm{phase, std::move(sum)};
}

// Quasi-free vacuum state at mass m >= 0.  The massless state enforces the
// zero-mode annihilation rule: expectation exactly 0 when the symbol's real
// zero mode survives the tolerance.
struct QuasiFreeState {
    double mass = 1.0;

    explicit QuasiFreeState(double m) : mass(m) {
        if (m < 0) throw invalid_input("state mass must be nonnegative");
    }
    bool massless_rule() const { return mass == 0.0; }
};

inline complexd vacuum_expect(const QuasiFreeState& state, const WeylWord& w,
                              const Grid& grid_if_empty = Grid()) {
    NormalForm nf = normal_form(w, grid_if_empty);
    MassNormValue n = mass_norm(nf.symbol, state.mass);
    if (n.divergent) return 0.0;
    return nf.phase * std::exp(-0.5 * n.value * n.value);
}

// ||(W(f) - W(g)) Omega|| = sqrt(2 - 2 cos(sigma(f,g)/2) e^{-||g-f||_m^2/2}).
inline double weyl_vector_distance(const GridFunction& f, const GridFunction& g,
                                   double m) {
    const double nsq = mass_norm_sq_finite(f - g, m);
    const double c = std::cos(0.5 * symplectic(f, g)) * std::exp(-0.5 * nsq);
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * c));
}

// Gauge transformation phase e^{i(mu Re Int f + nu Im Int f)}.
inline complexd gauge_phase(double mu, double nu, const GridFunction& f) {
    const complexd mom = moment(f);
    return std::polar(1.0, mu * mom.real() + nu * mom.imag());
}

}  // namespace weylscale
