#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "weylscale/errors.hpp"
#include "weylscale/fft.hpp"

namespace weylscale {

using complexd = std::complex<double>;

// Uniform spatial grid on [-L, L] with both endpoints as nodes.
// The implicit FFT period is N*dx (slightly larger than 2L), so the momentum
// spacing is dp = 2*pi/(N*dx).
struct Grid {
    int n = 4096;        // number of nodes, power of two
    double half_width = 32.0;  // L

    Grid() = default;
    Grid(int n_, double half_width_) : n(n_), half_width(half_width_) {
        if (n < 8 || (n & (n - 1)) != 0)
            throw invalid_input("grid size must be a power of two >= 8");
        if (half_width <= 0) throw invalid_input("grid half-width must be positive");
    }

    double dx() const { return 2.0 * half_width / (n - 1); }
    double dp() const { return 2.0 * std::numbers::pi / (n * dx()); }
    double x(int j) const { return -half_width + j * dx(); }
    // FFT-order momentum node: index j -> signed wavenumber
    int wavenumber(int j) const { return j < n / 2 ? j : j - n; }
    double p(int j) const { return wavenumber(j) * dp(); }
    double max_p() const { return (n / 2) * dp(); }
    // nearest node index left of position x
    int index_below(double pos) const {
        return static_cast<int>(std::floor((pos + half_width) / dx()));
    }

    bool operator==(const Grid& o) const { return n == o.n && half_width == o.half_width; }
    bool operator!=(const Grid& o) const { return !(*this == o); }
};

// Complex test function sampled on a grid, with declared compact support
// [support_lo, support_hi] strictly inside (-L, L).  Invariant: samples vanish
// outside the declared support.  An optional closed form allows exact
// off-node evaluation (used by dilations and scaled corrections).
struct GridFunction {
    Grid grid;
    std::vector<complexd> samples;
    double support_lo = 0.0;
    double support_hi = 0.0;
    std::function<complexd(double)> closed_form;  // may be empty

    GridFunction() = default;
    GridFunction(const Grid& g, std::vector<complexd> s, double lo, double hi,
                 std::function<complexd(double)> cf = {})
        : grid(g), samples(std::move(s)), support_lo(lo), support_hi(hi),
          closed_form(std::move(cf)) {
        if (static_cast<int>(samples.size()) != grid.n)
            throw invalid_input("sample count does not match grid");
        if (!(support_lo <= support_hi) || support_lo <= -grid.half_width ||
            support_hi >= grid.half_width)
            throw invalid_input("support must lie strictly inside the grid domain");
    }

    static GridFunction zero(const Grid& g) {
        return GridFunction(g, std::vector<complexd>(g.n, 0.0), 0.0, 0.0,
                            [](double) { return complexd(0.0); });
    }

    GridFunction real_part() const {
        std::vector<complexd> v(samples.size());
        for (std::size_t j = 0; j < samples.size(); ++j) v[j] = samples[j].real();
        auto cf = closed_form;
        return GridFunction(grid, std::move(v), support_lo, support_hi,
                            cf ? std::function<complexd(double)>(
                                     [cf](double x) { return complexd(cf(x).real()); })
                               : std::function<complexd(double)>{});
    }

    GridFunction imag_part() const {
        std::vector<complexd> v(samples.size());
        for (std::size_t j = 0; j < samples.size(); ++j) v[j] = samples[j].imag();
        auto cf = closed_form;
        return GridFunction(grid, std::move(v), support_lo, support_hi,
                            cf ? std::function<complexd(double)>(
                                     [cf](double x) { return complexd(cf(x).imag()); })
                               : std::function<complexd(double)>{});
    }

    double support_radius() const {
        return std::max(std::abs(support_lo), std::abs(support_hi));
    }
};

inline GridFunction operator+(const GridFunction& a, const GridFunction& b) {
    if (a.grid != b.grid) throw invalid_input("grid mismatch in sum");
    std::vector<complexd> v(a.samples.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = a.samples[j] + b.samples[j];
    double lo = std::min(a.support_lo, b.support_lo);
    double hi = std::max(a.support_hi, b.support_hi);
    std::function<complexd(double)> cf;
    if (a.closed_form && b.closed_form) {
        auto ca = a.closed_form, cb = b.closed_form;
        cf = [ca, cb](double x) { return ca(x) + cb(x); };
    }
    return GridFunction(a.grid, std::move(v), lo, hi, std::move(cf));
}

inline GridFunction operator*(complexd c, const GridFunction& f) {
    std::vector<complexd> v(f.samples.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = c * f.samples[j];
    std::function<complexd(double)> cf;
    if (f.closed_form) {
        auto cfun = f.closed_form;
        cf = [c, cfun](double x) { return c * cfun(x); };
    }
    return GridFunction(f.grid, std::move(v), f.support_lo, f.support_hi, std::move(cf));
}

inline GridFunction operator-(const GridFunction& a, const GridFunction& b) {
    return a + complexd(-1.0) * b;
}

// Momentum-side representation at the FFT-order nodes of the same grid.
struct Spectrum {
    Grid grid;
    std::vector<complexd> values;  // FFT order: j -> p = grid.p(j)

    double dp() const { return grid.dp(); }
};

// Unitary convention: fhat(p) = (2pi)^{-1/2} Int f(x) e^{-ipx} dx, discretised
// on the grid nodes.  Discrete Parseval sum|f|^2 dx = sum|fhat|^2 dp holds
// exactly up to roundoff.
inline Spectrum fourier(const GridFunction& f) {
    std::vector<complexd> v = f.samples;
    detail::fft_forward(v);
    const double scale = f.grid.dx() / std::sqrt(2.0 * std::numbers::pi);
    for (int j = 0; j < f.grid.n; ++j) {
        // phase e^{+i p L} accounts for the grid starting at x = -L
        v[j] *= scale * std::polar(1.0, f.grid.p(j) * f.grid.half_width);
    }
    return Spectrum{f.grid, std::move(v)};
}

inline std::vector<complexd> inverse_fourier_samples(const Spectrum& s) {
    std::vector<complexd> v = s.values;
    const double scale = s.grid.dp() / std::sqrt(2.0 * std::numbers::pi);
    for (int j = 0; j < s.grid.n; ++j)
        v[j] *= scale * std::polar(1.0, -s.grid.p(j) * s.grid.half_width);
    detail::fft_backward(v);
    return v;
}

// Position quadrature; compact support makes trapezoid and plain sums equal.
inline complexd moment(const GridFunction& f) {
    complexd acc = 0.0;
    for (const auto& v : f.samples) acc += v;
    return acc * f.grid.dx();
}

inline double l2_norm(const GridFunction& f) {
    double acc = 0.0;
    for (const auto& v : f.samples) acc += std::norm(v);
    return std::sqrt(acc * f.grid.dx());
}

// Scale against which the zero mode |(Re f)^(0)| is judged: the Cauchy-Schwarz
// bound (2pi)^{-1/2} sqrt(2L) ||f||_2 times a tolerance tied to grid accuracy.
inline double zero_mode_scale(const GridFunction& f) {
    return std::sqrt(2.0 * f.grid.half_width / (2.0 * std::numbers::pi)) * l2_norm(f);
}

inline constexpr double kZeroModeTolerance = 1e-8;

// (Re f)^(0) = (2pi)^{-1/2} Int Re f
inline double real_zero_mode(const GridFunction& f) {
    double acc = 0.0;
    for (const auto& v : f.samples) acc += v.real();
    return acc * f.grid.dx() / std::sqrt(2.0 * std::numbers::pi);
}

inline bool has_real_zero_mode(const GridFunction& f) {
    return std::abs(real_zero_mode(f)) > kZeroModeTolerance * zero_mode_scale(f);
}

namespace detail {
inline double bump_profile(double u) {
    double a = std::abs(u);
    if (a >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - u * u));
}
inline double bump_profile_deriv(double u) {
    double a = std::abs(u);
    if (a >= 1.0) return 0.0;
    double q = 1.0 - u * u;
    return std::exp(-1.0 / q) * (-2.0 * u / (q * q));
}
}  // namespace detail

// Smooth bump amplitude * exp(-1/(1-u^2)), u = (x-center)/width, supported in
// (center-width, center+width).
inline GridFunction make_bump(const Grid& g, double center, double width,
                              complexd amplitude = 1.0) {
    if (width <= 0) throw invalid_input("bump width must be positive");
    if (center - width <= -g.half_width || center + width >= g.half_width)
        throw invalid_input("bump support exceeds grid domain");
    std::vector<complexd> v(g.n);
    for (int j = 0; j < g.n; ++j)
        v[j] = amplitude * detail::bump_profile((g.x(j) - center) / width);
    auto cf = [center, width, amplitude](double x) {
        return amplitude * detail::bump_profile((x - center) / width);
    };
    return GridFunction(g, std::move(v), center - width, center + width, cf);
}

// Analytic derivative of the bump; integrates to zero exactly, which makes it
// the standard null-integral generator.
inline GridFunction make_bump_derivative(const Grid& g, double center, double width,
                                         complexd amplitude = 1.0) {
    if (width <= 0) throw invalid_input("bump width must be positive");
    if (center - width <= -g.half_width || center + width >= g.half_width)
        throw invalid_input("bump support exceeds grid domain");
    std::vector<complexd> v(g.n);
    for (int j = 0; j < g.n; ++j)
        v[j] = amplitude * detail::bump_profile_deriv((g.x(j) - center) / width) / width;
    auto cf = [center, width, amplitude](double x) {
        return amplitude * detail::bump_profile_deriv((x - center) / width) / width;
    };
    return GridFunction(g, std::move(v), center - width, center + width, cf);
}

// Evaluate f at an arbitrary point: closed form when available, otherwise
// 11-point local Lagrange interpolation on the uniform nodes.
inline complexd evaluate(const GridFunction& f, double x) {
    if (f.closed_form) return f.closed_form(x);
    if (x < f.support_lo || x > f.support_hi) return 0.0;
    const Grid& g = f.grid;
    constexpr int half = 5;  // 11-point stencil
    int center = std::clamp(g.index_below(x), half, g.n - 1 - half);
    complexd acc = 0.0;
    for (int i = center - half; i <= center + half; ++i) {
        double w = 1.0;
        for (int k = center - half; k <= center + half; ++k) {
            if (k == i) continue;
            w *= (x - g.x(k)) / (g.x(i) - g.x(k));
        }
        acc += w * f.samples[i];
    }
    return acc;
}

}  // namespace weylscale
