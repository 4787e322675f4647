#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "weylscale/bessel.hpp"
#include "weylscale/grid.hpp"
#include "weylscale/norms.hpp"

namespace weylscale {

// Q^-(x) = K0(m|x|) + log|x|; continuous at 0 with limit log(2/m) - gamma.
inline double kernel_q_minus(double x, double m) {
    if (m <= 0) throw invalid_input("kernel mass must be positive");
    const double z = std::abs(x);
    if (z == 0.0) throw invalid_input("Q- is defined for x != 0; use the limit value");
    if (m * z > 705.0) return std::log(z);
    return bessel_k(0, m * z) + std::log(z);
}

inline double kernel_q_minus_limit(double m) { return std::log(2.0 / m) - kEulerGamma; }

// Q^+(x) = -(m/|x|) K1(m|x|) + 1/x^2; log-divergent at 0, locally square
// integrable.
inline double kernel_q_plus(double x, double m) {
    if (m <= 0) throw invalid_input("kernel mass must be positive");
    const double z = std::abs(x);
    if (z == 0.0) throw invalid_input("Q+ diverges at x = 0");
    if (m * z > 705.0) return 1.0 / (z * z);
    if (m * z < 1e-4) {
        // series: Q+(x) = -(m^2/2)[log(m|x|/2) + gamma - 1/2] + O(x^2 log x)
        const double lg = std::log(m * z / 2.0);
        const double q = m * z * m * z / 4.0;
        return -(m * m / 2.0) * (lg + kEulerGamma - 0.5) -
               q * (m * m / 2.0) * (lg + kEulerGamma - 5.0 / 4.0);
    }
    return -(m / z) * bessel_k(1, m * z) + 1.0 / (z * z);
}

// P(x) = Int_0^x Q+(u) du = [m K1(m u) - 1/u]_0^x + m^2 Int_0^x K0(m u) du;
// the bracket tends to 0 as u -> 0.
inline double q_plus_primitive(double x, double m) {
    if (x < 0) return -q_plus_primitive(-x, m);
    if (x == 0.0) return 0.0;
    const double z = m * x;
    double bracket;
    if (z > 705.0)
        bracket = -1.0 / x;
    else if (z < 1e-4)
        // m K1(z) - 1/x = (m z/2)(log(z/2) + gamma - 1/2) + O(z^3 log z)
        bracket = 0.5 * m * z * (std::log(z / 2.0) + kEulerGamma - 0.5);
    else
        bracket = m * bessel_k(1, z) - 1.0 / x;
    return bracket + m * m * cumulative_k0(x, m);
}

enum class FormPath { position, momentum };
enum class KernelSign { minus, plus };

namespace detail {

struct SupportWindow {
    int lo = 0, hi = -1;  // inclusive node range
};

inline SupportWindow joint_window(const GridFunction& f, const GridFunction& g) {
    const Grid& gr = f.grid;
    const double lo = std::min(f.support_lo, g.support_lo);
    const double hi = std::max(f.support_hi, g.support_hi);
    SupportWindow w;
    w.lo = std::max(0, gr.index_below(lo) - 1);
    w.hi = std::min(gr.n - 1, gr.index_below(hi) + 2);
    return w;
}

inline void require_null_moment(const GridFunction& f, const char* who) {
    if (has_real_zero_mode(f))
        throw numerical_guard("zero_mode", std::string(who) + ": nonvanishing moment");
}

}  // namespace detail

// Momentum path: 1/2 Int dp (omega^{-1} - |p|^{-1}) Re[conj(fhat) ghat]  (sign -)
//                1/2 Int dp (omega - |p|) Re[conj(fhat) ghat]            (sign +)
// The 1/|p| piece gets the smooth-limit estimate for its p = 0 cell.
inline double form_q_momentum(KernelSign sign, const GridFunction& f,
                              const GridFunction& g, double m) {
    if (m <= 0) throw invalid_input("form mass must be positive");
    detail::require_null_moment(f, "formQ");
    detail::require_null_moment(g, "formQ");
    const Spectrum fh = fourier(f), gh = fourier(g);
    const Grid& gr = f.grid;
    const double dp = gr.dp();
    double acc = 0.0;
    if (sign == KernelSign::plus) {
        for (int j = 0; j < gr.n; ++j) {
            const double p = gr.p(j);
            acc += (omega_m(p, m) - std::abs(p)) *
                   (std::conj(fh.values[j]) * gh.values[j]).real();
        }
        return 0.5 * acc * dp;
    }
    double phi1 = 0.0;  // central-cell estimate terms for the 1/|p| piece
    for (int j = 0; j < gr.n; ++j) {
        const double p = gr.p(j);
        const double phi = (std::conj(fh.values[j]) * gh.values[j]).real();
        if (j == 0) {
            acc += phi * detail::inv_omega_zero_cell(dp, m) / dp;
        } else {
            acc += phi * (1.0 / omega_m(p, m) - 1.0 / std::abs(p));
            if (j == 1 || j == gr.n - 1) phi1 += phi;
        }
    }
    return 0.5 * (acc * dp - phi1 / 8.0);
}

// Position path.  Sign -: double quadrature of f(x) g(y) Q^-(x-y)/(2 pi) with
// the diagonal cell replaced by the exact cell average of the kernel.
// Sign +: integration by parts through R(xi) = Int Q+ against the derivative
// of the correlation C(xi) = Int f(x) g(x - xi) dx, avoiding the 1/x^2
// singularity against raw samples.
inline double form_q_position(KernelSign sign, const GridFunction& f,
                              const GridFunction& g, double m) {
    if (m <= 0) throw invalid_input("form mass must be positive");
    detail::require_null_moment(f, "formQ");
    detail::require_null_moment(g, "formQ");
    if (f.grid != g.grid) throw invalid_input("grid mismatch in formQ");
    const Grid& gr = f.grid;
    const double dx = gr.dx();
    if (m * dx > 1.0)
        throw numerical_guard("singular_cell", "grid too coarse for the kernel cell");
    const auto win = detail::joint_window(f, g);
    const int n = win.hi - win.lo + 1;
    if (n <= 0) return 0.0;
    const double two_pi = 2.0 * std::numbers::pi;

    if (sign == KernelSign::minus) {
        // kernel values on the difference set, diagonal cell averaged exactly:
        // (1/dx)[Int_{-dx/2}^{dx/2} K0(m|u|) du + 2 (dx/2)(log(dx/2) - 1)]
        std::vector<double> ker(2 * n - 1);
        for (int k = -(n - 1); k <= n - 1; ++k) {
            if (k == 0) {
                const double h = 0.5 * dx;
                ker[n - 1] = (2.0 * cumulative_k0(h, m) + 2.0 * h * (std::log(h) - 1.0)) / dx;
            } else {
                ker[k + n - 1] = kernel_q_minus(k * dx, m);
            }
        }
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double fv = f.samples[win.lo + i].real();
            if (fv == 0.0) continue;
            double row = 0.0;
            for (int j = 0; j < n; ++j)
                row += g.samples[win.lo + j].real() * ker[i - j + n - 1];
            acc += fv * row;
        }
        return acc * dx * dx / two_pi;
    }

    // sign +: C'(xi_k) = Int f'(x) g(x - xi) dx with a spectral derivative of f
    Spectrum fh = fourier(f);
    for (int j = 0; j < gr.n; ++j) fh.values[j] *= complexd(0.0, gr.p(j));
    const auto fprime = inverse_fourier_samples(fh);
    std::vector<double> fp(n), gs(n);
    for (int i = 0; i < n; ++i) {
        fp[i] = fprime[win.lo + i].real();
        gs[i] = g.samples[win.lo + i].real();
    }
    const double span = n * dx;  // beyond the correlation support
    const double pd = q_plus_primitive(span, m);
    double acc = 0.0;
    for (int k = -(n - 1); k <= n - 1; ++k) {
        // Cp(k dx) = dx sum_i f'(x_i) g(x_{i-k})
        double cp = 0.0;
        const int j0 = std::max(0, k), j1 = std::min(n - 1, n - 1 + k);
        for (int i = j0; i <= j1; ++i) cp += fp[i] * gs[i - k];
        cp *= dx;
        const double xi = k * dx;
        const double r = pd + q_plus_primitive(xi, m);  // Int_{-span}^{xi} Q+
        acc += cp * r;
    }
    return -acc * dx / two_pi;
}

inline double form_q(KernelSign sign, const GridFunction& f, const GridFunction& g,
                     double m, FormPath path) {
    return path == FormPath::momentum ? form_q_momentum(sign, f, g, m)
                                      : form_q_position(sign, f, g, m);
}

// ------------------------------------------------------------------------
// Fourier-coefficient trace-class diagnostics on [-4,4].

// C^3 cutoff: 1 on [-2,2], 0 for |xi| >= 3, 7th-order polynomial ramp.
struct TraceCutoff {
    double operator()(double xi) const { return eval(xi, 0); }
    double d1(double xi) const { return eval(xi, 1); }
    double d2(double xi) const { return eval(xi, 2); }

    static double eval(double xi, int d) {
        const double z = std::abs(xi);
        if (z <= 2.0) return d == 0 ? 1.0 : 0.0;
        if (z >= 3.0) return 0.0;
        const double u = z - 2.0;
        const double u2 = u * u, u3 = u2 * u;
        switch (d) {
            case 0:
                return 1.0 - u2 * u2 * (35.0 - 84.0 * u + 70.0 * u2 - 20.0 * u3);
            case 1: {
                const double s = -(140.0 * u3 - 420.0 * u2 * u2 + 420.0 * u2 * u3 -
                                   140.0 * u3 * u3);
                return xi >= 0 ? s : -s;
            }
            default:
                return -(420.0 * u2 - 1680.0 * u3 + 2100.0 * u2 * u2 - 840.0 * u2 * u3);
        }
    }
};

struct TraceDiagnostic {
    std::vector<complexd> coefficients;   // Q_k for k = 0..K (sign-specific path)
    double decay_fit_exponent = 0.0;      // exponent of the paper identity fit
    double tail_exponent = 0.0;           // raw power fit of |Q_k| over [K/4, K]
    double weighted_sum = 0.0;            // sum to K of the sign's weighted series
    double weighted_sum_2k = 0.0;         // same, summed to 2K
    double cauchy_increment = 0.0;        // relative increment K -> 2K
    double q0_direct = 0.0;               // independent quadrature of the k=0 coefficient
};

namespace detail {

// Q^- second derivative m^2[K0(z) + K1(z)/z] - 1/x^2 with its log-singular
// small-argument form; `cell` requests the average of the log part over a cell
// of the given width around 0.
inline double q_minus_d2(double x, double m, double cell = 0.0) {
    const double z = std::abs(x) * m;
    if (z > 1e-4 && z < 705.0) {
        const double ax = std::abs(x);
        return m * m * (bessel_k(0, z) + bessel_k(1, z) / z) - 1.0 / (ax * ax);
    }
    if (z >= 705.0) return -1.0 / (x * x);
    const double lg = cell > 0.0 ? std::log(m * cell / 4.0) - 1.0
                                 : std::log(0.5 * z);
    return m * m * (-0.5 * lg - 0.5 * kEulerGamma - 0.25);
}

inline double q_minus_d1(double x, double m) {
    const double z = std::abs(x);
    if (z < 1e-12) return 0.0;
    double v;
    if (m * z >= 705.0)
        v = 1.0 / z;
    else
        v = -m * bessel_k(1, m * z) + 1.0 / z;
    return x >= 0 ? v : -v;
}

struct FourierSeries {
    std::vector<complexd> coeff;  // index k = 0..kmax of sum c_k e^{i pi k xi/4}
};

// Coefficients of the sampled function on [-4,4) via FFT; M must be a power
// of two well above 2*kmax to keep aliasing negligible.
inline FourierSeries series_coefficients(const std::vector<double>& vals, int kmax) {
    const int mlen = static_cast<int>(vals.size());
    std::vector<complexd> work(vals.begin(), vals.end());
    fft_forward(work);
    FourierSeries out;
    out.coeff.resize(kmax + 1);
    for (int k = 0; k <= kmax; ++k) {
        // sample offset: xi_j = -4 + j h  ->  factor (-1)^k
        const complexd c = work[k] / static_cast<double>(mlen);
        out.coeff[k] = (k % 2 == 0) ? c : -c;
    }
    return out;
}

inline double fit_loglog(const std::vector<double>& k, const std::vector<double>& v) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) {
        const double x = std::log(k[i]);
        const double y = std::log(v[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace detail

// Fourier-coefficient diagnostics for the trace-class mechanism.  For sign -
// the expanded function is Q^- phi itself; for sign + the kernel is integrated
// first, R(xi) = Int_{-2}^{xi} Q+, and Q+_k = i pi k R_k / 4.
//
// decay_fit_exponent reports the exponent of the displayed coefficient
// identity (for sign -: Q_k = -(16/pi^2) Q''_k / k^2, fitted as
// log(|Q''_k|/|Q_k|) vs log k, expected 2): it verifies that the kernel is C^1
// with square-integrable second derivative, which is what makes the
// interchange of series and integration legitimate.  tail_exponent carries the
// plain power fit of |Q_k| for reference.
inline TraceDiagnostic fourier_trace_diagnostic(KernelSign sign, double m, int K,
                                                const TraceCutoff& cutoff = {}) {
    if (K < 64) throw invalid_input("trace diagnostic needs K >= 64");
    if (m <= 0) throw invalid_input("kernel mass must be positive");
    for (double xi : {0.0, 0.5, 1.0, 1.5, 2.0})
        if (std::abs(cutoff(xi) - 1.0) > 0.0 || std::abs(cutoff(-xi) - 1.0) > 0.0)
            throw invalid_input("cutoff must be identically 1 on [-2,2]");
    int mlen = 8192;
    while (mlen < 16 * K) mlen *= 2;
    const double h = 8.0 / mlen;

    TraceDiagnostic out;
    std::vector<double> vals(mlen);
    if (sign == KernelSign::minus) {
        for (int j = 0; j < mlen; ++j) {
            const double xi = -4.0 + j * h;
            const double q = xi == 0.0 ? kernel_q_minus_limit(m) : kernel_q_minus(xi, m);
            vals[j] = q * cutoff(xi);
        }
        auto qs = detail::series_coefficients(vals, 2 * K);
        out.coefficients.assign(qs.coeff.begin(), qs.coeff.begin() + K + 1);
        // second-derivative coefficients from closed-form samples
        std::vector<double> d2(mlen);
        for (int j = 0; j < mlen; ++j) {
            const double xi = -4.0 + j * h;
            const double q = xi == 0.0 ? kernel_q_minus_limit(m) : kernel_q_minus(xi, m);
            d2[j] = detail::q_minus_d2(xi, m, xi == 0.0 ? h : 0.0) * cutoff(xi) +
                    2.0 * detail::q_minus_d1(xi, m) * cutoff.d1(xi) + q * cutoff.d2(xi);
        }
        auto ss = detail::series_coefficients(d2, K);
        std::vector<double> ks, ratio, tailk, tailv;
        for (int k = 1; k <= K; ++k) {
            ks.push_back(k);
            ratio.push_back(std::abs(ss.coeff[k]) / std::abs(qs.coeff[k]));
            if (k >= K / 4) {
                tailk.push_back(k);
                tailv.push_back(std::abs(qs.coeff[k]));
            }
        }
        out.decay_fit_exponent = detail::fit_loglog(ks, ratio);
        out.tail_exponent = -detail::fit_loglog(tailk, tailv);
        auto wsum = [&](int upto) {
            double s = 0.0;
            for (int k = 1; k <= upto; ++k) s += std::abs(qs.coeff[k]) * (1.0 + k);
            return 2.0 * s;  // +-k pairs have equal modulus
        };
        out.weighted_sum = wsum(K);
        out.weighted_sum_2k = wsum(2 * K);
        // direct quadrature of (1/8) Int Q- phi via fine Simpson
        out.q0_direct = [&] {
            const int nq = 65536;
            const double hq = 8.0 / nq;
            double acc = 0.0;
            for (int j = 0; j <= nq; ++j) {
                const double xi = -4.0 + j * hq;
                const double q =
                    xi == 0.0 ? kernel_q_minus_limit(m) : kernel_q_minus(xi, m);
                const double w = (j == 0 || j == nq) ? 1.0 : (j % 2 ? 4.0 : 2.0);
                acc += w * q * cutoff(xi);
            }
            return acc * hq / 3.0 / 8.0;
        }();
    } else {
        // integrated kernel R(xi) = Int_{-2}^{xi} Q+ = P(2) + sgn-adjusted P(|xi|)
        const double p2 = q_plus_primitive(2.0, m);
        for (int j = 0; j < mlen; ++j) {
            const double xi = -4.0 + j * h;
            vals[j] = (p2 + q_plus_primitive(xi, m)) * cutoff(xi);
        }
        auto rs = detail::series_coefficients(vals, 2 * K);
        std::vector<complexd> qk(2 * K + 1);
        for (int k = 1; k <= 2 * K; ++k)
            qk[k] = complexd(0.0, std::numbers::pi * k / 4.0) * rs.coeff[k];
        // k = 0 coefficient from the primitive directly: (1/8) Int Q+ phi
        const double tail = detail::gl_integrate(
            [&](double u) { return kernel_q_plus(u, m) * cutoff(u); }, 2.0, 3.0);
        qk[0] = (2.0 * p2 + 2.0 * tail) / 8.0;
        out.coefficients.assign(qk.begin(), qk.begin() + K + 1);
        // direct coefficients of Q+ phi (0-node carries the cell average of the
        // log-singular part) to probe the integration-by-parts identity
        // Q+_k = i pi k R_k / 4: fit |Q+_k,direct| / |R_k| ~ k.
        std::vector<double> direct(mlen);
        for (int j = 0; j < mlen; ++j) {
            const double xi = -4.0 + j * h;
            double q;
            if (xi == 0.0) {
                q = 2.0 * q_plus_primitive(0.5 * h, m) / h;  // cell average
            } else {
                q = kernel_q_plus(xi, m);
            }
            direct[j] = q * cutoff(xi);
        }
        auto ds = detail::series_coefficients(direct, K);
        std::vector<double> ks, ratio, tailk, tailv;
        for (int k = 1; k <= K; ++k) {
            ks.push_back(k);
            ratio.push_back(std::abs(ds.coeff[k]) / std::abs(rs.coeff[k]));
            if (k >= K / 4) {
                tailk.push_back(k);
                tailv.push_back(std::abs(qk[k]));
            }
        }
        out.decay_fit_exponent = detail::fit_loglog(ks, ratio);
        out.tail_exponent = -detail::fit_loglog(tailk, tailv);
        auto wsum = [&](int upto) {
            double s = 0.0;
            for (int k = 1; k <= upto; ++k) s += std::abs(qk[k]) / std::sqrt(double(k));
            return 2.0 * s;
        };
        out.weighted_sum = wsum(K);
        out.weighted_sum_2k = wsum(2 * K);
        out.q0_direct = qk[0].real();
    }
    out.cauchy_increment =
        (out.weighted_sum_2k - out.weighted_sum) / std::max(out.weighted_sum_2k, 1e-300);
    return out;
}

}  // namespace weylscale
