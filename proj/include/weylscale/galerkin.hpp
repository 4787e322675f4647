#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "weylscale/grid.hpp"
#include "weylscale/kernels.hpp"
#include "weylscale/norms.hpp"
#include "weylscale/rng.hpp"

namespace weylscale {

struct Interval {
    double lo = -1.0, hi = 1.0;
    Interval() = default;
    Interval(double a, double b) : lo(a), hi(b) {
        if (!(a < b)) throw invalid_input("interval needs lo < hi");
    }
    double center() const { return 0.5 * (lo + hi); }
    double half_width() const { return 0.5 * (hi - lo); }
};

// Finite model of the appendix operators on the null-integral functions of an
// interval: Gram matrices of Re<.,.>_m and Re<.,.>_0 plus the symplectic
// matrix (1/2) Im Int conj(b_i) b_j over an orthonormalized basis.
struct GalerkinModel {
    Interval interval;
    double mass = 1.0;
    int size = 0;
    std::vector<GridFunction> basis;      // orthonormal w.r.t. Re<.,.>_m
    Eigen::MatrixXd gram_m;               // ~ identity by construction
    Eigen::MatrixXd gram_0;
    Eigen::MatrixXd omega;                // antisymmetric
    double raw_condition = 0.0;           // condition number of the raw Gram
};

namespace detail {

// Profile family on the interval: derivatives of (flat envelope x Chebyshev),
// exactly null-integral and increasingly oscillatory.  The flat envelope
// exp(-eps/(1-u^2)) with eps = 1/4 keeps the family well conditioned.
inline std::vector<std::vector<double>> galerkin_profiles(const Grid& g,
                                                          const Interval& iv,
                                                          int count) {
    constexpr double eps = 0.25;
    const double c = iv.center(), w = iv.half_width();
    std::vector<std::vector<double>> out;
    std::vector<double> u(g.n), env(g.n), denv(g.n);
    for (int j = 0; j < g.n; ++j) {
        u[j] = (g.x(j) - c) / w;
        const double q = 1.0 - u[j] * u[j];
        if (q <= 0.0) {
            env[j] = denv[j] = 0.0;
        } else {
            env[j] = std::exp(-eps / q);
            denv[j] = env[j] * (-2.0 * eps * u[j] / (q * q));
        }
    }
    std::vector<double> tkm1(g.n, 1.0), tk = u, dkm1(g.n, 0.0), dk(g.n, 1.0);
    for (int k = 0; k < count; ++k) {
        std::vector<double> t(g.n), dt(g.n);
        if (k == 0) {
            t = tkm1;
            dt = dkm1;
        } else if (k == 1) {
            t = tk;
            dt = dk;
        } else {
            for (int j = 0; j < g.n; ++j) {
                t[j] = 2.0 * u[j] * tk[j] - tkm1[j];
                dt[j] = 2.0 * tk[j] + 2.0 * u[j] * dk[j] - dkm1[j];
            }
            tkm1 = tk;
            tk = t;
            dkm1 = dk;
            dk = dt;
        }
        std::vector<double> v(g.n);
        for (int j = 0; j < g.n; ++j)
            v[j] = std::abs(u[j]) < 1.0 ? (denv[j] * t[j] + env[j] * dt[j]) / w : 0.0;
        out.push_back(std::move(v));
    }
    return out;
}

struct SpectraRI {
    std::vector<complexd> re, im;
};

inline double re_inner_spectra(const Grid& g, const SpectraRI& a, const SpectraRI& b,
                               double m) {
    const double dp = g.dp();
    double acc = 0.0;
    for (int j = 0; j < g.n; ++j) {
        const double rr = (std::conj(a.re[j]) * b.re[j]).real();
        const double ii = (std::conj(a.im[j]) * b.im[j]).real();
        if (m > 0.0) {
            const double om = omega_m(g.p(j), m);
            acc += (j == 0 ? 0.0 : rr / om) * dp + om * ii * dp;
        } else {
            const double ap = std::abs(g.p(j));
            acc += (j == 0 ? 0.0 : rr / ap) * dp + ap * ii * dp;
        }
    }
    if (m > 0.0)
        acc += (std::conj(a.re[0]) * b.re[0]).real() * inv_omega_zero_cell(dp, m);
    else
        acc += ((std::conj(a.re[1]) * b.re[1]).real() +
                (std::conj(a.re[g.n - 1]) * b.re[g.n - 1]).real()) /
               8.0;
    return 0.5 * acc;
}

}  // namespace detail

// Build the orthonormalized model.  Basis elements alternate between real
// profiles v and imaginary ones i*v; both directions of the real vector space
// of null-integral complex functions are needed for the symplectic matrix and
// the two blocks of 1 - T.  Normalization plus a two-pass Cholesky keeps
// gram_m at the identity to machine precision.
inline GalerkinModel build_galerkin(const Interval& iv, double m, int basis_size,
                                    const Grid& grid = Grid(16384, 32.0)) {
    if (m <= 0) throw invalid_input("galerkin mass must be positive");
    if (basis_size < 2 || basis_size > 128)
        throw invalid_input("basis size must lie in [2, 128]");
    if (iv.lo <= -grid.half_width || iv.hi >= grid.half_width)
        throw invalid_input("interval exceeds grid domain");
    const int n_re = (basis_size + 1) / 2;
    const int n_im = basis_size / 2;
    const auto profiles = detail::galerkin_profiles(grid, iv, std::max(n_re, n_im));

    // raw spectra, real block then imaginary block
    std::vector<detail::SpectraRI> raw;
    std::vector<bool> imag_flag;
    auto spectra_of_profile = [&](const std::vector<double>& v, bool imag) {
        GridFunction f(grid,
                       [&] {
                           std::vector<complexd> s(grid.n);
                           for (int j = 0; j < grid.n; ++j)
                               s[j] = imag ? complexd(0.0, v[j]) : complexd(v[j], 0.0);
                           return s;
                       }(),
                       iv.lo, iv.hi);
        return detail::SpectraRI{fourier(f.real_part()).values,
                                 fourier(f.imag_part()).values};
    };
    for (int k = 0; k < n_re; ++k) {
        raw.push_back(spectra_of_profile(profiles[k], false));
        imag_flag.push_back(false);
    }
    for (int k = 0; k < n_im; ++k) {
        raw.push_back(spectra_of_profile(profiles[k], true));
        imag_flag.push_back(true);
    }
    const int nb = basis_size;
    // normalize raw elements in the m-norm
    std::vector<double> scale(nb);
    for (int i = 0; i < nb; ++i) {
        const double nrm = std::sqrt(detail::re_inner_spectra(grid, raw[i], raw[i], m));
        if (!(nrm > 0)) throw numerical_guard("gram", "degenerate basis profile");
        scale[i] = 1.0 / nrm;
        for (auto& z : raw[i].re) z *= scale[i];
        for (auto& z : raw[i].im) z *= scale[i];
    }
    Eigen::MatrixXd gram(nb, nb);
    for (int i = 0; i < nb; ++i)
        for (int j = i; j < nb; ++j) {
            const double v = detail::re_inner_spectra(grid, raw[i], raw[j], m);
            gram(i, j) = v;
            gram(j, i) = v;
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    const double cond = es.eigenvalues()(nb - 1) / std::max(es.eigenvalues()(0), 0.0);
    if (!(es.eigenvalues()(0) > 0) || cond > 1e12)
        throw numerical_guard("gram", "ill-conditioned raw Gram matrix");

    // two-pass Cholesky orthonormalization in coefficient space
    Eigen::MatrixXd coef = Eigen::MatrixXd::Identity(nb, nb);
    for (int pass = 0; pass < 2; ++pass) {
        Eigen::MatrixXd cur = coef.transpose() * gram * coef;
        Eigen::LLT<Eigen::MatrixXd> llt(cur);
        if (llt.info() != Eigen::Success)
            throw numerical_guard("gram", "Cholesky failure in orthonormalization");
        Eigen::MatrixXd linv =
            llt.matrixL().solve(Eigen::MatrixXd::Identity(nb, nb));
        coef = coef * linv.transpose();
    }

    // orthonormalized spectra (block structure keeps real/imaginary separated)
    std::vector<detail::SpectraRI> ortho(nb);
    for (int k = 0; k < nb; ++k) {
        ortho[k].re.assign(grid.n, 0.0);
        ortho[k].im.assign(grid.n, 0.0);
        for (int i = 0; i < nb; ++i) {
            const double c = coef(i, k);
            if (c == 0.0) continue;
            for (int j = 0; j < grid.n; ++j) {
                ortho[k].re[j] += c * raw[i].re[j];
                ortho[k].im[j] += c * raw[i].im[j];
            }
        }
    }

    GalerkinModel model;
    model.interval = iv;
    model.mass = m;
    model.size = nb;
    model.raw_condition = cond;
    model.gram_m.resize(nb, nb);
    model.gram_0.resize(nb, nb);
    model.omega.resize(nb, nb);
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j) {
            model.gram_m(i, j) = detail::re_inner_spectra(grid, ortho[i], ortho[j], m);
            model.gram_0(i, j) = detail::re_inner_spectra(grid, ortho[i], ortho[j], 0.0);
        }
    // omega_ij = (1/2) Im Int conj(b_i) b_j = (1/2) Im sum conj(bhat_i) bhat_j dp
    // with bhat = hat(Re b) + i hat(Im b)
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j) {
            complexd acc = 0.0;
            for (int q = 0; q < grid.n; ++q) {
                const complexd bi = ortho[i].re[q] + complexd(0.0, 1.0) * ortho[i].im[q];
                const complexd bj = ortho[j].re[q] + complexd(0.0, 1.0) * ortho[j].im[q];
                acc += std::conj(bi) * bj;
            }
            model.omega(i, j) = 0.5 * (acc * grid.dp()).imag();
        }

    // materialize the basis on the grid for callers
    for (int k = 0; k < nb; ++k) {
        Spectrum sr{grid, ortho[k].re}, si{grid, ortho[k].im};
        auto vr = inverse_fourier_samples(sr);
        auto vi = inverse_fourier_samples(si);
        std::vector<complexd> samples(grid.n);
        for (int j = 0; j < grid.n; ++j) {
            const double x = grid.x(j);
            samples[j] = (x < iv.lo || x > iv.hi)
                             ? complexd(0.0)
                             : complexd(vr[j].real(), vi[j].real());
        }
        model.basis.emplace_back(grid, std::move(samples), iv.lo, iv.hi);
    }
    return model;
}

// Operator diagnostics per the appendix: R_m from gram_m R = omega, T from
// gram_m T = gram_0, the spectrum and trace norm of 1 - T, the T = R_m R_0^{-1}
// cross-check, and the residual of the 1 - T matrix elements against the
// momentum-path difference forms.
struct OperatorDiagnostics {
    Eigen::VectorXd one_minus_t_eigs;   // sorted by |.| descending
    double trace_norm = 0.0;            // sum |eig|
    double cross_check_residual = 0.0;  // max |R_m R_0^{-1} - T|
    bool cross_check_skipped = false;   // singular gram_0 / omega
    double r0_smallest_sv = 0.0;        // smallest singular value of R_0
    double element_residual = 0.0;      // max |(gram_m - gram_0) - formQ two-block|
    double gram_m_identity_error = 0.0;
};

inline OperatorDiagnostics operator_diagnostics(const GalerkinModel& gm) {
    const int n = gm.size;
    OperatorDiagnostics out;
    out.gram_m_identity_error =
        (gm.gram_m - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();

    Eigen::MatrixXd t = gm.gram_m.ldlt().solve(gm.gram_0);
    Eigen::MatrixXd one_minus_t = Eigen::MatrixXd::Identity(n, n) - t;
    // gram_m ~ I makes 1 - T numerically symmetric
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        0.5 * (one_minus_t + one_minus_t.transpose()));
    Eigen::VectorXd eigs = es.eigenvalues();
    std::sort(eigs.data(), eigs.data() + n,
              [](double a, double b) { return std::abs(a) > std::abs(b); });
    out.one_minus_t_eigs = eigs;
    out.trace_norm = eigs.cwiseAbs().sum();

    Eigen::MatrixXd rm = gm.gram_m.ldlt().solve(gm.omega);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd0(gm.gram_0.ldlt().solve(gm.omega),
                                           Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.r0_smallest_sv = svd0.singularValues()(n - 1);
    if (out.r0_smallest_sv < 1e-10) {
        out.cross_check_skipped = true;  // factoriality caveat: R_0 not invertible
    } else {
        Eigen::MatrixXd r0 = gm.gram_0.ldlt().solve(gm.omega);
        Eigen::MatrixXd cross = rm * r0.inverse();
        out.cross_check_residual = (cross - t).cwiseAbs().maxCoeff();
    }
    return out;
}

// Residual of the (1-T) matrix elements against the momentum-path difference
// forms, Re part the Q^- block and Im part the Q^+ block.
inline double one_minus_t_element_residual(const GalerkinModel& gm) {
    const int n = gm.size;
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const GridFunction fi_re = gm.basis[i].real_part();
            const GridFunction fi_im = gm.basis[i].imag_part();
            const GridFunction fj_re = gm.basis[j].real_part();
            const GridFunction fj_im = gm.basis[j].imag_part();
            const double ref =
                form_q_momentum(KernelSign::minus, fi_re, fj_re, gm.mass) +
                form_q_momentum(KernelSign::plus, fi_im, fj_im, gm.mass);
            worst = std::max(worst,
                             std::abs(gm.gram_m(i, j) - gm.gram_0(i, j) - ref));
        }
    return worst;
}

// ------------------------------------------------------------------------
// Empirical norm-equivalence report on random null-integral real functions.

struct NormEquivalenceReport {
    double max_ratio_plus = 0.0, min_ratio_plus = 1e300;   // ||f||_{m,1}/||f||_{0,1}
    double max_ratio_minus = 0.0, min_ratio_minus = 1e300; // ||f||_{0,-1}/||f||_{m,-1}
    bool one_sided_ok = true;   // ||f||_{m,-1} <= ||f||_{0,-1}, ||f||_{0,1} <= ||f||_{m,1}
    bool omineq_ok = true;      // omega_m(p) <= sqrt(1+m^2)|p| + m 1_{|p|<=1} node-wise
    int samples = 0;
};

// Random null-integral generator: difference of two disjoint bumps scaled to
// cancel moments.
inline GridFunction random_null_bump_pair(const Grid& g, const Interval& iv,
                                          CounterRng& rng) {
    const double a = iv.lo, w = iv.hi - iv.lo;
    const double c1 = a + w * (0.25 + 0.1 * (rng.uniform() - 0.5));
    const double w1 = w * (0.10 + 0.08 * rng.uniform());
    const double c2 = a + w * (0.72 + 0.1 * (rng.uniform() - 0.5));
    const double w2 = w * (0.10 + 0.08 * rng.uniform());
    const double amp = 0.5 + rng.uniform();
    GridFunction f1 = make_bump(g, c1, w1, amp);
    GridFunction f2 = make_bump(g, c2, w2, 1.0);
    const double ratio = moment(f1).real() / moment(f2).real();
    return f1 + complexd(-ratio) * f2;
}

inline NormEquivalenceReport norm_equivalence(const Interval& iv, double m, int samples,
                                              std::uint64_t seed,
                                              const Grid& grid = Grid(4096, 32.0)) {
    if (samples < 20) throw invalid_input("norm equivalence needs >= 20 samples");
    if (m <= 0) throw invalid_input("mass must be positive");
    NormEquivalenceReport rep;
    rep.samples = samples;
    CounterRng rng(seed);
    for (int s = 0; s < samples; ++s) {
        const GridFunction f = random_null_bump_pair(grid, iv, rng);
        const double p1m = sobolev_norm(f, m, 1).value;
        const double p10 = sobolev_norm(f, 0.0, 1).value;
        const double m1m = sobolev_norm(f, m, -1).value;
        const double m10 = sobolev_norm(f, 0.0, -1).value;
        if (p10 > p1m * (1.0 + 1e-12) || m1m > m10 * (1.0 + 1e-12))
            rep.one_sided_ok = false;
        rep.max_ratio_plus = std::max(rep.max_ratio_plus, p1m / p10);
        rep.min_ratio_plus = std::min(rep.min_ratio_plus, p1m / p10);
        rep.max_ratio_minus = std::max(rep.max_ratio_minus, m10 / m1m);
        rep.min_ratio_minus = std::min(rep.min_ratio_minus, m10 / m1m);
    }
    const double c = std::sqrt(1.0 + m * m);
    for (int j = 0; j < grid.n; ++j) {
        const double p = std::abs(grid.p(j));
        const double bound = c * p + (p <= 1.0 ? m : 0.0);
        if (omega_m(p, m) > bound * (1.0 + 1e-12)) rep.omineq_ok = false;
    }
    return rep;
}

// |Im <f,g>_m - (1/2) Im Int conj(f) g|; the identity holds for every m.
inline double inner_consistency(const GridFunction& f, const GridFunction& g, double m) {
    const complexd inner = mass_inner(f, g, m);
    complexd l2 = 0.0;
    for (int j = 0; j < f.grid.n; ++j) l2 += std::conj(f.samples[j]) * g.samples[j];
    l2 *= f.grid.dx();
    return std::abs(inner.imag() - 0.5 * l2.imag());
}

}  // namespace weylscale
