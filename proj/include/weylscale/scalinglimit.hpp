#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weylscale/dynamics.hpp"
#include "weylscale/grid.hpp"
#include "weylscale/norms.hpp"

namespace weylscale {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3)
        throw invalid_input("linear fit needs at least three points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0) throw invalid_input("degenerate fit abscissae");
    LinearFit f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double ybar = sy / n;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double pred = f.slope * x[i] + f.intercept;
        ss_res += (y[i] - pred) * (y[i] - pred);
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
    }
    f.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

struct SweepResult {
    std::vector<double> lambdas;           // strictly decreasing
    std::vector<complexd> values;
    std::vector<double> bounds;            // per-point dominating bound (may be empty)
    std::optional<LinearFit> fit;
};

// Geometric grid from `from` down to `to` with `count` points.
inline std::vector<double> geometric_grid(double from, double to, int count) {
    if (count < 2 || from <= 0 || to <= 0 || to >= from)
        throw invalid_input("geometric grid needs from > to > 0 and count >= 2");
    std::vector<double> out(count);
    const double r = std::log(to / from) / (count - 1);
    for (int i = 0; i < count; ++i) out[i] = from * std::exp(r * i);
    return out;
}

namespace detail {

struct SpectraPair {
    std::vector<complexd> re, im;  // FFT-order spectra of Re / Im parts
};

inline SpectraPair evolved_pair(const Spectrum& fr, const Spectrum& fi, double t,
                                double m) {
    auto ev = evolve_spectra(fr, fi, t, m);
    return {std::move(ev.re.values), std::move(ev.im.values)};
}

// Position samples (complex) of the function with the given Re/Im spectra and
// an extra spatial shift d applied spectrally.
inline std::vector<complexd> position_samples(const Grid& g, const SpectraPair& s,
                                              double d) {
    Spectrum re{g, s.re}, im{g, s.im};
    for (int j = 0; j < g.n; ++j) {
        const complexd ph = std::polar(1.0, -g.p(j) * d);
        re.values[j] *= ph;
        im.values[j] *= ph;
    }
    auto vr = inverse_fourier_samples(re);
    auto vi = inverse_fourier_samples(im);
    std::vector<complexd> out(g.n);
    for (int j = 0; j < g.n; ++j) out[j] = complexd(vr[j].real(), vi[j].real());
    return out;
}

// weight-correlation table X[a][b][k], k indexing x-node differences
// d_k = (jb - ja) * step (valid when both weights share the x spacing).
struct PairCorrelation {
    std::vector<double> diffs;             // size nd
    std::vector<double> x;                 // X flattened [a][b][k]
    int nt1 = 0, nt2 = 0, nd = 0;
    double at(int a, int b, int k) const {
        return x[(static_cast<std::size_t>(a) * nt2 + b) * nd + k];
    }
};

inline PairCorrelation correlate_weights(const Weight2D& w1, const Weight2D& w2) {
    PairCorrelation pc;
    pc.nt1 = w1.nt;
    pc.nt2 = w2.nt;
    const double s1 = w1.nx > 1 ? (w1.x1 - w1.x0) / (w1.nx - 1) : 0.0;
    const double s2 = w2.nx > 1 ? (w2.x1 - w2.x0) / (w2.nx - 1) : 0.0;
    const bool shared = w1.nx == 1 || w2.nx == 1 || std::abs(s1 - s2) < 1e-12;
    if (!shared)
        throw invalid_input("smeared weights must share their spatial node spacing");
    // differences d = x2(jb) - x1(ja) = (x2.x0 - x1.x0) + (jb - ja) * step
    const double step = std::max(s1, s2);
    const double base = w2.x0 - w1.x0;
    pc.nd = w1.nx + w2.nx - 1;
    pc.diffs.resize(pc.nd);
    for (int k = 0; k < pc.nd; ++k)
        pc.diffs[k] = base + (k - (w1.nx - 1)) * step;
    pc.x.assign(static_cast<std::size_t>(pc.nt1) * pc.nt2 * pc.nd, 0.0);
    for (int a = 0; a < w1.nt; ++a)
        for (int b = 0; b < w2.nt; ++b) {
            double* row = &pc.x[(static_cast<std::size_t>(a) * pc.nt2 + b) * pc.nd];
            for (int ja = 0; ja < w1.nx; ++ja) {
                const double wa = w1.w(a, ja);
                if (wa == 0.0) continue;
                for (int jb = 0; jb < w2.nx; ++jb)
                    row[jb - ja + (w1.nx - 1)] += wa * w2.w(b, jb);
            }
        }
    return pc;
}

// Norm weights at mass mu on the momentum grid, with the exact p = 0 cell for
// the 1/omega piece.
struct NormWeights {
    std::vector<double> inv_om;  // dp/omega at nodes, 0 at k=0
    std::vector<double> om;      // dp*omega at nodes
    double zero_cell = 0.0;      // exact integral of 1/omega over the p=0 cell

    NormWeights(const Grid& g, double mu) {
        inv_om.resize(g.n);
        om.resize(g.n);
        const double dp = g.dp();
        for (int j = 0; j < g.n; ++j) {
            const double w = omega_m(g.p(j), mu);
            om[j] = dp * w;
            inv_om[j] = j == 0 ? 0.0 : dp / w;
        }
        zero_cell = mu > 0 ? inv_omega_zero_cell(dp, mu) : 0.0;
    }
};

// 1/2 [ sum_p w1 |dR|^2 + w2 |dI|^2 ] for dR = e^{-ipd} R_b - R_a etc.,
// folded so the d-dependence enters only through cross sums.
struct CrossSums {
    double auto_a = 0.0, auto_b = 0.0;  // weighted |R|^2+|I|^2 sums, no p=0 Re term
    complexd r0a, r0b;                   // Re-part spectra at p = 0
    // cross(d) evaluated on demand
};

}  // namespace detail

// || Int dx g(x) W(delta_l tau_x^{(m)} f) Omega ||^2 realized as the double
// quadrature of g(x)g(y) e^{(i/2) sigma(tau_x f, tau_y f)}
// e^{-1/2 ||(tau_y - tau_x) f||^2_{lambda m}}.  Dynamics runs at mass m, the
// norm at lambda*m; the symplectic phases are computed by translating the
// symbol on the grid and applying the position quadrature.
class NotisoIntegral {
  public:
    NotisoIntegral(const GridFunction& f, const Weight2D& g, double m)
        : grid_(f.grid), weight_(g), m_(m) {
        if (m <= 0) throw invalid_input("notiso requires m > 0");
        if (has_real_zero_mode(f))
            throw numerical_guard("zero_mode", "notiso requires Int Re f = 0");
        const double reach = f.support_radius() +
                             std::max(std::abs(g.t0), std::abs(g.t1)) +
                             std::max(std::abs(g.x0), std::abs(g.x1));
        if (reach >= grid_.half_width)
            throw numerical_guard("headroom", "weight nodes exceed grid headroom");
        const Spectrum fr = fourier(f.real_part()), fi = fourier(f.imag_part());
        for (int a = 0; a < g.nt; ++a)
            spectra_.push_back(detail::evolved_pair(fr, fi, g.tnode(a), m));
        pc_ = detail::correlate_weights(g, g);
        build_sigma_table();
    }

    double value(double lambda) const { return complex_value(lambda).real(); }

    // full accumulated value; the imaginary part vanishes by the x <-> y
    // symmetry of the double quadrature and is kept for diagnostics
    complexd complex_value(double lambda) const {
        const double mu = lambda * m_;
        if (mu <= 0) throw invalid_input("lambda must be positive");
        const detail::NormWeights w(grid_, mu);
        const int nt = weight_.nt, nd = pc_.nd, n = grid_.n;
        // auto terms per t-node
        std::vector<double> auto_term(nt);
        for (int a = 0; a < nt; ++a) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j)
                acc += w.inv_om[j] * std::norm(spectra_[a].re[j]) +
                       w.om[j] * std::norm(spectra_[a].im[j]);
            auto_term[a] = acc;
        }
        complexd total = 0.0;
        for (int a = 0; a < nt; ++a)
            for (int b = 0; b < nt; ++b) {
                const auto& sa = spectra_[a];
                const auto& sb = spectra_[b];
                for (int k = 0; k < nd; ++k) {
                    const double xw = pc_.at(a, b, k);
                    if (xw == 0.0) continue;
                    const double d = pc_.diffs[k];
                    // cross = sum_p [w1 conj(Ra) Rb + w2 conj(Ia) Ib] e^{-ipd}
                    complexd cross = 0.0;
                    for (int j = 0; j < n; ++j) {
                        const complexd cr = std::conj(sa.re[j]) * sb.re[j] * w.inv_om[j] +
                                            std::conj(sa.im[j]) * sb.im[j] * w.om[j];
                        cross += cr * std::polar(1.0, -grid_.p(j) * d);
                    }
                    // exact p=0 cell of the 1/omega piece (phase = 1 there)
                    const complexd r0 = std::conj(sa.re[0]) * sb.re[0];
                    const double zero_a = std::norm(sa.re[0]) * w.zero_cell;
                    const double zero_b = std::norm(sb.re[0]) * w.zero_cell;
                    const double nrm = 0.5 * (auto_term[a] + auto_term[b] + zero_a +
                                              zero_b - 2.0 * (cross.real() +
                                                              r0.real() * w.zero_cell));
                    total += xw * std::exp(complexd(-0.5 * nrm, 0.5 * sigma(a, b, k)));
                }
            }
        return total;
    }

    double upper_bound() const {
        const double mass = weight_.abs_mass();
        return mass * mass;
    }

    SweepResult sweep(const std::vector<double>& lambdas) const {
        SweepResult r;
        r.lambdas = lambdas;
        for (double l : lambdas) {
            r.values.push_back(value(l));
            r.bounds.push_back(upper_bound());
        }
        return r;
    }

  private:
    double sigma(int a, int b, int k) const {
        return sigma_[(static_cast<std::size_t>(a) * weight_.nt + b) * pc_.nd + k];
    }

    void build_sigma_table() {
        const int nt = weight_.nt, nd = pc_.nd, n = grid_.n;
        sigma_.assign(static_cast<std::size_t>(nt) * nt * nd, 0.0);
        std::vector<std::vector<complexd>> base(nt);
        for (int a = 0; a < nt; ++a)
            base[a] = detail::position_samples(grid_, spectra_[a], 0.0);
        for (int b = 0; b < nt; ++b)
            for (int k = 0; k < nd; ++k) {
                const auto shifted =
                    detail::position_samples(grid_, spectra_[b], pc_.diffs[k]);
                for (int a = 0; a < nt; ++a) {
                    complexd acc = 0.0;
                    for (int j = 0; j < n; ++j)
                        acc += std::conj(base[a][j]) * shifted[j];
                    sigma_[(static_cast<std::size_t>(a) * nt + b) * nd + k] =
                        (acc * grid_.dx()).imag();
                }
            }
    }

    Grid grid_;
    Weight2D weight_;
    double m_;
    std::vector<detail::SpectraPair> spectra_;
    detail::PairCorrelation pc_;
    std::vector<double> sigma_;
};

inline double notiso_norm_sq(const GridFunction& f, const Weight2D& g, double m,
                             double lambda) {
    return NotisoIntegral(f, g, m).value(lambda);
}

// ------------------------------------------------------------------------
// Translation defect || tau_x^{(lambda m)} f - tau_x^{(0)} f ||_0^2 with the
// dominating-function machinery.

struct DefectResult {
    double value = 0.0;
    double bound = 0.0;        // quadrature of the dominating function
    bool nodewise_ok = true;   // integrand <= bound at every momentum node
};

inline DefectResult translation_defect(const GridFunction& f, double t, double a,
                                       double m, double lambda) {
    if (m <= 0 || lambda <= 0) throw invalid_input("translation defect needs m, lambda > 0");
    const complexd mom = moment(f);
    const double scale = zero_mode_scale(f) * std::sqrt(2.0 * std::numbers::pi);
    if (std::abs(mom) > kZeroModeTolerance * std::max(scale, 1e-300))
        throw numerical_guard("zero_mode", "translation defect requires Int f = 0");
    const Grid& g = f.grid;
    if (f.support_radius() + std::abs(t) + std::abs(a) >= g.half_width)
        throw numerical_guard("headroom", "translation exceeds grid headroom");
    const Spectrum fr = fourier(f.real_part()), fi = fourier(f.imag_part());
    const double mu = lambda * m;
    DefectResult out;
    double value = 0.0, bound = 0.0;
    for (int j = 1; j < g.n; ++j) {
        const double p = g.p(j);
        const double ap = std::abs(p);
        const double oml = omega_m(p, mu);
        const double omm = omega_m(p, m);
        const complexd FR = fr.values[j] * std::polar(1.0, -p * a);
        const complexd FI = fi.values[j] * std::polar(1.0, -p * a);
        const double dcos = std::cos(t * oml) - std::cos(t * ap);
        const double dwsin = oml * std::sin(t * oml) - ap * std::sin(t * ap);
        const double dsinc = detail::sinc_t(t, oml) - detail::sinc_t(t, ap);
        const complexd X = dcos * FR - dwsin * FI +
                           complexd(0.0, 1.0) * ap * (dcos * FI + dsinc * FR);
        const double integrand = 0.5 * std::norm(X) / ap;
        const double env = (1.0 + std::abs(t) * omm) * std::abs(FR) +
                           2.0 * omm * std::abs(FI);
        const double dom = 4.0 / ap * env * env;
        value += integrand;
        bound += dom;
        if (integrand > dom * (1.0 + 1e-12) + 1e-300) out.nodewise_ok = false;
    }
    out.value = value * g.dp();
    out.bound = bound * g.dp();
    return out;
}

// ------------------------------------------------------------------------
// Massive defect || tau_t^{(0)} f - tau_t^{(lambda m)} f ||^2_{lambda m},
// reported with its |p| <= 1 / |p| > 1 split and the elementary-bound check.

struct MassiveDefectResult {
    double value = 0.0;
    double low = 0.0;    // |p| <= 1 part (includes the p = 0 cell)
    double high = 0.0;
    bool bounds_ok = true;  // the two elementary multiplier bounds, |p| <= 1
};

inline MassiveDefectResult massive_defect(const GridFunction& f, double t, double m,
                                          double lambda) {
    if (m <= 0 || lambda <= 0) throw invalid_input("massive defect needs m, lambda > 0");
    const Grid& g = f.grid;
    if (f.support_radius() + std::abs(t) >= g.half_width)
        throw numerical_guard("headroom", "time translation exceeds grid headroom");
    const Spectrum fr = fourier(f.real_part()), fi = fourier(f.imag_part());
    const double mu = lambda * m;
    MassiveDefectResult out;
    for (int j = 0; j < g.n; ++j) {
        const double p = g.p(j);
        const double ap = std::abs(p);
        const double oml = omega_m(p, mu);
        const double omm = omega_m(p, m);
        const complexd FR = fr.values[j];
        const complexd FI = fi.values[j];
        const double dcos = std::cos(t * ap) - std::cos(t * oml);
        const double dwsin = ap * std::sin(t * ap) - oml * std::sin(t * oml);
        const double dsinc = detail::sinc_t(t, ap) - detail::sinc_t(t, oml);
        const complexd dR = dcos * FR - dwsin * FI;
        const complexd dI = dsinc * FR + dcos * FI;
        const double w1 = j == 0 ? detail::inv_omega_zero_cell(g.dp(), mu) : g.dp() / oml;
        const double contrib = 0.5 * (w1 * std::norm(dR) + g.dp() * oml * std::norm(dI));
        if (ap <= 1.0)
            out.low += contrib;
        else
            out.high += contrib;
        if (ap <= 1.0 && lambda < 1.0) {
            const double sq = std::sqrt(oml);
            const double a1 = std::abs(std::cos(t * oml) - std::cos(t * ap)) / sq;
            const double b1 = std::abs(oml * std::sin(t * oml) - ap * std::sin(t * ap)) / sq;
            const double tol = 1e-12 * (1.0 + std::sqrt(omm));
            if (a1 > std::abs(t) * std::sqrt(omm) + tol) out.bounds_ok = false;
            if (b1 > 3.0 * std::sqrt(omm) + tol) out.bounds_ok = false;
        }
    }
    out.value = out.low + out.high;
    return out;
}

// ------------------------------------------------------------------------
// Smeared n-point function (n <= 3), all operators sharing (lambda, m):
// tensor quadrature of h_1...h_n against eta exp(-1/2 ||sum tau_{x_j} f_j||^2)
// with dynamics and norms at mass lambda*m, eta the pairwise symplectic phase
// product computed on the grid.

class SmearedCorrelator {
  public:
    explicit SmearedCorrelator(std::vector<SmearedOperator> ops) : ops_(std::move(ops)) {
        if (ops_.empty() || ops_.size() > 3)
            throw invalid_input("smeared n-point supports 1 <= n <= 3");
        for (const auto& op : ops_) {
            if (op.lambda != ops_[0].lambda || op.mass != ops_[0].mass)
                throw invalid_input("smeared operators must share lambda and mass");
            if (op.symbol.grid != ops_[0].symbol.grid)
                throw invalid_input("smeared operators must share the grid");
        }
        grid_ = ops_[0].symbol.grid;
        for (const auto& op : ops_) {
            const double reach = op.symbol.support_radius() +
                                 std::max(std::abs(op.weight.t0), std::abs(op.weight.t1)) +
                                 std::max(std::abs(op.weight.x0), std::abs(op.weight.x1));
            if (reach >= grid_.half_width)
                throw numerical_guard("headroom", "weight nodes exceed grid headroom");
        }
    }

    // evaluate at the shared scale; pass mu = lambda*m (mu = 0 gives the
    // massless limit evaluation, defined when every Int Re f_j = 0)
    complexd value_at_mass(double mu) const {
        if (mu == 0.0)
            for (const auto& op : ops_)
                if (has_real_zero_mode(op.symbol))
                    throw numerical_guard("zero_mode",
                                          "massless evaluation needs Int Re f_j = 0");
        const int n = static_cast<int>(ops_.size());
        std::vector<std::vector<detail::SpectraPair>> sp(n);
        for (int i = 0; i < n; ++i) {
            const Spectrum fr = fourier(ops_[i].symbol.real_part());
            const Spectrum fi = fourier(ops_[i].symbol.imag_part());
            for (int a = 0; a < ops_[i].weight.nt; ++a)
                sp[i].push_back(
                    detail::evolved_pair(fr, fi, ops_[i].weight.tnode(a), mu));
        }
        const detail::NormWeights w(grid_, mu);
        // per-op norm terms
        std::vector<std::vector<double>> nrm(n);
        for (int i = 0; i < n; ++i)
            for (const auto& s : sp[i]) nrm[i].push_back(self_norm(s, w, mu));
        if (n == 1) return accumulate1(nrm[0]);
        // pairwise tables
        std::vector<PairTable> tabs;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                tabs.push_back(make_pair_table(i, j, sp, w, mu));
        if (n == 2) return accumulate2(nrm, tabs[0]);
        return accumulate3(nrm, tabs);
    }

    complexd value(double lambda) const {
        if (lambda < 0) throw invalid_input("lambda must be nonnegative");
        return value_at_mass(lambda * ops_[0].mass);
    }

  private:
    struct PairTable {
        int i = 0, j = 0;
        detail::PairCorrelation pc;
        std::vector<complexd> factor;  // exp(-(i/2) sigma - cross) per (a,b,k)
        complexd at(int a, int b, int k) const {
            return factor[(static_cast<std::size_t>(a) * pc.nt2 + b) * pc.nd + k];
        }
    };

    double self_norm(const detail::SpectraPair& s, const detail::NormWeights& w,
                     double mu) const {
        double acc = 0.0;
        for (int j = 0; j < grid_.n; ++j)
            acc += w.inv_om[j] * std::norm(s.re[j]) + w.om[j] * std::norm(s.im[j]);
        if (mu > 0)
            acc += std::norm(s.re[0]) * w.zero_cell;
        else
            acc += (std::norm(s.re[1]) + std::norm(s.re[grid_.n - 1])) / 8.0;
        return 0.5 * acc;
    }

    PairTable make_pair_table(int i, int j,
                              const std::vector<std::vector<detail::SpectraPair>>& sp,
                              const detail::NormWeights& w, double mu) const {
        PairTable t;
        t.i = i;
        t.j = j;
        t.pc = detail::correlate_weights(ops_[i].weight, ops_[j].weight);
        const int nta = ops_[i].weight.nt, ntb = ops_[j].weight.nt, nd = t.pc.nd;
        t.factor.resize(static_cast<std::size_t>(nta) * ntb * nd);
        // position samples of op i at d = 0 for the sigma quadrature
        std::vector<std::vector<complexd>> base(nta);
        for (int a = 0; a < nta; ++a)
            base[a] = detail::position_samples(grid_, sp[i][a], 0.0);
        for (int b = 0; b < ntb; ++b) {
            for (int k = 0; k < nd; ++k) {
                const double d = t.pc.diffs[k];
                const auto shifted = detail::position_samples(grid_, sp[j][b], d);
                for (int a = 0; a < nta; ++a) {
                    // sigma by grid quadrature
                    complexd acc = 0.0;
                    for (int q = 0; q < grid_.n; ++q)
                        acc += std::conj(base[a][q]) * shifted[q];
                    const double sig = (acc * grid_.dx()).imag();
                    // Re <u, v>_mu with the spatial phase folded in
                    complexd cross = 0.0;
                    const auto& sa = sp[i][a];
                    const auto& sb = sp[j][b];
                    for (int q = 0; q < grid_.n; ++q) {
                        const complexd ph = std::polar(1.0, -grid_.p(q) * d);
                        cross += (std::conj(sa.re[q]) * sb.re[q] * w.inv_om[q] +
                                  std::conj(sa.im[q]) * sb.im[q] * w.om[q]) *
                                 ph;
                    }
                    complexd z0 = std::conj(sa.re[0]) * sb.re[0];
                    double zero_term;
                    if (mu > 0)
                        zero_term = z0.real() * w.zero_cell;
                    else
                        zero_term = ((std::conj(sa.re[1]) * sb.re[1] *
                                      std::polar(1.0, -grid_.p(1) * d))
                                         .real() +
                                     (std::conj(sa.re[grid_.n - 1]) * sb.re[grid_.n - 1] *
                                      std::polar(1.0, -grid_.p(grid_.n - 1) * d))
                                         .real()) /
                                    8.0;
                    const double re_inner = 0.5 * (cross.real() + zero_term);
                    t.factor[(static_cast<std::size_t>(a) * ntb + b) * nd + k] =
                        std::exp(complexd(-re_inner, -0.5 * sig));
                }
            }
        }
        return t;
    }

    complexd accumulate1(const std::vector<double>& nrm) const {
        const auto& w = ops_[0].weight;
        complexd total = 0.0;
        for (int a = 0; a < w.nt; ++a) {
            double row = 0.0;
            for (int j = 0; j < w.nx; ++j) row += w.w(a, j);
            total += row * std::exp(-nrm[a]);
        }
        return total;
    }

    complexd accumulate2(const std::vector<std::vector<double>>& nrm,
                         const PairTable& t) const {
        complexd total = 0.0;
        const int nd = t.pc.nd;
        for (int a = 0; a < t.pc.nt1; ++a)
            for (int b = 0; b < t.pc.nt2; ++b) {
                const double e = std::exp(-0.5 * (nrm[0][a] + nrm[1][b]));
                for (int k = 0; k < nd; ++k) {
                    const double xw = t.pc.at(a, b, k);
                    if (xw != 0.0) total += xw * e * t.at(a, b, k);
                }
            }
        return total;
    }

    complexd accumulate3(const std::vector<std::vector<double>>& nrm,
                         const std::vector<PairTable>& tabs) const {
        const auto& w1 = ops_[0].weight;
        const auto& w2 = ops_[1].weight;
        const auto& w3 = ops_[2].weight;
        const PairTable& t12 = tabs[0];
        const PairTable& t13 = tabs[1];
        const PairTable& t23 = tabs[2];
        const int off12 = w1.nx - 1, off13 = w1.nx - 1, off23 = w2.nx - 1;
        complexd total = 0.0;
        for (int a1 = 0; a1 < w1.nt; ++a1)
            for (int j1 = 0; j1 < w1.nx; ++j1) {
                const double wa = w1.w(a1, j1) * std::exp(-0.5 * nrm[0][a1]);
                if (wa == 0.0) continue;
                for (int a2 = 0; a2 < w2.nt; ++a2)
                    for (int j2 = 0; j2 < w2.nx; ++j2) {
                        const double wb = w2.w(a2, j2) * std::exp(-0.5 * nrm[1][a2]);
                        if (wb == 0.0) continue;
                        const complexd f12 = t12.at(a1, a2, j2 - j1 + off12);
                        complexd inner = 0.0;
                        for (int a3 = 0; a3 < w3.nt; ++a3) {
                            const double e3 = std::exp(-0.5 * nrm[2][a3]);
                            for (int j3 = 0; j3 < w3.nx; ++j3) {
                                const double wc = w3.w(a3, j3);
                                if (wc == 0.0) continue;
                                inner += wc * e3 * t13.at(a1, a3, j3 - j1 + off13) *
                                         t23.at(a2, a3, j3 - j2 + off23);
                            }
                        }
                        total += wa * wb * f12 * inner;
                    }
            }
        return total;
    }

    std::vector<SmearedOperator> ops_;
    Grid grid_;
};

inline complexd smeared_npoint(const std::vector<SmearedOperator>& ops) {
    return SmearedCorrelator(ops).value(ops.at(0).lambda);
}

// ------------------------------------------------------------------------
// Infrared divergence rate: least-squares fit of ||h||_m^2 against |log m|.

struct IrSlopeReport {
    LinearFit fit;
    double expected_slope = 0.0;  // |(Re h)^(0)|^2 under the unitary convention
    std::vector<double> masses;
    std::vector<double> norms_sq;
};

inline IrSlopeReport ir_divergence_slope(const GridFunction& h,
                                         const std::vector<double>& masses) {
    if (masses.size() < 3) throw invalid_input("ir slope fit needs at least 3 masses");
    for (std::size_t i = 1; i < masses.size(); ++i)
        if (masses[i] >= masses[i - 1] || masses[i] <= 0)
            throw invalid_input("masses must be positive and strictly decreasing");
    IrSlopeReport rep;
    rep.masses = masses;
    std::vector<double> x;
    for (double m : masses) {
        x.push_back(std::abs(std::log(m)));
        rep.norms_sq.push_back(mass_norm_sq_finite(h, m));
    }
    rep.fit = linear_fit(x, rep.norms_sq);
    const double z = real_zero_mode(h);
    rep.expected_slope = z * z;
    return rep;
}

}  // namespace weylscale
