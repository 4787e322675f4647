#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "weylscale/galerkin.hpp"
#include "weylscale/rng.hpp"
#include "weylscale/scalinglimit.hpp"
#include "weylscale/sectors.hpp"
#include "weylscale/serialize.hpp"
#include "weylscale/version.hpp"

namespace weylscale {

inline const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "sweep-notiso",     "sweep-translation", "sweep-massive-defect",
        "npoint-limit",     "ir-slope",          "bessel",
        "kernel-crosscheck", "trace-diagnostics", "galerkin",
        "norm-equivalence"};
    return names;
}

struct ExperimentConfig {
    std::string experiment;
    int grid_n = 4096;
    double grid_l = 32.0;
    double mass = 1.0;
    double lambda_from = 1.0, lambda_to = 1e-3;
    int lambda_count = 7;
    int nodes = 33;
    double time = 0.8;
    int samples = 40;
    std::uint64_t seed = 1;
    int fourier_k = 256;
    std::string sign = "minus";
    int basis_size = 64;
    double interval_lo = -1.0, interval_hi = 1.0;
    std::string variant = "default";
    double profile_q = 1.0, profile_a = 0.5;
    int profile_n = 4;
    std::string output = "out.csv";
    std::string format = "csv";

    std::vector<double> lambda_grid() const {
        return geometric_grid(lambda_from, lambda_to, lambda_count);
    }

    // canonical text: sorted key=value lines, the basis of the config hash
    std::string canonical() const;
};

namespace detail {

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

struct KeyValue {
    std::map<std::string, std::string> kv;
    std::vector<std::string> errors;

    std::string get(const std::string& key, const std::string& fallback) {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        consumed.insert(key);
        return it->second;
    }

    template <typename T, typename Parse>
    T get_parsed(const std::string& key, T fallback, Parse parse, const char* what) {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        consumed.insert(key);
        try {
            return parse(it->second);
        } catch (...) {
            errors.push_back(key + ": cannot parse '" + it->second + "' as " + what);
            return fallback;
        }
    }

    double get_double(const std::string& key, double fallback) {
        return get_parsed(key, fallback,
                          [](const std::string& s) {
                              std::size_t pos = 0;
                              double v = std::stod(s, &pos);
                              if (pos != s.size()) throw std::invalid_argument(s);
                              return v;
                          },
                          "a number");
    }

    long long get_int(const std::string& key, long long fallback) {
        return get_parsed(key, fallback,
                          [](const std::string& s) {
                              std::size_t pos = 0;
                              long long v = std::stoll(s, &pos);
                              if (pos != s.size()) throw std::invalid_argument(s);
                              return v;
                          },
                          "an integer");
    }

    void check_unknown() {
        for (const auto& [k, v] : kv)
            if (!consumed.count(k)) errors.push_back("unknown key: " + k);
    }

    std::set<std::string> consumed;
};

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace detail

inline std::string ExperimentConfig::canonical() const {
    std::ostringstream os;
    os << "basis_size=" << basis_size << '\n'
       << "experiment=" << experiment << '\n'
       << "format=" << format << '\n'
       << "grid.l=" << format_double(grid_l) << '\n'
       << "grid.n=" << grid_n << '\n'
       << "interval.hi=" << format_double(interval_hi) << '\n'
       << "interval.lo=" << format_double(interval_lo) << '\n'
       << "k=" << fourier_k << '\n'
       << "lambda.count=" << lambda_count << '\n'
       << "lambda.from=" << format_double(lambda_from) << '\n'
       << "lambda.to=" << format_double(lambda_to) << '\n'
       << "mass=" << format_double(mass) << '\n'
       << "nodes=" << nodes << '\n'
       << "profile.a=" << format_double(profile_a) << '\n'
       << "profile.n=" << profile_n << '\n'
       << "profile.q=" << format_double(profile_q) << '\n'
       << "samples=" << samples << '\n'
       << "seed=" << seed << '\n'
       << "sign=" << sign << '\n'
       << "time=" << format_double(time) << '\n'
       << "variant=" << variant << '\n';
    return os.str();
}

// Parse flat "key = value" text (with # comments).  All violations are
// reported together; a valid config is returned only when the list is empty.
struct ValidationResult {
    std::optional<ExperimentConfig> config;
    std::vector<std::string> errors;
    bool ok() const { return errors.empty(); }
};

inline ValidationResult validate_config(const std::string& text,
                                        const std::string& experiment_hint = "") {
    detail::KeyValue kv;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            kv.errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        kv.kv[detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
    }

    ExperimentConfig c;
    c.experiment = kv.get("experiment", experiment_hint);
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), c.experiment) == names.end())
        kv.errors.push_back("experiment: '" + c.experiment + "' is not a known experiment");
    c.grid_n = static_cast<int>(kv.get_int("grid.n", c.grid_n));
    if (c.grid_n < 8 || (c.grid_n & (c.grid_n - 1)) != 0)
        kv.errors.push_back("grid.n: must be a power of two >= 8");
    c.grid_l = kv.get_double("grid.l", c.grid_l);
    if (c.grid_l <= 0) kv.errors.push_back("grid.l: must be positive");
    c.mass = kv.get_double("mass", c.mass);
    if (c.mass <= 0) kv.errors.push_back("mass: must be positive");
    const std::string lg = kv.get("lambda_grid", "");
    if (!lg.empty()) {
        // formatted as from:to:count
        double from = 0, to = 0;
        int count = 0;
        if (std::sscanf(lg.c_str(), "%lf:%lf:%d", &from, &to, &count) == 3) {
            c.lambda_from = from;
            c.lambda_to = to;
            c.lambda_count = count;
        } else {
            kv.errors.push_back("lambda_grid: expected from:to:count");
        }
    }
    c.lambda_from = kv.get_double("lambda.from", c.lambda_from);
    c.lambda_to = kv.get_double("lambda.to", c.lambda_to);
    c.lambda_count = static_cast<int>(kv.get_int("lambda.count", c.lambda_count));
    if (!(c.lambda_from > c.lambda_to && c.lambda_to > 0))
        kv.errors.push_back("lambda grid: needs from > to > 0");
    if (c.lambda_count < 2) kv.errors.push_back("lambda.count: must be >= 2");
    c.nodes = static_cast<int>(kv.get_int("nodes", c.nodes));
    if (c.nodes < 1) kv.errors.push_back("nodes: must be >= 1");
    c.time = kv.get_double("time", c.time);
    c.samples = static_cast<int>(kv.get_int("samples", c.samples));
    if (c.samples < 1) kv.errors.push_back("samples: must be >= 1");
    c.seed = static_cast<std::uint64_t>(kv.get_int("seed", static_cast<long long>(c.seed)));
    c.fourier_k = static_cast<int>(kv.get_int("k", c.fourier_k));
    if (c.fourier_k < 64) kv.errors.push_back("k: must be >= 64");
    c.sign = kv.get("sign", c.sign);
    if (c.sign != "minus" && c.sign != "plus")
        kv.errors.push_back("sign: must be 'minus' or 'plus'");
    c.basis_size = static_cast<int>(kv.get_int("basis_size", c.basis_size));
    if (c.basis_size < 2 || c.basis_size > 128)
        kv.errors.push_back("basis_size: must lie in [2, 128]");
    c.interval_lo = kv.get_double("interval.lo", c.interval_lo);
    c.interval_hi = kv.get_double("interval.hi", c.interval_hi);
    if (!(c.interval_lo < c.interval_hi))
        kv.errors.push_back("interval: needs lo < hi");
    c.variant = kv.get("variant", c.variant);
    if (c.variant != "default" && c.variant != "null")
        kv.errors.push_back("variant: must be 'default' or 'null'");
    c.profile_q = kv.get_double("profile.q", c.profile_q);
    c.profile_a = kv.get_double("profile.a", c.profile_a);
    if (c.profile_a <= 0) kv.errors.push_back("profile.a: must be positive");
    c.profile_n = static_cast<int>(kv.get_int("profile.n", c.profile_n));
    if (c.profile_n < 1) kv.errors.push_back("profile.n: must be >= 1");
    c.output = kv.get("output", c.output);
    c.format = kv.get("format", c.format);
    if (c.format != "csv" && c.format != "json")
        kv.errors.push_back("format: must be 'csv' or 'json'");
    kv.check_unknown();

    ValidationResult r;
    r.errors = std::move(kv.errors);
    if (r.errors.empty()) r.config = std::move(c);
    return r;
}

// ------------------------------------------------------------------------
// Experiment implementations.  Thresholds mirror the acceptance criteria and
// feed the manifest's pass/fail summary; no experiment logic lives in the CLI.

struct RunResult {
    bool pass = false;
    nlohmann::json summary;
    std::string data;       // primary artifact body (CSV or JSON)
};

namespace experiments {

inline GridFunction notiso_symbol(const Grid& g) {
    return make_bump_derivative(g, 0.0, 1.0, 1.0) +
           complexd(0.0, 1.0) * make_bump(g, 0.0, 6.0, 2.0);
}

inline GridFunction null_integral_symbol(const Grid& g) {
    return make_bump_derivative(g, 0.0, 1.5, 1.0) +
           complexd(0.0, 1.0) * make_bump_derivative(g, 0.5, 1.2, 0.7);
}

inline RunResult sweep_notiso(const ExperimentConfig& c) {
    const Grid g(c.grid_n, c.grid_l);
    const GridFunction f = notiso_symbol(g);
    const Weight2D w = bump_weight(-c.time, c.time, -1.0, 1.0, c.nodes);
    NotisoIntegral integral(f, w, c.mass);
    const auto lambdas = c.lambda_grid();
    std::ostringstream csv;
    csv << "lambda,value_re,value_im,bound\n";
    std::vector<double> vals;
    for (double l : lambdas) {
        const complexd v = integral.complex_value(l);
        vals.push_back(v.real());
        csv << format_double(l) << ',' << format_double(v.real()) << ','
            << format_double(v.imag()) << ',' << format_double(integral.upper_bound())
            << '\n';
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < vals.size(); ++i)
        if (!(vals[i] < vals[i - 1])) decreasing = false;
    const double ratio = vals.back() / vals.front();
    RunResult r;
    r.pass = decreasing && ratio < 0.5;
    r.summary = {{"strictly_decreasing", decreasing},
                 {"final_over_initial", ratio},
                 {"threshold", 0.5}};
    r.data = csv.str();
    return r;
}

inline RunResult sweep_translation(const ExperimentConfig& c) {
    const Grid g(c.grid_n, c.grid_l);
    const GridFunction f = null_integral_symbol(g);
    const auto lambdas = c.lambda_grid();
    std::ostringstream csv;
    csv << "lambda,value_re,value_im,bound\n";
    std::vector<double> vals;
    bool nodewise = true;
    for (double l : lambdas) {
        const DefectResult d = translation_defect(f, c.time, 0.0, c.mass, l);
        vals.push_back(d.value);
        nodewise = nodewise && d.nodewise_ok;
        csv << format_double(l) << ',' << format_double(d.value) << ",0,"
            << format_double(d.bound) << '\n';
    }
    bool monotone_tail = true;
    for (std::size_t i = 3; i < vals.size(); ++i)
        if (!(vals[i] < vals[i - 1])) monotone_tail = false;
    const double ratio = vals.back() / vals.front();
    RunResult r;
    r.pass = monotone_tail && ratio < 0.1 && nodewise;
    r.summary = {{"monotone_after_first_decade", monotone_tail},
                 {"final_over_initial", ratio},
                 {"nodewise_dominated", nodewise}};
    r.data = csv.str();
    return r;
}

inline RunResult sweep_massive_defect(const ExperimentConfig& c) {
    const Grid g(c.grid_n, c.grid_l);
    const GridFunction f = null_integral_symbol(g);
    const auto lambdas = c.lambda_grid();
    std::ostringstream csv;
    csv << "lambda,value,low,high,bounds_ok\n";
    std::vector<double> vals;
    bool bounds = true;
    for (double l : lambdas) {
        const MassiveDefectResult d = massive_defect(f, c.time, c.mass, l);
        vals.push_back(d.value);
        bounds = bounds && d.bounds_ok;
        csv << format_double(l) << ',' << format_double(d.value) << ','
            << format_double(d.low) << ',' << format_double(d.high) << ','
            << (d.bounds_ok ? 1 : 0) << '\n';
    }
    bool monotone_tail = true;
    for (std::size_t i = 3; i < vals.size(); ++i)
        if (!(vals[i] < vals[i - 1])) monotone_tail = false;
    const double ratio = vals.back() / vals.front();
    RunResult r;
    r.pass = monotone_tail && ratio < 0.1 && bounds;
    r.summary = {{"monotone_after_first_decade", monotone_tail},
                 {"final_over_initial", ratio},
                 {"elementary_bounds_ok", bounds}};
    r.data = csv.str();
    return r;
}

inline std::vector<SmearedOperator> npoint_operators(const Grid& g, double m,
                                                     double lambda, int nodes) {
    const GridFunction f1 = make_bump_derivative(g, -0.5, 1.0, 1.0) +
                            complexd(0.0, 1.0) * make_bump(g, -0.5, 1.5, 0.8);
    const GridFunction f2 = make_bump_derivative(g, 0.5, 1.2, 0.9) +
                            complexd(0.0, 1.0) * make_bump(g, 0.3, 1.0, -0.6);
    // shared spatial node spacing (1/16) so pair tables collapse to differences
    return {SmearedOperator{bump_weight(-0.5, 0.5, -0.8, 0.2, nodes), f1, lambda, m},
            SmearedOperator{bump_weight(-0.4, 0.6, -0.2, 0.8, nodes), f2, lambda, m}};
}

inline RunResult npoint_limit(const ExperimentConfig& c) {
    const Grid g(c.grid_n, c.grid_l);
    SmearedCorrelator corr(npoint_operators(g, c.mass, 1.0, c.nodes));
    const complexd v0 = corr.value_at_mass(0.0);
    const auto lambdas = c.lambda_grid();
    std::ostringstream csv;
    csv << "lambda,value_re,value_im,limit_re,limit_im\n";
    std::vector<double> errs;
    for (double l : lambdas) {
        const complexd v = corr.value_at_mass(l * c.mass);
        errs.push_back(std::abs(v - v0));
        csv << format_double(l) << ',' << format_double(v.real()) << ','
            << format_double(v.imag()) << ',' << format_double(v0.real()) << ','
            << format_double(v0.imag()) << '\n';
    }
    bool monotone_tail = true;
    for (std::size_t i = 3; i < errs.size(); ++i)
        if (!(errs[i] < errs[i - 1])) monotone_tail = false;
    const double rel = errs.back() / std::abs(v0);
    RunResult r;
    r.pass = rel < 0.05;
    r.summary = {{"relative_error_at_lambda_min", rel},
                 {"threshold", 0.05},
                 {"monotone_after_first_decade", monotone_tail}};
    r.data = csv.str();
    return r;
}

inline RunResult ir_slope(const ExperimentConfig& c) {
    const Grid g(c.grid_n, c.grid_l);
    const GridFunction h = c.variant == "null" ? make_bump_derivative(g, 0.0, 0.5, 1.0)
                                               : make_bump(g, 0.0, 2.0, 1.0);
    std::vector<double> masses;
    for (int d = 1; d <= 6; ++d) masses.push_back(std::pow(10.0, -d));
    const IrSlopeReport rep = ir_divergence_slope(h, masses);
    std::ostringstream csv;
    csv << "mass,abs_log_mass,norm_sq\n";
    for (std::size_t i = 0; i < masses.size(); ++i)
        csv << format_double(masses[i]) << ',' << format_double(std::abs(std::log(masses[i])))
            << ',' << format_double(rep.norms_sq[i]) << '\n';
    RunResult r;
    if (c.variant == "null") {
        const double scale = rep.norms_sq.front();
        r.pass = std::abs(rep.fit.slope) < 1e-3 * scale;
        r.summary = {{"slope", rep.fit.slope},
                     {"scale", scale},
                     {"threshold", 1e-3 * scale}};
    } else {
        const double reldev = std::abs(rep.fit.slope - rep.expected_slope) /
                              rep.expected_slope;
        r.pass = rep.fit.r_squared > 0.99 && reldev < 0.15 && rep.fit.slope > 0;
        r.summary = {{"slope", rep.fit.slope},
                     {"expected_slope", rep.expected_slope},
                     {"relative_deviation", reldev},
                     {"r_squared", rep.fit.r_squared}};
    }
    return r.data = csv.str(), r;
}

inline RunResult bessel_table(const ExperimentConfig& c) {
    std::ostringstream csv;
    csv << "x,k0,k1\n";
    for (int i = 1; i <= c.samples; ++i) {
        const double x = 40.0 * i / c.samples;
        csv << format_double(x) << ',' << format_double(bessel_k(0, x)) << ','
            << format_double(bessel_k(1, x)) << '\n';
    }
    RunResult r;
    r.pass = true;
    r.summary = {{"points", c.samples}};
    r.data = csv.str();
    return r;
}

inline RunResult kernel_crosscheck(const ExperimentConfig& c) {
    const Grid g(c.grid_n, c.grid_l);
    CounterRng rng(c.seed);
    const Interval iv(c.interval_lo, c.interval_hi);
    std::ostringstream csv;
    csv << "trial,sign,mass,position,momentum,abs_diff\n";
    double worst = 0.0;
    const std::vector<double> masses = {0.5, 1.0, 2.0};
    for (int t = 0; t < c.samples; ++t) {
        const GridFunction f = random_null_bump_pair(g, iv, rng);
        const GridFunction h = random_null_bump_pair(g, iv, rng);
        for (double m : masses)
            for (KernelSign s : {KernelSign::minus, KernelSign::plus}) {
                const double pos = form_q_position(s, f, h, m);
                const double mom = form_q_momentum(s, f, h, m);
                const double diff = std::abs(pos - mom);
                worst = std::max(worst, diff / std::max(1.0, std::abs(mom)));
                csv << t << ',' << (s == KernelSign::minus ? "minus" : "plus") << ','
                    << format_double(m) << ',' << format_double(pos) << ','
                    << format_double(mom) << ',' << format_double(diff) << '\n';
            }
    }
    RunResult r;
    r.pass = worst < 1e-4;
    r.summary = {{"worst_relative_difference", worst}, {"threshold", 1e-4}};
    r.data = csv.str();
    return r;
}

inline RunResult trace_diagnostics(const ExperimentConfig& c) {
    const KernelSign s = c.sign == "minus" ? KernelSign::minus : KernelSign::plus;
    const TraceDiagnostic d = fourier_trace_diagnostic(s, c.mass, c.fourier_k);
    std::ostringstream csv;
    csv << "k,q_re,q_im,abs_q\n";
    for (std::size_t k = 0; k < d.coefficients.size(); ++k)
        csv << k << ',' << format_double(d.coefficients[k].real()) << ','
            << format_double(d.coefficients[k].imag()) << ','
            << format_double(std::abs(d.coefficients[k])) << '\n';
    RunResult r;
    const bool exponent_ok =
        s == KernelSign::minus ? (d.decay_fit_exponent >= 1.8 && d.decay_fit_exponent <= 2.2)
                               : true;
    r.pass = exponent_ok && d.cauchy_increment < 0.05;
    r.summary = {{"decay_fit_exponent", d.decay_fit_exponent},
                 {"tail_exponent", d.tail_exponent},
                 {"weighted_sum", d.weighted_sum},
                 {"weighted_sum_2k", d.weighted_sum_2k},
                 {"cauchy_increment", d.cauchy_increment},
                 {"q0_direct", d.q0_direct},
                 {"q0_series", d.coefficients[0].real()}};
    r.data = csv.str();
    return r;
}

inline RunResult galerkin_experiment(const ExperimentConfig& c) {
    const Interval iv(c.interval_lo, c.interval_hi);
    const GalerkinModel full = build_galerkin(iv, c.mass, c.basis_size);
    const GalerkinModel half = build_galerkin(iv, c.mass, c.basis_size / 2);
    const OperatorDiagnostics df = operator_diagnostics(full);
    const OperatorDiagnostics dh = operator_diagnostics(half);
    const double stability = std::abs(df.trace_norm - dh.trace_norm) / df.trace_norm;
    const double elem = one_minus_t_element_residual(full);
    std::ostringstream csv;
    csv << "index,eigenvalue\n";
    for (int i = 0; i < df.one_minus_t_eigs.size(); ++i)
        csv << i << ',' << format_double(df.one_minus_t_eigs(i)) << '\n';
    RunResult r;
    r.pass = stability < 0.05 && elem < 1e-5 && df.gram_m_identity_error < 1e-8;
    r.summary = {{"trace_norm", df.trace_norm},
                 {"trace_norm_half", dh.trace_norm},
                 {"stability", stability},
                 {"element_residual", elem},
                 {"gram_identity_error", df.gram_m_identity_error},
                 {"cross_check_residual", df.cross_check_residual},
                 {"cross_check_skipped", df.cross_check_skipped},
                 {"r0_smallest_sv", df.r0_smallest_sv},
                 {"raw_condition", full.raw_condition}};
    r.data = csv.str();
    return r;
}

inline RunResult norm_equivalence_experiment(const ExperimentConfig& c) {
    const Interval iv(c.interval_lo, c.interval_hi);
    const Grid g(c.grid_n, c.grid_l);
    const NormEquivalenceReport rep = norm_equivalence(iv, c.mass, c.samples, c.seed, g);
    std::ostringstream csv;
    csv << "metric,value\n"
        << "max_ratio_plus," << format_double(rep.max_ratio_plus) << '\n'
        << "min_ratio_plus," << format_double(rep.min_ratio_plus) << '\n'
        << "max_ratio_minus," << format_double(rep.max_ratio_minus) << '\n'
        << "min_ratio_minus," << format_double(rep.min_ratio_minus) << '\n';
    RunResult r;
    r.pass = rep.one_sided_ok && rep.omineq_ok;
    r.summary = {{"max_ratio_plus", rep.max_ratio_plus},
                 {"min_ratio_plus", rep.min_ratio_plus},
                 {"max_ratio_minus", rep.max_ratio_minus},
                 {"min_ratio_minus", rep.min_ratio_minus},
                 {"one_sided_ok", rep.one_sided_ok},
                 {"omineq_ok", rep.omineq_ok}};
    r.data = csv.str();
    return r;
}

}  // namespace experiments

// Dispatch, write artifacts, and emit the manifest next to the output file.
inline RunResult run_experiment(const ExperimentConfig& c) {
    RunResult r;
    if (c.experiment == "sweep-notiso") r = experiments::sweep_notiso(c);
    else if (c.experiment == "sweep-translation") r = experiments::sweep_translation(c);
    else if (c.experiment == "sweep-massive-defect") r = experiments::sweep_massive_defect(c);
    else if (c.experiment == "npoint-limit") r = experiments::npoint_limit(c);
    else if (c.experiment == "ir-slope") r = experiments::ir_slope(c);
    else if (c.experiment == "bessel") r = experiments::bessel_table(c);
    else if (c.experiment == "kernel-crosscheck") r = experiments::kernel_crosscheck(c);
    else if (c.experiment == "trace-diagnostics") r = experiments::trace_diagnostics(c);
    else if (c.experiment == "galerkin") r = experiments::galerkin_experiment(c);
    else if (c.experiment == "norm-equivalence") r = experiments::norm_equivalence_experiment(c);
    else throw invalid_input("unknown experiment: " + c.experiment);
    return r;
}

inline nlohmann::json make_manifest(const ExperimentConfig& c, const RunResult& r) {
    nlohmann::json m;
    m["schema_version"] = 1;
    m["experiment"] = c.experiment;
    m["config"] = c.canonical();
    m["config_hash"] = detail::hex64(detail::fnv1a64(c.canonical()));
    m["library_version"] = version();
    m["summary"] = r.summary;
    m["pass"] = r.pass;
    return m;
}

// Full run: compute, write the artifact and its manifest.  Returns the result;
// I/O problems surface as std::runtime_error.
inline RunResult run_and_write(const ExperimentConfig& c) {
    RunResult r = run_experiment(c);
    if (c.format == "json") {
        nlohmann::json j;
        j["summary"] = r.summary;
        j["data_csv"] = r.data;
        write_file(c.output, j.dump(2) + "\n");
    } else {
        write_file(c.output, r.data);
    }
    write_file(c.output + ".manifest.json", make_manifest(c, r).dump(2) + "\n");
    return r;
}

}  // namespace weylscale
