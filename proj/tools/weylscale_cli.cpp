// Experiment runner: one subcommand per library diagnostic, flat key=value
// config files with --flag overrides, CSV/JSON artifacts plus a manifest.
//
// Exit codes: 0 success, 2 invalid configuration, 3 numerical guard tripped,
// 4 I/O failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "weylscale/weylscale.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read config file: " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

struct Flags {
    std::string config_path;
    std::string output;
    std::string format;
    std::string lambda_grid;
    std::string sign;
    std::string variant;
    double mass = -1.0;
    double time = -1e300;
    int grid_points = 0;
    int nodes = 0;
    int samples = 0;
    int k = 0;
    int basis_size = 0;
    long long seed = -1;
    std::string interval;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config_path, "flat key=value config file");
    cmd->add_option("--output", f.output, "artifact path");
    cmd->add_option("--format", f.format, "csv|json");
    cmd->add_option("--mass", f.mass, "mass parameter m");
    cmd->add_option("--lambda-grid", f.lambda_grid, "from:to:count (geometric)");
    cmd->add_option("--grid-points", f.grid_points, "grid size N (power of two)");
    cmd->add_option("--nodes", f.nodes, "smearing quadrature nodes per axis");
    cmd->add_option("--time", f.time, "time displacement for defect sweeps");
    cmd->add_option("--samples", f.samples, "sample count");
    cmd->add_option("--seed", f.seed, "random stream seed");
    cmd->add_option("--K", f.k, "Fourier coefficient count");
    cmd->add_option("--sign", f.sign, "plus|minus");
    cmd->add_option("--basis-size", f.basis_size, "Galerkin basis size");
    cmd->add_option("--interval", f.interval, "lo:hi interval");
    cmd->add_option("--variant", f.variant, "default|null");
}

std::string overrides_text(const Flags& f) {
    std::ostringstream os;
    if (!f.output.empty()) os << "output = " << f.output << '\n';
    if (!f.format.empty()) os << "format = " << f.format << '\n';
    if (f.mass > 0) os << "mass = " << f.mass << '\n';
    if (!f.lambda_grid.empty()) os << "lambda_grid = " << f.lambda_grid << '\n';
    if (f.grid_points > 0) os << "grid.n = " << f.grid_points << '\n';
    if (f.nodes > 0) os << "nodes = " << f.nodes << '\n';
    if (f.time > -1e299) os << "time = " << f.time << '\n';
    if (f.samples > 0) os << "samples = " << f.samples << '\n';
    if (f.seed >= 0) os << "seed = " << f.seed << '\n';
    if (f.k > 0) os << "k = " << f.k << '\n';
    if (!f.sign.empty()) os << "sign = " << f.sign << '\n';
    if (f.basis_size > 0) os << "basis_size = " << f.basis_size << '\n';
    if (!f.variant.empty()) os << "variant = " << f.variant << '\n';
    if (!f.interval.empty()) {
        double lo = 0, hi = 0;
        if (std::sscanf(f.interval.c_str(), "%lf:%lf", &lo, &hi) == 2)
            os << "interval.lo = " << lo << "\ninterval.hi = " << hi << '\n';
        else
            os << "interval.lo = bad\n";  // surfaces as a parse error
    }
    return os.str();
}

int run(const std::string& experiment, const Flags& f) {
    std::string text;
    try {
        if (!f.config_path.empty()) text = read_file(f.config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
    text += overrides_text(f);
    auto vr = weylscale::validate_config(text, experiment);
    if (!vr.ok()) {
        for (const auto& e : vr.errors) std::cerr << "config error: " << e << '\n';
        return 2;
    }
    try {
        auto result = weylscale::run_and_write(*vr.config);
        std::cout << vr.config->experiment << ": " << (result.pass ? "pass" : "FAIL")
                  << "\nsummary: " << result.summary.dump() << '\n'
                  << "wrote " << vr.config->output << " and "
                  << vr.config->output + ".manifest.json" << '\n';
        return 0;
    } catch (const weylscale::numerical_guard& e) {
        std::cerr << "numerical guard [" << e.guard << "]: " << e.what() << '\n';
        return 3;
    } catch (const weylscale::invalid_input& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 4;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weylscale: scaling-limit diagnostics for the 2d free scalar field"};
    app.require_subcommand(1);

    std::map<std::string, Flags> flags;
    for (const auto& name : weylscale::experiment_names()) {
        auto* cmd = app.add_subcommand(name);
        add_common(cmd, flags[name]);
    }
    auto* validate = app.add_subcommand("validate", "check a config file");
    std::string validate_path;
    validate->add_option("config", validate_path, "config file")->required();

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed()) {
        std::string text;
        try {
            text = read_file(validate_path);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 4;
        }
        auto vr = weylscale::validate_config(text);
        if (!vr.ok()) {
            for (const auto& e : vr.errors) std::cerr << "config error: " << e << '\n';
            return 2;
        }
        std::cout << "config ok\n";
        return 0;
    }
    for (const auto& name : weylscale::experiment_names())
        if (app.get_subcommand(name)->parsed()) return run(name, flags[name]);
    return 2;
}
