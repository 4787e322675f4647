#pragma once

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "weylscale/grid.hpp"
#include "weylscale/weyl.hpp"

namespace weylscale {

// Shortest round-trip decimal form; keeps CSV output byte-stable.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Columnar text record: one "x re im" line per node.
inline std::string to_columnar_text(const GridFunction& f) {
    std::ostringstream os;
    os << "# x re im\n";
    for (int j = 0; j < f.grid.n; ++j)
        os << format_double(f.grid.x(j)) << ' ' << format_double(f.samples[j].real())
           << ' ' << format_double(f.samples[j].imag()) << '\n';
    return os.str();
}

inline nlohmann::json to_json(const GridFunction& f) {
    nlohmann::json j;
    j["domain"] = {-f.grid.half_width, f.grid.half_width};
    j["dx"] = f.grid.dx();
    j["support"] = {f.support_lo, f.support_hi};
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& v : f.samples) samples.push_back({v.real(), v.imag()});
    j["samples"] = std::move(samples);
    return j;
}

inline GridFunction grid_function_from_json(const nlohmann::json& j) {
    const double lo = j.at("domain").at(0).get<double>();
    const double hi = j.at("domain").at(1).get<double>();
    const auto& samples = j.at("samples");
    const int n = static_cast<int>(samples.size());
    Grid g(n, 0.5 * (hi - lo));
    std::vector<complexd> v(n);
    for (int k = 0; k < n; ++k)
        v[k] = complexd(samples[k].at(0).get<double>(), samples[k].at(1).get<double>());
    const auto& sup = j.at("support");
    return GridFunction(g, std::move(v), sup.at(0).get<double>(), sup.at(1).get<double>());
}

// Words serialize as symbol references plus the accumulated phase.
inline nlohmann::json word_to_json(const WeylWord& w,
                                   const std::vector<std::string>& symbol_ids) {
    if (symbol_ids.size() != w.factors.size())
        throw invalid_input("one symbol id per factor required");
    nlohmann::json j;
    j["phase"] = {w.phase.real(), w.phase.imag()};
    j["symbols"] = symbol_ids;
    return j;
}

// CSV table of state expectations: (word-id, Re, Im).
inline std::string expectation_table_csv(
    const std::vector<std::pair<std::string, complexd>>& rows) {
    std::ostringstream os;
    os << "word_id,re,im\n";
    for (const auto& [id, v] : rows)
        os << id << ',' << format_double(v.real()) << ',' << format_double(v.imag())
           << '\n';
    return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << content;
    if (!os) throw std::runtime_error("write failure: " + path);
}

}  // namespace weylscale
