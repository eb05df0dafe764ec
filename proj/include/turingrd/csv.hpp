#pragma once

// Plot-ready delimited text output. All numbers are written with 17
// significant digits so binary doubles round-trip through text.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "turingrd/errors.hpp"
#include "turingrd/solver.hpp"

namespace turingrd {

inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path);
    if (!os)
        throw ConfigError("cannot open for writing: " + path.string());
    os << content;
    if (!os)
        throw ConfigError("write failed: " + path.string());
}

/// One profile snapshot: header "x,N,P", one row per node.
inline void write_snapshot(const std::filesystem::path& path, const GridState& state) {
    std::ostringstream os;
    os << "x,N,P\n";
    for (std::size_t j = 0; j < state.node_count(); ++j)
        os << g17(static_cast<double>(j) * state.h) << ',' << g17(state.n_values[j]) << ','
           << g17(state.p_values[j]) << '\n';
    write_text_file(path, os.str());
}

struct Profile {
    std::vector<double> x;
    std::vector<double> n;
    std::vector<double> p;
};

inline Profile read_profile(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is)
        throw ConfigError("cannot open profile file: " + path.string());
    Profile prof;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (lineno == 1 || line.empty())
            continue; // header
        double x, n, p;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &n, &p) != 3)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": expected three comma-separated numbers");
        prof.x.push_back(x);
        prof.n.push_back(n);
        prof.p.push_back(p);
    }
    if (prof.x.empty())
        throw ConfigError("profile file has no data rows: " + path.string());
    return prof;
}

/// Manifest of a simulation run: snapshot filenames with their times.
inline void write_manifest(const std::filesystem::path& path,
                           const std::vector<std::string>& filenames,
                           const std::vector<double>& times) {
    std::ostringstream os;
    os << "filename,t\n";
    for (std::size_t i = 0; i < filenames.size(); ++i)
        os << filenames[i] << ',' << g17(times[i]) << '\n';
    write_text_file(path, os.str());
}

/// Norm/probe time series: columns t,l2,linf,N_probe,P_probe.
inline void write_norm_series(const std::filesystem::path& path, const RunReport& report) {
    std::ostringstream os;
    os << "t,l2,linf,N_probe,P_probe\n";
    for (std::size_t i = 0; i < report.times.size(); ++i) {
        os << g17(report.times[i]) << ',';
        os << (i < report.l2_series.size() ? g17(report.l2_series[i]) : std::string{}) << ',';
        os << (i < report.linf_series.size() ? g17(report.linf_series[i]) : std::string{}) << ',';
        os << (i < report.n_probe_series.size() ? g17(report.n_probe_series[i]) : std::string{})
           << ',';
        os << (i < report.p_probe_series.size() ? g17(report.p_probe_series[i]) : std::string{})
           << '\n';
    }
    write_text_file(path, os.str());
}

} // namespace turingrd
