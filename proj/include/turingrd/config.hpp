#pragma once

// Line-oriented "key = value" experiment configuration. Unknown keys are
// rejected with line numbers; an empty document yields the reference
// parameter set used throughout the numeric experiments.

#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "turingrd/errors.hpp"
#include "turingrd/kinetics.hpp"
#include "turingrd/solver.hpp"

namespace turingrd {

enum class InitialKind { Pattern, Equilibrium, ProfileFile };

struct SweepSpec {
    double d1_min = 0.001, d1_max = 0.008;
    std::size_t d1_count = 50;
    double d2_min = 0.05, d2_max = 0.5;
    std::size_t d2_count = 50;

    void validate() const {
        if (d1_count < 2 || d2_count < 2)
            throw ConfigError("sweep: counts must be >= 2");
        if (!(d1_min > 0 && d2_min > 0 && d1_max > d1_min && d2_max > d2_min))
            throw ConfigError("sweep: ranges must be positive and increasing");
    }
};

struct ExperimentConfig {
    // Exactly one of the two parameter blocks is active.
    bool dimensional = false;
    KineticParams kinetic{1.1, 0.05, 0.5, 1.0, 1.0};
    DimensionalParams dim{};

    double d1 = 0.005;
    double d2 = 0.2;
    double l = 1.0;

    SolverConfig solver{};
    InitialKind initial = InitialKind::Pattern;
    std::string initial_file;
    double s = 0.1; ///< pattern amplitude
    std::string out_dir;

    SweepSpec sweep{};

    /// Active kinetic parameters plus diffusivities, rescaling if dimensional.
    KineticParams kinetics() const {
        return dimensional ? nondimensionalize(dim).params : kinetic;
    }
    DiffusionParams diffusion() const {
        if (dimensional) {
            auto nd = nondimensionalize(dim);
            return {nd.d1, nd.d2, nd.l};
        }
        return {d1, d2, l};
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

inline double parse_double(std::string_view v, std::size_t lineno) {
    double out{};
    const char* first = v.data();
    const char* last = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last)
        throw ConfigError("line " + std::to_string(lineno) + ": expected a number, got '" +
                          std::string(v) + "'");
    return out;
}

inline std::size_t parse_count(std::string_view v, std::size_t lineno) {
    std::size_t out{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ConfigError("line " + std::to_string(lineno) + ": expected a nonnegative integer, got '" +
                          std::string(v) + "'");
    return out;
}

} // namespace detail

/// Parse a configuration document. '#' starts a comment; blank lines are
/// ignored; every other line must be `key = value`.
inline ExperimentConfig parse_config(const std::string& text) {
    static const std::set<std::string, std::less<>> kinetic_keys = {"alpha", "gamma", "delta",
                                                                    "epsilon", "beta"};
    static const std::set<std::string, std::less<>> dimensional_keys = {
        "r", "K", "a", "b", "m", "gamma_dim", "delta_dim", "D1", "D2", "l_dim"};

    ExperimentConfig cfg;
    std::map<std::string, std::pair<std::string, std::size_t>, std::less<>> kv;

    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    bool saw_kinetic = false, saw_dimensional = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const auto trimmed = detail::trim(line);
        if (trimmed.empty())
            continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key{detail::trim(trimmed.substr(0, eq))};
        std::string value{detail::trim(trimmed.substr(eq + 1))};
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": missing key");
        if (kv.count(key))
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        if (kinetic_keys.count(key))
            saw_kinetic = true;
        if (dimensional_keys.count(key))
            saw_dimensional = true;
        kv.emplace(std::move(key), std::make_pair(std::move(value), lineno));
    }
    if (saw_kinetic && saw_dimensional)
        throw ConfigError("config mixes kinetic and dimensional parameter blocks");
    cfg.dimensional = saw_dimensional;
    if (saw_dimensional) {
        // The dimensional block must be complete.
        for (const auto& k : dimensional_keys)
            if (!kv.count(k))
                throw ConfigError("missing dimensional key '" + std::string(k) + "'");
    }

    auto take = [&](std::string_view key) -> std::optional<std::pair<std::string, std::size_t>> {
        auto it = kv.find(key);
        if (it == kv.end())
            return std::nullopt;
        auto out = it->second;
        kv.erase(it);
        return out;
    };
    auto num = [&](std::string_view key, double& dest) {
        if (auto v = take(key))
            dest = detail::parse_double(v->first, v->second);
    };
    auto cnt = [&](std::string_view key, std::size_t& dest) {
        if (auto v = take(key))
            dest = detail::parse_count(v->first, v->second);
    };

    num("alpha", cfg.kinetic.alpha);
    num("gamma", cfg.kinetic.gamma);
    num("delta", cfg.kinetic.delta);
    num("epsilon", cfg.kinetic.epsilon);
    num("beta", cfg.kinetic.beta);

    num("r", cfg.dim.r);
    num("K", cfg.dim.K);
    num("a", cfg.dim.a);
    num("b", cfg.dim.b);
    num("m", cfg.dim.m);
    num("gamma_dim", cfg.dim.gamma_dim);
    num("delta_dim", cfg.dim.delta_dim);
    num("D1", cfg.dim.D1);
    num("D2", cfg.dim.D2);
    num("l_dim", cfg.dim.l_dim);

    num("d1", cfg.d1);
    num("d2", cfg.d2);
    num("l", cfg.l);
    num("h", cfg.solver.h);
    if (auto v = take("dt")) {
        if (v->first != "auto")
            cfg.solver.dt = detail::parse_double(v->first, v->second);
    }
    num("dt_safety", cfg.solver.dt_safety);
    num("t_end", cfg.solver.t_end);
    cnt("snapshot_stride", cfg.solver.snapshot_stride);
    num("steady_tol", cfg.solver.steady_tol);
    num("probe_x", cfg.solver.probe_x);
    num("s", cfg.s);
    if (auto v = take("out_dir"))
        cfg.out_dir = v->first;
    if (auto v = take("reference")) {
        if (v->first == "equilibrium")
            cfg.solver.reference = ReferenceKind::Equilibrium;
        else if (v->first == "pattern")
            cfg.solver.reference = ReferenceKind::Pattern;
        else if (v->first == "none")
            cfg.solver.reference = ReferenceKind::None;
        else
            throw ConfigError("line " + std::to_string(v->second) +
                              ": reference must be equilibrium, pattern, or none");
    }
    if (auto v = take("initial")) {
        if (v->first == "pattern")
            cfg.initial = InitialKind::Pattern;
        else if (v->first == "equilibrium")
            cfg.initial = InitialKind::Equilibrium;
        else if (v->first.rfind("file:", 0) == 0) {
            cfg.initial = InitialKind::ProfileFile;
            cfg.initial_file = v->first.substr(5);
        } else {
            throw ConfigError("line " + std::to_string(v->second) +
                              ": initial must be pattern, equilibrium, or file:PATH");
        }
    }

    num("d1_min", cfg.sweep.d1_min);
    num("d1_max", cfg.sweep.d1_max);
    cnt("d1_count", cfg.sweep.d1_count);
    num("d2_min", cfg.sweep.d2_min);
    num("d2_max", cfg.sweep.d2_max);
    cnt("d2_count", cfg.sweep.d2_count);

    if (!kv.empty()) {
        const auto& [key, val] = *kv.begin();
        throw ConfigError("line " + std::to_string(val.second) + ": unknown key '" + key + "'");
    }

    try {
        if (cfg.dimensional)
            cfg.dim.validate();
        else
            cfg.kinetic.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (!(cfg.solver.dt_safety > 0 && cfg.solver.dt_safety <= 1))
        throw ConfigError("dt_safety must lie in (0, 1]");
    if (!(cfg.solver.h > 0 && cfg.l > 0 && cfg.d1 > 0 && cfg.d2 > 0))
        throw ConfigError("h, l, d1, d2 must be positive");
    cfg.sweep.validate();
    return cfg;
}

/// Deterministic serialization; parse(serialize(c)) reproduces c.
inline std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    auto emit = [&](std::string_view key, double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        os << key << " = " << buf << '\n';
    };
    if (cfg.dimensional) {
        emit("r", cfg.dim.r);
        emit("K", cfg.dim.K);
        emit("a", cfg.dim.a);
        emit("b", cfg.dim.b);
        emit("m", cfg.dim.m);
        emit("gamma_dim", cfg.dim.gamma_dim);
        emit("delta_dim", cfg.dim.delta_dim);
        emit("D1", cfg.dim.D1);
        emit("D2", cfg.dim.D2);
        emit("l_dim", cfg.dim.l_dim);
    } else {
        emit("alpha", cfg.kinetic.alpha);
        emit("gamma", cfg.kinetic.gamma);
        emit("delta", cfg.kinetic.delta);
        emit("epsilon", cfg.kinetic.epsilon);
        emit("beta", cfg.kinetic.beta);
    }
    emit("d1", cfg.d1);
    emit("d2", cfg.d2);
    emit("l", cfg.l);
    emit("h", cfg.solver.h);
    if (cfg.solver.dt)
        emit("dt", *cfg.solver.dt);
    else
        os << "dt = auto\n";
    emit("dt_safety", cfg.solver.dt_safety);
    emit("t_end", cfg.solver.t_end);
    os << "snapshot_stride = " << cfg.solver.snapshot_stride << '\n';
    emit("steady_tol", cfg.solver.steady_tol);
    emit("probe_x", cfg.solver.probe_x);
    emit("s", cfg.s);
    switch (cfg.solver.reference) {
    case ReferenceKind::Equilibrium: os << "reference = equilibrium\n"; break;
    case ReferenceKind::Pattern: os << "reference = pattern\n"; break;
    case ReferenceKind::None: os << "reference = none\n"; break;
    }
    switch (cfg.initial) {
    case InitialKind::Pattern: os << "initial = pattern\n"; break;
    case InitialKind::Equilibrium: os << "initial = equilibrium\n"; break;
    case InitialKind::ProfileFile: os << "initial = file:" << cfg.initial_file << '\n'; break;
    }
    if (!cfg.out_dir.empty())
        os << "out_dir = " << cfg.out_dir << '\n';
    emit("d1_min", cfg.sweep.d1_min);
    emit("d1_max", cfg.sweep.d1_max);
    os << "d1_count = " << cfg.sweep.d1_count << '\n';
    emit("d2_min", cfg.sweep.d2_min);
    emit("d2_max", cfg.sweep.d2_max);
    os << "d2_count = " << cfg.sweep.d2_count << '\n';
    return os.str();
}

} // namespace turingrd
