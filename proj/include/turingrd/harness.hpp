#pragma once

// Experiment front-end logic behind the CLI subcommands: analysis reports,
// initial-state construction, simulation output files, stability sweeps.

#include <filesystem>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "turingrd/config.hpp"
#include "turingrd/csv.hpp"
#include "turingrd/errors.hpp"
#include "turingrd/kinetics.hpp"
#include "turingrd/solver.hpp"
#include "turingrd/turing.hpp"

namespace turingrd {

struct AnalysisReport {
    Equilibrium eq;
    KineticVerdict kinetic;
    std::optional<std::pair<double, double>> window; ///< empty when theta1 <= 0
    std::optional<double> d2_crit;                   ///< present when d1 is inside the window
    StabilityVerdict verdict;
    std::optional<std::pair<double, double>> eigenvector;
};

inline AnalysisReport analyze(const KineticParams& kp, const DiffusionParams& dp) {
    AnalysisReport rep;
    rep.eq = find_equilibrium(kp);
    rep.kinetic = kinetic_stability(rep.eq);
    try {
        rep.window = d1_window(rep.eq, dp.l);
    } catch (const EmptyWindow&) {
    }
    rep.verdict = classify(rep.eq, dp);
    if (rep.window && dp.d1 >= rep.window->first && dp.d1 < rep.window->second) {
        rep.d2_crit = d2_critical(rep.eq, dp.d1, dp.l);
        rep.eigenvector = critical_eigenvector(rep.eq, dp.d1, *rep.d2_crit, dp.l);
    }
    return rep;
}

inline const char* to_string(StabilityKind k) {
    switch (k) {
    case StabilityKind::KineticUnstable: return "kinetic_unstable";
    case StabilityKind::TuringUnstable: return "turing_unstable";
    default: return "asymptotically_stable";
    }
}

/// Machine-readable key,value rendering of an analysis report.
inline std::string analysis_csv(const AnalysisReport& rep, const DiffusionParams& dp) {
    std::ostringstream os;
    os << "key,value\n";
    os << "n_bar," << g17(rep.eq.n_bar) << '\n';
    os << "p_bar," << g17(rep.eq.p_bar) << '\n';
    os << "theta1," << g17(rep.eq.theta1) << '\n';
    os << "theta2," << g17(rep.eq.theta2) << '\n';
    os << "theta3," << g17(rep.eq.theta3) << '\n';
    os << "theta4," << g17(rep.eq.theta4) << '\n';
    os << "trace_a," << g17(rep.eq.trace_a) << '\n';
    os << "det_a," << g17(rep.eq.det_a) << '\n';
    os << "multiple_equilibria," << (rep.eq.multiple_roots ? 1 : 0) << '\n';
    os << "kinetic_verdict," << (rep.kinetic == KineticVerdict::Stable ? "stable" : "unstable")
       << '\n';
    os << "d1," << g17(dp.d1) << '\n';
    os << "d2," << g17(dp.d2) << '\n';
    os << "l," << g17(dp.l) << '\n';
    os << "d1_window_lower," << (rep.window ? g17(rep.window->first) : std::string{}) << '\n';
    os << "d1_window_upper," << (rep.window ? g17(rep.window->second) : std::string{}) << '\n';
    os << "d2_crit," << (rep.d2_crit ? g17(*rep.d2_crit) : std::string{}) << '\n';
    os << "verdict," << to_string(rep.verdict.kind) << '\n';
    std::ostringstream modes;
    for (std::size_t i = 0; i < rep.verdict.unstable_modes.size(); ++i)
        modes << (i ? ";" : "") << rep.verdict.unstable_modes[i];
    os << "unstable_modes," << modes.str() << '\n';
    os << "det_b_margin," << g17(rep.verdict.margin) << '\n';
    os << "eta1," << (rep.eigenvector ? g17(rep.eigenvector->first) : std::string{}) << '\n';
    os << "eta2," << (rep.eigenvector ? g17(rep.eigenvector->second) : std::string{}) << '\n';
    os << "eta_ratio,"
       << (rep.eigenvector ? g17(rep.eigenvector->first / rep.eigenvector->second)
                           : std::string{})
       << '\n';
    os << "instability_sufficient_condition," << (rep.verdict.sufficient_condition_hit ? 1 : 0)
       << '\n';
    return os.str();
}

/// Pattern profile at the critical diffusivity for the configured d1.
inline PatternSpec make_pattern_spec(const Equilibrium& eq, const DiffusionParams& dp, double s) {
    PatternSpec ps;
    ps.s = s;
    ps.d2_crit = d2_critical(eq, dp.d1, dp.l);
    auto [e1, e2] = critical_eigenvector(eq, dp.d1, ps.d2_crit, dp.l);
    ps.eta1 = e1;
    ps.eta2 = e2;
    return ps;
}

/// Initial grid state per the configuration (uniform equilibrium, analytic
/// pattern, or profile file).
inline GridState build_initial_state(const ExperimentConfig& cfg, const Equilibrium& eq) {
    const auto dp = cfg.diffusion();
    GridState g = make_grid(cfg.solver.h, dp.l);
    switch (cfg.initial) {
    case InitialKind::Equilibrium:
        std::fill(g.n_values.begin(), g.n_values.end(), eq.n_bar);
        std::fill(g.p_values.begin(), g.p_values.end(), eq.p_bar);
        break;
    case InitialKind::Pattern: {
        const PatternSpec ps = make_pattern_spec(eq, dp, cfg.s);
        const auto x = grid_coordinates(g);
        const auto prof = small_amplitude_pattern(eq, ps, x, dp.l);
        g.n_values = prof.n;
        g.p_values = prof.p;
        break;
    }
    case InitialKind::ProfileFile: {
        const Profile prof = read_profile(cfg.initial_file);
        if (prof.n.size() != g.node_count())
            throw GridMismatch("initial profile file does not match the configured grid");
        g.n_values = prof.n;
        g.p_values = prof.p;
        break;
    }
    }
    return g;
}

struct SimulationResult {
    RunReport report;
    std::filesystem::path out_dir;
};

/// Run a configured simulation and persist snapshots, manifest and norms.
inline SimulationResult simulate(const ExperimentConfig& cfg,
                                 const std::filesystem::path& out_dir) {
    const KineticParams kp = cfg.kinetics();
    const DiffusionParams dp = cfg.diffusion();
    const Equilibrium eq = find_equilibrium(kp);

    GridState initial = build_initial_state(cfg, eq);

    std::vector<double> n_ref, p_ref;
    switch (cfg.solver.reference) {
    case ReferenceKind::Equilibrium:
        n_ref.assign(initial.node_count(), eq.n_bar);
        p_ref.assign(initial.node_count(), eq.p_bar);
        break;
    case ReferenceKind::Pattern: {
        const PatternSpec ps = make_pattern_spec(eq, dp, cfg.s);
        const auto x = grid_coordinates(initial);
        const auto prof = small_amplitude_pattern(eq, ps, x, dp.l);
        n_ref = prof.n;
        p_ref = prof.p;
        break;
    }
    case ReferenceKind::None:
        break;
    }

    SimulationResult result;
    result.out_dir = out_dir;
    result.report = run(initial, kp, dp, cfg.solver, n_ref, p_ref);

    std::filesystem::create_directories(out_dir);
    std::vector<std::string> names;
    names.reserve(result.report.snapshots.size());
    for (std::size_t i = 0; i < result.report.snapshots.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "snapshot_%06zu.csv", i);
        write_snapshot(out_dir / name, result.report.snapshots[i]);
        names.emplace_back(name);
    }
    write_manifest(out_dir / "manifest.csv", names, result.report.times);
    write_norm_series(out_dir / "norms.csv", result.report);
    return result;
}

/// Stability-region table over a (d1, d2) grid. Cells are evaluated in
/// parallel; rows come out in row-major order (d1 outer, d2 inner).
inline std::string sweep_table(const KineticParams& kp, const SweepSpec& sweep, double l) {
    sweep.validate();
    const Equilibrium eq = find_equilibrium(kp);
    const std::size_t total = sweep.d1_count * sweep.d2_count;
    std::vector<std::string> rows(total);

    auto cell = [&](std::size_t idx) {
        const std::size_t i = idx / sweep.d2_count;
        const std::size_t j = idx % sweep.d2_count;
        const double d1 =
            sweep.d1_min + (sweep.d1_max - sweep.d1_min) * static_cast<double>(i) /
                               static_cast<double>(sweep.d1_count - 1);
        const double d2 =
            sweep.d2_min + (sweep.d2_max - sweep.d2_min) * static_cast<double>(j) /
                               static_cast<double>(sweep.d2_count - 1);
        std::string row = g17(d1) + "," + g17(d2) + ",";
        try {
            const DiffusionParams dp{d1, d2, l};
            const StabilityVerdict v = classify(eq, dp);
            const double det_b1 = det_b_at(eq, dp, mode_eigenvalue(1, l));
            row += to_string(v.kind);
            row += "," + g17(det_b1) + ",";
            try {
                row += g17(d2_critical(eq, d1, l));
            } catch (const DomainError&) {
                // outside the window: leave the column empty
            }
        } catch (const std::exception&) {
            row += "error,,";
        }
        rows[idx] = std::move(row);
    };

    const std::size_t workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    std::vector<std::future<void>> futures;
    futures.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        futures.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t idx = w; idx < total; idx += workers)
                cell(idx);
        }));
    for (auto& f : futures)
        f.get();

    std::string table = "d1,d2,verdict,det_b1,d2_crit\n";
    for (const auto& row : rows) {
        table += row;
        table += '\n';
    }
    return table;
}

/// Analytic pattern profile file on the configured grid (columns x,N,P).
inline PatternProfiles export_pattern(const ExperimentConfig& cfg,
                                      const std::filesystem::path& path) {
    const KineticParams kp = cfg.kinetics();
    const DiffusionParams dp = cfg.diffusion();
    const Equilibrium eq = find_equilibrium(kp);
    const PatternSpec ps = make_pattern_spec(eq, dp, cfg.s);

    GridState g = make_grid(cfg.solver.h, dp.l);
    const auto x = grid_coordinates(g);
    const PatternProfiles prof = small_amplitude_pattern(eq, ps, x, dp.l);
    g.n_values = prof.n;
    g.p_values = prof.p;
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    write_snapshot(path, g);
    return prof;
}

} // namespace turingrd
