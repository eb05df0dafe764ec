// Command-line front end: equilibrium/Turing analysis, PDE simulation,
// stability-region sweeps and analytic pattern export.
//
// Exit codes: 0 success, 1 usage/config error, 2 analysis-domain error,
// 3 runtime numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "turingrd/config.hpp"
#include "turingrd/csv.hpp"
#include "turingrd/harness.hpp"

namespace fs = std::filesystem;
using namespace turingrd;

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::optional<double> d1, d2, s, h, dt, t_end, steady_tol, probe_x;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
    // --help only: the default -h short flag would clash with the --h option.
    cmd->set_help_flag("--help", "Print this help message and exit");
    cmd->add_option("--config", f.config_path, "Configuration file (key = value lines)");
    cmd->add_option("--out", f.out_dir, "Output directory (default: $TURING_RD_OUT or ./out)");
    cmd->add_option("--d1", f.d1, "Prey diffusivity (default 0.005)");
    cmd->add_option("--d2", f.d2, "Predator diffusivity (default 0.2)");
    cmd->add_option("--s", f.s, "Pattern amplitude (default 0.1)");
    cmd->add_option("--h", f.h, "Spatial mesh size (default 0.005)");
    cmd->add_option("--dt", f.dt, "Time step (default: 0.95 x analytic bound)");
    cmd->add_option("--t-end", f.t_end, "Final time (default 1000)");
    cmd->add_option("--steady-tol", f.steady_tol, "Steady-state L-inf tolerance (default 1e-6)");
    cmd->add_option("--probe-x", f.probe_x, "Probe position for time series (default 0.25)");
}

ExperimentConfig load_config(const CommonFlags& f) {
    ExperimentConfig cfg;
    if (!f.config_path.empty()) {
        std::ifstream is(f.config_path);
        if (!is)
            throw ConfigError("cannot open config file: " + f.config_path);
        std::stringstream buf;
        buf << is.rdbuf();
        cfg = parse_config(buf.str());
    } else {
        cfg = parse_config("");
    }
    if (f.d1) cfg.d1 = *f.d1;
    if (f.d2) cfg.d2 = *f.d2;
    if (f.s) cfg.s = *f.s;
    if (f.h) cfg.solver.h = *f.h;
    if (f.dt) cfg.solver.dt = *f.dt;
    if (f.t_end) cfg.solver.t_end = *f.t_end;
    if (f.steady_tol) cfg.solver.steady_tol = *f.steady_tol;
    if (f.probe_x) cfg.solver.probe_x = *f.probe_x;
    if (!f.out_dir.empty()) cfg.out_dir = f.out_dir;
    return cfg;
}

fs::path resolve_out_dir(const ExperimentConfig& cfg) {
    if (!cfg.out_dir.empty())
        return cfg.out_dir;
    if (const char* env = std::getenv("TURING_RD_OUT"))
        return env;
    return "out";
}

int cmd_analyze(const ExperimentConfig& cfg) {
    const KineticParams kp = cfg.kinetics();
    const DiffusionParams dp = cfg.diffusion();
    const AnalysisReport rep = analyze(kp, dp);

    std::cout << "equilibrium: (N, P) = (" << g17(rep.eq.n_bar) << ", " << g17(rep.eq.p_bar)
              << ")\n";
    if (rep.eq.multiple_roots)
        std::cout << "warning: multiple interior equilibria found; reporting the admissible one\n";
    std::cout << "thetas: " << g17(rep.eq.theta1) << ", " << g17(rep.eq.theta2) << ", "
              << g17(rep.eq.theta3) << ", " << g17(rep.eq.theta4) << '\n';
    std::cout << "trace A = " << g17(rep.eq.trace_a) << ", det A = " << g17(rep.eq.det_a) << '\n';
    std::cout << "kinetic verdict: "
              << (rep.kinetic == KineticVerdict::Stable ? "stable" : "unstable") << '\n';
    if (rep.window)
        std::cout << "d1 window: [" << g17(rep.window->first) << ", " << g17(rep.window->second)
                  << ")\n";
    else
        std::cout << "d1 window: empty (theta1 <= 0; stable for all d2)\n";
    if (rep.d2_crit) {
        std::cout << "d2_crit = " << g17(*rep.d2_crit) << '\n';
        std::cout << "critical eigenvector (eta1, eta2) = (" << g17(rep.eigenvector->first)
                  << ", " << g17(rep.eigenvector->second)
                  << "), ratio = " << g17(rep.eigenvector->first / rep.eigenvector->second)
                  << '\n';
    } else if (rep.window) {
        std::cout << "d1 outside the window: no Turing bifurcation in d2 exists\n";
    }
    std::cout << "classification at (d1, d2) = (" << g17(dp.d1) << ", " << g17(dp.d2)
              << "): " << to_string(rep.verdict.kind) << '\n';
    if (!rep.verdict.unstable_modes.empty()) {
        std::cout << "unstable modes:";
        for (int j : rep.verdict.unstable_modes)
            std::cout << ' ' << j;
        std::cout << '\n';
    }

    const fs::path out = resolve_out_dir(cfg);
    fs::create_directories(out);
    write_text_file(out / "analysis.csv", analysis_csv(rep, dp));
    std::cout << "wrote " << (out / "analysis.csv").string() << '\n';
    return 0;
}

int cmd_simulate(const ExperimentConfig& cfg) {
    const fs::path out = resolve_out_dir(cfg);
    const SimulationResult result = simulate(cfg, out);
    const auto& rep = result.report;
    std::cout << (rep.converged ? "converged" : "did not converge") << " at t = "
              << g17(rep.t_final) << " (" << rep.snapshots.size() << " snapshots)\n";
    if (!rep.linf_series.empty())
        std::cout << "final L2 = " << g17(rep.l2_series.back())
                  << ", final Linf = " << g17(rep.linf_series.back()) << '\n';
    std::cout << "wrote " << (out / "manifest.csv").string() << '\n';
    return 0;
}

int cmd_sweep(const ExperimentConfig& cfg) {
    const std::string table = sweep_table(cfg.kinetics(), cfg.sweep, cfg.l);
    const fs::path out = resolve_out_dir(cfg);
    fs::create_directories(out);
    write_text_file(out / "sweep.csv", table);
    std::cout << "wrote " << (out / "sweep.csv").string() << " ("
              << cfg.sweep.d1_count * cfg.sweep.d2_count << " cells)\n";
    return 0;
}

int cmd_pattern(const ExperimentConfig& cfg) {
    const fs::path out = resolve_out_dir(cfg);
    const PatternProfiles prof = export_pattern(cfg, out / "pattern.csv");
    if (prof.clipped)
        std::cout << "warning: first-order pattern leaves [0,1] x [0,inf) at this amplitude\n";
    std::cout << "wrote " << (out / "pattern.csv").string() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ratio-dependent predator-prey reaction-diffusion analysis and simulation"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);

    CommonFlags flags;
    auto* analyze_cmd = app.add_subcommand(
        "analyze", "Equilibrium, kinetic stability, d1 window, d2_crit, mode classification");
    auto* simulate_cmd =
        app.add_subcommand("simulate", "Integrate the PDE and write snapshots and norm series");
    auto* sweep_cmd =
        app.add_subcommand("sweep", "Stability-region table over a (d1, d2) grid");
    auto* pattern_cmd =
        app.add_subcommand("pattern", "Write the first-order pattern profile (x,N,P)");
    for (auto* cmd : {analyze_cmd, simulate_cmd, sweep_cmd, pattern_cmd})
        add_common_flags(cmd, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        const ExperimentConfig cfg = load_config(flags);
        if (analyze_cmd->parsed())
            return cmd_analyze(cfg);
        if (simulate_cmd->parsed())
            return cmd_simulate(cfg);
        if (sweep_cmd->parsed())
            return cmd_sweep(cfg);
        return cmd_pattern(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const NonFiniteState& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const DomainError& e) {
        std::cerr << "analysis error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
