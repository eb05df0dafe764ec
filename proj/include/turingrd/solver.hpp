#pragma once

// Explicit forward-Euler / centered-difference integrator for the
// reaction-diffusion system with zero-flux boundaries. Boundary nodes are
// derived through a second-order three-point closure, not time-stepped.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "turingrd/errors.hpp"
#include "turingrd/kinetics.hpp"
#include "turingrd/turing.hpp"

namespace turingrd {

/// Nodal profiles on the uniform grid x_j = j*h, j = 0..N_h.
struct GridState {
    double h = 0;
    double t = 0;
    std::vector<double> n_values;
    std::vector<double> p_values;

    std::size_t node_count() const { return n_values.size(); }
    int last_index() const { return static_cast<int>(n_values.size()) - 1; }
};

enum class ReferenceKind { Equilibrium, Pattern, None };

struct SolverConfig {
    double h = 0.005;
    std::optional<double> dt;    ///< absent: auto-select from the analytic bound
    double dt_safety = 0.95;     ///< multiplier applied to the bound when auto-selecting
    double t_end = 1000.0;
    std::size_t snapshot_stride = 0; ///< 0: choose so a run yields ~200 snapshots
    double probe_x = 0.25;
    double steady_tol = 1e-6;    ///< L-inf threshold for steady-state declaration
    ReferenceKind reference = ReferenceKind::Equilibrium;
};

struct Norms {
    double l2 = 0;
    double linf = 0;
};

struct RunReport {
    bool converged = false;
    double t_final = 0;
    std::vector<double> times;
    std::vector<double> l2_series;
    std::vector<double> linf_series;
    std::vector<double> n_probe_series;
    std::vector<double> p_probe_series;
    GridState final_state;
    std::vector<GridState> snapshots;
};

/// Largest time step for which the scheme preserves 0 <= N <= 1 and P >= 0:
/// min(h^2/(alpha h^2 + 2 d1), h^2/(h^2 + 2 d1), h^2/(eps delta h^2 + 2 d2)).
inline double max_timestep(const KineticParams& kp, const DiffusionParams& dp, double h) {
    if (!(h > 0))
        throw DomainError("max_timestep: h must be positive");
    const double h2 = h * h;
    const double b1 = h2 / (kp.alpha * h2 + 2.0 * dp.d1);
    const double b2 = h2 / (h2 + 2.0 * dp.d1);
    const double b3 = h2 / (kp.epsilon * kp.delta * h2 + 2.0 * dp.d2);
    return std::min({b1, b2, b3});
}

/// Overwrite both endpoints of both species with the three-point closure
/// v0 = (4 v1 - v2)/3 (and mirrored on the right).
inline void apply_boundary(GridState& state) {
    const int last = state.last_index();
    if (last < 3)
        throw GridTooSmall("apply_boundary: need at least 4 nodes");
    for (auto* v : {&state.n_values, &state.p_values}) {
        auto& f = *v;
        f[0] = (4.0 * f[1] - f[2]) / 3.0;
        f[last] = (4.0 * f[last - 1] - f[last - 2]) / 3.0;
    }
}

namespace detail {

struct StepOptions {
    bool with_reaction = true; ///< test hook: pure-diffusion integration
};

// One explicit step from `src` into `dst` (distinct storage). All interior
// updates read the level-k state; the closure then defines the endpoints.
inline void step_into(const GridState& src, GridState& dst, const KineticParams& kp,
                      const DiffusionParams& dp, double dt, const StepOptions& opt = {}) {
    const int last = src.last_index();
    const double inv_h2 = 1.0 / (src.h * src.h);
    dst.h = src.h;
    dst.t = src.t + dt;
    dst.n_values.resize(src.n_values.size());
    dst.p_values.resize(src.p_values.size());

    const auto& n = src.n_values;
    const auto& p = src.p_values;
    for (int j = 1; j < last; ++j) {
        double f1 = 0, f2 = 0;
        if (opt.with_reaction && (n[j] != 0 || p[j] != 0)) {
            const double ratio_n = n[j] / (p[j] + n[j]);
            f1 = n[j] * (1.0 - n[j]) - kp.alpha * n[j] * p[j] / (p[j] + n[j]);
            f2 = kp.epsilon * p[j] *
                 (-(kp.gamma + kp.delta * kp.beta * p[j]) / (1.0 + kp.beta * p[j]) + ratio_n);
        }
        const double lap_n = (n[j - 1] - 2.0 * n[j] + n[j + 1]) * inv_h2;
        const double lap_p = (p[j - 1] - 2.0 * p[j] + p[j + 1]) * inv_h2;
        dst.n_values[j] = n[j] + dt * (f1 + dp.d1 * lap_n);
        dst.p_values[j] = p[j] + dt * (f2 + dp.d2 * lap_p);
    }
    apply_boundary(dst);
}

} // namespace detail

/// Pure single-step interface; rejects dt above the analytic bound.
inline GridState step(const GridState& state, const KineticParams& kp, const DiffusionParams& dp,
                      double dt, const detail::StepOptions& opt = {}) {
    if (dt > max_timestep(kp, dp, state.h) * (1.0 + 1e-12))
        throw StepRejected("step: dt exceeds the positivity-preserving bound");
    GridState next;
    detail::step_into(state, next, kp, dp, dt, opt);
    return next;
}

/// L2 (trapezoidal, pointwise Euclidean deviation) and L-inf distances to a
/// reference pair of profiles on the same grid.
inline Norms norms(const GridState& state, const std::vector<double>& n_ref,
                   const std::vector<double>& p_ref) {
    if (n_ref.size() != state.n_values.size() || p_ref.size() != state.p_values.size())
        throw GridMismatch("norms: reference profiles do not share the grid");
    Norms out;
    double integral = 0;
    const std::size_t m = state.n_values.size();
    for (std::size_t j = 0; j < m; ++j) {
        const double dn = state.n_values[j] - n_ref[j];
        const double dp_ = state.p_values[j] - p_ref[j];
        out.linf = std::max({out.linf, std::abs(dn), std::abs(dp_)});
        const double w = (j == 0 || j + 1 == m) ? 0.5 : 1.0;
        integral += w * (dn * dn + dp_ * dp_);
    }
    out.l2 = std::sqrt(integral * state.h);
    return out;
}

/// Build a uniform grid state; N_h = round(l/h) must reproduce l exactly.
inline GridState make_grid(double h, double l) {
    const double ratio = l / h;
    const auto n_h = static_cast<std::size_t>(std::llround(ratio));
    if (n_h < 3 || std::abs(n_h * h - l) > 1e-12 * std::max(1.0, l))
        throw DomainError("make_grid: h must divide l into at least 3 cells");
    GridState g;
    g.h = h;
    g.n_values.assign(n_h + 1, 0.0);
    g.p_values.assign(n_h + 1, 0.0);
    return g;
}

inline std::vector<double> grid_coordinates(const GridState& state) {
    std::vector<double> x(state.node_count());
    for (std::size_t j = 0; j < x.size(); ++j)
        x[j] = static_cast<double>(j) * state.h;
    return x;
}

/// Integrate to t_end, or stop early once the L-inf distance to the reference
/// stays below steady_tol at two consecutive snapshots. Reference profiles may
/// be empty (ReferenceKind::None): no norms, no early stopping.
inline RunReport run(const GridState& initial, const KineticParams& kp,
                     const DiffusionParams& dp, const SolverConfig& config,
                     const std::vector<double>& n_ref = {},
                     const std::vector<double>& p_ref = {}) {
    const double bound = max_timestep(kp, dp, config.h);
    double dt = config.dt ? *config.dt : config.dt_safety * bound;
    if (dt > bound * (1.0 + 1e-12))
        throw StepRejected("run: configured dt exceeds the positivity-preserving bound");
    if (!(dt > 0))
        throw DomainError("run: dt must be positive");

    const auto total_steps = static_cast<std::size_t>(std::ceil(config.t_end / dt - 1e-12));
    std::size_t stride = config.snapshot_stride;
    if (stride == 0)
        stride = std::max<std::size_t>(1, total_steps / 200);

    const bool has_ref = !n_ref.empty();
    const auto probe_j = static_cast<std::size_t>(std::llround(config.probe_x / config.h));

    RunReport report;
    GridState cur = initial;
    GridState next = initial;

    int consecutive_steady = 0;
    auto record = [&](const GridState& s) {
        for (std::size_t j = 0; j < s.node_count(); ++j)
            if (!std::isfinite(s.n_values[j]) || !std::isfinite(s.p_values[j]))
                throw NonFiniteState("run: non-finite node value at t = " + std::to_string(s.t));
        report.times.push_back(s.t);
        if (probe_j < s.node_count()) {
            report.n_probe_series.push_back(s.n_values[probe_j]);
            report.p_probe_series.push_back(s.p_values[probe_j]);
        }
        report.snapshots.push_back(s);
        if (has_ref) {
            const Norms nm = norms(s, n_ref, p_ref);
            report.l2_series.push_back(nm.l2);
            report.linf_series.push_back(nm.linf);
            consecutive_steady = (nm.linf < config.steady_tol) ? consecutive_steady + 1 : 0;
            return consecutive_steady >= 2;
        }
        return false;
    };

    bool steady = record(cur);
    for (std::size_t k = 0; k < total_steps && !steady; ++k) {
        detail::step_into(cur, next, kp, dp, dt);
        std::swap(cur, next);
        if ((k + 1) % stride == 0 || k + 1 == total_steps)
            steady = record(cur);
    }

    report.converged = steady;
    report.t_final = cur.t;
    report.final_state = std::move(cur);
    return report;
}

} // namespace turingrd
