#pragma once

// Dimensionless ratio-dependent predator-prey reaction model: reaction
// terms, null-clines, interior equilibrium and its Jacobian.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "turingrd/errors.hpp"

namespace turingrd {

/// Dimensionless reaction parameters.
struct KineticParams {
    double alpha;   ///< predation rate
    double gamma;   ///< minimal predator mortality
    double delta;   ///< limiting predator mortality
    double epsilon; ///< predator rate scale
    double beta;    ///< carrying/interference ratio

    void validate() const {
        if (!(alpha > 0 && gamma > 0 && delta > 0 && epsilon > 0 && beta > 0))
            throw DomainError("KineticParams: all parameters must be strictly positive");
        if (!(gamma <= delta))
            throw DomainError("KineticParams: gamma must not exceed delta");
    }
};

/// Dimensional model constants prior to rescaling.
struct DimensionalParams {
    double r;         ///< prey intrinsic growth rate [1/time]
    double K;         ///< carrying capacity [density]
    double a, b, m;   ///< model constants
    double gamma_dim; ///< minimal predator mortality [1/time]
    double delta_dim; ///< limiting predator mortality [1/time]
    double D1, D2;    ///< diffusivities [length^2/time]
    double l_dim;     ///< habitat length [length]

    void validate() const {
        const double vals[] = {r, K, a, b, m, gamma_dim, delta_dim, D1, D2, l_dim};
        for (double v : vals)
            if (!(v > 0))
                throw DomainError("DimensionalParams: all parameters must be strictly positive");
        if (!(gamma_dim <= delta_dim))
            throw DomainError("DimensionalParams: gamma_dim must not exceed delta_dim");
    }
};

/// Positive steady state together with the Jacobian summary at that point.
struct Equilibrium {
    double n_bar = 0;
    double p_bar = 0;
    double theta1 = 0; ///<  dF1/dN
    double theta2 = 0; ///< -dF1/dP
    double theta3 = 0; ///<  dF2/dN
    double theta4 = 0; ///< -dF2/dP
    double trace_a = 0;
    double det_a = 0;
    bool multiple_roots = false; ///< more than one interior null-cline intersection found
};

enum class KineticVerdict { Stable, Unstable };

/// Reaction right-hand sides F1, F2. Both are defined as exactly 0 at the origin.
inline std::pair<double, double> reaction_terms(double n, double p, const KineticParams& kp) {
    if (n < 0 || p < 0)
        throw DomainError("reaction_terms: densities must be nonnegative");
    if (n == 0 && p == 0)
        return {0.0, 0.0};
    const double ratio = n / (p + n);
    const double f1 = n * (1.0 - n) - kp.alpha * n * p / (p + n);
    const double f2 = kp.epsilon * p *
                      (-(kp.gamma + kp.delta * kp.beta * p) / (1.0 + kp.beta * p) + ratio);
    return {f1, f2};
}

/// Predator mortality (gamma + delta*beta*p) / (1 + beta*p); ranges over [gamma, delta).
inline double mortality(double p, const KineticParams& kp) {
    if (p < 0)
        throw DomainError("mortality: density must be nonnegative");
    return (kp.gamma + kp.delta * kp.beta * p) / (1.0 + kp.beta * p);
}

/// Prey null-cline H1(n) = (1-n)n / (alpha - (1-n)).
inline double prey_nullcline(double n, const KineticParams& kp) {
    const double denom = kp.alpha - (1.0 - n);
    if (denom == 0.0)
        throw DomainError("prey_nullcline: vertical asymptote at n = 1 - alpha");
    return (1.0 - n) * n / denom;
}

/// Predator null-cline: the nonnegative root of
///   delta*beta*P^2 + (gamma - beta*(1-delta)*n)*P - (1-gamma)*n = 0,
/// obtained by clearing F2's bracket. Requires gamma < 1.
inline double predator_nullcline(double n, const KineticParams& kp) {
    if (n < 0)
        throw DomainError("predator_nullcline: density must be nonnegative");
    if (kp.gamma >= 1.0)
        throw DomainError("predator_nullcline: no positive branch for gamma >= 1");
    const double a = kp.delta * kp.beta;
    const double b = kp.gamma - kp.beta * (1.0 - kp.delta) * n;
    const double c = -(1.0 - kp.gamma) * n;
    // c <= 0, so the discriminant b^2 - 4ac is nonnegative and the root below
    // is the unique nonnegative one.
    return (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
}

/// Jacobian summary of the reaction terms at (n, p). The closed forms are the
/// exact partial derivatives, so they agree with finite differences at any
/// point; at an equilibrium they reduce to the familiar positive-Theta form.
inline Equilibrium jacobian_thetas(double n, double p, const KineticParams& kp) {
    if (!(n > 0) || !(p > 0))
        throw DomainError("jacobian_thetas: point must be strictly positive");
    Equilibrium eq;
    eq.n_bar = n;
    eq.p_bar = p;
    const double s = (p + n) * (p + n);
    const double bracket =
        -(kp.gamma + kp.delta * kp.beta * p) / (1.0 + kp.beta * p) + n / (p + n);
    const double bp = 1.0 + kp.beta * p;
    eq.theta1 = 1.0 - 2.0 * n - kp.alpha * p * p / s;
    eq.theta2 = kp.alpha * n * n / s;
    eq.theta3 = kp.epsilon * p * p / s;
    eq.theta4 = kp.epsilon * p * (kp.beta * (kp.delta - kp.gamma) / (bp * bp) + n / s)
                - kp.epsilon * bracket;
    eq.trace_a = eq.theta1 - eq.theta4;
    eq.det_a = eq.theta2 * eq.theta3 - eq.theta1 * eq.theta4;
    return eq;
}

inline KineticVerdict kinetic_stability(const Equilibrium& eq) {
    return (eq.trace_a < 0 && eq.det_a > 0) ? KineticVerdict::Stable : KineticVerdict::Unstable;
}

namespace detail {

// Bisect H1 - H2 on [lo, hi] assuming a sign change.
inline double bisect_nullcline_gap(double lo, double hi, const KineticParams& kp,
                                   double tol, int max_iter) {
    auto g = [&](double n) { return prey_nullcline(n, kp) - predator_nullcline(n, kp); };
    double glo = g(lo);
    for (int i = 0; i < max_iter && (hi - lo) > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm == 0.0)
            return mid;
        if ((glo < 0) != (gm < 0)) {
            hi = mid;
        } else {
            lo = mid;
            glo = gm;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

/// Locate interior equilibria as intersections of the two null-clines on
/// (max(0, 1-alpha), 1). The scan may surface several roots; the one returned
/// is the kinetically admissible one (det A > 0) with smallest prey level,
/// falling back to the smallest root outright, with `multiple_roots` set.
inline Equilibrium find_equilibrium(const KineticParams& kp, double tol = 1e-12) {
    kp.validate();
    if (kp.gamma >= 1.0)
        throw DomainError("find_equilibrium: requires gamma < 1");

    const double lo0 = std::max(1e-9, 1.0 - kp.alpha) + 1e-9;
    const double hi0 = 1.0 - 1e-9;
    auto g = [&](double n) { return prey_nullcline(n, kp) - predator_nullcline(n, kp); };

    constexpr int kScanIntervals = 2000;
    std::vector<double> roots;
    double x_prev = lo0;
    double g_prev = g(x_prev);
    for (int i = 1; i <= kScanIntervals; ++i) {
        const double x = lo0 + (hi0 - lo0) * static_cast<double>(i) / kScanIntervals;
        const double gx = g(x);
        if (g_prev == 0.0)
            roots.push_back(x_prev);
        else if ((g_prev < 0) != (gx < 0))
            roots.push_back(detail::bisect_nullcline_gap(x_prev, x, kp, tol * 1e-3, 200));
        x_prev = x;
        g_prev = gx;
    }
    if (roots.empty())
        throw NoInteriorEquilibrium("find_equilibrium: no null-cline intersection in (max(0,1-alpha), 1)");

    std::vector<Equilibrium> candidates;
    candidates.reserve(roots.size());
    for (double n : roots)
        candidates.push_back(jacobian_thetas(n, prey_nullcline(n, kp), kp));

    // Prefer roots satisfying det A > 0 (the admissible branch the stability
    // analysis applies to); among those, the smallest prey level.
    const Equilibrium* chosen = nullptr;
    for (const auto& c : candidates)
        if (c.det_a > 0 && (chosen == nullptr || c.n_bar < chosen->n_bar))
            chosen = &c;
    if (chosen == nullptr)
        chosen = &candidates.front();

    Equilibrium eq = *chosen;
    eq.multiple_roots = candidates.size() > 1;
    return eq;
}

struct NondimensionalModel {
    KineticParams params;
    double d1;
    double d2;
    double l;
};

/// Rescale dimensional constants: alpha = a/(m r), gamma = gamma_dim/b,
/// delta = delta_dim/b, epsilon = b/r, beta = K/m, d_i = D_i/r.
inline NondimensionalModel nondimensionalize(const DimensionalParams& dp) {
    dp.validate();
    NondimensionalModel out;
    out.params = KineticParams{dp.a / (dp.m * dp.r), dp.gamma_dim / dp.b, dp.delta_dim / dp.b,
                               dp.b / dp.r, dp.K / dp.m};
    out.d1 = dp.D1 / dp.r;
    out.d2 = dp.D2 / dp.r;
    out.l = dp.l_dim;
    return out;
}

} // namespace turingrd
