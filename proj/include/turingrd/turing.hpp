#pragma once

// Spatial-mode linear stability: dispersion relation det B(zeta), Turing
// classification, critical predator diffusivity and the first-order pattern.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "turingrd/errors.hpp"
#include "turingrd/kinetics.hpp"

namespace turingrd {

struct DiffusionParams {
    double d1; ///< prey diffusivity
    double d2; ///< predator diffusivity
    double l;  ///< habitat length

    void validate() const {
        if (!(d1 > 0 && d2 > 0 && l > 0))
            throw DomainError("DiffusionParams: d1, d2, l must be strictly positive");
    }
};

/// One spatial cosine mode and the linearization restricted to it.
struct LinearMode {
    int j = 0;
    double zeta = 0;    ///< (j*pi/l)^2
    double trace_b = 0;
    double det_b = 0;
    std::complex<double> lambda1; ///< eigenvalues of B_j
    std::complex<double> lambda2;
};

enum class StabilityKind { KineticUnstable, AsymptoticallyStable, TuringUnstable };

struct StabilityVerdict {
    StabilityKind kind = StabilityKind::AsymptoticallyStable;
    std::vector<int> unstable_modes; ///< j >= 1 with det B_j < 0
    double margin = 0;               ///< minimum det B_j over candidate modes
    /// The coarse sufficient condition for instability that ignores mode
    /// discreteness; reported for information, never used for the verdict.
    bool sufficient_condition_hit = false;
    /// The non-parallelism hypothesis behind the nonlinear bifurcation result
    /// is not verified numerically.
    bool pattern_hypothesis_verified = false;
};

struct PatternSpec {
    double s = 0;       ///< signed amplitude
    double eta1 = 0;    ///< prey component of the critical eigenvector
    double eta2 = 0;    ///< predator component (normalized positive)
    double d2_crit = 0;
};

struct PatternProfiles {
    std::vector<double> n;
    std::vector<double> p;
    bool clipped = false; ///< some value left [0,1] x [0,inf); first-order formula only
};

inline double mode_eigenvalue(int j, double l) {
    if (j < 0 || !(l > 0))
        throw DomainError("mode_eigenvalue: requires j >= 0 and l > 0");
    const double w = j * std::numbers::pi / l;
    return w * w;
}

inline double det_b_at(const Equilibrium& eq, const DiffusionParams& dp, double zeta) {
    return eq.det_a + zeta * (dp.d1 * eq.theta4 - dp.d2 * eq.theta1) + zeta * zeta * dp.d1 * dp.d2;
}

inline LinearMode mode_matrix(const Equilibrium& eq, const DiffusionParams& dp, int j) {
    LinearMode m;
    m.j = j;
    m.zeta = mode_eigenvalue(j, dp.l);
    m.trace_b = eq.trace_a - m.zeta * (dp.d1 + dp.d2);
    m.det_b = det_b_at(eq, dp, m.zeta);
    const double disc = m.trace_b * m.trace_b - 4.0 * m.det_b;
    if (disc >= 0) {
        const double r = std::sqrt(disc);
        m.lambda1 = {0.5 * (m.trace_b + r), 0.0};
        m.lambda2 = {0.5 * (m.trace_b - r), 0.0};
    } else {
        const double im = 0.5 * std::sqrt(-disc);
        m.lambda1 = {0.5 * m.trace_b, im};
        m.lambda2 = {0.5 * m.trace_b, -im};
    }
    return m;
}

/// Exact mode classification. det B(zeta) is an upward parabola in zeta with
/// leading coefficient d1*d2, so the unstable modes are exactly the integers
/// j >= 1 whose zeta_j lies strictly between its real roots.
inline StabilityVerdict classify(const Equilibrium& eq, const DiffusionParams& dp) {
    dp.validate();
    StabilityVerdict v;
    const double mix = dp.d1 * eq.theta4 - dp.d2 * eq.theta1;
    const double disc20 = mix * mix - 4.0 * dp.d1 * dp.d2 * eq.det_a;
    v.sufficient_condition_hit = (mix < 0 && disc20 > 0);

    if (kinetic_stability(eq) == KineticVerdict::Unstable) {
        v.kind = StabilityKind::KineticUnstable;
        v.margin = eq.det_a;
        return v;
    }

    const double a = dp.d1 * dp.d2;
    const double b = mix;
    const double c = eq.det_a;
    const double disc = b * b - 4.0 * a * c;

    // Candidate minimizer of det B over integer modes.
    const double zeta_vertex = std::max(0.0, -b / (2.0 * a));
    const double j_vertex = dp.l * std::sqrt(zeta_vertex) / std::numbers::pi;
    double margin = det_b_at(eq, dp, mode_eigenvalue(1, dp.l));
    for (int j : {static_cast<int>(std::floor(j_vertex)), static_cast<int>(std::ceil(j_vertex))})
        if (j >= 1)
            margin = std::min(margin, det_b_at(eq, dp, mode_eigenvalue(j, dp.l)));
    v.margin = margin;

    if (disc <= 0) {
        v.kind = StabilityKind::AsymptoticallyStable;
        return v;
    }
    const double sq = std::sqrt(disc);
    const double r_hi = (-b + sq) / (2.0 * a);
    if (r_hi <= 0) {
        v.kind = StabilityKind::AsymptoticallyStable;
        return v;
    }
    const double r_lo = std::max(0.0, (-b - sq) / (2.0 * a));

    // j with r_lo < (j*pi/l)^2 < r_hi, strictly.
    const double scale = dp.l / std::numbers::pi;
    int j_first = static_cast<int>(std::floor(scale * std::sqrt(r_lo))) ;
    while (mode_eigenvalue(std::max(j_first, 0), dp.l) <= r_lo)
        ++j_first;
    j_first = std::max(j_first, 1);
    for (int j = j_first; mode_eigenvalue(j, dp.l) < r_hi; ++j)
        v.unstable_modes.push_back(j);

    v.kind = v.unstable_modes.empty() ? StabilityKind::AsymptoticallyStable
                                      : StabilityKind::TuringUnstable;
    return v;
}

/// Default cap for the brute-force cross-check: beyond it zeta_j*d1 exceeds
/// theta1, which forces det B_j > 0.
inline int default_bruteforce_jmax(const Equilibrium& eq, const DiffusionParams& dp) {
    int j_cap = 1000;
    if (eq.theta1 > 0) {
        const double j_theta =
            dp.l * std::sqrt(eq.theta1 / dp.d1) / std::numbers::pi;
        j_cap = std::max(j_cap, static_cast<int>(std::ceil(j_theta)) + 2);
    }
    return j_cap;
}

/// Direct scan of det B_j; reference route for testing classify().
inline std::vector<int> unstable_modes_bruteforce(const Equilibrium& eq,
                                                  const DiffusionParams& dp, int j_max) {
    std::vector<int> out;
    for (int j = 1; j <= j_max; ++j)
        if (det_b_at(eq, dp, mode_eigenvalue(j, dp.l)) < 0)
            out.push_back(j);
    return out;
}

/// Prey-diffusivity window (theta1/zeta2, theta1/zeta1) inside which a Turing
/// bifurcation in d2 exists; above the upper edge none does.
inline std::pair<double, double> d1_window(const Equilibrium& eq, double l) {
    if (!(eq.theta1 > 0))
        throw EmptyWindow("d1_window: theta1 <= 0, stable for all d2");
    return {eq.theta1 / mode_eigenvalue(2, l), eq.theta1 / mode_eigenvalue(1, l)};
}

/// Critical predator diffusivity at which det B_1 crosses zero.
inline double d2_critical(const Equilibrium& eq, double d1, double l) {
    const auto [lo, hi] = d1_window(eq, l); // throws EmptyWindow when theta1 <= 0
    if (!(d1 >= lo && d1 < hi))
        throw WindowViolation("d2_critical: d1 outside [theta1/zeta2, theta1/zeta1)");
    const double z1 = mode_eigenvalue(1, l);
    const double d2c =
        (eq.det_a + z1 * d1 * eq.theta4) / (z1 * (eq.theta1 - z1 * d1));
    // Mandatory consistency check against the dispersion relation.
    const double residual = det_b_at(eq, DiffusionParams{d1, d2c, l}, z1);
    const double scale = std::abs(eq.det_a) + z1 * (d1 * eq.theta4 + d2c * eq.theta1) +
                         z1 * z1 * d1 * d2c;
    if (!(std::abs(residual) <= 1e-8 * scale))
        throw DomainError("d2_critical: det B_1 does not vanish at the computed value");
    return d2c;
}

/// Unit kernel vector of B_1 = A - zeta1*D with positive predator component.
inline std::pair<double, double> critical_eigenvector(const Equilibrium& eq, double d1,
                                                      double d2, double l) {
    const double z1 = mode_eigenvalue(1, l);
    // B1 entries
    const double b11 = eq.theta1 - z1 * d1;
    const double b12 = -eq.theta2;
    const double b21 = eq.theta3;
    const double b22 = -eq.theta4 - z1 * d2;
    const double det = b11 * b22 - b12 * b21;
    const double norm_inf = std::max(std::abs(b11) + std::abs(b12), std::abs(b21) + std::abs(b22));
    if (!(std::abs(det) <= 1e-6 * norm_inf * norm_inf))
        throw NotSingular("critical_eigenvector: B_1 is not singular at the supplied d2");

    // Kernel from the better-conditioned row.
    double e1, e2;
    if (std::hypot(b11, b12) >= std::hypot(b21, b22)) {
        e1 = -b12;
        e2 = b11;
    } else {
        e1 = -b22;
        e2 = b21;
    }
    const double nrm = std::hypot(e1, e2);
    if (nrm == 0.0)
        throw NotSingular("critical_eigenvector: zero kernel candidate");
    e1 /= nrm;
    e2 /= nrm;
    if (e2 < 0 || (e2 == 0 && e1 < 0)) {
        e1 = -e1;
        e2 = -e2;
    }
    return {e1, e2};
}

/// First-order stationary pattern u_bar + s * (eta1, eta2) * cos(pi x / l).
inline PatternProfiles small_amplitude_pattern(const Equilibrium& eq, const PatternSpec& ps,
                                               std::span<const double> grid, double l) {
    PatternProfiles out;
    out.n.reserve(grid.size());
    out.p.reserve(grid.size());
    for (double x : grid) {
        if (x < -1e-12 || x > l * (1.0 + 1e-12))
            throw DomainError("small_amplitude_pattern: grid point outside [0, l]");
        const double c = std::cos(std::numbers::pi * x / l);
        const double n = eq.n_bar + ps.s * ps.eta1 * c;
        const double p = eq.p_bar + ps.s * ps.eta2 * c;
        if (n < 0 || n > 1 || p < 0)
            out.clipped = true;
        out.n.push_back(n);
        out.p.push_back(p);
    }
    return out;
}

} // namespace turingrd
