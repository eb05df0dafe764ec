#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "turingrd/kinetics.hpp"
#include "turingrd/turing.hpp"

using namespace turingrd;

namespace {

const KineticParams kRef{1.1, 0.05, 0.5, 1.0, 1.0};

Equilibrium ref_eq() {
    static const Equilibrium eq = find_equilibrium(kRef);
    return eq;
}

// Draw kinetic/diffusion parameters with a stable interior equilibrium.
struct Draw {
    KineticParams kp;
    Equilibrium eq;
    DiffusionParams dp;
};

std::vector<Draw> stable_draws(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ua(1.0, 2.0), ug(0.02, 0.8), ud(0.0, 1.0),
        ue(0.2, 3.0), ub(0.2, 3.0), ud1(1e-4, 0.02), ud2(0.01, 0.5), ul(0.5, 2.0);
    std::vector<Draw> out;
    while (out.size() < count) {
        KineticParams kp{ua(rng), ug(rng), 0, ue(rng), ub(rng)};
        kp.delta = kp.gamma + ud(rng);
        try {
            const Equilibrium eq = find_equilibrium(kp);
            if (kinetic_stability(eq) != KineticVerdict::Stable)
                continue;
            out.push_back({kp, eq, DiffusionParams{ud1(rng), ud2(rng), ul(rng)}});
        } catch (const DomainError&) {
        }
    }
    return out;
}

} // namespace

TEST_CASE("mode eigenvalues") {
    CHECK(mode_eigenvalue(0, 1.0) == 0.0);
    CHECK(mode_eigenvalue(1, 1.0) == doctest::Approx(std::numbers::pi * std::numbers::pi));
    CHECK(mode_eigenvalue(2, 2.0) == doctest::Approx(std::numbers::pi * std::numbers::pi));
    double prev = -1;
    for (int j = 0; j < 20; ++j) {
        const double z = mode_eigenvalue(j, 1.3);
        CHECK(z > prev);
        prev = z;
    }
}

TEST_CASE("mode matrix reduces to the kinetic Jacobian at j = 0") {
    const Equilibrium eq = ref_eq();
    const LinearMode m = mode_matrix(eq, {0.005, 0.2, 1.0}, 0);
    CHECK(m.trace_b == doctest::Approx(eq.trace_a));
    CHECK(m.det_b == doctest::Approx(eq.det_a));
}

TEST_CASE("det B_1 vanishes at the critical diffusivity") {
    const Equilibrium eq = ref_eq();
    const double d2c = d2_critical(eq, 0.005, 1.0);
    const LinearMode m = mode_matrix(eq, {0.005, d2c, 1.0}, 1);
    CHECK(std::abs(m.det_b) < 1e-8);
}

TEST_CASE("det B_1 against the entry-wise determinant route") {
    const Equilibrium eq = ref_eq();
    for (double d2 : {0.1, 0.2, 0.32}) {
        const DiffusionParams dp{0.005, d2, 1.0};
        const LinearMode m = mode_matrix(eq, dp, 1);
        const double z1 = mode_eigenvalue(1, 1.0);
        const double b11 = eq.theta1 - z1 * dp.d1;
        const double b22 = -eq.theta4 - z1 * dp.d2;
        const double det_direct = b11 * b22 - (-eq.theta2) * eq.theta3;
        CHECK(m.det_b == doctest::Approx(det_direct).epsilon(1e-12));
        CHECK(m.trace_b == doctest::Approx(b11 + b22).epsilon(1e-12));
        // Eigenvalues satisfy the characteristic polynomial.
        const auto l1 = m.lambda1;
        CHECK(std::abs(l1 * l1 - m.trace_b * l1 + m.det_b) < 1e-10);
    }
    const LinearMode stable_mode = mode_matrix(eq, {0.005, 0.2, 1.0}, 1);
    CHECK(stable_mode.det_b == doctest::Approx(6.46e-3).epsilon(5e-3));
}

TEST_CASE("classification at the published parameter pairs") {
    const Equilibrium eq = ref_eq();
    const StabilityVerdict stable = classify(eq, {0.005, 0.2, 1.0});
    CHECK(stable.kind == StabilityKind::AsymptoticallyStable);
    CHECK(stable.unstable_modes.empty());

    const StabilityVerdict turing = classify(eq, {0.005, 0.32, 1.0});
    CHECK(turing.kind == StabilityKind::TuringUnstable);
    REQUIRE(turing.unstable_modes.size() == 1);
    CHECK(turing.unstable_modes[0] == 1);
    CHECK(turing.margin < 0);
}

TEST_CASE("equal diffusivities cannot destabilize a stable equilibrium") {
    const Equilibrium eq = ref_eq();
    for (double d : {1e-4, 0.01, 0.3, 2.0}) {
        const StabilityVerdict v = classify(eq, {d, d, 1.0});
        CHECK(v.kind == StabilityKind::AsymptoticallyStable);
    }
}

TEST_CASE("closed-form unstable mode set equals brute force") {
    for (const Draw& d : stable_draws(100, 2024)) {
        const StabilityVerdict v = classify(d.eq, d.dp);
        const auto brute =
            unstable_modes_bruteforce(d.eq, d.dp, default_bruteforce_jmax(d.eq, d.dp));
        CHECK(v.unstable_modes == brute);
        CHECK((v.kind == StabilityKind::TuringUnstable) == !brute.empty());
    }
}

TEST_CASE("d1 window at the reference parameters") {
    const Equilibrium eq = ref_eq();
    const auto [lo, hi] = d1_window(eq, 1.0);
    // Ratio is exactly zeta_1/zeta_2 = 1/4.
    CHECK(lo / hi == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(lo == doctest::Approx(eq.theta1 / mode_eigenvalue(2, 1.0)).epsilon(1e-14));
    CHECK(hi == doctest::Approx(eq.theta1 / mode_eigenvalue(1, 1.0)).epsilon(1e-14));

    // zeta_j ~ 1/l^2, so the window scales with l^2.
    const auto [lo2, hi2] = d1_window(eq, 2.0);
    CHECK(lo2 == doctest::Approx(4 * lo).epsilon(1e-13));
    CHECK(hi2 == doctest::Approx(4 * hi).epsilon(1e-13));

    Equilibrium flat = eq;
    flat.theta1 = -0.1;
    CHECK_THROWS_AS(d1_window(flat, 1.0), EmptyWindow);
}

TEST_CASE("critical diffusivity") {
    const Equilibrium eq = ref_eq();
    const double d2c = d2_critical(eq, 0.005, 1.0);
    CHECK(std::abs(d2c - 0.271) < 2e-3);

    // Direct evaluation of the closed form with independently named pieces.
    const double z1 = mode_eigenvalue(1, 1.0);
    const double direct = (eq.det_a + z1 * 0.004 * eq.theta4) / (z1 * (eq.theta1 - z1 * 0.004));
    CHECK(d2_critical(eq, 0.004, 1.0) == doctest::Approx(direct).epsilon(1e-13));
    CHECK(d2_critical(eq, 0.004, 1.0) == doctest::Approx(0.1175).epsilon(2e-3));

    const double hi = d1_window(eq, 1.0).second;
    CHECK_THROWS_AS(d2_critical(eq, hi, 1.0), WindowViolation);
    CHECK_THROWS_AS(d2_critical(eq, 0.05, 1.0), WindowViolation);
}

TEST_CASE("classification flips exactly once across d2_crit") {
    const Equilibrium eq = ref_eq();
    const double d2c = d2_critical(eq, 0.005, 1.0);

    CHECK(classify(eq, {0.005, d2c * (1 - 1e-4), 1.0}).kind ==
          StabilityKind::AsymptoticallyStable);
    CHECK(classify(eq, {0.005, d2c * (1 + 1e-4), 1.0}).kind == StabilityKind::TuringUnstable);

    int transitions = 0;
    bool prev_unstable = false;
    for (int i = 0; i <= 1000; ++i) {
        const double d2 = d2c * (0.9 + 0.2 * i / 1000.0);
        const bool unstable =
            classify(eq, {0.005, d2, 1.0}).kind == StabilityKind::TuringUnstable;
        if (i > 0 && unstable != prev_unstable)
            ++transitions;
        prev_unstable = unstable;
    }
    CHECK(transitions == 1);
}

TEST_CASE("det B_1 is affine and strictly decreasing in d2 inside the window") {
    const Equilibrium eq = ref_eq();
    const double z1 = mode_eigenvalue(1, 1.0);
    const double d2c = d2_critical(eq, 0.005, 1.0);
    auto det1 = [&](double d2) { return det_b_at(eq, {0.005, d2, 1.0}, z1); };
    const double slope = (det1(0.3) - det1(0.1)) / 0.2;
    CHECK(slope < 0);
    // Affine: second difference vanishes.
    CHECK(det1(0.1) + det1(0.3) - 2 * det1(0.2) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(det1(d2c) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("critical eigenvector") {
    const Equilibrium eq = ref_eq();
    const double d2c = d2_critical(eq, 0.005, 1.0);
    const auto [e1, e2] = critical_eigenvector(eq, 0.005, d2c, 1.0);

    CHECK(e1 * e1 + e2 * e2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e2 > 0);

    // Null-space oracle: component ratio from row 1 of B_1, cross-checked
    // against row 2.
    const double z1 = mode_eigenvalue(1, 1.0);
    const double ratio_row1 = eq.theta2 / (eq.theta1 - z1 * 0.005);
    const double ratio_row2 = (eq.theta4 + z1 * d2c) / eq.theta3;
    CHECK(ratio_row1 == doctest::Approx(ratio_row2).epsilon(1e-10));
    CHECK(e1 / e2 == doctest::Approx(ratio_row1).epsilon(1e-10));
    CHECK(e1 / e2 == doctest::Approx(4.52).epsilon(1e-2));

    // Residual of the kernel equation.
    const double b11 = eq.theta1 - z1 * 0.005;
    const double b12 = -eq.theta2;
    const double b21 = eq.theta3;
    const double b22 = -eq.theta4 - z1 * d2c;
    const double norm = std::max(std::abs(b11) + std::abs(b12), std::abs(b21) + std::abs(b22));
    const double res = std::max(std::abs(b11 * e1 + b12 * e2), std::abs(b21 * e1 + b22 * e2));
    CHECK(res <= 1e-8 * norm);

    // Far from singular: rejected.
    CHECK_THROWS_AS(critical_eigenvector(eq, 0.005, 0.5, 1.0), NotSingular);
}

TEST_CASE("critical eigenvector invariant under d2 perturbation within tolerance") {
    const Equilibrium eq = ref_eq();
    const double d2c = d2_critical(eq, 0.005, 1.0);
    const auto a = critical_eigenvector(eq, 0.005, d2c, 1.0);
    const auto b = critical_eigenvector(eq, 0.005, d2c * (1 + 1e-10), 1.0);
    CHECK(a.first == doctest::Approx(b.first).epsilon(1e-8));
    CHECK(a.second == doctest::Approx(b.second).epsilon(1e-8));
}

TEST_CASE("small amplitude pattern") {
    const Equilibrium eq = ref_eq();
    const double d2c = d2_critical(eq, 0.005, 1.0);
    const auto [e1, e2] = critical_eigenvector(eq, 0.005, d2c, 1.0);
    PatternSpec ps{0.1, e1, e2, d2c};

    std::vector<double> grid;
    for (int i = 0; i <= 100; ++i)
        grid.push_back(i / 100.0);

    const auto prof = small_amplitude_pattern(eq, ps, grid, 1.0);
    CHECK(prof.n.front() == doctest::Approx(eq.n_bar + 0.1 * e1).epsilon(1e-14));
    CHECK(prof.p.front() == doctest::Approx(eq.p_bar + 0.1 * e2).epsilon(1e-14));
    CHECK(prof.n[50] == doctest::Approx(eq.n_bar).epsilon(1e-12));
    CHECK(prof.p[50] == doctest::Approx(eq.p_bar).epsilon(1e-12));
    CHECK_FALSE(prof.clipped);

    // Zero-mean deviation over the full period grid (trapezoid quadrature).
    double mean_dev = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double w = (j == 0 || j + 1 == grid.size()) ? 0.5 : 1.0;
        mean_dev += w * (prof.n[j] - eq.n_bar);
    }
    CHECK(std::abs(mean_dev / 100.0) < 1e-6);

    PatternSpec zero = ps;
    zero.s = 0;
    const auto flat = small_amplitude_pattern(eq, zero, grid, 1.0);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        CHECK(flat.n[j] == eq.n_bar);
        CHECK(flat.p[j] == eq.p_bar);
    }

    PatternSpec huge = ps;
    huge.s = 5.0;
    CHECK(small_amplitude_pattern(eq, huge, grid, 1.0).clipped);
}
