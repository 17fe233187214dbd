#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bergman/polarization.hpp"
#include "bergman/recursion.hpp"
#include "test_support.hpp"

using namespace bergman;
using Rat = GaussianRational;

namespace {
Rat q(long num, long den = 1) { return Rat::ratio(num, den); }
}

TEST_CASE("flat model: b0 = 1 and all higher coefficients vanish as full jets") {
    for (int n : {1, 2}) {
        auto seq = solve_recursion(flat_potential<Rat>(n, working_degree(4, 4)), 4, 4);
        CHECK(seq.b[0] == Jet<Rat>::constant(2 * n, 4, q(1)));
        for (int m = 1; m <= 4; ++m) CHECK(seq.b[m].is_zero());
        for (int m = 0; m <= 4; ++m) CHECK(seq.b[m].degree() == 4);
    }
}

TEST_CASE("Fubini-Study n=1: base values 1, 1, 0, 0") {
    auto seq = solve_recursion(fubini_study_potential<Rat>(1, working_degree(0, 3)), 3, 0);
    CHECK(seq.base_values[0] == q(1));
    CHECK(seq.base_values[1] == q(1));
    CHECK(seq.base_values[2] == q(0));
    CHECK(seq.base_values[3] == q(0));
}

TEST_CASE("Fubini-Study n=1: b1 is the constant jet 1, b2 vanishes identically") {
    // The exact CP^1 kernel (k+1)/pi (1 + x ybar)^k matches the order-1
    // expansion exactly, so b1 = 1 and b2 = 0 hold as full jets.
    auto seq = solve_recursion(fubini_study_potential<Rat>(1, working_degree(4, 2)), 2, 4);
    CHECK(seq.b[0] == Jet<Rat>::constant(2, 4, q(1)));
    CHECK(seq.b[1] == Jet<Rat>::constant(2, 4, q(1)));
    CHECK(seq.b[2].is_zero());
}

TEST_CASE("Fubini-Study n=2: base values against the exact CP^2 kernel") {
    // B_k = (k+1)(k+2)/pi^2 = (k/pi)^2 (1 + 3/k + 2/k^2): b1 = 3, b2 = 2.
    auto seq = solve_recursion(fubini_study_potential<Rat>(2, working_degree(0, 2)), 2, 0);
    CHECK(seq.base_values[0] == q(1));
    CHECK(seq.base_values[1] == q(3));
    CHECK(seq.base_values[2] == q(2));
}

TEST_CASE("b1(0,0) = s(0)/2 on random potentials, exact and float") {
    for (unsigned long seed = 500; seed < 506; ++seed) {
        int n = 1 + static_cast<int>(seed % 2);
        {
            auto pot = random_psh_quartic<Rat>(n, working_degree(0, 1), seed);
            auto seq = solve_recursion(pot, 1, 0);
            auto s = scalar_curvature(hermitian_metric(polarize(pot), n));
            CHECK(seq.base_values[1] == s.constant_term() * q(1, 2));
        }
        {
            auto pot = random_psh_quartic<ComplexD>(n, working_degree(0, 1), seed);
            auto seq = solve_recursion(pot, 1, 0);
            auto s = scalar_curvature(hermitian_metric(polarize(pot), n));
            double expect = 0.5 * s.constant_term().real();
            CHECK(std::abs(seq.base_values[1] - ComplexD(expect, 0.0)) <=
                  1e-10 * std::max(1.0, std::abs(expect)));
        }
    }
}

TEST_CASE("diagonal jets are Hermitian: coefficient pairs conjugate-symmetric") {
    for (unsigned long seed : {600UL, 601UL}) {
        int n = 1 + static_cast<int>(seed % 2);
        auto pot = random_psh_quartic<Rat>(n, working_degree(2, 2), seed);
        auto seq = solve_recursion(pot, 2, 2);
        for (int m = 0; m <= 2; ++m) {
            for (const auto& [mi, c] : seq.diagonal[m].terms()) {
                MultiIndex swapped(2 * n);
                for (int i = 0; i < n; ++i) {
                    swapped[i] = mi[n + i];
                    swapped[n + i] = mi[i];
                }
                CHECK(seq.diagonal[m].coeff(swapped) == FieldTraits<Rat>::conj(c));
            }
        }
    }
}

TEST_CASE("base values are invariant under unitary chart changes") {
    CoeffMatrix<Rat> u(2, std::vector<Rat>(2, q(0)));
    u[0][0] = q(3, 5);
    u[0][1] = q(4, 5);
    u[1][0] = q(-4, 5);
    u[1][1] = q(3, 5);
    for (unsigned long seed : {610UL, 611UL}) {
        auto pot = random_psh_quartic<Rat>(2, working_degree(0, 2), seed);
        auto seq = solve_recursion(pot, 2, 0);
        auto seq_rot = solve_recursion(transform_potential(pot, u), 2, 0);
        CHECK(seq.base_values[1] == seq_rot.base_values[1]);
        CHECK(seq.base_values[2] == seq_rot.base_values[2]);
    }

    // Float mode with a dense random unitary, 1e-10 relative.
    std::mt19937_64 rng(612);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    double t1 = ang(rng), p1 = ang(rng), p2 = ang(rng);
    CoeffMatrix<ComplexD> uf = {
        {std::cos(t1) * std::polar(1.0, p1), std::sin(t1) * std::polar(1.0, p2)},
        {-std::sin(t1) * std::polar(1.0, -p2), std::cos(t1) * std::polar(1.0, -p1)}};
    auto pot = random_psh_quartic<ComplexD>(2, working_degree(0, 2), 613UL);
    auto seq = solve_recursion(pot, 2, 0);
    auto seq_rot = solve_recursion(transform_potential(pot, uf), 2, 0);
    for (int m = 1; m <= 2; ++m) {
        double scale = std::max(1.0, std::abs(seq.base_values[m]));
        CHECK(std::abs(seq.base_values[m] - seq_rot.base_values[m]) <= 1e-10 * scale);
    }
}

TEST_CASE("degree budget: too-small working degree raises with the required value") {
    auto pot = fubini_study_potential<Rat>(1, 4);
    CHECK_THROWS_AS(solve_recursion(pot, 2, 0), DegreeBudgetError);
    try {
        solve_recursion(pot, 2, 0);
    } catch (const DegreeBudgetError& e) {
        CHECK(e.required_degree == working_degree(0, 2));
    }
}

TEST_CASE("assemble_kernel: flat diagonal value and off-diagonal Gaussian decay") {
    auto seq = to_float(solve_recursion(flat_potential<Rat>(1, working_degree(4, 2)), 2, 4));
    auto psi = to_float(polarize(flat_potential<Rat>(1, working_degree(4, 2))));
    for (double k : {1.0, 10.0, 37.5}) {
        auto eval = assemble_kernel(seq, psi, k, 1);
        std::vector<ComplexD> origin = {ComplexD(0.0, 0.0)};
        CHECK(eval.bergman(origin) == doctest::Approx(k / M_PI).epsilon(1e-13));

        // |K(x, ybar)| e^{-k(phi(x)+phi(y))/2} = (k/pi) e^{-k|x-y|^2/2}.
        std::vector<ComplexD> x = {ComplexD(0.1, 0.0)}, y = {ComplexD(0.0, 0.0)};
        double lhs = std::abs(eval.kernel(x, y)) * std::exp(-0.5 * k * (0.01 + 0.0));
        double rhs = (k / M_PI) * std::exp(-0.5 * k * 0.01);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("assemble_kernel: FS order-1 diagonal matches (k+1)/pi") {
    auto pot = fubini_study_potential<Rat>(1, working_degree(2, 1));
    auto seq = to_float(solve_recursion(pot, 1, 2));
    auto psi = to_float(polarize(pot));
    auto eval = assemble_kernel(seq, psi, 10.0, 1);
    std::vector<ComplexD> origin = {ComplexD(0.0, 0.0)};
    CHECK(eval.bergman(origin) == doctest::Approx(11.0 / M_PI).epsilon(1e-13));
}

TEST_CASE("off-diagonal FS kernel matches the exact CP^1 kernel near the center") {
    // K(x, ybar) = ((k+1)/pi)(1 + x ybar)^k exactly; the order-1 evaluator
    // differs only through the jet truncation of log(1 + x z).
    auto pot = fubini_study_potential<Rat>(1, working_degree(8, 1));
    auto eval = assemble_kernel(to_float(solve_recursion(pot, 1, 8)),
                                to_float(polarize(pot)), 6.0, 1);
    for (auto [xr, yr] : {std::pair{0.05, 0.02}, std::pair{0.1, -0.08}}) {
        std::vector<ComplexD> x = {ComplexD(xr, 0.0)}, y = {ComplexD(yr, 0.0)};
        ComplexD got = eval.kernel(x, y);
        double k = 6.0;
        ComplexD exact = ((k + 1.0) / M_PI) * std::pow(1.0 + xr * yr, k);
        CHECK(std::abs(got - exact) <= 1e-10 * std::abs(exact));
    }
}

TEST_CASE("assemble_kernel flags evaluations outside the validity radius") {
    auto pot = flat_potential<Rat>(1, working_degree(2, 1));
    auto eval = assemble_kernel(to_float(solve_recursion(pot, 1, 2)),
                                to_float(polarize(pot)), 5.0, 1, 0.5);
    std::vector<ComplexD> far = {ComplexD(0.9, 0.0)};
    bool outside = false;
    eval.bergman(far, &outside);
    CHECK(outside);
    std::vector<ComplexD> near_pt = {ComplexD(0.2, 0.0)};
    outside = true;
    eval.bergman(near_pt, &outside);
    CHECK_FALSE(outside);
    CHECK_THROWS_AS(assemble_kernel(eval.seq, eval.psi, -1.0, 1), ConfigError);
}
