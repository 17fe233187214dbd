#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bergman/oracles.hpp"
#include "bergman/polarization.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/recursion.hpp"

using namespace bergman;

TEST_CASE("Gauss-Legendre integrates polynomials and Gaussians") {
    auto rule = gauss_legendre_composite(0.0, 1.0, 2, 12);
    double cubic = integrate(rule, [](double x) { return x * x * x; });
    CHECK(cubic == doctest::Approx(0.25).epsilon(1e-14));
    auto wide = gauss_legendre_composite(0.0, 6.0, 8, 40);
    double gauss = integrate(wide, [](double r) { return 2.0 * r * std::exp(-r * r); });
    CHECK(gauss == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("CP^1 oracle: norms, base value, constancy") {
    auto k1 = exact_cp1_kernel(1);
    CHECK(k1.basis_norms[0] == doctest::Approx(M_PI / 2).epsilon(1e-14));
    CHECK(k1.basis_norms[1] == doctest::Approx(M_PI / 2).epsilon(1e-14));
    CHECK(k1.bergman(0.0) == doctest::Approx(2.0 / M_PI).epsilon(1e-14));

    // B_k is constant (k+1)/pi; check at 100 seeded points for several k.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> coord(-0.7, 0.7);
    for (int k : {1, 5, 20, 100}) {
        auto kern = exact_cp1_kernel(k);
        double expected = (k + 1) / M_PI;
        for (int i = 0; i < 100; ++i) {
            std::complex<double> x(coord(rng), coord(rng));
            CHECK(std::abs(kern.bergman(x) - expected) <= 1e-12 * expected);
            CHECK(kern.bergman(x) > 0.0);
        }
    }
}

TEST_CASE("CP^1 oracle integrates to dim H^0 = k + 1") {
    // int B_k omega over C in polar coordinates: the FS volume density is
    // (1+r^2)^{-2} and the substitution makes the tail explicit.
    for (int k : {1, 4, 9}) {
        auto kern = exact_cp1_kernel(k);
        auto rule = gauss_legendre_composite(0.0, 60.0, 48, 40);
        double integral = integrate(rule, [&](double r) {
            double density = 1.0 / ((1.0 + r * r) * (1.0 + r * r));
            return kern.bergman(r) * 2.0 * M_PI * r * density;
        });
        // The tail r > 60 contributes (k+1) * 1/(1+3600) ~ 3e-4; bound it.
        CHECK(integral == doctest::Approx(k + 1.0).epsilon(5e-4));
    }
}

TEST_CASE("CP^1 oracle norms match quadrature of the defining integral") {
    // The substitution t = r^2/(1+r^2) turns the norm integral into
    // pi int_0^1 t^j (1-t)^{k-j} dt, which Gauss-Legendre does exactly.
    int k = 6;
    auto kern = exact_cp1_kernel(k);
    auto rule = gauss_legendre_composite(0.0, 1.0, 2, 24);
    for (int j = 0; j <= k; ++j) {
        double quad = M_PI * integrate(rule, [&](double t) {
            return std::pow(t, j) * std::pow(1.0 - t, k - j);
        });
        CHECK(quad == doctest::Approx(kern.basis_norms[j]).epsilon(1e-13));
    }
}

TEST_CASE("quadrature kernel: flat weight recovers k/pi at the origin") {
    for (int k : {10, 20, 40}) {
        double drift = 0.0;
        auto kern = quadrature_kernel(flat_weight(), k, 4.0, 8, 40, 8, 1e-10, &drift);
        CHECK(drift < 1e-10);
        CHECK(std::abs(kern.bergman(0.0) - k / M_PI) <= 1e-8 * (k / M_PI));
    }
}

TEST_CASE("quadrature kernel: radius doubling moves norms by < 1e-10") {
    int k = 20;
    auto a = quadrature_kernel(radial_quartic_weight(0.1), k, 3.0, 8);
    auto b = quadrature_kernel(radial_quartic_weight(0.1), k, 6.0, 8, 40, 16);
    for (int j = 0; j <= 8; ++j)
        CHECK(std::abs(a.basis_norms[j] - b.basis_norms[j]) <= 1e-10 * b.basis_norms[j]);
}

TEST_CASE("quadrature kernel: unresolvable configuration raises ResolutionError") {
    // Two nodes per panel on one panel cannot resolve e^{-40 r^2} over [0,4].
    CHECK_THROWS_AS(quadrature_kernel(flat_weight(), 40, 4.0, 6, 2, 1),
                    ResolutionError);
}

TEST_CASE("reproducing property of the oracle kernel basis") {
    // Applying the kernel to a basis monomial returns it at sample points:
    // sum_j x^j / ||x^j||^2 int wbar^j w^m e^{-k phi} = x^m.
    int k = 12;
    auto kern = quadrature_kernel(flat_weight(), k, 4.0, 10);
    auto rule = gauss_legendre_composite(0.0, 4.0, 8, 80);
    for (int m : {0, 1, 3}) {
        std::complex<double> x(0.31, -0.12);
        // Radial orthogonality: only the j = m kernel term survives.
        double inner = integrate(rule, [&](double r) {
            return 2.0 * M_PI * r * std::pow(r * r, m) * std::exp(-k * r * r);
        });
        std::complex<double> reproduced = std::pow(x, m) / kern.basis_norms[m] * inner;
        CHECK(std::abs(reproduced - std::pow(x, m)) <= 1e-9);
    }
}

TEST_CASE("reproducing check: frozen values for the flat weight") {
    // u = 1, x = 0, k = 30: the boundary contribution through the fixed
    // quintic bump evaluates to 9.79e-6 (the analytic boundary estimate
    // 480 e^{-k/4}/k^3 gives 9.8e-6); frozen with margin.
    double r = reproducing_check("flat", {1.0}, 0.0, 30);
    CHECK(r < 2e-5);
    CHECK(r > 1e-7);  // the residual is genuinely nonzero at k = 30

    // u = 0: residual identically zero.
    CHECK(reproducing_check("flat", {0.0}, 0.1, 20) == 0.0);

    // u = y^2, x = 0.1: log-residual slope over k in 10..50 is negative
    // with decay rate well above 0.05.
    std::vector<int> ks = {10, 20, 30, 40, 50};
    std::vector<double> res;
    for (int k : ks) res.push_back(reproducing_check("flat", {0.0, 0.0, 1.0}, 0.1, k));
    for (std::size_t i = 1; i < res.size(); ++i) CHECK(res[i] < res[i - 1]);
    auto [rate, fit] = fit_exponential_rate(ks, res);
    CHECK(rate >= 0.05);
}

TEST_CASE("reproducing check: Fubini-Study weight") {
    // Closed-form contour data for the FS weight; residual decays in k.
    double r20 = reproducing_check("fubini-study", {1.0}, 0.05, 20);
    double r40 = reproducing_check("fubini-study", {1.0}, 0.05, 40);
    CHECK(r40 < r20);
    CHECK(r40 < 1e-3);
}

TEST_CASE("expansion error sweep: CP^1 exactness at N = 1 and slope at N = 0") {
    auto oracle = [](int k) { return exact_cp1_kernel(k); };

    // N = 1: (k/pi)(1 + 1/k) equals (k+1)/pi exactly.
    auto exact_expansion = [](int k) { return (k / M_PI) * (1.0 + 1.0 / k); };
    std::vector<int> ks = {1, 5, 20, 100};
    auto sweep = expansion_error_sweep(oracle, exact_expansion, ks, 1);
    for (double e : sweep.rel_errors) CHECK(e <= 1e-12);

    // N = 0: error (k+1)/pi vs k/pi is 1/(k+1), slope -1 within 0.1.
    auto leading = [](int k) { return k / M_PI; };
    std::vector<int> ks2;
    for (int k = 10; k <= 100; k += 10) ks2.push_back(k);
    auto sweep2 = expansion_error_sweep(oracle, leading, ks2, 1);
    CHECK(sweep2.slope == doctest::Approx(-1.0).epsilon(0.1));
    CHECK(sweep2.max_bergman_over_kn > 0.0);
}

TEST_CASE("expansion error sweep: radial quartic against its own quadrature oracle") {
    double c = 0.1;
    auto pot = radial_quartic_potential<ComplexD>(1, working_degree(0, 2), ComplexD(c, 0.0));
    auto seq = solve_recursion(pot, 2, 0);
    auto expansion = [&](int k) {
        double acc = 0.0, kp = 1.0;
        for (int m = 0; m <= seq.order; ++m) {
            acc += seq.base_values[m].real() / kp;
            kp *= k;
        }
        return acc * k / M_PI;
    };
    // Cross-checked at two quadrature resolutions inside quadrature_kernel.
    auto oracle = [&](int k) { return quadrature_kernel(radial_quartic_weight(c), k, 4.0, 6); };
    std::vector<int> ks;
    for (int k = 10; k <= 40; k += 5) ks.push_back(k);
    auto sweep = expansion_error_sweep(oracle, expansion, ks, 1);
    CHECK(sweep.slope <= -2.5);
}
