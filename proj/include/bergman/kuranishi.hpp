#pragma once

#include <complex>
#include <random>
#include <vector>

#include "bergman/jet_matrix.hpp"
#include "bergman/map_inversion.hpp"
#include "bergman/polarization.hpp"
#include "bergman/potential.hpp"

namespace bergman {

// Variable layout shared by every 3n-variable jet in the pipeline:
// block 0 = x, block 1 = y, block 2 = z (or theta after the change of
// coordinates). Helpers below produce the standard argument lists.
template <class F>
std::vector<Jet<F>> block_args_xyz(int n, int degree) {
    std::vector<Jet<F>> args;
    args.reserve(3 * n);
    for (int i = 0; i < 3 * n; ++i) args.push_back(Jet<F>::variable(3 * n, degree, i));
    return args;
}

inline long long binomial_ll(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long long acc = 1;
    for (int i = 1; i <= k; ++i) {
        if (acc > (9223372036854775807LL / (n - k + i)))
            throw DegreeBudgetError("binomial overflow: truncation degree too large", n);
        acc = acc * (n - k + i) / i;
    }
    return acc;
}

// theta(x, y, z) = int_0^1 (d_1 psi)(t x + (1-t) y, z) dt, solved termwise:
// each monomial splits over x/y with binomial weights and the t-integral
// is the exact Beta value a! b! / (a+b+1)!.
template <class F>
std::vector<Jet<F>> theta_map(const Jet<F>& psi, int n) {
    if (psi.num_vars() != 2 * n) throw ValidationError("theta_map: psi must have 2n variables");
    const int deg = std::max(0, psi.degree() - 1);
    std::vector<Jet<F>> theta;
    theta.reserve(n);
    for (int i = 0; i < n; ++i) {
        Jet<F> g = differentiate(psi, i);
        Jet<F> th(3 * n, deg);
        MultiIndex out(3 * n, 0);
        for (const auto& [mi, c] : g.terms()) {
            for (int j = 0; j < n; ++j) out[2 * n + j] = mi[n + j];
            // Enumerate splits mu + nu = alpha over the first block.
            MultiIndex mu(n, 0);
            auto rec = [&](auto&& self, int var) -> void {
                if (var == n) {
                    long long mult = 1;
                    int a = 0, b = 0;
                    for (int j = 0; j < n; ++j) {
                        mult *= binomial_ll(mi[j], mu[j]);
                        a += mu[j];
                        b += mi[j] - mu[j];
                    }
                    long long beta_den = (a + b + 1) * binomial_ll(a + b, a);
                    for (int j = 0; j < n; ++j) {
                        out[j] = mu[j];
                        out[n + j] = mi[j] - mu[j];
                    }
                    th.add_term(out, c * FieldTraits<F>::from_ratio(mult, beta_den));
                    return;
                }
                for (int e = 0; e <= mi[var]; ++e) {
                    mu[var] = e;
                    self(self, var + 1);
                }
                mu[var] = 0;
            };
            rec(rec, 0);
            for (int j = 0; j < n; ++j) out[2 * n + j] = 0;
        }
        theta.push_back(std::move(th));
    }
    return theta;
}

// Formal inverse z(x, y, theta) of the coordinate change
// (x, y, z) -> (x, y, theta(x, y, z)); x and y pass through.
template <class F>
std::vector<Jet<F>> invert_theta(const std::vector<Jet<F>>& theta, int n) {
    const int deg = theta[0].degree();
    std::vector<Jet<F>> full;
    full.reserve(3 * n);
    for (int i = 0; i < 2 * n; ++i) full.push_back(Jet<F>::variable(3 * n, deg, i));
    for (int i = 0; i < n; ++i) full.push_back(theta[i]);
    std::vector<Jet<F>> inv;
    try {
        inv = invert_map(full);
    } catch (const SingularDivisionError&) {
        throw ValidationError(
            "invert_theta: psi_xz(0,0) is singular; the potential is not strictly "
            "plurisubharmonic at the base point");
    }
    return {inv.begin() + 2 * n, inv.end()};
}

// Amplitude base Delta_0(x, y, theta) = det psi_yz(y, z) / det theta_z(x, y, z)
// evaluated on z = z(x, y, theta). Equals 1 on y = x.
template <class F>
Jet<F> delta0(const Jet<F>& psi, const std::vector<Jet<F>>& theta,
              const std::vector<Jet<F>>& z_map, int n) {
    const int deg3 = z_map[0].degree();
    JetMatrix<F> h = hermitian_metric(psi, n);

    std::vector<Jet<F>> args_yz;
    args_yz.reserve(2 * n);
    for (int i = 0; i < n; ++i) args_yz.push_back(Jet<F>::variable(3 * n, deg3, n + i));
    for (int i = 0; i < n; ++i) args_yz.push_back(z_map[i]);
    Jet<F> det_h = compose(det(h), args_yz);

    JetMatrix<F> theta_z(n, n, 3 * n, std::max(0, theta[0].degree() - 1));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) theta_z.at(i, j) = differentiate(theta[i], 2 * n + j);
    std::vector<Jet<F>> args_xyz;
    args_xyz.reserve(3 * n);
    for (int i = 0; i < 2 * n; ++i) args_xyz.push_back(Jet<F>::variable(3 * n, deg3, i));
    for (int i = 0; i < n; ++i) args_xyz.push_back(z_map[i]);
    Jet<F> det_tz = compose(det(theta_z), args_xyz);

    return det_h * invert_unit(det_tz);
}

// Restrict a 3n-variable jet to the diagonal y = x and drop the y block,
// leaving a jet in (x, last-block).
template <class F>
Jet<F> restrict_y_to_x(const Jet<F>& f, int n) {
    Jet<F> merged = f;
    for (int i = 0; i < n; ++i) merged = identify_vars(merged, n + i, i);
    return drop_vars(merged, n, n);
}

struct ContourReport {
    int samples = 0;
    int violations = 0;
    double max_slack = 0.0;  // most positive value seen; <= 0 means clean
    std::vector<std::complex<double>> witness_x, witness_y;
    double radius = 0.0;
    double margin = 0.0;
    unsigned long seed = 0;
};

inline double default_contour_margin(const std::vector<std::vector<std::complex<double>>>& hessian) {
    return 0.5 * hermitian_min_eigenvalue(hessian);
}

// Numeric sampling check that theta (with z = ybar) is a good contour:
//   2 Re theta.(x - y) + delta |x - y|^2 + phi(y) - phi(x) <= 0
// together with the polarized inequality
//   2 Re psi(x, ybar) - phi(x) - phi(y) + delta |x - y|^2 <= 0.
// Violations are report content, not errors.
ContourReport good_contour_check(const PotentialJet<ComplexD>& pot,
                                 const Jet<ComplexD>& psi,
                                 const std::vector<Jet<ComplexD>>& theta,
                                 double radius, double margin, int samples,
                                 unsigned long seed = 20260808UL, double tol = 1e-12);

} // namespace bergman
