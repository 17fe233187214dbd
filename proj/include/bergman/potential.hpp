#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bergman/jet.hpp"
#include "bergman/linalg.hpp"

namespace bergman {

inline std::string multi_index_str(const MultiIndex& mi) {
    std::string s = "[";
    for (std::size_t i = 0; i < mi.size(); ++i)
        s += (i ? "," : "") + std::to_string(mi[i]);
    return s + "]";
}

// Real-valued strictly plurisubharmonic weight jet phi(x, xbar) at the
// origin of a local chart. Variables: [0, n) the holomorphic block x,
// [n, 2n) the conjugate block xbar. The frame is normalized so that the
// constant and linear coefficients vanish.
template <class F>
struct PotentialJet {
    int n = 1;
    Jet<F> phi;

    PotentialJet(int dim, Jet<F> p) : n(dim), phi(std::move(p)) {}
};

// Mixed Hessian phi_{i jbar}(0) as an n x n coefficient matrix.
template <class F>
CoeffMatrix<F> hessian_at_origin(const PotentialJet<F>& pot) {
    CoeffMatrix<F> h(pot.n, std::vector<F>(pot.n, FieldTraits<F>::zero()));
    MultiIndex mi(2 * pot.n, 0);
    for (int i = 0; i < pot.n; ++i)
        for (int j = 0; j < pot.n; ++j) {
            mi[i] = 1;
            mi[pot.n + j] = 1;
            h[i][j] = pot.phi.coeff(mi);
            mi[i] = 0;
            mi[pot.n + j] = 0;
        }
    return h;
}

// Checks the normalized frame (no constant or linear part), reality
// (coefficient of x^a xbar^b conjugate to that of x^b xbar^a) and strict
// plurisubharmonicity at 0.
template <class F>
void validate_potential(const PotentialJet<F>& pot, double tol = 1e-12) {
    const int n = pot.n;
    if (pot.phi.num_vars() != 2 * n)
        throw ValidationError("potential jet must live in 2n variables");
    for (const auto& [mi, c] : pot.phi.terms()) {
        if (total_degree(mi) < 2)
            throw ValidationError(
                "potential must be normalized: constant and linear coefficients must vanish");
        MultiIndex swapped(2 * n);
        for (int i = 0; i < n; ++i) {
            swapped[i] = mi[n + i];
            swapped[n + i] = mi[i];
        }
        F diff = c - FieldTraits<F>::conj(pot.phi.coeff(swapped));
        bool bad = FieldTraits<F>::exact
                       ? !FieldTraits<F>::is_zero(diff)
                       : FieldTraits<F>::abs(diff) > tol * std::max(1.0, FieldTraits<F>::abs(c));
        if (bad)
            throw ValidationError("potential reality violated at monomial pair " +
                                  multi_index_str(mi) + " / " + multi_index_str(swapped));
    }
    if (!is_hermitian_positive_definite(hessian_at_origin(pot)))
        throw ValidationError("potential is not strictly plurisubharmonic at the base point");
}

// |x|^2 = sum_i x_i xbar_i.
template <class F>
Jet<F> norm_square_jet(int n, int degree) {
    Jet<F> r2(2 * n, degree);
    MultiIndex mi(2 * n, 0);
    for (int i = 0; i < n; ++i) {
        mi[i] = 1;
        mi[n + i] = 1;
        r2.add_term(mi, FieldTraits<F>::one());
        mi[i] = 0;
        mi[n + i] = 0;
    }
    return r2;
}

template <class F>
PotentialJet<F> flat_potential(int n, int degree) {
    return PotentialJet<F>(n, norm_square_jet<F>(n, degree));
}

// log(1 + |x|^2) truncated at the requested degree.
template <class F>
PotentialJet<F> fubini_study_potential(int n, int degree) {
    return PotentialJet<F>(n, log1p_series(norm_square_jet<F>(n, degree)));
}

// |x|^2 + c |x|^4.
template <class F>
PotentialJet<F> radial_quartic_potential(int n, int degree, const F& c) {
    Jet<F> r2 = norm_square_jet<F>(n, degree);
    Jet<F> phi = r2 + (r2 * r2).scaled(c);
    return PotentialJet<F>(n, std::move(phi));
}

template <class F>
PotentialJet<F> model_potential(const std::string& name, int n, int degree,
                                const F& quartic_coeff = FieldTraits<F>::zero()) {
    if (name == "flat") return flat_potential<F>(n, degree);
    if (name == "fubini-study") return fubini_study_potential<F>(n, degree);
    if (name == "radial-quartic") return radial_quartic_potential<F>(n, degree, quartic_coeff);
    throw ConfigError("unknown model potential: " + name);
}

// All exponent vectors over n variables with total degree in [lo, hi].
inline std::vector<MultiIndex> exponents_in_range(int n, int lo, int hi) {
    std::vector<MultiIndex> out;
    MultiIndex cur(n, 0);
    auto rec = [&](auto&& self, int var, int remaining_max) -> void {
        if (var == n) {
            if (total_degree(cur) >= lo) out.push_back(cur);
            return;
        }
        for (int e = 0; e <= remaining_max; ++e) {
            cur[var] = e;
            self(self, var + 1, remaining_max - e);
            cur[var] = 0;
        }
    };
    rec(rec, 0, hi);
    return out;
}

// Seeded random strictly plurisubharmonic quartic: identity quadratic part
// plus a small random Hermitian perturbation, plus random degree-3/4 terms
// in conjugate pairs. Coefficients are small dyadic rationals so both
// field instantiations see the same potential.
template <class F>
PotentialJet<F> random_psh_quartic(int n, int degree, unsigned long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> num(-8, 8);
    const F i_unit = FieldTraits<F>::imaginary_unit();
    const F half = FieldTraits<F>::from_ratio(1, 2);
    auto draw = [&](long den) { return FieldTraits<F>::from_ratio(num(rng), den); };

    Jet<F> phi(2 * n, degree);
    MultiIndex mi(2 * n, 0);

    // Quadratic part: I plus a small Hermitian perturbation (diagonally dominant).
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            F c = (i == j) ? FieldTraits<F>::one() + draw(64) : draw(64) + draw(64) * i_unit;
            mi[i] = 1;
            mi[n + j] = 1;
            phi.add_term(mi, c);
            mi[i] = 0;
            mi[n + j] = 0;
            if (i != j) {
                mi[j] = 1;
                mi[n + i] = 1;
                phi.add_term(mi, FieldTraits<F>::conj(c));
                mi[j] = 0;
                mi[n + i] = 0;
            }
        }

    // Cubic and quartic monomials x^a xbar^b, each unordered {(a,b),(b,a)}
    // pair drawn once and closed under conjugation.
    auto shapes = exponents_in_range(n, 0, 4);
    for (const auto& a : shapes)
        for (const auto& b : shapes) {
            int deg_ab = total_degree(a) + total_degree(b);
            if (deg_ab < 3 || deg_ab > 4 || b < a) continue;
            F c = draw(32) + draw(32) * i_unit;
            if (FieldTraits<F>::is_zero(c)) continue;
            MultiIndex fwd(2 * n), rev(2 * n);
            for (int i = 0; i < n; ++i) {
                fwd[i] = a[i];
                fwd[n + i] = b[i];
                rev[i] = b[i];
                rev[n + i] = a[i];
            }
            if (a == b) {
                phi.add_term(fwd, (c + FieldTraits<F>::conj(c)) * half);
            } else {
                phi.add_term(fwd, c);
                phi.add_term(rev, FieldTraits<F>::conj(c));
            }
        }

    PotentialJet<F> pot(n, std::move(phi));
    validate_potential(pot);
    return pot;
}

} // namespace bergman
