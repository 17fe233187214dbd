#pragma once

#include <vector>

#include "bergman/jet.hpp"
#include "bergman/kuranishi.hpp"

namespace bergman {

// Asymptotic expansion in inverse powers of k: coeffs[m] multiplies k^{-m}.
template <class F>
struct KExpansion {
    int order = 0;
    std::vector<Jet<F>> coeffs;

    static KExpansion zero(int order, int num_vars, int degree) {
        KExpansion e;
        e.order = order;
        e.coeffs.assign(order + 1, Jet<F>::zero(num_vars, degree));
        return e;
    }
};

// (D_theta . D_y) f = sum_j d_{theta_j} d_{y_j} f on the (x, y, theta) layout.
template <class F>
Jet<F> dtheta_dot_dy(const Jet<F>& f, int n) {
    if (f.num_vars() != 3 * n) throw ValidationError("dtheta_dot_dy: expected 3n variables");
    Jet<F> out(3 * n, std::max(0, f.degree() - 2));
    for (int j = 0; j < n; ++j) out += differentiate(differentiate(f, n + j), 2 * n + j);
    return out;
}

namespace detail {
// Shared convolution for S and S^{-1}: output m-th coefficient is
// sum_l sign^l/l! (D_theta.D_y)^l a_{m-l}. Shift-invariant in the order
// index, so callers may feed coefficient lists starting at any power.
template <class F>
std::vector<Jet<F>> s_convolve(const std::vector<Jet<F>>& a, int n, long sign) {
    int count = static_cast<int>(a.size());
    std::vector<std::vector<Jet<F>>> derivs(count);
    for (int j = 0; j < count; ++j) {
        derivs[j].push_back(a[j]);
        for (int l = 1; l < count - j; ++l)
            derivs[j].push_back(dtheta_dot_dy(derivs[j].back(), n));
    }
    std::vector<Jet<F>> out;
    out.reserve(count);
    for (int m = 0; m < count; ++m) {
        Jet<F> acc = a[m];
        long fact = 1;
        long sgn = 1;
        for (int l = 1; l <= m; ++l) {
            fact *= l;
            sgn *= sign;
            acc += derivs[m - l][l].scaled(FieldTraits<F>::from_ratio(sgn, fact));
        }
        out.push_back(std::move(acc));
    }
    return out;
}
} // namespace detail

namespace detail {
// Order-j input feeds orders j..N and is differentiated up to 2(N-j)
// times; a fresh expansion with uniform degree D needs D >= 2N.
template <class F>
void check_s_headroom(const KExpansion<F>& a, const char* who) {
    for (int j = 0; j <= a.order; ++j) {
        int need = 2 * (a.order - j);
        if (a.coeffs[j].degree() < need)
            throw DegreeBudgetError(std::string(who) + ": operand needs trunc degree >= 2N",
                                    2 * a.order);
    }
}
} // namespace detail

// S = exp((D_theta . D_y)/k) acting on expansions of order N.
template <class F>
KExpansion<F> apply_S(const KExpansion<F>& a, int n) {
    detail::check_s_headroom(a, "apply_S");
    KExpansion<F> out;
    out.order = a.order;
    out.coeffs = detail::s_convolve(a.coeffs, n, +1);
    return out;
}

template <class F>
KExpansion<F> apply_S_inverse(const KExpansion<F>& a, int n) {
    detail::check_s_headroom(a, "apply_S_inverse");
    KExpansion<F> out;
    out.order = a.order;
    out.coeffs = detail::s_convolve(a.coeffs, n, -1);
    return out;
}

struct NegligibleReport {
    // max |coefficient| of S(grad A)|_{y=x} per order, starting at the
    // k^{+1} term contributed by k (x-y).A.
    std::vector<double> residual_by_order;
    double max_residual = 0.0;
};

// Forward half of the negligibility criterion: amplitudes of the form
// a = D_theta.A + k (x-y).A satisfy S a = 0 on y = x at every order.
// A is an (n-1,0)-form given by its n components, each an expansion.
template <class F>
NegligibleReport verify_negligible(const std::vector<KExpansion<F>>& a_form, int n, int order) {
    if (static_cast<int>(a_form.size()) != n)
        throw ValidationError("verify_negligible: form must have n components");
    const int nv = 3 * n;
    int deg = a_form[0].coeffs[0].degree();
    for (const auto& comp : a_form)
        for (const auto& j : comp.coeffs) deg = std::min(deg, j.degree());

    auto component = [&](int j, int m) -> Jet<F> {
        if (m < 0 || m > a_form[j].order) return Jet<F>::zero(nv, deg);
        return a_form[j].coeffs[m].truncated(deg);
    };

    // Shifted coefficient list: index i holds the k^{1-i} coefficient of
    // grad A; the k (x-y).A term shifts orders down by one.
    std::vector<Jet<F>> shifted;
    for (int i = 0; i <= order + 1; ++i) {
        int m = i - 1;
        Jet<F> acc = Jet<F>::zero(nv, deg);
        for (int j = 0; j < n; ++j) {
            if (m >= 0) acc += differentiate(component(j, m), 2 * n + j);
            Jet<F> xy = Jet<F>::variable(nv, deg, j) - Jet<F>::variable(nv, deg, n + j);
            acc += xy * component(j, m + 1);
        }
        shifted.push_back(std::move(acc));
    }

    auto s_applied = detail::s_convolve(shifted, n, +1);
    NegligibleReport report;
    for (auto& jet : s_applied) {
        double r = restrict_y_to_x(jet, n).max_abs_coeff();
        report.residual_by_order.push_back(r);
        report.max_residual = std::max(report.max_residual, r);
    }
    return report;
}

} // namespace bergman
