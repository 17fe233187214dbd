#pragma once

#include <vector>

#include "bergman/jet.hpp"
#include "bergman/linalg.hpp"

namespace bergman {

// Formal inverse of a series map F: C^m -> C^m with F(0) = 0 and
// nonsingular Jacobian at 0. Solved degree by degree: with G correct
// through degree d-1, the residual F(G) - id is purely of degree >= d,
// and subtracting A^{-1} times its degree-d part fixes degree d without
// touching lower ones (A = Jacobian of F at 0).
template <class F>
std::vector<Jet<F>> invert_map(const std::vector<Jet<F>>& fmap) {
    int m = static_cast<int>(fmap.size());
    if (m == 0) throw ValidationError("invert_map: empty map");
    int nv = fmap[0].num_vars();
    if (nv != m) throw ValidationError("invert_map: map must be square (m jets in m vars)");
    int deg = fmap[0].degree();
    for (const auto& f : fmap) {
        if (f.num_vars() != nv) throw ValidationError("invert_map: mixed variable counts");
        if (!FieldTraits<F>::is_zero(f.constant_term()))
            throw ValidationError("invert_map: component has nonzero constant term");
        deg = std::min(deg, f.degree());
    }
    if (deg < 1)
        throw DegreeBudgetError("invert_map: inputs carry no linear part", 1);

    CoeffMatrix<F> jac(m, std::vector<F>(m, FieldTraits<F>::zero()));
    for (int i = 0; i < m; ++i) {
        MultiIndex mi(m, 0);
        for (int j = 0; j < m; ++j) {
            mi[j] = 1;
            jac[i][j] = fmap[i].coeff(mi);
            mi[j] = 0;
        }
    }
    CoeffMatrix<F> jac_inv = coeff_inverse(jac, "map Jacobian at 0");

    std::vector<Jet<F>> g;
    g.reserve(m);
    for (int i = 0; i < m; ++i) {
        Jet<F> gi(m, deg);
        MultiIndex mi(m, 0);
        for (int j = 0; j < m; ++j) {
            mi[j] = 1;
            gi.add_term(mi, jac_inv[i][j]);
            mi[j] = 0;
        }
        g.push_back(std::move(gi));
    }

    for (int d = 2; d <= deg; ++d) {
        // The degree-d residual only involves jets through degree d, so
        // work truncated and lift the (exact) homogeneous correction back.
        std::vector<Jet<F>> g_d;
        g_d.reserve(m);
        for (const auto& gi : g) g_d.push_back(gi.truncated(d));
        std::vector<Jet<F>> residual_d;
        residual_d.reserve(m);
        bool all_zero = true;
        for (int i = 0; i < m; ++i) {
            Jet<F> r = compose(fmap[i], g_d) - Jet<F>::variable(m, d, i);
            residual_d.push_back(r.homogeneous_part(d).truncated(deg));
            all_zero = all_zero && residual_d.back().is_zero();
        }
        if (all_zero) continue;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                g[i] -= residual_d[j].scaled(jac_inv[i][j]);
    }
    return g;
}

} // namespace bergman
