#pragma once

#include <vector>

#include "bergman/jet_matrix.hpp"
#include "bergman/potential.hpp"

namespace bergman {

// Polarized phase psi(x, z): the holomorphic function of 2n variables with
// psi(x, xbar) = phi(x). For a jet this is the formal substitution
// xbar_i -> z_i, i.e. the same term table read over (x, z).
template <class F>
Jet<F> polarize(const PotentialJet<F>& pot) {
    validate_potential(pot);
    return pot.phi;
}

// Metric jet H(y, z) with H_ij = psi_{y_i z_j}. Lives in the same 2n
// variables as psi with the first block read as y.
template <class F>
JetMatrix<F> hermitian_metric(const Jet<F>& psi, int n) {
    if (psi.num_vars() != 2 * n) throw ValidationError("hermitian_metric: psi must have 2n variables");
    JetMatrix<F> h(n, n, 2 * n, std::max(0, psi.degree() - 2));
    for (int i = 0; i < n; ++i) {
        Jet<F> dyi = differentiate(psi, i);
        for (int j = 0; j < n; ++j) h.at(i, j) = differentiate(dyi, n + j);
    }
    if (!is_hermitian_positive_definite(h.constant_term()))
        throw ValidationError("metric jet is not positive definite at the base point");
    return h;
}

// Chern connection coefficients eta_j = H^{-1} d_{y_j} H.
template <class F>
std::vector<JetMatrix<F>> connection(const JetMatrix<F>& h) {
    int n = h.rows();
    JetMatrix<F> h_inv = matrix_inverse(h, "metric jet H(0)");
    std::vector<JetMatrix<F>> eta;
    eta.reserve(n);
    for (int j = 0; j < n; ++j) {
        JetMatrix<F> dh = h.map_entries([&](const Jet<F>& e) { return differentiate(e, j); });
        eta.push_back(h_inv * dh);
    }
    return eta;
}

// Contraction with the metric form of a (1,1)-form coefficient matrix T
// (rows = holomorphic index, columns = conjugate index): Lambda T =
// Tr(H^{-1} T). Normalized so that Lambda omega = n.
template <class F>
Jet<F> contract(const JetMatrix<F>& t, const JetMatrix<F>& h) {
    if (t.rows() != h.rows() || t.cols() != h.cols() || t.rows() != t.cols())
        throw ValidationError("contract: shape mismatch");
    JetMatrix<F> prod = matrix_inverse(h, "metric jet H(0)") * t;
    Jet<F> acc = Jet<F>::zero(prod.num_vars(), prod.degree());
    for (int i = 0; i < prod.rows(); ++i) acc += prod.at(i, i);
    return acc;
}

// Scalar curvature s = Lambda Tr dbar(eta) as a jet in (y, z). With the
// (1,1) conventions above this is -Tr(H^{-1} M), M_ij = d_{z_j} Tr eta_i,
// which reduces to -Tr(sum_j d_{zbar_j} eta_j) in a frame with H(0) = I.
template <class F>
Jet<F> scalar_curvature(const JetMatrix<F>& h) {
    int n = h.rows();
    auto eta = connection(h);
    JetMatrix<F> m(n, n, h.num_vars(), std::max(0, h.degree() - 2));
    for (int i = 0; i < n; ++i) {
        Jet<F> tr = Jet<F>::zero(h.num_vars(), eta[i].degree());
        for (int a = 0; a < n; ++a) tr += eta[i].at(a, a);
        for (int j = 0; j < n; ++j) m.at(i, j) = differentiate(tr, n + j);
    }
    return -contract(m, h);
}

// phi'(x) = phi(U x) for a linear change of chart U; the conjugate block
// transforms by conj(U). Unitary U preserves all base-point invariants.
template <class F>
PotentialJet<F> transform_potential(const PotentialJet<F>& pot, const CoeffMatrix<F>& u) {
    int n = pot.n;
    int nv = 2 * n;
    int deg = pot.phi.degree();
    std::vector<Jet<F>> args;
    args.reserve(nv);
    for (int i = 0; i < n; ++i) {
        Jet<F> a(nv, deg);
        MultiIndex mi(nv, 0);
        for (int j = 0; j < n; ++j) {
            mi[j] = 1;
            a.add_term(mi, u[i][j]);
            mi[j] = 0;
        }
        args.push_back(std::move(a));
    }
    for (int i = 0; i < n; ++i) {
        Jet<F> a(nv, deg);
        MultiIndex mi(nv, 0);
        for (int j = 0; j < n; ++j) {
            mi[n + j] = 1;
            a.add_term(mi, FieldTraits<F>::conj(u[i][j]));
            mi[n + j] = 0;
        }
        args.push_back(std::move(a));
    }
    return PotentialJet<F>(n, compose(pot.phi, args));
}

} // namespace bergman
