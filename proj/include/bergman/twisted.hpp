#pragma once

#include <vector>

#include "bergman/recursion.hpp"

namespace bergman {

// Hermitian metric jet G on a rank-r holomorphic bundle, over the same
// (x, xbar) chart as the potential. Positive definite at the base point;
// coefficientwise G_ij(a, b) = conj(G_ji(b, a)).
template <class F>
struct BundleMetricJet {
    int rank = 1;
    int n = 1;
    JetMatrix<F> g;

    BundleMetricJet(int r, int dim, JetMatrix<F> metric)
        : rank(r), n(dim), g(std::move(metric)) {}
};

template <class F>
void validate_bundle_metric(const BundleMetricJet<F>& bm, double tol = 1e-12) {
    if (bm.g.rows() != bm.rank || bm.g.cols() != bm.rank)
        throw ValidationError("bundle metric shape does not match rank");
    if (bm.g.num_vars() != 2 * bm.n)
        throw ValidationError("bundle metric must live in 2n variables");
    const int n = bm.n;
    for (int i = 0; i < bm.rank; ++i)
        for (int j = 0; j < bm.rank; ++j)
            for (const auto& [mi, c] : bm.g.at(i, j).terms()) {
                MultiIndex swapped(2 * n);
                for (int v = 0; v < n; ++v) {
                    swapped[v] = mi[n + v];
                    swapped[n + v] = mi[v];
                }
                F diff = c - FieldTraits<F>::conj(bm.g.at(j, i).coeff(swapped));
                bool bad = FieldTraits<F>::exact
                               ? !FieldTraits<F>::is_zero(diff)
                               : FieldTraits<F>::abs(diff) >
                                     tol * std::max(1.0, FieldTraits<F>::abs(c));
                if (bad)
                    throw ValidationError("bundle metric is not Hermitian-symmetric at entry (" +
                                          std::to_string(i) + "," + std::to_string(j) + ")");
            }
    if (!is_hermitian_positive_definite(bm.g.constant_term()))
        throw ValidationError("bundle metric G(0) is not positive definite");
}

// Twisted amplitude base Delta_G(x, y, theta) =
// Delta_0 . G(x, z)^{-1} G(y, z) composed with z = z(x, y, theta).
// Restriction to y = x is the identity matrix.
template <class F>
JetMatrix<F> delta_G(const LocalGeometry<F>& geom, const Jet<F>& delta0_jet,
                     const BundleMetricJet<F>& bm) {
    validate_bundle_metric(bm);
    const int n = geom.n;
    const int deg = delta0_jet.degree();

    JetMatrix<F> g_inv = matrix_inverse(bm.g, "bundle metric G(0)");

    std::vector<Jet<F>> args_x, args_y;
    args_x.reserve(2 * n);
    args_y.reserve(2 * n);
    for (int i = 0; i < n; ++i) args_x.push_back(Jet<F>::variable(3 * n, deg, i));
    for (int i = 0; i < n; ++i) args_y.push_back(Jet<F>::variable(3 * n, deg, n + i));
    for (int i = 0; i < n; ++i) {
        args_x.push_back(geom.z_map[i].truncated(deg));
        args_y.push_back(geom.z_map[i].truncated(deg));
    }

    JetMatrix<F> ginv_xz = compose_entries(g_inv, args_x);
    JetMatrix<F> g_yz = compose_entries(bm.g, args_y);
    return (ginv_xz * g_yz).scaled(delta0_jet);
}

// Connection and curvature of (E, G) in the polarized chart (y, z):
// eta_E = G^{-1} d_y G, and the curvature coefficients are stored with
// the contraction-ready sign Theta[i][j] = -d_{z_j} eta_{E,i}.
template <class F>
struct BundleCurvature {
    std::vector<JetMatrix<F>> eta;                  // n entries, each r x r
    std::vector<std::vector<JetMatrix<F>>> theta;   // n x n grid of r x r
};

template <class F>
BundleCurvature<F> bundle_curvature(const BundleMetricJet<F>& bm) {
    validate_bundle_metric(bm);
    const int n = bm.n;
    JetMatrix<F> g_inv = matrix_inverse(bm.g, "bundle metric G(0)");
    BundleCurvature<F> out;
    out.eta.reserve(n);
    for (int i = 0; i < n; ++i) {
        JetMatrix<F> dg = bm.g.map_entries([&](const Jet<F>& e) { return differentiate(e, i); });
        out.eta.push_back(g_inv * dg);
    }
    out.theta.resize(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.theta[i].push_back(out.eta[i].map_entries(
                [&](const Jet<F>& e) { return -differentiate(e, n + j); }));
    return out;
}

// Lambda Theta_E: contraction of the matrix-valued curvature with the base
// metric, sum_{ij} (H^{-1})_{ji} Theta[i][j]. Same convention as the
// scalar contract(), so Lambda omega = n and b_1 = (s/2) I + Lambda Theta_E.
template <class F>
JetMatrix<F> contract_bundle_curvature(const BundleCurvature<F>& curv,
                                       const JetMatrix<F>& h) {
    const int n = h.rows();
    JetMatrix<F> h_inv = matrix_inverse(h, "metric jet H(0)");
    int rank = curv.theta[0][0].rows();
    JetMatrix<F> acc(rank, rank, h.num_vars(),
                     std::min(h_inv.degree(), curv.theta[0][0].degree()));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc += curv.theta[i][j].scaled(h_inv.at(j, i));
    return acc;
}

// Matrix-valued expansion coefficients for sections twisted by (E, G).
template <class F>
struct MatrixCoefficientSequence {
    int n = 1;
    int rank = 1;
    int order = 0;
    int degree = 0;
    std::vector<JetMatrix<F>> b;         // (x, z)
    std::vector<JetMatrix<F>> diagonal;  // same tables read over (x, xbar)
    std::vector<CoeffMatrix<F>> base_values;
};

template <class F>
MatrixCoefficientSequence<F> solve_recursion_twisted(const LocalGeometry<F>& geom,
                                                     const BundleMetricJet<F>& bm,
                                                     int order, int d_out) {
    if (bm.n != geom.n) throw ValidationError("bundle metric dimension mismatch");
    JetMatrix<F> delta = delta_G(geom, geom.delta0_jet, bm);
    auto bs = detail::amplitude_recursion(geom, delta, order, d_out);
    MatrixCoefficientSequence<F> seq;
    seq.n = geom.n;
    seq.rank = bm.rank;
    seq.order = order;
    seq.degree = d_out;
    for (auto& m : bs) {
        seq.b.push_back(m);
        seq.diagonal.push_back(m);
        seq.base_values.push_back(m.constant_term());
    }
    return seq;
}

// A positive density ratio mu_n / omega_n wrapped as a rank-1 twist, so
// Bergman kernels for a general volume form reuse the twisted recursion.
template <class F>
BundleMetricJet<F> volume_twist(const Jet<F>& mu_over_omega, int n) {
    F c0 = mu_over_omega.constant_term();
    std::complex<double> z = FieldTraits<F>::to_complex(c0);
    if (z.real() <= 0.0 || std::abs(z.imag()) > 1e-14 * std::max(1.0, std::abs(z.real())))
        throw ValidationError("volume twist density must be positive at the base point");
    JetMatrix<F> g(1, 1, mu_over_omega.num_vars(), mu_over_omega.degree());
    g.at(0, 0) = mu_over_omega;
    BundleMetricJet<F> bm(1, n, std::move(g));
    validate_bundle_metric(bm);
    return bm;
}

} // namespace bergman
