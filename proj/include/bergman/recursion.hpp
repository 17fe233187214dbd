#pragma once

#include <vector>

#include "bergman/jet_matrix.hpp"
#include "bergman/kuranishi.hpp"
#include "bergman/s_operator.hpp"

namespace bergman {

// The Kuranishi data built once from a potential at working degree D:
// everything downstream of psi. theta/z_map are valid to D-1, delta0 to
// D-2, and each recursion order costs two more degrees, hence the
// working-degree rule D = d_out + 2 (N + 1).
template <class F>
struct LocalGeometry {
    int n = 1;
    int degree = 0;  // working truncation degree of the potential
    Jet<F> psi;                      // (x, z)
    std::vector<Jet<F>> theta;       // (x, y, z)
    std::vector<Jet<F>> z_map;       // (x, y, theta)
    Jet<F> delta0_jet;               // (x, y, theta)
    std::vector<Jet<F>> theta_diag;  // theta(x, x, z) = psi_x, in (x, z)

    LocalGeometry(int dim, Jet<F> p)
        : n(dim), degree(p.degree()), psi(std::move(p)), delta0_jet(1, 0) {}
};

template <class F>
LocalGeometry<F> build_local_geometry(const PotentialJet<F>& pot) {
    LocalGeometry<F> g(pot.n, polarize(pot));
    g.theta = theta_map(g.psi, g.n);
    g.z_map = invert_theta(g.theta, g.n);
    g.delta0_jet = delta0(g.psi, g.theta, g.z_map, g.n);
    g.theta_diag.reserve(g.n);
    for (int i = 0; i < g.n; ++i) g.theta_diag.push_back(restrict_y_to_x(g.theta[i], g.n));
    return g;
}

// Required potential truncation degree for expansion order N valid to d_out.
inline int working_degree(int d_out, int order) { return d_out + 2 * (order + 1); }

namespace detail {

template <class F>
std::vector<Jet<F>> args_xz_to_xytheta(const LocalGeometry<F>& g, int degree) {
    std::vector<Jet<F>> args;
    args.reserve(2 * g.n);
    for (int i = 0; i < g.n; ++i) args.push_back(Jet<F>::variable(3 * g.n, degree, i));
    for (int i = 0; i < g.n; ++i) args.push_back(g.z_map[i].truncated(degree));
    return args;
}

template <class F>
std::vector<Jet<F>> args_xtheta_to_xz(const LocalGeometry<F>& g, int degree) {
    std::vector<Jet<F>> args;
    args.reserve(2 * g.n);
    for (int i = 0; i < g.n; ++i) args.push_back(Jet<F>::variable(2 * g.n, degree, i));
    for (int i = 0; i < g.n; ++i) args.push_back(g.theta_diag[i].truncated(degree));
    return args;
}

template <class F>
JetMatrix<F> restrict_matrix(const JetMatrix<F>& m, int n) {
    JetMatrix<F> out(m.rows(), m.cols(), 2 * n, m.degree());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out.at(i, j) = restrict_y_to_x(m.at(i, j), n);
    return out;
}

// Solves sum_{l=0}^m (D_theta.D_y)^l / l! (b_{m-l} Delta)|_{y=x} = 0 for
// matrix amplitudes b_m(x, z), given Delta(x, y, theta) with
// Delta|_{y=x} = I. Works for rank 1 (scalar case) upward. The division
// by Delta|_{y=x} is an assertion, not a division: anything else signals
// an upstream bug.
template <class F>
std::vector<JetMatrix<F>> amplitude_recursion(const LocalGeometry<F>& g,
                                              const JetMatrix<F>& delta, int order,
                                              int d_out) {
    const int n = g.n;
    const int rank = delta.rows();
    if (g.degree < working_degree(d_out, order))
        throw DegreeBudgetError(
            "amplitude recursion: potential truncation degree too small; need D = " +
                std::to_string(working_degree(d_out, order)),
            working_degree(d_out, order));

    JetMatrix<F> delta_diag = restrict_matrix(delta, n);
    JetMatrix<F> diag_residual =
        delta_diag - JetMatrix<F>::identity(rank, 2 * n, delta_diag.degree());
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) {
            const Jet<F>& r = diag_residual.at(i, j);
            bool bad = FieldTraits<F>::exact ? !r.is_zero() : r.max_abs_coeff() > 1e-12;
            if (bad)
                throw ValidationError(
                    "amplitude recursion: Delta|_{y=x} != identity (upstream bug)");
        }

    auto to_xytheta = args_xz_to_xytheta(g, delta.degree());

    std::vector<JetMatrix<F>> b;
    b.push_back(JetMatrix<F>::identity(rank, 2 * n, delta.degree()));

    // derivs[j][l] = (D_theta.D_y)^l applied to (b_j o z_map) Delta.
    std::vector<std::vector<JetMatrix<F>>> derivs;
    auto push_c = [&](const JetMatrix<F>& bj) {
        JetMatrix<F> c = compose_entries(bj, to_xytheta) * delta;
        derivs.push_back({std::move(c)});
    };
    push_c(b[0]);

    for (int m = 1; m <= order; ++m) {
        JetMatrix<F> known(rank, rank, 3 * n,
                           std::max(0, derivs[0][0].degree() - 2 * m));
        long fact = 1;
        for (int l = 1; l <= m; ++l) {
            fact *= l;
            auto& dj = derivs[m - l];
            while (static_cast<int>(dj.size()) <= l)
                dj.push_back(dj.back().map_entries(
                    [&](const Jet<F>& e) { return dtheta_dot_dy(e, n); }));
            known += dj[l].map_entries([&](const Jet<F>& e) {
                return e.scaled(FieldTraits<F>::from_ratio(1, fact));
            });
        }
        JetMatrix<F> rhs = restrict_matrix(known, n);
        auto back = args_xtheta_to_xz(g, rhs.degree());
        JetMatrix<F> bm(rank, rank, 2 * n, rhs.degree());
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j) bm.at(i, j) = -compose(rhs.at(i, j), back);
        b.push_back(bm);
        push_c(b.back());
    }

    for (auto& bm : b) bm = bm.map_entries([&](const Jet<F>& e) { return e.truncated(d_out); });
    return b;
}

} // namespace detail

// Solved expansion coefficients b_0..b_N as jets in (x, z). The diagonal
// restriction z -> xbar has the identical term table, reread over
// (x, xbar); it is stored separately for evaluation and reality checks.
template <class F>
struct CoefficientSequence {
    int n = 1;
    int order = 0;
    int degree = 0;  // validity degree of the stored jets
    std::vector<Jet<F>> b;
    std::vector<Jet<F>> diagonal;
    std::vector<F> base_values;
};

template <class F>
CoefficientSequence<F> solve_recursion(const LocalGeometry<F>& g, int order, int d_out) {
    JetMatrix<F> delta(1, 1, 3 * g.n, g.delta0_jet.degree());
    delta.at(0, 0) = g.delta0_jet;
    auto bs = detail::amplitude_recursion(g, delta, order, d_out);
    CoefficientSequence<F> seq;
    seq.n = g.n;
    seq.order = order;
    seq.degree = d_out;
    for (auto& bm : bs) {
        seq.b.push_back(bm.at(0, 0));
        seq.diagonal.push_back(bm.at(0, 0));
        seq.base_values.push_back(bm.at(0, 0).constant_term());
    }
    return seq;
}

template <class F>
CoefficientSequence<F> solve_recursion(const PotentialJet<F>& pot, int order, int d_out) {
    return solve_recursion(build_local_geometry(pot), order, d_out);
}

inline Jet<ComplexD> to_float(const Jet<GaussianRational>& f) {
    Jet<ComplexD> out(f.num_vars(), f.degree());
    for (const auto& [mi, c] : f.terms()) out.add_term(mi, c.to_complex());
    return out;
}

inline CoefficientSequence<ComplexD> to_float(const CoefficientSequence<GaussianRational>& s) {
    CoefficientSequence<ComplexD> out;
    out.n = s.n;
    out.order = s.order;
    out.degree = s.degree;
    for (const auto& j : s.b) out.b.push_back(to_float(j));
    for (const auto& j : s.diagonal) out.diagonal.push_back(to_float(j));
    for (const auto& c : s.base_values) out.base_values.push_back(c.to_complex());
    return out;
}

// Numeric evaluator for the order-N asymptotic kernel
//   K(x, ybar) = (k/pi)^n (sum_m b_m(x, ybar) k^{-m}) e^{k psi(x, ybar)}
// and the diagonal Bergman function B(x) = K(x, xbar) e^{-k phi(x)}, where
// the psi/phi exponentials cancel exactly on the diagonal.
struct KernelEvaluator {
    int n = 1;
    double k = 1.0;
    double validity_radius = 0.5;
    CoefficientSequence<ComplexD> seq;
    Jet<ComplexD> psi;

    ComplexD kernel(std::span<const ComplexD> x, std::span<const ComplexD> y,
                    bool* outside = nullptr) const {
        std::vector<ComplexD> pt(x.begin(), x.end());
        double r = 0.0;
        for (auto v : x) r = std::max(r, std::abs(v));
        for (auto v : y) {
            pt.push_back(std::conj(v));
            r = std::max(r, std::abs(v));
        }
        if (outside) *outside = r > validity_radius;
        ComplexD amp = 0.0;
        double kp = 1.0;
        for (int m = 0; m <= seq.order; ++m) {
            amp += seq.b[m].evaluate(pt) / kp;
            kp *= k;
        }
        return amp * std::pow(k / M_PI, n) * std::exp(k * psi.evaluate(pt));
    }

    double bergman(std::span<const ComplexD> x, bool* outside = nullptr) const {
        std::vector<ComplexD> pt(x.begin(), x.end());
        double r = 0.0;
        for (auto v : x) r = std::max(r, std::abs(v));
        for (auto v : x) pt.push_back(std::conj(v));
        if (outside) *outside = r > validity_radius;
        ComplexD amp = 0.0;
        double kp = 1.0;
        for (int m = 0; m <= seq.order; ++m) {
            amp += seq.diagonal[m].evaluate(pt) / kp;
            kp *= k;
        }
        return amp.real() * std::pow(k / M_PI, n);
    }
};

inline KernelEvaluator assemble_kernel(const CoefficientSequence<ComplexD>& seq,
                                       const Jet<ComplexD>& psi, double k, int n,
                                       double validity_radius = 0.5) {
    if (k <= 0) throw ConfigError("assemble_kernel: k must be positive");
    return KernelEvaluator{n, k, validity_radius, seq, psi};
}

} // namespace bergman
