#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "bergman/coeff.hpp"
#include "bergman/errors.hpp"

namespace bergman {

// Dense constant matrix over a coefficient field. Small sizes only; used
// for Jacobians at the base point, Hessian positivity and contractions.
template <class F>
using CoeffMatrix = std::vector<std::vector<F>>;

template <class F>
CoeffMatrix<F> coeff_identity(int n) {
    CoeffMatrix<F> m(n, std::vector<F>(n, FieldTraits<F>::zero()));
    for (int i = 0; i < n; ++i) m[i][i] = FieldTraits<F>::one();
    return m;
}

// Pivot row for column col: any nonzero entry in exact mode, largest
// magnitude in float mode. -1 when the column is dead.
template <class F>
int select_pivot(const CoeffMatrix<F>& a, int col) {
    int n = static_cast<int>(a.size());
    int pivot = -1;
    double best = -1.0;
    for (int r = col; r < n; ++r) {
        if (FieldTraits<F>::is_zero(a[r][col])) continue;
        if constexpr (FieldTraits<F>::exact) return r;
        double mag = FieldTraits<F>::abs(a[r][col]);
        if (mag > best) {
            best = mag;
            pivot = r;
        }
    }
    return pivot;
}

// Gauss-Jordan inverse. Exact in rational mode; partial pivoting by
// magnitude in float mode.
template <class F>
CoeffMatrix<F> coeff_inverse(CoeffMatrix<F> a, const char* what = "matrix") {
    int n = static_cast<int>(a.size());
    CoeffMatrix<F> inv = coeff_identity<F>(n);
    for (int col = 0; col < n; ++col) {
        int pivot = select_pivot(a, col);
        if (pivot < 0)
            throw SingularDivisionError(std::string("singular constant-term matrix: ") + what);
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        F d = a[col][col];
        for (int c = 0; c < n; ++c) {
            a[col][c] = a[col][c] / d;
            inv[col][c] = inv[col][c] / d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || FieldTraits<F>::is_zero(a[r][col])) continue;
            F factor = a[r][col];
            for (int c = 0; c < n; ++c) {
                a[r][c] -= factor * a[col][c];
                inv[r][c] -= factor * inv[col][c];
            }
        }
    }
    return inv;
}

template <class F>
F coeff_det(CoeffMatrix<F> a) {
    int n = static_cast<int>(a.size());
    F det = FieldTraits<F>::one();
    for (int col = 0; col < n; ++col) {
        int pivot = select_pivot(a, col);
        if (pivot < 0) return FieldTraits<F>::zero();
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            det = -det;
        }
        det = det * a[col][col];
        for (int r = col + 1; r < n; ++r) {
            if (FieldTraits<F>::is_zero(a[r][col])) continue;
            F factor = a[r][col] / a[col][col];
            for (int c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
        }
    }
    return det;
}

// Sylvester criterion for a Hermitian matrix: all leading principal minors
// positive. Exact in rational mode; small tolerance on the (real) minors
// in float mode.
template <class F>
bool is_hermitian_positive_definite(const CoeffMatrix<F>& a, double tol = 1e-12) {
    int n = static_cast<int>(a.size());
    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scale = std::max(scale, FieldTraits<F>::abs(a[i][j]));
    for (int k = 1; k <= n; ++k) {
        CoeffMatrix<F> lead(k, std::vector<F>(k, FieldTraits<F>::zero()));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) lead[i][j] = a[i][j];
        F d = coeff_det(lead);
        std::complex<double> dz = FieldTraits<F>::to_complex(d);
        if constexpr (FieldTraits<F>::exact) {
            if (!(d == FieldTraits<F>::conj(d)) || dz.real() <= 0.0) return false;
        } else {
            double eps = tol * std::max(1.0, std::pow(scale, k));
            if (std::abs(dz.imag()) > eps || dz.real() <= eps) return false;
        }
    }
    return true;
}

// Eigenvalues of a small complex Hermitian matrix by cyclic Jacobi
// rotations. Good enough for the base-point Hessians this project meets.
std::vector<double> hermitian_eigenvalues(std::vector<std::vector<std::complex<double>>> a);

inline double hermitian_min_eigenvalue(const std::vector<std::vector<std::complex<double>>>& a) {
    auto ev = hermitian_eigenvalues(a);
    double m = ev.empty() ? 0.0 : ev[0];
    for (double v : ev) m = std::min(m, v);
    return m;
}

} // namespace bergman
