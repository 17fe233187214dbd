#pragma once

#include <functional>
#include <vector>

#include "bergman/jet.hpp"
#include "bergman/linalg.hpp"

namespace bergman {

// Matrix with jet entries sharing one variable space. Noncommutative:
// callers fix the multiplication order themselves.
template <class F>
class JetMatrix {
public:
    JetMatrix(int rows, int cols, int num_vars, int degree)
        : rows_(rows), cols_(cols), e_(rows * cols, Jet<F>::zero(num_vars, degree)) {
        if (rows < 1 || cols < 1) throw ValidationError("jet matrix needs positive dimensions");
    }

    static JetMatrix identity(int n, int num_vars, int degree) {
        JetMatrix m(n, n, num_vars, degree);
        for (int i = 0; i < n; ++i)
            m.at(i, i) = Jet<F>::constant(num_vars, degree, FieldTraits<F>::one());
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int num_vars() const { return e_[0].num_vars(); }
    int degree() const {
        int d = e_[0].degree();
        for (const auto& j : e_) d = std::min(d, j.degree());
        return d;
    }

    Jet<F>& at(int i, int j) { return e_[i * cols_ + j]; }
    const Jet<F>& at(int i, int j) const { return e_[i * cols_ + j]; }

    JetMatrix map_entries(const std::function<Jet<F>(const Jet<F>&)>& fn) const {
        JetMatrix out = *this;
        for (auto& j : out.e_) j = fn(j);
        return out;
    }

    JetMatrix transposed() const {
        JetMatrix out(cols_, rows_, num_vars(), degree());
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
        return out;
    }

    CoeffMatrix<F> constant_term() const {
        CoeffMatrix<F> m(rows_, std::vector<F>(cols_, FieldTraits<F>::zero()));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m[i][j] = at(i, j).constant_term();
        return m;
    }

    JetMatrix& operator+=(const JetMatrix& o) {
        check_shape(o);
        for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
        return *this;
    }
    JetMatrix& operator-=(const JetMatrix& o) {
        check_shape(o);
        for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
        return *this;
    }
    friend JetMatrix operator+(JetMatrix a, const JetMatrix& b) { return a += b; }
    friend JetMatrix operator-(JetMatrix a, const JetMatrix& b) { return a -= b; }

    friend JetMatrix operator*(const JetMatrix& a, const JetMatrix& b) {
        if (a.cols_ != b.rows_) throw ValidationError("jet matrix product shape mismatch");
        JetMatrix out(a.rows_, b.cols_, a.num_vars(), std::min(a.degree(), b.degree()));
        for (int i = 0; i < a.rows_; ++i)
            for (int j = 0; j < b.cols_; ++j) {
                Jet<F> acc = Jet<F>::zero(a.num_vars(), std::min(a.degree(), b.degree()));
                for (int k = 0; k < a.cols_; ++k) acc += a.at(i, k) * b.at(k, j);
                out.at(i, j) = acc;
            }
        return out;
    }

    JetMatrix scaled(const Jet<F>& s) const {
        JetMatrix out = *this;
        for (auto& j : out.e_) j = j * s;
        return out;
    }

    bool operator==(const JetMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }

private:
    void check_shape(const JetMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw ValidationError("jet matrix shape mismatch");
    }

    int rows_, cols_;
    std::vector<Jet<F>> e_;
};

// Determinant by Laplace expansion along the first column. Matrices here
// stay tiny (n, r <= 4), so no elimination over the series ring is needed.
template <class F>
Jet<F> det(const JetMatrix<F>& m) {
    if (m.rows() != m.cols()) throw ValidationError("determinant of non-square jet matrix");
    int n = m.rows();
    if (n == 1) return m.at(0, 0);
    Jet<F> acc = Jet<F>::zero(m.num_vars(), m.degree());
    for (int i = 0; i < n; ++i) {
        if (m.at(i, 0).is_zero()) continue;
        JetMatrix<F> minor(n - 1, n - 1, m.num_vars(), m.degree());
        for (int r = 0, mr = 0; r < n; ++r) {
            if (r == i) continue;
            for (int c = 1; c < n; ++c) minor.at(mr, c - 1) = m.at(r, c);
            ++mr;
        }
        Jet<F> term = m.at(i, 0) * det(minor);
        if (i % 2 == 0) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    return acc;
}

// Inverse via the adjugate and a unit division by det. Requires the
// constant-term matrix to be nonsingular.
template <class F>
JetMatrix<F> matrix_inverse(const JetMatrix<F>& m, const char* what = "jet matrix") {
    if (m.rows() != m.cols()) throw ValidationError("inverse of non-square jet matrix");
    int n = m.rows();
    Jet<F> d = det(m);
    if (FieldTraits<F>::is_zero(d.constant_term()))
        throw SingularDivisionError(std::string("singular constant-term matrix: ") + what);
    Jet<F> d_inv = invert_unit(d);
    JetMatrix<F> out(n, n, m.num_vars(), m.degree());
    if (n == 1) {
        out.at(0, 0) = d_inv;
        return out;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            JetMatrix<F> minor(n - 1, n - 1, m.num_vars(), m.degree());
            for (int r = 0, mr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0, mc = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor.at(mr, mc++) = m.at(r, c);
                }
                ++mr;
            }
            Jet<F> cof = det(minor) * d_inv;
            out.at(j, i) = ((i + j) % 2 == 0) ? cof : -cof;
        }
    return out;
}

template <class F>
JetMatrix<F> compose_entries(const JetMatrix<F>& m, const std::vector<Jet<F>>& args) {
    int nv = args.empty() ? 1 : args[0].num_vars();
    int deg = m.degree();
    for (const auto& a : args) deg = std::min(deg, a.degree());
    JetMatrix<F> out(m.rows(), m.cols(), nv, deg);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out.at(i, j) = compose(m.at(i, j), args);
    return out;
}

} // namespace bergman
