#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "bergman/errors.hpp"

namespace bergman {

// Exact Gaussian rational a + b·i with arbitrary-precision rational parts.
// Conjugation is the field automorphism fixing the rational reals.
class GaussianRational {
public:
    GaussianRational() : re_(0), im_(0) {}
    GaussianRational(long v) : re_(v), im_(0) {}  // NOLINT: implicit by design
    GaussianRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {}

    static GaussianRational ratio(long num, long den) {
        if (den == 0) throw SingularDivisionError("rational with zero denominator");
        mpq_class q(num, den);
        q.canonicalize();
        return GaussianRational(q, mpq_class(0));
    }
    static GaussianRational ratio(long rnum, long rden, long inum, long iden) {
        if (rden == 0 || iden == 0) throw SingularDivisionError("rational with zero denominator");
        mpq_class r(rnum, rden), i(inum, iden);
        r.canonicalize();
        i.canonicalize();
        return GaussianRational(std::move(r), std::move(i));
    }

    const mpq_class& re() const { return re_; }
    const mpq_class& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }

    GaussianRational conj() const { return GaussianRational(re_, -im_); }

    GaussianRational& operator+=(const GaussianRational& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        mpq_class r = re_ * o.re_ - im_ * o.im_;
        im_ = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o) {
        mpq_class n = o.re_ * o.re_ + o.im_ * o.im_;
        if (sgn(n) == 0) throw SingularDivisionError("division by zero coefficient");
        mpq_class r = (re_ * o.re_ + im_ * o.im_) / n;
        im_ = (im_ * o.re_ - re_ * o.im_) / n;
        re_ = std::move(r);
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
    friend GaussianRational operator-(const GaussianRational& a) {
        return GaussianRational(-a.re_, -a.im_);
    }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

    std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

    std::string str() const {
        return re_.get_str() + (sgn(im_) >= 0 ? "+" : "") + im_.get_str() + "i";
    }

private:
    mpq_class re_, im_;
};

// Static interface shared by the two coefficient fields. Jet<F> and
// everything above it is written against this.
template <class F>
struct FieldTraits;

template <>
struct FieldTraits<GaussianRational> {
    static constexpr bool exact = true;
    static constexpr const char* name = "exact";
    static GaussianRational zero() { return GaussianRational(); }
    static GaussianRational one() { return GaussianRational(1); }
    static GaussianRational imaginary_unit() { return GaussianRational(mpq_class(0), mpq_class(1)); }
    static GaussianRational from_int(long v) { return GaussianRational(v); }
    static GaussianRational from_ratio(long num, long den) { return GaussianRational::ratio(num, den); }
    static GaussianRational conj(const GaussianRational& c) { return c.conj(); }
    static bool is_zero(const GaussianRational& c) { return c.is_zero(); }
    static double abs(const GaussianRational& c) { return std::abs(c.to_complex()); }
    static std::complex<double> to_complex(const GaussianRational& c) { return c.to_complex(); }
};

template <>
struct FieldTraits<std::complex<double>> {
    static constexpr bool exact = false;
    static constexpr const char* name = "float";
    static std::complex<double> zero() { return {0.0, 0.0}; }
    static std::complex<double> one() { return {1.0, 0.0}; }
    static std::complex<double> imaginary_unit() { return {0.0, 1.0}; }
    static std::complex<double> from_int(long v) { return {static_cast<double>(v), 0.0}; }
    static std::complex<double> from_ratio(long num, long den) {
        if (den == 0) throw SingularDivisionError("rational with zero denominator");
        return {static_cast<double>(num) / static_cast<double>(den), 0.0};
    }
    static std::complex<double> conj(const std::complex<double>& c) { return std::conj(c); }
    static bool is_zero(const std::complex<double>& c) { return c.real() == 0.0 && c.imag() == 0.0; }
    static double abs(const std::complex<double>& c) { return std::abs(c); }
    static std::complex<double> to_complex(const std::complex<double>& c) { return c; }
};

using ComplexD = std::complex<double>;

} // namespace bergman
