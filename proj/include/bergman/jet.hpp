#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <vector>

#include "bergman/coeff.hpp"
#include "bergman/errors.hpp"

namespace bergman {

// Exponent vector of a monomial; length equals the ambient variable count.
using MultiIndex = std::vector<int>;

inline int total_degree(const MultiIndex& mi) {
    return std::accumulate(mi.begin(), mi.end(), 0);
}

// A formal power series truncated at fixed total degree.
//
// degree() is the guaranteed-valid truncation degree, maintained
// conservatively: binary operations take the min of the operands,
// differentiation drops one. Terms beyond degree() are never stored.
// Jets are immutable values once built; all operations return new jets.
template <class F>
class Jet {
public:
    using Terms = std::map<MultiIndex, F>;

    Jet(int num_vars, int degree) : num_vars_(num_vars), degree_(degree) {
        if (num_vars < 1) throw ValidationError("jet needs at least one variable");
        if (degree < 0) throw ValidationError("jet truncation degree must be >= 0");
    }

    static Jet zero(int num_vars, int degree) { return Jet(num_vars, degree); }

    static Jet constant(int num_vars, int degree, F c) {
        Jet j(num_vars, degree);
        j.add_term(MultiIndex(num_vars, 0), std::move(c));
        return j;
    }

    static Jet variable(int num_vars, int degree, int var) {
        Jet j(num_vars, degree);
        if (var < 0 || var >= num_vars) throw ValidationError("variable index out of range");
        MultiIndex mi(num_vars, 0);
        mi[var] = 1;
        j.add_term(mi, FieldTraits<F>::one());  // truncates away when degree == 0
        return j;
    }

    int num_vars() const { return num_vars_; }
    int degree() const { return degree_; }
    const Terms& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    F coeff(const MultiIndex& mi) const {
        auto it = terms_.find(mi);
        return it == terms_.end() ? FieldTraits<F>::zero() : it->second;
    }
    F constant_term() const { return coeff(MultiIndex(num_vars_, 0)); }

    bool is_zero() const { return terms_.empty(); }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& [mi, c] : terms_) m = std::max(m, FieldTraits<F>::abs(c));
        return m;
    }

    // Accumulate c into the monomial mi; silently truncates past degree()
    // and drops exact zeros.
    void add_term(const MultiIndex& mi, F c) {
        if (static_cast<int>(mi.size()) != num_vars_)
            throw ValidationError("multi-index length does not match variable count");
        if (total_degree(mi) > degree_) return;
        if (FieldTraits<F>::is_zero(c)) return;
        auto it = terms_.find(mi);
        if (it == terms_.end()) {
            terms_.emplace(mi, std::move(c));
        } else {
            it->second += c;
            if (FieldTraits<F>::is_zero(it->second)) terms_.erase(it);
        }
    }

    Jet truncated(int new_degree) const {
        Jet out(num_vars_, new_degree);
        for (const auto& [mi, c] : terms_)
            if (total_degree(mi) <= new_degree) out.terms_.emplace(mi, c);
        return out;
    }

    // Keep only terms of total degree exactly d.
    Jet homogeneous_part(int d) const {
        Jet out(num_vars_, degree_);
        for (const auto& [mi, c] : terms_)
            if (total_degree(mi) == d) out.terms_.emplace(mi, c);
        return out;
    }

    Jet coeff_conjugated() const {
        Jet out(num_vars_, degree_);
        for (const auto& [mi, c] : terms_) out.terms_.emplace(mi, FieldTraits<F>::conj(c));
        return out;
    }

    Jet& operator+=(const Jet& o) {
        check_same_space(o);
        degree_ = std::min(degree_, o.degree_);
        prune_past_degree();
        for (const auto& [mi, c] : o.terms_) add_term(mi, c);
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        check_same_space(o);
        degree_ = std::min(degree_, o.degree_);
        prune_past_degree();
        for (const auto& [mi, c] : o.terms_) add_term(mi, -c);
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator-(const Jet& a) {
        Jet out(a.num_vars_, a.degree_);
        for (const auto& [mi, c] : a.terms_) out.terms_.emplace(mi, -c);
        return out;
    }

    friend Jet operator*(const Jet& a, const Jet& b) {
        a.check_same_space(b);
        Jet out(a.num_vars_, std::min(a.degree_, b.degree_));
        MultiIndex mi(a.num_vars_);
        for (const auto& [ma, ca] : a.terms_) {
            int da = total_degree(ma);
            if (da > out.degree_) continue;
            for (const auto& [mb, cb] : b.terms_) {
                if (da + total_degree(mb) > out.degree_) continue;
                for (int i = 0; i < a.num_vars_; ++i) mi[i] = ma[i] + mb[i];
                out.add_term(mi, ca * cb);
            }
        }
        return out;
    }

    Jet& operator*=(const Jet& o) { return *this = *this * o; }

    Jet scaled(const F& c) const {
        Jet out(num_vars_, degree_);
        if (FieldTraits<F>::is_zero(c)) return out;
        for (const auto& [mi, t] : terms_) out.add_term(mi, t * c);
        return out;
    }

    std::complex<double> evaluate(std::span<const std::complex<double>> point) const {
        if (static_cast<int>(point.size()) != num_vars_)
            throw ValidationError("evaluation point dimension mismatch");
        std::complex<double> acc = 0.0;
        for (const auto& [mi, c] : terms_) {
            std::complex<double> mono = 1.0;
            for (int i = 0; i < num_vars_; ++i)
                for (int e = 0; e < mi[i]; ++e) mono *= point[i];
            acc += FieldTraits<F>::to_complex(c) * mono;
        }
        return acc;
    }

    bool operator==(const Jet& o) const {
        return num_vars_ == o.num_vars_ && degree_ == o.degree_ && terms_ == o.terms_;
    }

    std::string str() const;

private:
    void check_same_space(const Jet& o) const {
        if (num_vars_ != o.num_vars_)
            throw ValidationError("jet variable counts differ");
    }
    void prune_past_degree() {
        for (auto it = terms_.begin(); it != terms_.end();)
            it = total_degree(it->first) > degree_ ? terms_.erase(it) : std::next(it);
    }

    int num_vars_;
    int degree_;
    Terms terms_;
};

template <class F>
Jet<F> differentiate(const Jet<F>& f, int var) {
    if (var < 0 || var >= f.num_vars()) throw ValidationError("derivative variable out of range");
    Jet<F> out(f.num_vars(), std::max(0, f.degree() - 1));
    for (const auto& [mi, c] : f.terms()) {
        if (mi[var] == 0) continue;
        MultiIndex d = mi;
        d[var] -= 1;
        out.add_term(d, c * FieldTraits<F>::from_int(mi[var]));
    }
    return out;
}

// Truncated substitution f(args[0], ..., args[m-1]). Every argument must
// have zero constant term; recentering is the caller's job.
template <class F>
Jet<F> compose(const Jet<F>& f, const std::vector<Jet<F>>& args) {
    if (static_cast<int>(args.size()) != f.num_vars())
        throw ValidationError("compose: argument count does not match variable count");
    int p = args.empty() ? 1 : args[0].num_vars();
    int out_degree = f.degree();
    for (const auto& a : args) {
        if (a.num_vars() != p) throw ValidationError("compose: arguments live in different spaces");
        if (!FieldTraits<F>::is_zero(a.constant_term()))
            throw ValidationError("compose: argument has nonzero constant term");
        out_degree = std::min(out_degree, a.degree());
    }

    // Work at the output degree throughout; higher-degree terms of the
    // inputs cannot reach it.
    std::vector<Jet<F>> args_t;
    args_t.reserve(args.size());
    for (const auto& a : args)
        args_t.push_back(a.degree() > out_degree ? a.truncated(out_degree) : a);

    // Power cache per variable, grown on demand.
    std::vector<std::vector<Jet<F>>> pw(args.size());
    auto power = [&](int i, int e) -> const Jet<F>& {
        auto& cache = pw[i];
        if (cache.empty()) cache.push_back(Jet<F>::constant(p, out_degree, FieldTraits<F>::one()));
        while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * args_t[i]);
        return cache[e];
    };

    Jet<F> out(p, out_degree);
    for (const auto& [mi, c] : f.terms()) {
        if (total_degree(mi) > out_degree) continue;  // args vanish at 0
        Jet<F> term = Jet<F>::constant(p, out_degree, c);
        for (int i = 0; i < f.num_vars(); ++i)
            if (mi[i] > 0) term = term * power(i, mi[i]);
        out += term;
    }
    return out;
}

// Multiplicative inverse of a unit: f(0) != 0, returns g with f·g = 1.
template <class F>
Jet<F> invert_unit(const Jet<F>& f) {
    F c0 = f.constant_term();
    if (FieldTraits<F>::is_zero(c0))
        throw SingularDivisionError("invert_unit: series has zero constant term");
    F c0_inv = FieldTraits<F>::one() / c0;
    // u = f/c0 - 1 has zero constant term; invert the geometric series by Horner.
    Jet<F> u = f.scaled(c0_inv) - Jet<F>::constant(f.num_vars(), f.degree(), FieldTraits<F>::one());
    Jet<F> acc = Jet<F>::constant(f.num_vars(), f.degree(), FieldTraits<F>::one());
    for (int i = 0; i < f.degree(); ++i) {
        acc = Jet<F>::constant(f.num_vars(), f.degree(), FieldTraits<F>::one()) - u * acc;
    }
    return acc.scaled(c0_inv);
}

// exp(f) for f with zero constant term.
template <class F>
Jet<F> exp_series(const Jet<F>& f) {
    if (!FieldTraits<F>::is_zero(f.constant_term()))
        throw ValidationError("exp_series: nonzero constant term");
    Jet<F> one = Jet<F>::constant(f.num_vars(), f.degree(), FieldTraits<F>::one());
    Jet<F> acc = one;
    // Horner on exp: 1 + f(1 + f/2(1 + f/3(...)))
    for (int i = f.degree(); i >= 1; --i)
        acc = one + (f * acc).scaled(FieldTraits<F>::from_ratio(1, i));
    return acc;
}

// log(1 + f) for f with zero constant term.
template <class F>
Jet<F> log1p_series(const Jet<F>& f) {
    if (!FieldTraits<F>::is_zero(f.constant_term()))
        throw ValidationError("log1p_series: nonzero constant term");
    Jet<F> out(f.num_vars(), f.degree());
    Jet<F> p = f;
    for (int j = 1; j <= f.degree(); ++j) {
        long sign = (j % 2 == 1) ? 1 : -1;
        out += p.scaled(FieldTraits<F>::from_ratio(sign, j));
        if (j < f.degree()) p = p * f;
    }
    return out;
}

// Rename variables: exponent of old variable i moves to index_map[i] in a
// fresh space with new_num_vars variables. Injective maps only.
template <class F>
Jet<F> remap_vars(const Jet<F>& f, int new_num_vars, const std::vector<int>& index_map) {
    if (static_cast<int>(index_map.size()) != f.num_vars())
        throw ValidationError("remap_vars: map length mismatch");
    Jet<F> out(new_num_vars, f.degree());
    MultiIndex mi(new_num_vars);
    for (const auto& [m, c] : f.terms()) {
        std::fill(mi.begin(), mi.end(), 0);
        for (int i = 0; i < f.num_vars(); ++i) {
            if (m[i] == 0) continue;
            if (index_map[i] < 0 || index_map[i] >= new_num_vars)
                throw ValidationError("remap_vars: target index out of range");
            mi[index_map[i]] += m[i];
        }
        out.add_term(mi, c);
    }
    return out;
}

// Substitute variable src := variable dst (exponents merge). Validity is preserved.
template <class F>
Jet<F> identify_vars(const Jet<F>& f, int src, int dst) {
    std::vector<int> map(f.num_vars());
    std::iota(map.begin(), map.end(), 0);
    map[src] = dst;
    return remap_vars(f, f.num_vars(), map);
}

// Drop a contiguous block of variables the jet must not depend on.
template <class F>
Jet<F> drop_vars(const Jet<F>& f, int first, int count) {
    std::vector<int> map(f.num_vars());
    for (int i = 0; i < f.num_vars(); ++i) {
        if (i >= first && i < first + count) {
            map[i] = -1;
        } else {
            map[i] = i < first ? i : i - count;
        }
    }
    Jet<F> out(f.num_vars() - count, f.degree());
    MultiIndex mi(f.num_vars() - count);
    for (const auto& [m, c] : f.terms()) {
        std::fill(mi.begin(), mi.end(), 0);
        for (int i = 0; i < f.num_vars(); ++i) {
            if (m[i] == 0) continue;
            if (map[i] < 0)
                throw ValidationError("drop_vars: jet depends on a dropped variable");
            mi[map[i]] += m[i];
        }
        out.add_term(mi, c);
    }
    return out;
}

template <class F>
std::string Jet<F>::str() const {
    std::ostringstream os;
    os << "jet[" << num_vars_ << " vars, deg " << degree_ << "]";
    bool first = true;
    for (const auto& [mi, c] : terms_) {
        os << (first ? " " : " + ");
        first = false;
        if constexpr (FieldTraits<F>::exact) {
            os << "(" << c.str() << ")";
        } else {
            os << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
        }
        for (int i = 0; i < num_vars_; ++i)
            if (mi[i] > 0) os << "*v" << i << "^" << mi[i];
    }
    if (first) os << " 0";
    return os.str();
}

} // namespace bergman
