#pragma once

#include <string>

#include <json.hpp>

#include "bergman/coeff.hpp"
#include "bergman/jet.hpp"
#include "bergman/kuranishi.hpp"
#include "bergman/oracles.hpp"
#include "bergman/potential.hpp"
#include "bergman/recursion.hpp"
#include "bergman/twisted.hpp"

namespace bergman {

using Json = nlohmann::json;

// Coefficient encodings. Exact mode serializes arbitrary-precision
// rationals as decimal strings; float mode as plain numbers.
inline Json coeff_json(const GaussianRational& c) {
    return {{"num_re", c.re().get_num().get_str()},
            {"den_re", c.re().get_den().get_str()},
            {"num_im", c.im().get_num().get_str()},
            {"den_im", c.im().get_den().get_str()}};
}
inline Json coeff_json(const ComplexD& c) {
    return {{"re", c.real()}, {"im", c.imag()}};
}

template <class F>
Json jet_json(const Jet<F>& f) {
    Json terms = Json::array();
    for (const auto& [mi, c] : f.terms()) {
        Json t = coeff_json(c);
        t["exponents"] = mi;
        terms.push_back(std::move(t));
    }
    return {{"num_vars", f.num_vars()}, {"degree", f.degree()}, {"terms", std::move(terms)}};
}

template <class F>
Json term_list_json(const Jet<F>& f) {
    Json terms = Json::array();
    for (const auto& [mi, c] : f.terms()) {
        Json t = coeff_json(c);
        t["exponents"] = mi;
        terms.push_back(std::move(t));
    }
    return terms;
}

template <class F>
Json sequence_json(const CoefficientSequence<F>& seq) {
    Json b = Json::array(), diag = Json::array(), base = Json::array();
    for (int m = 0; m <= seq.order; ++m) {
        b.push_back({{"m", m}, {"terms", term_list_json(seq.b[m])}});
        diag.push_back({{"m", m}, {"terms", term_list_json(seq.diagonal[m])}});
        base.push_back(coeff_json(seq.base_values[m]));
    }
    return {{"n", seq.n},
            {"N", seq.order},
            {"degree", seq.degree},
            {"mode", FieldTraits<F>::name},
            {"b", std::move(b)},
            {"diagonal", std::move(diag)},
            {"base_values", std::move(base)}};
}

inline Json contour_report_json(const ContourReport& r) {
    Json wx = Json::array(), wy = Json::array();
    for (auto c : r.witness_x) wx.push_back({{"re", c.real()}, {"im", c.imag()}});
    for (auto c : r.witness_y) wy.push_back({{"re", c.real()}, {"im", c.imag()}});
    return {{"samples", r.samples},
            {"violations", r.violations},
            {"max_slack", r.max_slack},
            {"witness", {{"x", std::move(wx)}, {"y", std::move(wy)}}},
            {"radius", r.radius},
            {"margin", r.margin},
            {"seed", r.seed}};
}

inline Json sweep_json(const SweepResult& s) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < s.k_values.size(); ++i)
        rows.push_back({{"k", s.k_values[i]},
                        {"oracle_value", s.oracle_values[i]},
                        {"expansion_value", s.expansion_values[i]},
                        {"rel_error", s.rel_errors[i]}});
    return {{"rows", std::move(rows)},
            {"slope", s.slope},
            {"fit_residual", s.fit_residual},
            {"max_bergman_over_kn", s.max_bergman_over_kn},
            {"runtime_seconds", s.runtime_seconds}};
}

inline std::string sweep_csv(const SweepResult& s) {
    std::string csv = "k,oracle_value,expansion_value,rel_error\n";
    char buf[160];
    for (std::size_t i = 0; i < s.k_values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", s.k_values[i],
                      s.oracle_values[i], s.expansion_values[i], s.rel_errors[i]);
        csv += buf;
    }
    return csv;
}

// --- input parsing ------------------------------------------------------

namespace detail {
template <class F>
F parse_coeff_fields(const Json& t);

template <>
inline GaussianRational parse_coeff_fields<GaussianRational>(const Json& t) {
    if (!t.contains("re_num"))
        throw ConfigError("exact mode requires rational coefficient fields "
                          "(re_num/re_den/im_num/im_den)");
    auto q = [&](const char* num, const char* den) {
        mpq_class v(t.value(num, "0") + "/" + t.value(den, "1"));
        v.canonicalize();
        return v;
    };
    return GaussianRational(q("re_num", "re_den"), q("im_num", "im_den"));
}

template <>
inline ComplexD parse_coeff_fields<ComplexD>(const Json& t) {
    if (t.contains("re_num")) {
        auto q = [&](const char* num, const char* den) {
            mpq_class v(t.value(num, "0") + "/" + t.value(den, "1"));
            v.canonicalize();
            return v.get_d();
        };
        return {q("re_num", "re_den"), q("im_num", "im_den")};
    }
    return {t.value("re", 0.0), t.value("im", 0.0)};
}
} // namespace detail

// Potential file schema:
// {"dimension": n, "terms": [{"x_exp": [...], "xbar_exp": [...],
//   "re": ..., "im": ...} or rational {"re_num","re_den","im_num","im_den"}]}
template <class F>
PotentialJet<F> parse_potential(const Json& doc, int degree) {
    if (!doc.contains("dimension") || !doc.contains("terms"))
        throw ConfigError("potential file needs 'dimension' and 'terms'");
    int n = doc["dimension"].get<int>();
    if (n < 1) throw ConfigError("potential dimension must be positive");
    int poly_degree = 0;
    for (const auto& t : doc["terms"]) {
        auto xe = t.value("x_exp", std::vector<int>{});
        auto ye = t.value("xbar_exp", std::vector<int>{});
        poly_degree = std::max(poly_degree, total_degree(xe) + total_degree(ye));
    }
    // A polynomial is its own series: carry at least the requested degree.
    Jet<F> phi(2 * n, std::max(degree, poly_degree));
    std::size_t pos = 0;
    for (const auto& t : doc["terms"]) {
        auto xe = t.value("x_exp", std::vector<int>{});
        auto ye = t.value("xbar_exp", std::vector<int>{});
        if (static_cast<int>(xe.size()) != n || static_cast<int>(ye.size()) != n)
            throw ConfigError("potential term " + std::to_string(pos) +
                              ": exponent lists must have length n");
        MultiIndex mi(2 * n);
        for (int i = 0; i < n; ++i) {
            if (xe[i] < 0 || ye[i] < 0)
                throw ConfigError("potential term " + std::to_string(pos) +
                                  ": negative exponent");
            mi[i] = xe[i];
            mi[n + i] = ye[i];
        }
        phi.add_term(mi, detail::parse_coeff_fields<F>(t));
        ++pos;
    }
    PotentialJet<F> pot(n, std::move(phi));
    validate_potential(pot);
    return pot;
}

// Bundle metric schema:
// {"rank": r, "dimension": n, "entries": [{"i": .., "j": .., "terms": [...]}]}
template <class F>
BundleMetricJet<F> parse_bundle_metric(const Json& doc, int n, int degree) {
    if (!doc.contains("rank") || !doc.contains("entries"))
        throw ConfigError("bundle file needs 'rank' and 'entries'");
    int rank = doc["rank"].get<int>();
    if (doc.contains("dimension") && doc["dimension"].get<int>() != n)
        throw ConfigError("bundle dimension does not match the potential");
    JetMatrix<F> g(rank, rank, 2 * n, degree);
    for (const auto& entry : doc["entries"]) {
        int i = entry.value("i", -1), j = entry.value("j", -1);
        if (i < 0 || i >= rank || j < 0 || j >= rank)
            throw ConfigError("bundle entry index out of range");
        Jet<F> e(2 * n, degree);
        for (const auto& t : entry["terms"]) {
            auto xe = t.value("x_exp", std::vector<int>{});
            auto ye = t.value("xbar_exp", std::vector<int>{});
            if (static_cast<int>(xe.size()) != n || static_cast<int>(ye.size()) != n)
                throw ConfigError("bundle term exponent lists must have length n");
            MultiIndex mi(2 * n);
            for (int v = 0; v < n; ++v) {
                mi[v] = xe[v];
                mi[n + v] = ye[v];
            }
            e.add_term(mi, detail::parse_coeff_fields<F>(t));
        }
        g.at(i, j) = std::move(e);
    }
    BundleMetricJet<F> bm(rank, n, std::move(g));
    validate_bundle_metric(bm);
    return bm;
}

} // namespace bergman
