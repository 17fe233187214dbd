// Command-line front end: expansion, validation, geometry, twisting and
// contour checks on model or user-supplied potentials. Emits JSON (and CSV
// for sweeps); every artifact echoes the version and the config it ran with.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bergman/oracles.hpp"
#include "bergman/polarization.hpp"
#include "bergman/recursion.hpp"
#include "bergman/serialize.hpp"
#include "bergman/twisted.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using bergman::ComplexD;
using bergman::GaussianRational;
using bergman::Json;

struct CommonOpts {
    std::string model;
    std::string input_file;
    int n = 1;
    int order = 0;
    int degree = 0;  // requested validity degree of the outputs
    int working_degree_override = 0;  // 0 = derive from degree and order
    std::string mode = "exact";
    double quartic_coeff = 0.1;
    std::string out;
    std::string csv;
    unsigned long seed = 20260808UL;
};

std::string resolve_output_path(const std::string& path) {
    if (path.empty() || path.front() == '/') return path;
    const char* dir = std::getenv("BERGMAN_OUTPUT_DIR");
    if (!dir || !*dir) return path;
    std::string d(dir);
    if (d.back() != '/') d += '/';
    return d + path;
}

void emit(const Json& doc, const std::string& out_path) {
    std::string text = doc.dump(2);
    std::cout << text << "\n";
    if (!out_path.empty()) {
        std::string resolved = resolve_output_path(out_path);
        std::ofstream f(resolved);
        if (!f) throw bergman::ConfigError("cannot open output file: " + resolved);
        f << text << "\n";
    }
}

void write_text(const std::string& text, const std::string& out_path) {
    std::string resolved = resolve_output_path(out_path);
    std::ofstream f(resolved);
    if (!f) throw bergman::ConfigError("cannot open output file: " + resolved);
    f << text;
}

Json config_echo(const CommonOpts& o, const std::string& command) {
    return {{"command", command},   {"model", o.model},     {"input", o.input_file},
            {"n", o.n},             {"order", o.order},     {"degree", o.degree},
            {"mode", o.mode},       {"quartic_coeff", o.quartic_coeff},
            {"seed", o.seed}};
}

Json artifact(const CommonOpts& o, const std::string& command, Json result) {
    return {{"version", kVersion}, {"config", config_echo(o, command)},
            {"result", std::move(result)}};
}

Json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw bergman::ConfigError("cannot open input file: " + path);
    try {
        return Json::parse(f);
    } catch (const Json::parse_error& e) {
        throw bergman::ConfigError("JSON parse error in " + path + ": " + e.what());
    }
}

// Quartic coefficients arrive as decimals; exact mode keeps them as exact
// thousandths so both modes see the same potential.
template <class F>
F quartic_coeff_as(double c);
template <>
GaussianRational quartic_coeff_as<GaussianRational>(double c) {
    long scaled = std::lround(c * 1000.0);
    if (std::abs(c * 1000.0 - scaled) > 1e-9)
        throw bergman::ConfigError("exact mode needs --quartic-coeff in whole thousandths");
    return GaussianRational::ratio(scaled, 1000);
}
template <>
ComplexD quartic_coeff_as<ComplexD>(double c) {
    return {c, 0.0};
}

template <class F>
bergman::PotentialJet<F> load_potential(const CommonOpts& o, int working_degree) {
    if (!o.input_file.empty())
        return bergman::parse_potential<F>(load_json_file(o.input_file), working_degree);
    if (o.model.empty())
        throw bergman::ConfigError("provide --model or --input");
    F c = quartic_coeff_as<F>(o.quartic_coeff);
    return bergman::model_potential<F>(o.model, o.n, working_degree, c);
}

template <class F>
Json run_expand_typed(const CommonOpts& o) {
    int d_work = o.working_degree_override > 0 ? o.working_degree_override
                                               : bergman::working_degree(o.degree, o.order);
    auto pot = load_potential<F>(o, d_work);
    if (o.working_degree_override > 0)
        pot.phi = pot.phi.truncated(o.working_degree_override);
    auto seq = bergman::solve_recursion(pot, o.order, o.degree);
    return bergman::sequence_json(seq);
}

int run_expand(const CommonOpts& o) {
    Json result = o.mode == "exact" ? run_expand_typed<GaussianRational>(o)
                                    : run_expand_typed<ComplexD>(o);
    emit(artifact(o, "expand", std::move(result)), o.out);
    return 0;
}

template <class F>
Json run_geometry_typed(const CommonOpts& o) {
    int deg = std::max(o.degree + 4, 6);
    auto pot = load_potential<F>(o, deg);
    auto psi = bergman::polarize(pot);
    auto h = bergman::hermitian_metric(psi, o.n);
    auto s = bergman::scalar_curvature(h);
    Json h0 = Json::array();
    for (int i = 0; i < o.n; ++i) {
        Json row = Json::array();
        for (int j = 0; j < o.n; ++j) row.push_back(bergman::coeff_json(h.at(i, j).constant_term()));
        h0.push_back(std::move(row));
    }
    return {{"n", o.n},
            {"mode", bergman::FieldTraits<F>::name},
            {"hessian0", std::move(h0)},
            {"scalar_curvature_0", bergman::coeff_json(s.constant_term())},
            {"scalar_curvature_jet", bergman::jet_json(s)}};
}

int run_geometry(const CommonOpts& o) {
    Json result = o.mode == "exact" ? run_geometry_typed<GaussianRational>(o)
                                    : run_geometry_typed<ComplexD>(o);
    emit(artifact(o, "geometry", std::move(result)), o.out);
    return 0;
}

std::vector<int> parse_k_range(const std::string& spec) {
    int lo = 0, hi = 0, step = 0;
    if (std::sscanf(spec.c_str(), "%d:%d:%d", &lo, &hi, &step) != 3 || step <= 0 || lo > hi)
        throw bergman::ConfigError("bad --k-range, expected lo:hi:step");
    std::vector<int> ks;
    for (int k = lo; k <= hi; k += step) ks.push_back(k);
    return ks;
}

int run_validate(const CommonOpts& o, const std::string& k_range) {
    if (o.n != 1)
        throw bergman::ConfigError("validate supports n = 1 models (radial oracles)");
    if (o.mode == "exact")
        throw bergman::ConfigError("validate runs quadrature oracles and requires --mode float");
    auto ks = parse_k_range(k_range);

    int d_work = bergman::working_degree(0, o.order);
    auto pot = load_potential<ComplexD>(o, d_work);
    auto seq = bergman::solve_recursion(pot, o.order, 0);

    auto expansion_at_0 = [&](int k) {
        double acc = 0.0, kp = 1.0;
        for (int m = 0; m <= seq.order; ++m) {
            acc += seq.base_values[m].real() / kp;
            kp *= k;
        }
        return acc * k / M_PI;
    };

    std::function<bergman::FiniteKKernel(int)> oracle;
    if (o.model == "fubini-study") {
        oracle = [](int k) { return bergman::exact_cp1_kernel(k); };
    } else if (o.model == "flat" || o.model == "radial-quartic") {
        bergman::RadialWeight w = o.model == "flat"
                                      ? bergman::flat_weight()
                                      : bergman::radial_quartic_weight(o.quartic_coeff);
        oracle = [w](int k) { return bergman::quadrature_kernel(w, k, 4.0, 8); };
    } else {
        throw bergman::ConfigError("validate needs --model flat|fubini-study|radial-quartic");
    }

    auto sweep = bergman::expansion_error_sweep(oracle, expansion_at_0, ks, o.n);
    if (!o.csv.empty()) write_text(bergman::sweep_csv(sweep), o.csv);
    emit(artifact(o, "validate", bergman::sweep_json(sweep)), o.out);
    return 0;
}

template <class F>
Json run_twist_typed(const CommonOpts& o, const std::string& bundle_file) {
    int d_work = bergman::working_degree(o.degree, o.order);
    auto pot = load_potential<F>(o, d_work);
    auto geom = bergman::build_local_geometry(pot);
    auto bm = bergman::parse_bundle_metric<F>(load_json_file(bundle_file), o.n, d_work);
    auto seq = bergman::solve_recursion_twisted(geom, bm, o.order, o.degree);

    Json b = Json::array(), base = Json::array();
    for (int m = 0; m <= seq.order; ++m) {
        Json entries = Json::array();
        Json base_m = Json::array();
        for (int i = 0; i < seq.rank; ++i) {
            Json row = Json::array();
            for (int j = 0; j < seq.rank; ++j) {
                entries.push_back(
                    {{"i", i}, {"j", j}, {"jet", bergman::jet_json(seq.b[m].at(i, j))}});
                row.push_back(bergman::coeff_json(seq.base_values[m][i][j]));
            }
            base_m.push_back(std::move(row));
        }
        b.push_back({{"m", m}, {"entries", std::move(entries)}});
        base.push_back(std::move(base_m));
    }
    return {{"n", seq.n},      {"N", seq.order},          {"rank", seq.rank},
            {"degree", seq.degree}, {"mode", bergman::FieldTraits<F>::name},
            {"b", std::move(b)},    {"base_values", std::move(base)}};
}

int run_twist(const CommonOpts& o, const std::string& bundle_file) {
    if (bundle_file.empty()) throw bergman::ConfigError("twist needs --bundle <file>");
    Json result = o.mode == "exact" ? run_twist_typed<GaussianRational>(o, bundle_file)
                                    : run_twist_typed<ComplexD>(o, bundle_file);
    emit(artifact(o, "twist", std::move(result)), o.out);
    return 0;
}

int run_contour_check(const CommonOpts& o, double radius, double margin, int samples) {
    int deg = std::max(o.degree, 16);
    auto pot = load_potential<ComplexD>(o, deg);
    auto psi = bergman::polarize(pot);
    auto theta = bergman::theta_map(psi, o.n);
    if (margin <= 0.0) {
        auto h = bergman::hessian_at_origin(pot);
        std::vector<std::vector<ComplexD>> hc(o.n, std::vector<ComplexD>(o.n));
        for (int i = 0; i < o.n; ++i)
            for (int j = 0; j < o.n; ++j) hc[i][j] = h[i][j];
        margin = bergman::default_contour_margin(hc);
    }
    auto report = bergman::good_contour_check(pot, psi, theta, radius, margin, samples, o.seed);
    emit(artifact(o, "contour-check", bergman::contour_report_json(report)), o.out);
    return report.violations == 0 ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bergman kernel expansion engine"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string k_range = "10:40:10";
    std::string bundle_file;
    double radius = 0.3;
    double margin = -1.0;  // <= 0 means: half the smallest Hessian eigenvalue
    int samples = 10000;

    auto add_common = [&](CLI::App* cmd, bool with_mode = true) {
        cmd->add_option("--model", o.model, "flat | fubini-study | radial-quartic");
        cmd->add_option("--input", o.input_file, "potential JSON file");
        cmd->add_option("--n", o.n, "complex dimension");
        cmd->add_option("--degree", o.degree, "output validity degree");
        cmd->add_option("--quartic-coeff", o.quartic_coeff, "c in |x|^2 + c|x|^4");
        cmd->add_option("--out", o.out, "output JSON path");
        cmd->add_option("--seed", o.seed, "deterministic seed");
        if (with_mode)
            cmd->add_option("--mode", o.mode, "exact | float")
                ->check(CLI::IsMember({"exact", "float"}));
    };

    auto* expand = app.add_subcommand("expand", "solve the coefficient recursion");
    add_common(expand);
    expand->add_option("--order", o.order, "expansion order N")->required();
    expand->add_option("--working-degree", o.working_degree_override,
                       "force the potential truncation degree (expert)");

    auto* geometry = app.add_subcommand("geometry", "metric, connection and scalar curvature");
    add_common(geometry);

    auto* validate = app.add_subcommand("validate", "finite-k oracle sweep");
    add_common(validate, false);
    validate->add_option("--order", o.order, "expansion order N")->required();
    validate->add_option("--k-range", k_range, "lo:hi:step");
    validate->add_option("--csv", o.csv, "CSV output path");

    auto* twist = app.add_subcommand("twist", "bundle-twisted expansion");
    add_common(twist);
    twist->add_option("--order", o.order, "expansion order N")->required();
    twist->add_option("--bundle", bundle_file, "bundle metric JSON file");

    auto* contour = app.add_subcommand("contour-check", "sampling check of the good contour");
    add_common(contour, false);
    contour->add_option("--radius", radius, "sampling ball radius");
    contour->add_option("--margin", margin, "margin delta");
    contour->add_option("--samples", samples, "sample pair count");

    try {
        app.parse(argc, argv);
        o.mode = (validate->parsed() || contour->parsed()) ? "float" : o.mode;
        if (expand->parsed()) return run_expand(o);
        if (geometry->parsed()) return run_geometry(o);
        if (validate->parsed()) return run_validate(o, k_range);
        if (twist->parsed()) return run_twist(o, bundle_file);
        if (contour->parsed()) return run_contour_check(o, radius, margin, samples);
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cout << Json{{"error", {{"code", "config"}, {"message", e.what()}}}}.dump(2)
                  << "\n";
        return 2;
    } catch (const bergman::DegreeBudgetError& e) {
        std::cout << Json{{"error",
                           {{"code", "degree-budget"},
                            {"message", e.what()},
                            {"required_degree", e.required_degree}}}}
                         .dump(2)
                  << "\n";
        return 4;
    } catch (const bergman::ConfigError& e) {
        std::cout << Json{{"error", {{"code", "config"}, {"message", e.what()}}}}.dump(2)
                  << "\n";
        return 2;
    } catch (const bergman::Error& e) {
        std::cout << Json{{"error", {{"code", "validation"}, {"message", e.what()}}}}.dump(2)
                  << "\n";
        return 3;
    } catch (const Json::exception& e) {
        std::cout << Json{{"error", {{"code", "parse"}, {"message", e.what()}}}}.dump(2) << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cout << Json{{"error", {{"code", "internal"}, {"message", e.what()}}}}.dump(2)
                  << "\n";
        return 3;
    }
}
