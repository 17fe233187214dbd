#include "bergman/oracles.hpp"

#include <chrono>
#include <cmath>

#include "bergman/errors.hpp"

namespace bergman {

RadialWeight flat_weight() {
    return {"flat", [](double r) { return r * r; }, [](double) { return 1.0; },
            [](double) { return 1.0; }};
}

RadialWeight fubini_study_weight() {
    return {"fubini-study", [](double r) { return std::log1p(r * r); },
            [](double r) {
                double t = 1.0 + r * r;
                return 1.0 / (t * t);
            },
            [](double) { return 1.0; }};
}

RadialWeight radial_quartic_weight(double c) {
    return {"radial-quartic", [c](double r) { return r * r + c * r * r * r * r; },
            [c](double r) { return 1.0 + 4.0 * c * r * r; }, [](double) { return 1.0; }};
}

FiniteKKernel exact_cp1_kernel(int k) {
    if (k < 0) throw ConfigError("exact_cp1_kernel: k must be a nonnegative integer");
    FiniteKKernel kern;
    kern.model = "cp1";
    kern.k = k;
    kern.basis_norms.resize(k + 1);
    // log-space Beta values: pi j! (k-j)! / (k+1)!
    for (int j = 0; j <= k; ++j)
        kern.basis_norms[j] = M_PI * std::exp(std::lgamma(j + 1.0) + std::lgamma(k - j + 1.0) -
                                              std::lgamma(k + 2.0));
    kern.kphi = [k](double r) { return k * std::log1p(r * r); };
    return kern;
}

double exact_cpn_bergman_constant(int n, int k) {
    // dim H^0(CP^n, O(k)) = C(n+k, n); volume of the Fubini-Study form is
    // pi^n / n!; the Bergman function is the constant ratio.
    double dim = 1.0;
    for (int i = 1; i <= n; ++i) dim *= static_cast<double>(k + i) / i;
    double vol = std::pow(M_PI, n);
    for (int i = 2; i <= n; ++i) vol /= i;
    return dim / vol;
}

namespace {
std::vector<double> quadrature_norms(const RadialWeight& w, int k, double radius,
                                     int basis_degree, int panels, int nodes_per_panel) {
    QuadratureRule rule = gauss_legendre_composite(0.0, radius, panels, nodes_per_panel);
    std::vector<double> norms(basis_degree + 1, 0.0);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        double r = rule.nodes[q];
        double base = 2.0 * M_PI * rule.weights[q] * r * std::exp(-k * w.phi(r)) *
                      w.metric_density(r) * (w.extra_density ? w.extra_density(r) : 1.0);
        double p = 1.0;
        for (int j = 0; j <= basis_degree; ++j) {
            norms[j] += base * p;
            p *= r * r;
        }
    }
    return norms;
}
} // namespace

FiniteKKernel quadrature_kernel(const RadialWeight& weight, int k, double disc_radius,
                                int basis_degree, int nodes_per_panel, int panels,
                                double stability_tol, double* drift_out) {
    auto coarse = quadrature_norms(weight, k, disc_radius, basis_degree, panels, nodes_per_panel);
    auto fine = quadrature_norms(weight, k, disc_radius, basis_degree, panels, 2 * nodes_per_panel);
    double drift = 0.0;
    for (int j = 0; j <= basis_degree; ++j) {
        if (fine[j] <= 0.0)
            throw ResolutionError("quadrature_kernel: nonpositive norm estimate at degree " +
                                  std::to_string(j));
        drift = std::max(drift, std::abs(coarse[j] - fine[j]) / fine[j]);
    }
    if (drift_out) *drift_out = drift;
    if (drift > stability_tol)
        throw ResolutionError("quadrature_kernel: norms unstable under node doubling (drift " +
                              std::to_string(drift) + ")");
    FiniteKKernel kern;
    kern.model = weight.name;
    kern.k = k;
    kern.basis_norms = std::move(fine);
    auto phi = weight.phi;
    kern.kphi = [k, phi](double r) { return k * phi(r); };
    return kern;
}

double chi_bump(double r) {
    if (r <= 0.5) return 1.0;
    if (r >= 1.0) return 0.0;
    double t = 2.0 * r - 1.0;
    double s = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));  // quintic smoothstep
    return 1.0 - s;
}

double reproducing_check(const std::string& weight_model,
                         const std::vector<std::complex<double>>& u_coeffs,
                         std::complex<double> x, int k, int radial_nodes, int angular_nodes) {
    const bool flat = weight_model == "flat";
    if (!flat && weight_model != "fubini-study")
        throw ConfigError("reproducing_check supports the flat and fubini-study weights");

    auto u_at = [&](std::complex<double> y) {
        std::complex<double> acc = 0.0, p = 1.0;
        for (auto c : u_coeffs) {
            acc += c * p;
            p *= y;
        }
        return acc;
    };

    QuadratureRule radial = gauss_legendre_composite(0.0, 1.0, 8, radial_nodes / 8 + 1);
    std::complex<double> integral = 0.0;
    for (std::size_t q = 0; q < radial.nodes.size(); ++q) {
        double r = radial.nodes[q];
        double chi = chi_bump(r);
        if (chi == 0.0) continue;
        double wr = radial.weights[q] * r * chi;
        std::complex<double> ring = 0.0;
        for (int a = 0; a < angular_nodes; ++a) {
            double ang = 2.0 * M_PI * a / angular_nodes;
            std::complex<double> y = std::polar(r, ang);
            std::complex<double> z = std::conj(y);
            std::complex<double> phase, jac;
            if (flat) {
                // theta = z, theta.(x - y) = z (x - y), Jacobian 1.
                phase = z * (x - y);
                jac = 1.0;
            } else {
                // theta.(x - y) = log(1 + x z) - log(1 + y z);
                // d theta/d z = 1 / ((1 + x z)(1 + y z)).
                phase = std::log(1.0 + x * z) - std::log(1.0 + y * z);
                jac = 1.0 / ((1.0 + x * z) * (1.0 + y * z));
            }
            ring += std::exp(static_cast<double>(k) * phase) * u_at(y) * jac;
        }
        integral += wr * ring * (2.0 * M_PI / angular_nodes);
    }
    integral *= static_cast<double>(k) / M_PI;

    double phi_x = flat ? std::norm(x) : std::log1p(std::norm(x));
    return std::abs(u_at(x) - integral) * std::exp(-0.5 * k * phi_x);
}

std::pair<double, double> fit_loglog_slope(const std::vector<int>& k_values,
                                           const std::vector<double>& errors) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < k_values.size(); ++i) {
        if (errors[i] <= 0.0) continue;  // exact agreement carries no slope information
        xs.push_back(std::log(static_cast<double>(k_values[i])));
        ys.push_back(std::log(errors[i]));
    }
    if (xs.size() < 2) return {0.0, 0.0};
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    double slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double pred = my + slope * (xs[i] - mx);
        rss += (ys[i] - pred) * (ys[i] - pred);
    }
    return {slope, std::sqrt(rss / xs.size())};
}

std::pair<double, double> fit_exponential_rate(const std::vector<int>& k_values,
                                               const std::vector<double>& errors) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < k_values.size(); ++i) {
        if (errors[i] <= 0.0) continue;
        xs.push_back(static_cast<double>(k_values[i]));
        ys.push_back(std::log(errors[i]));
    }
    if (xs.size() < 2) return {0.0, 0.0};
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    double slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double pred = my + slope * (xs[i] - mx);
        rss += (ys[i] - pred) * (ys[i] - pred);
    }
    return {-slope, std::sqrt(rss / xs.size())};
}

SweepResult expansion_error_sweep(const std::function<FiniteKKernel(int)>& oracle_for_k,
                                  const std::function<double(int)>& expansion_bergman_at_0,
                                  const std::vector<int>& k_values, int n) {
    auto start = std::chrono::steady_clock::now();
    SweepResult out;
    out.k_values = k_values;
    for (int k : k_values) {
        FiniteKKernel oracle = oracle_for_k(k);
        double b_oracle = oracle.bergman(0.0);
        double b_exp = expansion_bergman_at_0(k);
        out.oracle_values.push_back(b_oracle);
        out.expansion_values.push_back(b_exp);
        out.rel_errors.push_back(std::abs(b_oracle - b_exp) / std::abs(b_oracle));
        out.max_bergman_over_kn =
            std::max(out.max_bergman_over_kn, b_oracle / std::pow(k, n));
    }
    auto [slope, resid] = fit_loglog_slope(out.k_values, out.rel_errors);
    out.slope = slope;
    out.fit_residual = resid;
    out.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

} // namespace bergman
