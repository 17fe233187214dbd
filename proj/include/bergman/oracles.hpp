#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "bergman/quadrature.hpp"

namespace bergman {

// Radial weight model on C: potential phi(r), metric density phi_{x xbar}(r)
// (the volume form of i/2 ddbar phi), and an optional extra density for
// volume twists.
struct RadialWeight {
    std::string name;
    std::function<double(double)> phi;             // phi at |x| = r
    std::function<double(double)> metric_density;  // phi_{x xbar} at |x| = r
    std::function<double(double)> extra_density;   // mu/omega ratio, 1 if absent
};

RadialWeight flat_weight();
RadialWeight fubini_study_weight();
RadialWeight radial_quartic_weight(double c);

// A numerically orthonormalized finite-k Bergman kernel for a radial
// weight on C (monomials stay orthogonal, only norms are needed):
//   K_k(x, y) = sum_j x^j conj(y)^j / ||x^j||^2,  B_k(x) = K(x,x) e^{-k phi}.
struct FiniteKKernel {
    std::string model;
    int k = 1;
    std::vector<double> basis_norms;  // ||x^j||^2, j = 0..M
    std::function<double(double)> kphi;  // k * phi(|x|), the true weight

    std::complex<double> kernel(std::complex<double> x, std::complex<double> y) const {
        std::complex<double> acc = 0.0, p = 1.0;
        std::complex<double> w = x * std::conj(y);
        for (double nrm : basis_norms) {
            acc += p / nrm;
            p *= w;
        }
        return acc;
    }
    double bergman(std::complex<double> x) const {
        double r2 = std::norm(x);
        double acc = 0.0, p = 1.0;
        for (double nrm : basis_norms) {
            acc += p / nrm;
            p *= r2;
        }
        return acc * std::exp(-kphi(std::abs(x)));
    }
};

// Exact CP^1 kernel: ||x^j||^2 = pi j! (k-j)! / (k+1)! in the Fubini-Study
// weight and volume; B_k is identically (k+1)/pi.
FiniteKKernel exact_cp1_kernel(int k);

// Exact CP^n Bergman constant dim H^0 / volume, for closed-form checks.
double exact_cpn_bergman_constant(int n, int k);

// Norms by composite Gauss-Legendre quadrature over the disc of radius R:
// ||x^j||^2 = 2 pi int_0^R r^{2j+1} e^{-k phi(r)} density(r) dr.
// Doubles the node count and errors out if the norms move by more than
// `stability_tol` in relative terms.
FiniteKKernel quadrature_kernel(const RadialWeight& weight, int k, double disc_radius,
                                int basis_degree, int nodes_per_panel = 40, int panels = 8,
                                double stability_tol = 1e-10, double* drift_out = nullptr);

// Contour reproducing integral for the flat or Fubini-Study weight (n = 1):
//   I0 = (k/pi) int e^{k theta(x,y,ybar) (x-y)} u(y) chi(|y|) J(x,y,ybar) dA(y)
// with the closed-form theta and Jacobian of the model, chi the fixed C^2
// bump (1 on [0,1/2], quintic smoothstep to 0 at 1). Returns the weighted
// residual |u(x) - I0| e^{-k phi(x)/2}.
double reproducing_check(const std::string& weight_model,
                         const std::vector<std::complex<double>>& u_coeffs,
                         std::complex<double> x, int k, int radial_nodes = 200,
                         int angular_nodes = 256);

double chi_bump(double r);

// Relative on-diagonal expansion error against an oracle over a k-range,
// with a least-squares slope fit in log-log coordinates.
struct SweepResult {
    std::vector<int> k_values;
    std::vector<double> oracle_values;
    std::vector<double> expansion_values;
    std::vector<double> rel_errors;
    double slope = 0.0;
    double fit_residual = 0.0;
    double max_bergman_over_kn = 0.0;
    double runtime_seconds = 0.0;
};

SweepResult expansion_error_sweep(const std::function<FiniteKKernel(int)>& oracle_for_k,
                                  const std::function<double(int)>& expansion_bergman_at_0,
                                  const std::vector<int>& k_values, int n);

// Least-squares slope of log(err) against log(k); also reports the RMS fit
// residual. Used for the decay-rate acceptance checks.
std::pair<double, double> fit_loglog_slope(const std::vector<int>& k_values,
                                           const std::vector<double>& errors);

// Fitted exponential rate delta in err ~ C e^{-delta k} (linear fit of
// log err against k, sign flipped).
std::pair<double, double> fit_exponential_rate(const std::vector<int>& k_values,
                                               const std::vector<double>& errors);

} // namespace bergman
