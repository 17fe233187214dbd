#include "bergman/kuranishi.hpp"

namespace bergman {

ContourReport good_contour_check(const PotentialJet<ComplexD>& pot, const Jet<ComplexD>& psi,
                                 const std::vector<Jet<ComplexD>>& theta, double radius,
                                 double margin, int samples, unsigned long seed, double tol) {
    const int n = pot.n;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    auto sample_ball = [&]() {
        std::vector<ComplexD> v(n);
        double norm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            v[i] = ComplexD(gauss(rng), gauss(rng));
            norm2 += std::norm(v[i]);
        }
        double scale = radius * std::pow(unif(rng), 1.0 / (2.0 * n)) / std::sqrt(norm2);
        for (auto& c : v) c *= scale;
        return v;
    };

    ContourReport report;
    report.samples = samples;
    report.radius = radius;
    report.margin = margin;
    report.seed = seed;
    report.max_slack = -std::numeric_limits<double>::infinity();

    std::vector<ComplexD> pt_phi(2 * n), pt_psi(2 * n), pt_theta(3 * n);
    for (int s = 0; s < samples; ++s) {
        auto x = sample_ball();
        auto y = sample_ball();

        double dist2 = 0.0;
        for (int i = 0; i < n; ++i) dist2 += std::norm(x[i] - y[i]);

        auto phi_at = [&](const std::vector<ComplexD>& p) {
            for (int i = 0; i < n; ++i) {
                pt_phi[i] = p[i];
                pt_phi[n + i] = std::conj(p[i]);
            }
            return pot.phi.evaluate(pt_phi).real();
        };
        double phi_x = phi_at(x), phi_y = phi_at(y);

        for (int i = 0; i < n; ++i) {
            pt_theta[i] = x[i];
            pt_theta[n + i] = y[i];
            pt_theta[2 * n + i] = std::conj(y[i]);
        }
        ComplexD theta_dot = 0.0;
        for (int i = 0; i < n; ++i) theta_dot += theta[i].evaluate(pt_theta) * (x[i] - y[i]);
        double v1 = 2.0 * theta_dot.real() + margin * dist2 + phi_y - phi_x;

        for (int i = 0; i < n; ++i) {
            pt_psi[i] = x[i];
            pt_psi[n + i] = std::conj(y[i]);
        }
        double v2 = 2.0 * psi.evaluate(pt_psi).real() - phi_x - phi_y + margin * dist2;

        double slack = std::max(v1, v2);
        if (slack > report.max_slack) {
            report.max_slack = slack;
            report.witness_x = x;
            report.witness_y = y;
        }
        if (slack > tol) ++report.violations;
    }
    return report;
}

} // namespace bergman
