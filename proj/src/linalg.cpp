#include "bergman/linalg.hpp"

#include <cmath>

namespace bergman {

// Eigenvalues via the real symmetric embedding [[Re A, -Im A], [Im A, Re A]]
// (every eigenvalue of A appears twice) and classic cyclic Jacobi sweeps.
std::vector<double> hermitian_eigenvalues(std::vector<std::vector<std::complex<double>>> a) {
    const int n = static_cast<int>(a.size());
    const int m = 2 * n;
    std::vector<std::vector<double>> s(m, std::vector<double>(m, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            s[i][j] = a[i][j].real();
            s[i][n + j] = -a[i][j].imag();
            s[n + i][j] = a[i][j].imag();
            s[n + i][n + j] = a[i][j].real();
        }

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < m; ++p)
            for (int q = p + 1; q < m; ++q) off += s[p][q] * s[p][q];
        if (off < 1e-26) break;
        for (int p = 0; p < m; ++p)
            for (int q = p + 1; q < m; ++q) {
                if (std::abs(s[p][q]) < 1e-300) continue;
                double tau = (s[q][q] - s[p][p]) / (2.0 * s[p][q]);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double sn = t * c;
                for (int i = 0; i < m; ++i) {
                    double sip = s[i][p], siq = s[i][q];
                    s[i][p] = c * sip - sn * siq;
                    s[i][q] = sn * sip + c * siq;
                }
                for (int i = 0; i < m; ++i) {
                    double spi = s[p][i], sqi = s[q][i];
                    s[p][i] = c * spi - sn * sqi;
                    s[q][i] = sn * spi + c * sqi;
                }
            }
    }

    std::vector<double> all(m);
    for (int i = 0; i < m; ++i) all[i] = s[i][i];
    std::sort(all.begin(), all.end());
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = all[2 * i];  // doubled spectrum
    return ev;
}

} // namespace bergman
