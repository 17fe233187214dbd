#pragma once

#include <functional>
#include <vector>

namespace bergman {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1], nodes by Newton iteration on P_n.
QuadratureRule gauss_legendre(int n);

// Composite Gauss-Legendre on [a, b]: `panels` uniform panels with
// `nodes_per_panel` points each.
QuadratureRule gauss_legendre_composite(double a, double b, int panels, int nodes_per_panel);

double integrate(const QuadratureRule& rule, const std::function<double(double)>& f);

} // namespace bergman
