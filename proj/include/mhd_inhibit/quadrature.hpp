#pragma once

#include <vector>

namespace mhdi {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (Newton iteration on P_n).
GaussRule gauss_legendre(int n);

/// Integral of f over [lo, hi] with an n-point rule.
template <class F>
double integrate_gl(const GaussRule& rule, double lo, double hi, F&& f) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double s = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) s += rule.weights[q] * f(mid + half * rule.nodes[q]);
    return s * half;
}

}  // namespace mhdi
