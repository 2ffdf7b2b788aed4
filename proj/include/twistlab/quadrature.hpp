#pragma once

#include <vector>

namespace twistlab {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss–Legendre on [-1, 1] and mapped to [a, b].
QuadratureRule gauss_legendre(int n);
QuadratureRule gauss_legendre(int n, double a, double b);

// Gauss–Hermite for the weight e^{-x^2}. scaled_weights[m] = weights[m] e^{x_m^2},
// which stays representable for large n where the plain weights underflow.
struct HermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> scaled_weights;
};

// Rules are cached; the returned reference stays valid for the process lifetime.
const HermiteRule& gauss_hermite(int n);

} // namespace twistlab
