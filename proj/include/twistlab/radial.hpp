#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace twistlab {

using cplx = std::complex<double>;

// Composite Gauss–Legendre rule in r on [0, r_max] with the spherical measure
// |S^{2d-1}| r^{2d-1} folded into the weights.
struct RadialRule {
    int d = 1;
    std::vector<double> r;
    std::vector<double> w;
};

// Panels are short enough to resolve varsigma_{k_max}; r_max defaults to the
// turning radius of varsigma_{k_max} plus a decay margin.
RadialRule radial_rule(int d, int k_max, double r_max = 0.0, int per_panel = 10);

// A radial function f = sum_k c_k varsigma_k on C^d. Since the projection of a
// radial function onto the eigenvalue 2k + d is c_k varsigma_k, every spectral
// multiplier acts on the coefficients alone.
struct RadialExpansion {
    int d = 1;
    std::vector<cplx> c;

    int k_max() const { return static_cast<int>(c.size()) - 1; }

    // e^{-lambda r^2 / 4}: c_k = (2/(lambda+1))^d ((lambda-1)/(lambda+1))^k.
    static RadialExpansion gaussian(int d, double lambda, int k_max);
    // The single kernel varsigma_k.
    static RadialExpansion kernel(int d, int k, int k_max);
    // c_k = <f, varsigma_k> / ||varsigma_k||^2 by the rule.
    static RadialExpansion from_samples(const RadialRule& rule, std::span<const cplx> values,
                                        int k_max);

    // sum_k m(2k + d) c_k varsigma_k.
    RadialExpansion multiply(const std::function<cplx(int mu)>& m) const;
    std::vector<cplx> evaluate(std::span<const double> r) const;
    // ||f||_2 from the coefficients and the closed-form kernel norms.
    double l2_norm() const;
};

// L^p norm of radial samples under the rule; p = infinity gives the sampled sup.
double radial_lp_norm(const RadialRule& rule, std::span<const cplx> values, double p);

} // namespace twistlab
