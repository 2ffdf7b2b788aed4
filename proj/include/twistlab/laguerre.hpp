#pragma once

#include <span>

namespace twistlab {

inline constexpr int kDefaultKMax = 2000;

struct LaguerreIndex {
    int k = 0;
    double alpha = 0.0;
};

// Eigenvalue index: mu = 2k + d.
struct SpectralIndex {
    int d = 1;
    int k = 0;
    int mu() const { return 2 * k + d; }
    static SpectralIndex from_mu(int d, int mu); // throws unless mu in 2N_0 + d
};

struct AsymptoticEval {
    double main = 0.0;
    double error_envelope = 0.0;
    double nu = 0.0;
    double theta = 0.0;
    bool in_validated_window = true; // nu/64 <= t <= nu/2
};

// L_k^alpha(t) by the three-term recurrence. Throws std::range_error when the
// value is not representable.
double laguerre_poly(LaguerreIndex idx, double t);

// L_k^alpha(t) e^{-t/2}, rescaled internally so large k and t stay finite.
double laguerre_poly_damped(LaguerreIndex idx, double t);

// Normalized Laguerre function (k!/Gamma(k+alpha+1))^{1/2} t^{alpha/2} e^{-t/2} L_k^alpha(t).
double normalized_laguerre(LaguerreIndex idx, double t);

// All normalized functions for k = 0..out.size()-1 at a single t.
void normalized_laguerre_sequence(double alpha, double t, std::span<double> out);

// Leading term and unit-constant error envelope of the oscillatory asymptotic.
AsymptoticEval laguerre_asymptotic(LaguerreIndex idx, double t);

// Radial projection kernel varsigma_k(r) = L_k^{d-1}(r^2/2) e^{-r^2/4}.
// kernel_varsigma uses the normalized-function rewriting; kernel_varsigma_poly
// evaluates the polynomial-times-Gaussian form.
double kernel_varsigma(SpectralIndex s, double r);
double kernel_varsigma_poly(SpectralIndex s, double r);

// varsigma_0..varsigma_{out.size()-1} at radius r for dimension d.
void varsigma_sequence(int d, double r, std::span<double> out);

// ||varsigma_k||_{L^2(C^d)} in closed form.
double kernel_l2_norm(SpectralIndex s);

// Surface area of the unit sphere in R^{2d}.
double sphere_area(int d);

} // namespace twistlab
