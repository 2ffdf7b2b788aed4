#pragma once

#include <functional>
#include <string>

namespace twistlab {

// Smooth bump supported in [1/4, 1].
double bump(double t);
// psi = b / sum_j b(2^j .), so that sum_{j in Z} psi(2^j t) = 1 for t > 0.
double psi(double t);
// psi^0(t) = 1 - sum_{j >= 3} psi(2^j |t|) on [-pi/2, pi/2], pi-periodic.
double psi0(double t);
// phi_k(t) = psi^0(t) psi~(2^k (t - pi/2)), k >= 5, pi-periodic.
double phi_k(int k, double t);
// phi^0(t) = psi^0(t) (1 - sum_{k >= 5} psi~(2^k (t - pi/2))), pi-periodic.
double phi0(double t);

enum class WindowKind { DyadicPsiPlus, DyadicPsiMinus, PhiK, Phi0, Psi0, Custom };

// Time cutoff eta on [-pi/2, pi/2]; periodic kinds are reduced modulo pi.
struct Window {
    WindowKind kind = WindowKind::Custom;
    int scale = 0;
    std::function<double(double)> fn;
    std::string name;

    double operator()(double t) const { return fn(t); }
    std::string label() const;

    static Window psi_plus(int j);
    static Window psi_minus(int j);
    static Window phi(int k);
    static Window phi_zero();
    static Window psi_zero();
    static Window custom(std::function<double(double)> fn, std::string name);
    // Parses "psi+:j", "psi-:j", "phi:k", "phi0", "psi0" or "one".
    static Window parse(const std::string& text);
};

// eta-hat(m) = int_{-pi/2}^{pi/2} eta(t) e^{-imt} dt by the trapezoidal rule.
struct WindowTransform {
    double re = 0.0;
    double im = 0.0;
};
WindowTransform window_hat(const Window& w, int m, int points = 4096);

} // namespace twistlab
