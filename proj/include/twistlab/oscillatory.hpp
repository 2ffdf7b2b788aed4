#pragma once

#include <complex>
#include <string>
#include <vector>

#include "twistlab/window.hpp"

namespace twistlab {

using cplx = std::complex<double>;

// phi(t) = t + (separation^2 / 4) cot t + cross_term.
struct PhaseParams {
    double separation = 0.0;
    double cross_term = 0.0;
    double mu = 2.0;
};

double phase(const PhaseParams& p, double t);
double phase_d1(const PhaseParams& p, double t);
double phase_d2(const PhaseParams& p, double t);

// The dyadic pieces of the time partition.
struct Partition {
    Window psi0 = Window::psi_zero();
    Window phi0 = Window::phi_zero();
    Window psi_plus(int j) const { return Window::psi_plus(j); }
    Window psi_minus(int j) const { return Window::psi_minus(j); }
    Window phi(int k) const { return Window::phi(k); }
    // psi^0(t) + sum_{j >= 3} (psi_j^+ + psi_j^-)(t); equals 1 on [-pi/2, pi/2].
    double reconstruct(double t) const;
    // phi^0(t) + sum_{k >= 5} phi_k(t); equals psi^0(t).
    double reconstruct_phi(double t) const;
};

Partition build_partition();

// eta(t) = psi(|t|), supported in [-1, -1/4] u [1/4, 1].
Window default_eta();

struct QuadratureOptions {
    double tolerance = 1e-10; // absolute, relative to the integral of |amplitude|
    int max_panels = 1 << 20;
};

struct OscillatoryValue {
    cplx value;
    double error = 0.0;
    int panels = 0;
};

// Adaptive quadrature of int_a^b amp(t) e^{i mu phi(t)} dt: Gauss–Kronrod on
// panels where mu phi changes little, Levin collocation where phi' has no zero,
// bisection elsewhere. Throws ConvergenceError with the achieved estimate.
OscillatoryValue oscillatory_integral(const PhaseParams& p, const std::function<double(double)>& amp,
                                      double a, double b, const QuadratureOptions& opt = {});

// int eta(2^j t) e^{i mu phi(t)} dt
OscillatoryValue integral_Ij(const PhaseParams& p, int j, const Window& eta,
                             const QuadratureOptions& opt = {});
// int psi^0(t) eta(2^k (t - pi/2)) e^{i mu phi(t)} dt
OscillatoryValue integral_Jk(const PhaseParams& p, int k, const Window& eta,
                             const QuadratureOptions& opt = {});
// int_0^pi phi^0(t) e^{i mu phi(t)} dt
OscillatoryValue integral_J0(const PhaseParams& p, const QuadratureOptions& opt = {});

struct OscillatoryRow {
    std::string kind; // "I", "J" or "J0"
    double mu = 0.0;
    int scale = 0;
    double separation = 0.0;
    double abs_value = 0.0;
    double normalized = 0.0; // |.| mu^{1/2} 2^{j/2}, |.| mu^{1/2} 2^{-k/2}, |.| mu^{1/2}
    double error = 0.0;
};

// The separation regime grid {0, 2^{-j-4}, 2^{-j}, 1/2, 1.5, 2, 2.5} for scale j,
// sorted, with the repeated 1/2 at j = 1 listed once.
std::vector<double> separation_grid(int scale);

// Every (kind, mu, scale, separation) cell, in a fixed order.
std::vector<OscillatoryRow> oscillatory_sweep(const std::vector<double>& mus,
                                              const std::vector<int>& scales,
                                              const QuadratureOptions& opt = {});

// Per kind: C(mu) = max over scales and separations of the normalized value,
// and the spread max_mu C / min_mu C.
struct SweepSpread {
    std::string kind;
    std::vector<double> mus;
    std::vector<double> constants;
    double spread = 0.0;
};
std::vector<SweepSpread> sweep_spread(const std::vector<OscillatoryRow>& rows);

} // namespace twistlab
