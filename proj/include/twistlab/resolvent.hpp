#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "twistlab/projector.hpp"
#include "twistlab/region.hpp"

namespace twistlab {

// z with its distance to the spectrum 2N_0 + d and the anchor
// z = 2n + d - 2(a + ib). The anchor takes n = round((Re z - d)/2) (halves
// rounded up), so a lies in (-1/2, 1/2], with a = 1/2 exactly at midpoints.
struct SpectralParameterZ {
    cplx z;
    int d = 1;
    double gap = 0.0;
    bool anchored = false; // Re z > d - 1/2
    int n = 0;
    double a = 0.0;
    double b = 0.0;

    static SpectralParameterZ make(cplx z, int d);
    cplx w() const { return {a, b}; }
};

double spectral_gap(cplx z, int d);

// Even smooth bump, 1 on [-1/2, 1/2], 0 outside (-1, 1).
double zeta(double x);

// 1/(mu - z).
std::function<cplx(int)> resolvent_multiplier(const SpectralParameterZ& z);

struct ResolventResult {
    Field field;
    // ||f - (truncated part of f)||_2 / gap.
    double tail_bound = 0.0;
};

ResolventResult resolvent_apply(const Field& f, const SpectralParameterZ& z, SeriesTruncation trunc);
ResolventResult resolvent_apply(const SpectralExpansion& e, const SpectralParameterZ& z);

// Multipliers of the four pieces as functions of mu in 2N_0 + d.
struct DecompositionSymbols {
    std::function<cplx(int)> I1, I2, I3, E;
};
DecompositionSymbols decomposition_symbols(const SpectralParameterZ& z);

// m_n(t) = t (1 - zeta((t - 2n - d)/(2n))) / (t - z); for n = 0 the factor is 1[t != d].
cplx symbol_mn(const SpectralParameterZ& z, double t);

// sup over t >= 0 of (1 + t)^l |d^l m_n / dt^l| for l <= 2, sampled.
double symbol_derivative_bound(const SpectralParameterZ& z, int l, double t_max = 0.0);

struct Decomposition {
    Field I1, I2, I3, E;
};
Decomposition decompose(const SpectralParameterZ& z, const Field& f, SeriesTruncation trunc);
Decomposition decompose(const SpectralParameterZ& z, const SpectralExpansion& e);
// E through m_n(L) applied after L^{-1}.
Field decompose_E_via_symbol(const SpectralParameterZ& z, const SpectralExpansion& e);

Field fractional_power(const Field& f, double s, SeriesTruncation trunc);

// max over the sampled t in [-pi/2, pi/2] of |sum_{k=1}^n zeta(k/n) sin(2kt) / (k + a + ib)|.
double partial_sum_max(int n, double a, double b);

struct PartialSumReport {
    double constant = 0.0;
    int worst_n = 0;
    double worst_a = 0.0, worst_b = 0.0;
    std::vector<int> ns;
};
// Sweeps n <= n_max (all small n, log-spaced beyond) over a fixed set of (a, b)
// with |(a, b)| >= 1/2.
PartialSumReport partial_sum_sweep(int n_max);

struct SweepRow {
    cplx z;
    double gap = 0.0;
    std::string test_id;
    double ratio = 0.0;
};

struct SweepReport {
    int d = 2;
    ExponentPointD x;
    double c = 1.0;
    int n_max = 0;
    PentagonVerdict verdict = PentagonVerdict::InteriorOrEdge;
    std::vector<SweepRow> rows;
    std::vector<double> per_z_max; // one entry per z, in row order
    double diagnostic = 0.0;       // max / min of per_z_max
};

// Test family ids: "gauss:<lambda>" or "level:nearest" (the radial kernels at
// the one or two levels nearest Re z).
std::vector<std::string> default_test_family();

// Radial spectral engine: radial inputs, exact multipliers on their kernel
// coefficients, norms by the radial rule.
SweepReport uniform_sweep(const ExponentPointD& x, int d, double c, int n_max,
                          const std::vector<std::string>& family = default_test_family());

// ||L^{-s} f_lambda||_q / ||f_lambda||_p for f_lambda = e^{-lambda |z|^2/4}, radial engine.
std::vector<double> fractional_probe(const ExponentPointD& x, int d, double s,
                                     const std::vector<double>& lambdas);

} // namespace twistlab
