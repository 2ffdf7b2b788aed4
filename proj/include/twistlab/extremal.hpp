#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twistlab/field.hpp"
#include "twistlab/laguerre.hpp"
#include "twistlab/region.hpp"

namespace twistlab {

// g(s) = (mu/2)(2 theta - sin 2 theta) - pi/4 with theta = acos(s / (2 sqrt mu)).
double ring_phase(double mu, double s);

struct RingSystem {
    int mu = 0;
    int d = 1;
    double lo = 0.0; // sqrt(mu)/8
    double hi = 0.0; // sqrt(mu)/3
    std::vector<double> roots;
    double half_width = 0.0; // pi / (8 sqrt mu), the ring width
    int count() const { return static_cast<int>(roots.size()); }
};

RingSystem build_rings(SpectralIndex s);

// f(z) = sum_j chi_{D_j}(|z|) varsigma_k(z) with D_j = [t_j, t_j + pi/(8 sqrt mu)].
Field ring_extremizer(SpectralIndex s, const Grid& grid);

// Radial measurements of the ring function. Since f is radial, P_mu f = c varsigma_k.
struct RingMeasurement {
    SpectralIndex index;
    int rings = 0;
    double norm1 = 0.0;          // ||f||_1
    double norm2_sq = 0.0;       // ||f||_2^2
    double coefficient = 0.0;    // c = <f, varsigma_k> / ||varsigma_k||^2
    double near_origin_min = 0.0; // min over |z| <= pi/(32 sqrt mu) of |P_mu f|
};
RingMeasurement measure_ring(SpectralIndex s);

// ||f||_p for the ring function.
double ring_norm(const RingSystem& rings, SpectralIndex s, double p);

// (2pi)^{-d} int f(w) varsigma_k(z - w) e^{(i/2) Im(z conj w)} dw by polar
// quadrature over the rings, d = 1 only. Independent of the radial coefficient.
cplx ring_projection_polar(SpectralIndex s, double x, double y);

enum class NormMethod { CornerExact, RingExtremizer, EigenspaceAscent, SingleEigenfunction };
enum class Certification { Exact, LowerBound };

const char* to_string(NormMethod m);
const char* to_string(Certification c);
NormMethod parse_norm_method(const std::string& s);

struct NormReport {
    int d = 1;
    int k = 0;
    int mu = 0;
    double pr = 0.0;
    double qr = 0.0;
    double value = 0.0;
    NormMethod method = NormMethod::CornerExact;
    Certification certification = Certification::Exact;
    std::uint64_t seed = 0;
    double argmax = 0.0; // radius of sup |varsigma_k| for the 1 -> infinity corner
};

// sup_r |varsigma_k(r)| by scan plus golden-section refinement; returns {sup, argmax}.
std::pair<double, double> kernel_sup(SpectralIndex s);

// L^q norm of varsigma_k on C^d (q = infinity allowed).
double kernel_lq_norm(SpectralIndex s, double q);

// 2 -> 2, 1 -> infinity, 1 -> 2 and 2 -> infinity.
std::vector<NormReport> corner_norms(SpectralIndex s);

struct AscentOptions {
    int restarts = 8;
    int max_iterations = 400;
    int extra_alpha = 8; // alpha ranges over [0, k + extra_alpha]
};

NormReport norm_lower_bound(SpectralIndex s, const ExponentPointD& x, NormMethod strategy,
                            std::uint64_t seed, const AscentOptions& opt = {});

struct ScalingFit {
    double slope = 0.0;
    double stderr_ = 0.0;
    double intercept = 0.0;
};
ScalingFit scaling_fit(const std::vector<NormReport>& reports);
// Least squares of log y on log x.
ScalingFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

} // namespace twistlab
