#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "twistlab/field.hpp"
#include "twistlab/hermite.hpp"
#include "twistlab/laguerre.hpp"
#include "twistlab/window.hpp"

namespace twistlab {

enum class ProjectionMethod { Eigen, Kernel };

const char* to_string(ProjectionMethod m);
ProjectionMethod parse_projection_method(const std::string& s);

// Relative tail mass above which an eigen-route projection is flagged.
inline constexpr double kTruncationFlagThreshold = 1e-6;

struct ProjectionResult {
    Field field;
    ProjectionMethod method = ProjectionMethod::Eigen;
    std::optional<HermiteBasisTruncation> truncation;
    // Eigen route: relative coefficient mass in the last four alpha rows.
    double residual_estimate = 0.0;
    bool flagged = false;
};

// alpha_max = 4k + 40 per axis.
HermiteBasisTruncation default_truncation(SpectralIndex s);

// varsigma_k sampled on the grid.
Field varsigma_field(const Grid& grid, SpectralIndex s);

ProjectionResult project(const Field& f, SpectralIndex s, ProjectionMethod method,
                         std::optional<HermiteBasisTruncation> trunc = std::nullopt);

// Caps for series over the spectrum: levels k <= k_max, alpha components <= alpha_max.
struct SeriesTruncation {
    int k_max = 20;
    int alpha_max = 120;
};

// Special Hermite coefficients of f on the levels 0..k_max. Every spectral
// multiplier m(L) is applied as sum_{k <= k_max} m(2k + d) P_{2k+d} f.
class SpectralExpansion {
public:
    SpectralExpansion(const Field& f, SeriesTruncation trunc);

    int d() const { return coeffs_.d; }
    int k_max() const { return k_max_; }
    const Grid& grid() const { return transform_->grid(); }
    const HermiteCoefficients& coefficients() const { return coeffs_; }

    // ||P_{2k+d} f||_2^2 from the coefficients.
    double level_mass(int k) const;
    // Mass outside the truncated span relative to ||f||_2^2, clipped at zero.
    double tail_fraction() const { return tail_fraction_; }

    Field apply(const std::function<cplx(int mu)>& m) const;
    // The same multiplier acting on the coefficients only.
    SpectralExpansion multiplied(const std::function<cplx(int mu)>& m) const;
    Field synthesize() const;

private:
    SpectralExpansion() = default;
    std::shared_ptr<const HermiteTransform> transform_;
    HermiteCoefficients coeffs_;
    int k_max_ = 0;
    double tail_fraction_ = 0.0;
};

// Multipliers (1/pi) eta-hat(mu' - mu) for mu' = 2k' + d, k' <= k_max, with
// entries below cutoff * max dropped.
struct WindowMultiplier {
    int mu = 0;
    cplx value;
};
std::vector<WindowMultiplier> window_multipliers(int d, int mu, const Window& w, int k_max,
                                                 double cutoff = 1e-12, int points = 4096);

// Rejects windows whose pi-periodic extension is discontinuous or not finite.
void require_window(const Window& w);

Field windowed_projection(const Field& f, int mu, const Window& w, SeriesTruncation trunc);

// 1 -> 2 norm of the windowed projector tested on e^{-lambda |z|^2/4}, divided
// by its L^1 norm. As lambda grows this approaches the norm on a point mass.
struct WindowedProxy {
    double value = 0.0;
    double lambda = 0.0;
    double captured = 0.0; // sum |eta-hat|^2 over kept levels / (pi int eta^2)
};
WindowedProxy windowed_proxy_1to2(int d, int mu, const Window& w, int k_max,
                                  const std::vector<double>& lambdas);

// Series route: sum_{k <= k_max} e^{-it mu} P_mu f.
Field propagator(const Field& f, double t, SeriesTruncation trunc);

// Kernel route at the given points: f x K_t with K_t(w) = C (sin t)^{-d} e^{(i/4) cot t |w|^2}.
std::vector<cplx> propagator_kernel(const Field& f, double t, cplx constant,
                                    const std::vector<std::vector<double>>& points);

// Matches the kernel route to the series route for the radial calibration
// input e^{-|z|^2/2} at t = 0.7 and one grid point.
cplx calibrate_propagator_constant(int d);

// The Heisenberg-scaled projection: (2pi)^{-d} |m|^d f x_m varsigma_k(|m|^{1/2} .)
// where x_m carries the phase m Im(z . conj w) / 2.
Field scaled_projection(const Field& f, int m, SpectralIndex s);

} // namespace twistlab
