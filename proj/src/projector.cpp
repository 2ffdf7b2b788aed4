#include "twistlab/projector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "twistlab/error.hpp"
#include "twistlab/parallel.hpp"
#include "twistlab/radial.hpp"

namespace twistlab {

namespace {

constexpr double kPi = std::numbers::pi;

double radius(std::span<const double> z) {
    double s = 0.0;
    for (double v : z) s += v * v;
    return std::sqrt(s);
}

// Index of alpha components for a coefficient; returns the largest one.
int max_alpha(const HermiteCoefficients& c, std::size_t flat) {
    std::size_t B = static_cast<std::size_t>(c.b_max + 1);
    if (c.d == 1) return static_cast<int>(flat / B);
    std::size_t P = c.pair_count();
    return static_cast<int>(std::max((flat / P) / B, (flat % P) / B));
}

} // namespace

const char* to_string(ProjectionMethod m) { return m == ProjectionMethod::Eigen ? "eigen" : "kernel"; }

ProjectionMethod parse_projection_method(const std::string& s) {
    if (s == "eigen") return ProjectionMethod::Eigen;
    if (s == "kernel") return ProjectionMethod::Kernel;
    throw DomainError("unknown projection method '" + s + "'");
}

HermiteBasisTruncation default_truncation(SpectralIndex s) { return {4 * s.k + 40, s.d}; }

Field varsigma_field(const Grid& grid, SpectralIndex s) {
    if (grid.d != s.d) throw DomainError("kernel dimension does not match the grid");
    return Field::sample(grid, [&](std::span<const double> z) { return cplx(kernel_varsigma(s, radius(z))); });
}

ProjectionResult project(const Field& f, SpectralIndex s, ProjectionMethod method,
                         std::optional<HermiteBasisTruncation> trunc) {
    const Grid& g = f.grid();
    if (g.d != s.d) throw DomainError("spectral index dimension does not match the field");
    if (s.k < 0) throw DomainError("Laguerre index must be nonnegative");
    require_resolves(g, s.mu());
    ProjectionResult res;
    res.method = method;
    if (method == ProjectionMethod::Kernel) {
        Field K = varsigma_field(g, s);
        res.field = scale(twisted_convolution(f, K), std::pow(2.0 * kPi, -s.d));
        return res;
    }
    HermiteBasisTruncation tr = trunc.value_or(default_truncation(s));
    if (tr.d != s.d) throw DomainError("truncation dimension does not match the field");
    res.truncation = tr;
    HermiteTransform T(g, tr.alpha_max, s.k);
    HermiteCoefficients c = T.analyze(f);
    double level_mass = 0.0, edge_mass = 0.0;
    for (std::size_t i = 0; i < c.c.size(); ++i) {
        if (c.level(i) != s.k) {
            c.c[i] = 0.0;
            continue;
        }
        double m = std::norm(c.c[i]);
        level_mass += m;
        if (max_alpha(c, i) > tr.alpha_max - 4) edge_mass += m;
    }
    res.residual_estimate = level_mass > 0 ? edge_mass / level_mass : 0.0;
    res.flagged = res.residual_estimate > kTruncationFlagThreshold;
    res.field = T.synthesize(c);
    return res;
}

SpectralExpansion::SpectralExpansion(const Field& f, SeriesTruncation trunc) {
    const Grid& g = f.grid();
    if (trunc.k_max < 0 || trunc.alpha_max < 0) throw DomainError("series truncation must be nonnegative");
    require_resolves(g, 2.0 * trunc.k_max + g.d);
    k_max_ = trunc.k_max;
    transform_ = std::make_shared<const HermiteTransform>(g, trunc.alpha_max, trunc.k_max);
    coeffs_ = transform_->analyze(f);
    for (std::size_t i = 0; i < coeffs_.c.size(); ++i)
        if (coeffs_.level(i) > k_max_) coeffs_.c[i] = 0.0;
    double total = lp_norm(f, 2.0);
    total *= total;
    tail_fraction_ = total > 0 ? std::max(0.0, (total - coeffs_.squared_mass()) / total) : 0.0;
}

double SpectralExpansion::level_mass(int k) const {
    double s = 0.0;
    for (std::size_t i = 0; i < coeffs_.c.size(); ++i)
        if (coeffs_.level(i) == k) s += std::norm(coeffs_.c[i]);
    return s;
}

SpectralExpansion SpectralExpansion::multiplied(const std::function<cplx(int mu)>& m) const {
    SpectralExpansion out;
    out.transform_ = transform_;
    out.coeffs_ = coeffs_;
    out.k_max_ = k_max_;
    out.tail_fraction_ = tail_fraction_;
    std::vector<cplx> factor(k_max_ + 1);
    for (int k = 0; k <= k_max_; ++k) factor[k] = m(2 * k + coeffs_.d);
    for (std::size_t i = 0; i < out.coeffs_.c.size(); ++i) {
        int lv = out.coeffs_.level(i);
        if (lv <= k_max_) out.coeffs_.c[i] *= factor[lv];
    }
    return out;
}

Field SpectralExpansion::apply(const std::function<cplx(int mu)>& m) const {
    return multiplied(m).synthesize();
}

Field SpectralExpansion::synthesize() const { return transform_->synthesize(coeffs_); }

void require_window(const Window& w) {
    double lo = w(-kPi / 2), hi = w(kPi / 2), peak = 0.0;
    for (int i = 0; i <= 256; ++i) {
        double v = w(-kPi / 2 + kPi * i / 256);
        if (!std::isfinite(v)) throw DomainError("window " + w.label() + " is not finite");
        peak = std::max(peak, std::abs(v));
    }
    if (std::abs(lo - hi) > 1e-10 * std::max(1.0, peak))
        throw DomainError("window support violation: " + w.label() +
                          " does not extend periodically from [-pi/2, pi/2]");
}

std::vector<WindowMultiplier> window_multipliers(int d, int mu, const Window& w, int k_max,
                                                 double cutoff, int points) {
    require_window(w);
    if ((mu - d) % 2 != 0 || mu < d) throw DomainError("mu must lie in 2N_0 + d");
    std::vector<cplx> hat(k_max + 1);
    parallel_for(hat.size(), [&](std::size_t k) {
        WindowTransform t = window_hat(w, 2 * static_cast<int>(k) + d - mu, points);
        hat[k] = cplx(t.re, t.im) / kPi;
    });
    double peak = 0.0;
    for (cplx v : hat) peak = std::max(peak, std::abs(v));
    std::vector<WindowMultiplier> out;
    for (int k = 0; k <= k_max; ++k)
        if (std::abs(hat[k]) >= cutoff * peak && peak > 0) out.push_back({2 * k + d, hat[k]});
    return out;
}

Field windowed_projection(const Field& f, int mu, const Window& w, SeriesTruncation trunc) {
    int d = f.grid().d;
    auto mult = window_multipliers(d, mu, w, trunc.k_max);
    std::vector<cplx> table(trunc.k_max + 1);
    for (const auto& m : mult) table[(m.mu - d) / 2] = m.value;
    SpectralExpansion e(f, trunc);
    return e.apply([&](int m) { return table[(m - d) / 2]; });
}

WindowedProxy windowed_proxy_1to2(int d, int mu, const Window& w, int k_max,
                                  const std::vector<double>& lambdas) {
    auto mult = window_multipliers(d, mu, w, k_max);
    double eta_sq = 0.0;
    const int n = 4096;
    for (int i = 0; i < n; ++i) {
        double v = w(-kPi / 2 + kPi * i / n);
        eta_sq += v * v * kPi / n;
    }
    double kept = 0.0;
    for (const auto& m : mult) kept += std::norm(m.value * kPi);
    WindowedProxy best;
    best.captured = eta_sq > 0 ? kept / (kPi * eta_sq) : 0.0;
    for (double lambda : lambdas) {
        RadialExpansion g = RadialExpansion::gaussian(d, lambda, k_max);
        double s = 0.0;
        for (const auto& m : mult) {
            int k = (m.mu - d) / 2;
            double nrm = kernel_l2_norm({d, k});
            s += std::norm(m.value * g.c[k]) * nrm * nrm;
        }
        double value = std::sqrt(s) / std::pow(4.0 * kPi / lambda, d);
        if (value > best.value) {
            best.value = value;
            best.lambda = lambda;
        }
    }
    return best;
}

Field propagator(const Field& f, double t, SeriesTruncation trunc) {
    SpectralExpansion e(f, trunc);
    return e.apply([t](int mu) { return std::exp(cplx(0.0, -t * mu)); });
}

std::vector<cplx> propagator_kernel(const Field& f, double t, cplx constant,
                                    const std::vector<std::vector<double>>& points) {
    double st = std::sin(t);
    if (std::abs(st) < 1e-12) throw DomainError("kernel route is singular for t in pi Z");
    int d = f.grid().d;
    double cot = std::cos(t) / st;
    cplx lead = constant * std::pow(st, -d);
    auto kernel = [&](std::span<const double> w) {
        double r2 = 0.0;
        for (double v : w) r2 += v * v;
        return lead * std::exp(cplx(0.0, 0.25 * cot * r2));
    };
    return twisted_convolution_at(f, kernel, points);
}

cplx calibrate_propagator_constant(int d) {
    if (d < 1 || d > 2) throw DomainError("propagator calibration supports d <= 2");
    const double t = 0.7;
    Grid g = d == 1 ? Grid::make(1, 7.0, 112) : Grid::make(2, 6.0, 48);
    Field f = Field::sample(g, [](std::span<const double> z) {
        double r2 = 0.0;
        for (double v : z) r2 += v * v;
        return cplx(std::exp(-r2 / 2.0));
    });
    std::vector<double> zp(2 * d, 0.0);
    zp[0] = 0.4;
    zp[1] = -0.3;
    cplx kernel_value = propagator_kernel(f, t, 1.0, {zp})[0];
    // Series route on the radial expansion of e^{-|z|^2/2}; coefficients decay like 3^{-k}.
    RadialExpansion e = RadialExpansion::gaussian(d, 2.0, 60);
    RadialExpansion u = e.multiply([t](int mu) { return std::exp(cplx(0.0, -t * mu)); });
    double r = radius(zp);
    cplx series_value = u.evaluate(std::span<const double>(&r, 1))[0];
    return series_value / kernel_value;
}

Field scaled_projection(const Field& f, int m, SpectralIndex s) {
    if (m == 0) throw DomainError("scaled projection needs m != 0");
    const Grid& g = f.grid();
    if (g.d != s.d) throw DomainError("spectral index dimension does not match the field");
    require_resolves(g, std::abs(m) * static_cast<double>(s.mu()));
    double am = std::abs(m);
    double sq = std::sqrt(am);
    double lead = std::pow(am / (2.0 * kPi), s.d);
    Field K = Field::sample(g, [&](std::span<const double> z) {
        return cplx(lead * kernel_varsigma(s, sq * radius(z)));
    });
    ConvolutionOptions opt;
    opt.phase_scale = m;
    return twisted_convolution(f, K, opt);
}

} // namespace twistlab
