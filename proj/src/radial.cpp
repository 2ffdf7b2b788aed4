#include "twistlab/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "twistlab/error.hpp"
#include "twistlab/laguerre.hpp"
#include "twistlab/parallel.hpp"
#include "twistlab/quadrature.hpp"

namespace twistlab {

RadialRule radial_rule(int d, int k_max, double r_max, int per_panel) {
    if (d < 1 || k_max < 0) throw DomainError("radial rule needs d >= 1 and k_max >= 0");
    double nu = 4.0 * k_max + 2.0 * d;
    if (r_max <= 0.0) r_max = std::sqrt(2.0 * nu) + 12.0;
    // Near the origin varsigma_k behaves like a Bessel function of argument
    // sqrt(nu/2) r; panels of half a wavelength keep the rule spectrally accurate.
    double wavelength = 2.0 * std::numbers::pi / std::sqrt(nu / 2.0);
    int panels = std::max(8, static_cast<int>(std::ceil(r_max / (0.5 * wavelength))));
    QuadratureRule ref = gauss_legendre(per_panel);
    RadialRule rule;
    rule.d = d;
    rule.r.reserve(static_cast<std::size_t>(panels) * per_panel);
    rule.w.reserve(rule.r.capacity());
    double width = r_max / panels;
    double area = sphere_area(d);
    for (int p = 0; p < panels; ++p) {
        double a = p * width;
        for (int i = 0; i < per_panel; ++i) {
            double r = a + 0.5 * width * (ref.nodes[i] + 1.0);
            rule.r.push_back(r);
            rule.w.push_back(0.5 * width * ref.weights[i] * area * std::pow(r, 2 * d - 1));
        }
    }
    return rule;
}

RadialExpansion RadialExpansion::gaussian(int d, double lambda, int k_max) {
    if (!(lambda > 0)) throw DomainError("Gaussian parameter must be positive");
    RadialExpansion e{d, std::vector<cplx>(k_max + 1)};
    double lead = std::pow(2.0 / (lambda + 1.0), d);
    double q = (lambda - 1.0) / (lambda + 1.0);
    double term = lead;
    for (int k = 0; k <= k_max; ++k) {
        e.c[k] = term;
        term *= q;
    }
    return e;
}

RadialExpansion RadialExpansion::kernel(int d, int k, int k_max) {
    if (k < 0 || k > k_max) throw DomainError("kernel index outside the expansion");
    RadialExpansion e{d, std::vector<cplx>(k_max + 1)};
    e.c[k] = 1.0;
    return e;
}

RadialExpansion RadialExpansion::from_samples(const RadialRule& rule, std::span<const cplx> values,
                                              int k_max) {
    if (values.size() != rule.r.size()) throw DomainError("sample count does not match the rule");
    const std::size_t K = k_max + 1;
    // Per-worker partial sums reduced in a fixed order.
    int workers = thread_count();
    std::vector<std::vector<cplx>> partial(workers, std::vector<cplx>(K));
    std::size_t n = rule.r.size();
    std::size_t chunk = (n + workers - 1) / workers;
    parallel_for(workers, [&](std::size_t wk) {
        std::vector<double> s(K);
        std::size_t b = wk * chunk, e = std::min(n, b + chunk);
        for (std::size_t i = b; i < e; ++i) {
            varsigma_sequence(rule.d, rule.r[i], s);
            cplx v = values[i] * rule.w[i];
            for (std::size_t k = 0; k < K; ++k) partial[wk][k] += v * s[k];
        }
    });
    RadialExpansion out{rule.d, std::vector<cplx>(K)};
    for (std::size_t k = 0; k < K; ++k) {
        cplx sum = 0.0;
        for (const auto& p : partial) sum += p[k];
        double nrm = kernel_l2_norm({rule.d, static_cast<int>(k)});
        out.c[k] = sum / (nrm * nrm);
    }
    return out;
}

RadialExpansion RadialExpansion::multiply(const std::function<cplx(int mu)>& m) const {
    RadialExpansion out{d, c};
    for (int k = 0; k <= k_max(); ++k) out.c[k] *= m(2 * k + d);
    return out;
}

std::vector<cplx> RadialExpansion::evaluate(std::span<const double> r) const {
    std::vector<cplx> out(r.size());
    // Trailing zero coefficients need not be evaluated.
    int last = k_max();
    while (last > 0 && c[last] == cplx{}) --last;
    parallel_ranges(r.size(), [&](std::size_t b, std::size_t e) {
        std::vector<double> s(last + 1);
        for (std::size_t i = b; i < e; ++i) {
            varsigma_sequence(d, r[i], s);
            cplx v = 0.0;
            for (int k = 0; k <= last; ++k) v += c[k] * s[k];
            out[i] = v;
        }
    });
    return out;
}

double RadialExpansion::l2_norm() const {
    double s = 0.0;
    for (int k = 0; k <= k_max(); ++k) {
        double nrm = kernel_l2_norm({d, k});
        s += std::norm(c[k]) * nrm * nrm;
    }
    return std::sqrt(s);
}

double radial_lp_norm(const RadialRule& rule, std::span<const cplx> values, double p) {
    if (!(p >= 1.0)) throw DomainError("L^p norm needs p >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (cplx v : values) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += rule.w[i] * std::pow(std::abs(values[i]), p);
    return std::pow(s, 1.0 / p);
}

} // namespace twistlab
