#include "twistlab/laguerre.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "twistlab/error.hpp"

namespace twistlab {

namespace {

constexpr double kRescale = 1e150;
const double kLogRescale = std::log(kRescale);

void check_index(const LaguerreIndex& idx) {
    if (idx.k < 0) throw DomainError("Laguerre index k must be >= 0");
    if (idx.k > kDefaultKMax) throw DomainError("Laguerre index k exceeds k_max");
    if (!(idx.alpha >= 0.0)) throw DomainError("Laguerre type alpha must be >= 0");
}

// Unnormalized recurrence for L_k^alpha(t) e^{log_factor}; returns value and
// leaves the accumulated log scale in `log_scale`.
double poly_scaled(int k, double alpha, double t, double log_factor, double& log_scale) {
    log_scale = log_factor;
    double prev = 0.0;
    double cur = 1.0;
    for (int j = 0; j < k; ++j) {
        double next = ((2.0 * j + 1.0 + alpha - t) * cur - (j + alpha) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
        if (std::abs(cur) > kRescale) {
            cur /= kRescale;
            prev /= kRescale;
            log_scale += kLogRescale;
        }
    }
    return cur;
}

double apply_scale(double v, double log_scale) {
    if (v == 0.0) return 0.0;
    double lg = std::log(std::abs(v)) + log_scale;
    if (lg < -745.0) return 0.0;
    return std::copysign(std::exp(lg), v);
}

// Normalized recurrence; fills `out` (if non-empty) for every k up to kmax and
// returns the k = kmax value.
double normalized_run(int kmax, double alpha, double t, double* out, double* log_out) {
    if (t == 0.0) {
        double v = alpha == 0.0 ? 1.0 : 0.0;
        for (int j = 0; j <= kmax && out; ++j) out[j] = v;
        if (log_out)
            for (int j = 0; j <= kmax; ++j) log_out[j] = 0.0;
        return v;
    }
    double log_scale = 0.5 * alpha * std::log(t) - 0.5 * t - 0.5 * std::lgamma(alpha + 1.0);
    double prev = 0.0;
    double cur = 1.0;
    if (out) out[0] = log_out ? cur : apply_scale(cur, log_scale);
    if (log_out) log_out[0] = log_scale;
    for (int j = 0; j < kmax; ++j) {
        double next = ((2.0 * j + alpha + 1.0 - t) * cur - std::sqrt(j * (j + alpha)) * prev) /
                      std::sqrt((j + 1.0) * (j + 1.0 + alpha));
        prev = cur;
        cur = next;
        if (std::abs(cur) > kRescale) {
            cur /= kRescale;
            prev /= kRescale;
            log_scale += kLogRescale;
        }
        if (out) out[j + 1] = log_out ? cur : apply_scale(cur, log_scale);
        if (log_out) log_out[j + 1] = log_scale;
    }
    return apply_scale(cur, log_scale);
}

} // namespace

SpectralIndex SpectralIndex::from_mu(int d, int mu) {
    if (d < 1) throw DomainError("dimension d must be >= 1");
    if (mu < d || (mu - d) % 2 != 0) throw DomainError("mu must lie in 2N_0 + d");
    return {d, (mu - d) / 2};
}

double laguerre_poly(LaguerreIndex idx, double t) {
    check_index(idx);
    if (!(t >= 0.0)) throw DomainError("laguerre_poly requires t >= 0");
    double log_scale = 0.0;
    double v = poly_scaled(idx.k, idx.alpha, t, 0.0, log_scale);
    if (log_scale > 0.0 && std::log(std::abs(v)) + log_scale > 709.0)
        throw std::range_error("laguerre_poly: value out of double range");
    return apply_scale(v, log_scale);
}

double laguerre_poly_damped(LaguerreIndex idx, double t) {
    check_index(idx);
    if (!(t >= 0.0)) throw DomainError("laguerre_poly requires t >= 0");
    double log_scale = 0.0;
    double v = poly_scaled(idx.k, idx.alpha, t, -0.5 * t, log_scale);
    return apply_scale(v, log_scale);
}

double normalized_laguerre(LaguerreIndex idx, double t) {
    check_index(idx);
    if (t < 0.0) throw DomainError("normalized_laguerre requires t >= 0");
    return normalized_run(idx.k, idx.alpha, t, nullptr, nullptr);
}

void normalized_laguerre_sequence(double alpha, double t, std::span<double> out) {
    if (out.empty()) return;
    check_index({static_cast<int>(out.size()) - 1, alpha});
    if (t < 0.0) throw DomainError("normalized_laguerre requires t >= 0");
    normalized_run(static_cast<int>(out.size()) - 1, alpha, t, out.data(), nullptr);
}

AsymptoticEval laguerre_asymptotic(LaguerreIndex idx, double t) {
    check_index(idx);
    if (idx.k < 1) throw DomainError("laguerre_asymptotic requires k >= 1");
    AsymptoticEval e;
    e.nu = 4.0 * idx.k + 2.0 * idx.alpha + 2.0;
    if (!(t > 0.0 && t < e.nu)) throw DomainError("laguerre_asymptotic requires 0 < t < nu");
    e.theta = std::acos(std::sqrt(t / e.nu));
    double sign = (idx.k % 2 == 0) ? 1.0 : -1.0;
    double phase = (e.nu * (2.0 * e.theta - std::sin(2.0 * e.theta)) - std::numbers::pi) / 4.0;
    e.main = std::sqrt(2.0 / std::numbers::pi) * sign * std::pow(t * (e.nu - t), -0.25) *
             std::cos(phase);
    e.error_envelope = std::pow(e.nu, 0.25) * std::pow(e.nu - t, -1.75) + std::pow(e.nu * t, -0.75);
    e.in_validated_window = t >= e.nu / 64.0 && t <= e.nu / 2.0;
    return e;
}

double sphere_area(int d) {
    return 2.0 * std::pow(std::numbers::pi, d) / std::tgamma(static_cast<double>(d));
}

double kernel_l2_norm(SpectralIndex s) {
    if (s.d < 1 || s.k < 0) throw DomainError("invalid spectral index");
    double log_ratio = std::lgamma(s.k + s.d) - std::lgamma(s.k + 1.0);
    return std::sqrt(sphere_area(s.d) * std::pow(2.0, s.d - 1) * std::exp(log_ratio));
}

namespace {

double varsigma_at_origin(int d, int k) {
    return std::exp(std::lgamma(k + d) - std::lgamma(k + 1.0) - std::lgamma(static_cast<double>(d)));
}

// Log of the factor turning the normalized function into varsigma:
// sqrt(Gamma(k+d)/k!) 2^{(d-1)/2} r^{-(d-1)}.
double varsigma_log_factor(int d, int k, double r) {
    double a = d - 1.0;
    return 0.5 * (std::lgamma(k + d) - std::lgamma(k + 1.0)) + 0.5 * a * std::log(2.0) -
           a * std::log(r);
}

} // namespace

double kernel_varsigma(SpectralIndex s, double r) {
    if (s.d < 1 || s.k < 0) throw DomainError("invalid spectral index");
    if (r < 0.0) throw DomainError("radius must be >= 0");
    if (s.k > kDefaultKMax) throw DomainError("k exceeds k_max");
    if (r == 0.0) return varsigma_at_origin(s.d, s.k);
    double t = 0.5 * r * r;
    std::vector<double> vals(s.k + 1), logs(s.k + 1);
    normalized_run(s.k, s.d - 1.0, t, vals.data(), logs.data());
    return apply_scale(vals[s.k], logs[s.k] + varsigma_log_factor(s.d, s.k, r));
}

double kernel_varsigma_poly(SpectralIndex s, double r) {
    if (r < 0.0) throw DomainError("radius must be >= 0");
    return laguerre_poly_damped({s.k, s.d - 1.0}, 0.5 * r * r);
}

void varsigma_sequence(int d, double r, std::span<double> out) {
    if (out.empty()) return;
    int kmax = static_cast<int>(out.size()) - 1;
    if (d < 1) throw DomainError("dimension d must be >= 1");
    if (kmax > kDefaultKMax) throw DomainError("k exceeds k_max");
    if (r == 0.0) {
        for (int k = 0; k <= kmax; ++k) out[k] = varsigma_at_origin(d, k);
        return;
    }
    double t = 0.5 * r * r;
    std::vector<double> logs(kmax + 1);
    normalized_run(kmax, d - 1.0, t, out.data(), logs.data());
    if (d == 1) {
        for (int k = 0; k <= kmax; ++k) out[k] = apply_scale(out[k], logs[k]);
        return;
    }
    // Running lgamma difference avoids a per-k lgamma call.
    double a = d - 1.0;
    double base = 0.5 * a * std::log(2.0) - a * std::log(r);
    double lg = std::lgamma(static_cast<double>(d)); // lgamma(k+d) - lgamma(k+1) at k = 0
    for (int k = 0; k <= kmax; ++k) {
        out[k] = apply_scale(out[k], logs[k] + base + 0.5 * lg);
        lg += std::log((k + d) / (k + 1.0));
    }
}

} // namespace twistlab
