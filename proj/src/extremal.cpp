#include "twistlab/extremal.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "twistlab/error.hpp"
#include "twistlab/hermite.hpp"
#include "twistlab/quadrature.hpp"
#include "twistlab/radial.hpp"

namespace twistlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kRingNodes = 20;

double exponent(double r) { return r == 0.0 ? INFINITY : 1.0 / r; }

// sum over rings of int_{D_j} F(r) r^{2d-1} dr times the sphere area.
template <class F>
double ring_integral(const RingSystem& rings, int d, F fn) {
    QuadratureRule ref = gauss_legendre(kRingNodes);
    double s = 0.0;
    for (double t : rings.roots) {
        double a = t, b = t + rings.half_width;
        for (int i = 0; i < kRingNodes; ++i) {
            double r = 0.5 * (a + b) + 0.5 * (b - a) * ref.nodes[i];
            s += 0.5 * (b - a) * ref.weights[i] * fn(r) * std::pow(r, 2 * d - 1);
        }
    }
    return s * sphere_area(d);
}

// |Phi_{0,k}(z)| = (2pi)^{-1/2} (2^k k!)^{-1/2} |z|^k e^{-|z|^2/4} on C.
double phi0k_modulus(int k, double r) {
    if (r == 0.0) return k == 0 ? 1.0 / std::sqrt(2.0 * kPi) : 0.0;
    double log_v = k * std::log(r) - 0.25 * r * r - 0.5 * (k * std::log(2.0) + std::lgamma(k + 1.0));
    return std::exp(log_v) / std::sqrt(2.0 * kPi);
}

double phi0k_norm(int k, double p) {
    if (std::isinf(p)) return phi0k_modulus(k, std::sqrt(2.0 * k));
    RadialRule rule = radial_rule(1, k);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.r.size(); ++i) s += rule.w[i] * std::pow(phi0k_modulus(k, rule.r[i]), p);
    return std::pow(s, 1.0 / p);
}

// |v|^q from |v|^2, avoiding pow for even integer q.
double abs_pow(cplx v, double q) {
    double a2 = std::norm(v);
    if (q == 2.0) return a2;
    if (q == 4.0) return a2 * a2;
    if (q == 6.0) return a2 * a2 * a2;
    return std::pow(a2, 0.5 * q);
}

double grid_norm(const Eigen::VectorXcd& g, double q, double cell) {
    if (std::isinf(q)) return g.cwiseAbs().maxCoeff();
    double s = 0.0;
    for (Eigen::Index i = 0; i < g.size(); ++i) s += abs_pow(g(i), q);
    return std::pow(s * cell, 1.0 / q);
}

NormReport eigenspace_ascent(SpectralIndex s, const ExponentPointD& x, std::uint64_t seed,
                             const AscentOptions& opt) {
    if (s.d != 1) throw DomainError("eigenspace ascent is implemented for d = 1");
    const int A = s.k + opt.extra_alpha + 1;
    Grid grid = default_grid(1, 2.0 * (s.k + opt.extra_alpha) + 1.0);
    HermiteTransform T(grid, A - 1, s.k);
    const Eigen::Index N = static_cast<Eigen::Index>(grid.size());
    Eigen::MatrixXcd B(N, A);
    for (int a = 0; a < A; ++a) {
        Field phi = T.basis_function({{a}}, {{s.k}});
        for (Eigen::Index i = 0; i < N; ++i) B(i, a) = phi[i];
    }
    const double cell = grid.cell_volume();
    const double q = exponent(x.qr);

    auto ratio = [&](const Eigen::VectorXcd& g) { return grid_norm(g, q, cell) / grid_norm(g, 2.0, cell); };
    auto gradient = [&](const Eigen::VectorXcd& g) {
        Eigen::VectorXcd w = Eigen::VectorXcd::Zero(N);
        if (std::isinf(q)) {
            Eigen::Index arg;
            g.cwiseAbs().maxCoeff(&arg);
            w(arg) = g(arg) / std::abs(g(arg));
        } else {
            for (Eigen::Index i = 0; i < N; ++i) w(i) = abs_pow(g(i), q - 2.0) * g(i);
        }
        return Eigen::VectorXcd(B.adjoint() * w);
    };

    double best = 0.0;
    for (int r = 0; r < opt.restarts; ++r) {
        std::mt19937_64 rng(seed * 1000003ULL + static_cast<std::uint64_t>(r));
        std::normal_distribution<double> nd(0.0, 1.0);
        Eigen::VectorXcd c(A);
        for (int a = 0; a < A; ++a) c(a) = cplx(nd(rng), nd(rng));
        c.normalize();
        Eigen::VectorXcd g = B * c;
        double value = ratio(g);
        std::vector<double> history{value};
        for (int it = 1; it <= opt.max_iterations; ++it) {
            Eigen::VectorXcd G = gradient(g);
            double gn = G.norm();
            if (gn == 0.0) break;
            Eigen::VectorXcd trial = c + (0.1 / std::sqrt(static_cast<double>(it))) * G / gn;
            trial.normalize();
            Eigen::VectorXcd gt = B * trial;
            double vt = ratio(gt);
            if (vt > value) {
                c = trial;
                g = gt;
                value = vt;
            }
            history.push_back(value);
            if (history.size() > 50) {
                double old = history[history.size() - 51];
                if (value - old < 1e-6 * old) break;
            }
        }
        best = std::max(best, value);
    }
    return {s.d, s.k, s.mu(), x.pr, x.qr, best, NormMethod::EigenspaceAscent, Certification::LowerBound, seed};
}

} // namespace

double ring_phase(double mu, double s) {
    double theta = std::acos(s / (2.0 * std::sqrt(mu)));
    return 0.5 * mu * (2.0 * theta - std::sin(2.0 * theta)) - kPi / 4.0;
}

RingSystem build_rings(SpectralIndex s) {
    RingSystem rs;
    rs.mu = s.mu();
    rs.d = s.d;
    double sq = std::sqrt(static_cast<double>(rs.mu));
    rs.lo = sq / 8.0;
    rs.hi = sq / 3.0;
    rs.half_width = kPi / (8.0 * sq);
    // Scan at spacing 1/(4 sqrt mu), below the root spacing, then bisect each sign change of sin g.
    auto sg = [&](double t) { return std::sin(ring_phase(rs.mu, t)); };
    int steps = static_cast<int>(std::ceil((rs.hi - rs.lo) * 4.0 * sq));
    double prev_t = rs.lo, prev = sg(prev_t);
    for (int i = 1; i <= steps; ++i) {
        double t = rs.lo + (rs.hi - rs.lo) * i / steps;
        double v = sg(t);
        if (prev == 0.0) rs.roots.push_back(prev_t);
        else if (v != 0.0 && (v > 0) != (prev > 0)) {
            double a = prev_t, b = t, fa = prev;
            for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
                double m = 0.5 * (a + b), fm = sg(m);
                if ((fm > 0) == (fa > 0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            rs.roots.push_back(0.5 * (a + b));
        }
        prev_t = t;
        prev = v;
    }
    if (rs.roots.empty()) throw ConvergenceError("no ring roots bracketed; mu is too small", 0.0);
    return rs;
}

Field ring_extremizer(SpectralIndex s, const Grid& grid) {
    if (grid.d != s.d) throw DomainError("grid dimension does not match the spectral index");
    require_resolves(grid, s.mu());
    RingSystem rs = build_rings(s);
    return Field::sample(grid, [&](std::span<const double> z) {
        double r2 = 0.0;
        for (double v : z) r2 += v * v;
        double r = std::sqrt(r2);
        auto it = std::upper_bound(rs.roots.begin(), rs.roots.end(), r);
        if (it == rs.roots.begin()) return cplx(0.0);
        double t = *(it - 1);
        return r <= t + rs.half_width ? cplx(kernel_varsigma(s, r)) : cplx(0.0);
    });
}

double ring_norm(const RingSystem& rings, SpectralIndex s, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double t : rings.roots)
            for (int i = 0; i <= 64; ++i) m = std::max(m, std::abs(kernel_varsigma(s, t + rings.half_width * i / 64)));
        return m;
    }
    double v = ring_integral(rings, s.d, [&](double r) { return std::pow(std::abs(kernel_varsigma(s, r)), p); });
    return std::pow(v, 1.0 / p);
}

RingMeasurement measure_ring(SpectralIndex s) {
    RingSystem rs = build_rings(s);
    RingMeasurement m;
    m.index = s;
    m.rings = rs.count();
    m.norm1 = ring_norm(rs, s, 1.0);
    m.norm2_sq = std::pow(ring_norm(rs, s, 2.0), 2);
    double kn = kernel_l2_norm(s);
    m.coefficient = m.norm2_sq / (kn * kn);
    double rmax = kPi / (32.0 * std::sqrt(static_cast<double>(s.mu())));
    double mn = INFINITY;
    for (int i = 0; i <= 256; ++i) mn = std::min(mn, std::abs(kernel_varsigma(s, rmax * i / 256)));
    m.near_origin_min = std::abs(m.coefficient) * mn;
    return m;
}

cplx ring_projection_polar(SpectralIndex s, double x, double y) {
    if (s.d != 1) throw DomainError("polar ring quadrature is implemented for d = 1");
    RingSystem rs = build_rings(s);
    QuadratureRule ref = gauss_legendre(kRingNodes);
    double zr = std::hypot(x, y);
    double nu = 4.0 * s.k + 2.0;
    int M = 64 + static_cast<int>(std::ceil(8.0 * zr * (std::sqrt(nu) + rs.hi)));
    cplx sum = 0.0;
    for (double t : rs.roots) {
        double a = t, b = t + rs.half_width;
        for (int i = 0; i < kRingNodes; ++i) {
            double rho = 0.5 * (a + b) + 0.5 * (b - a) * ref.nodes[i];
            double wr = 0.5 * (b - a) * ref.weights[i] * rho;
            double f = kernel_varsigma(s, rho);
            cplx ang = 0.0;
            for (int m = 0; m < M; ++m) {
                double ph = 2.0 * kPi * m / M;
                double u = rho * std::cos(ph), v = rho * std::sin(ph);
                double dist = std::hypot(x - u, y - v);
                ang += kernel_varsigma(s, dist) * std::exp(cplx(0.0, 0.5 * (y * u - x * v)));
            }
            sum += wr * f * ang * (2.0 * kPi / M);
        }
    }
    return sum / (2.0 * kPi);
}

const char* to_string(NormMethod m) {
    switch (m) {
    case NormMethod::CornerExact: return "corner_exact";
    case NormMethod::RingExtremizer: return "ring_extremizer";
    case NormMethod::EigenspaceAscent: return "eigenspace_ascent";
    case NormMethod::SingleEigenfunction: return "single_eigenfunction";
    }
    return "?";
}

const char* to_string(Certification c) { return c == Certification::Exact ? "exact" : "lower_bound"; }

NormMethod parse_norm_method(const std::string& s) {
    for (auto m : {NormMethod::CornerExact, NormMethod::RingExtremizer, NormMethod::EigenspaceAscent,
                   NormMethod::SingleEigenfunction})
        if (s == to_string(m)) return m;
    throw DomainError("unknown norm method '" + s + "'");
}

std::pair<double, double> kernel_sup(SpectralIndex s) {
    double nu = 4.0 * s.k + 2.0 * s.d;
    double rmax = std::sqrt(2.0 * nu) + 6.0;
    double step = 2.0 * kPi / std::sqrt(nu / 2.0) / 64.0;
    int n = static_cast<int>(std::ceil(rmax / step));
    double best = -1.0, arg = 0.0;
    for (int i = 0; i <= n; ++i) {
        double r = i * step;
        double v = std::abs(kernel_varsigma(s, r));
        if (v > best) {
            best = v;
            arg = r;
        }
    }
    // Golden-section refinement inside the neighbouring samples.
    double a = std::max(0.0, arg - step), b = arg + step;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    auto f = [&](double r) { return std::abs(kernel_varsigma(s, r)); };
    for (int it = 0; it < 80; ++it) {
        double c = b - g * (b - a), d = a + g * (b - a);
        if (f(c) >= f(d)) b = d;
        else a = c;
    }
    double r = 0.5 * (a + b);
    if (f(r) > best) {
        best = f(r);
        arg = r;
    }
    return {best, arg};
}

double kernel_lq_norm(SpectralIndex s, double q) {
    if (std::isinf(q)) return kernel_sup(s).first;
    if (q == 2.0) return kernel_l2_norm(s);
    RadialRule rule = radial_rule(s.d, s.k);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.r.size(); ++i)
        sum += rule.w[i] * std::pow(std::abs(kernel_varsigma(s, rule.r[i])), q);
    return std::pow(sum, 1.0 / q);
}

std::vector<NormReport> corner_norms(SpectralIndex s) {
    double c = std::pow(2.0 * kPi, -s.d);
    auto [sup, arg] = kernel_sup(s);
    double l2 = c * kernel_l2_norm(s);
    auto rep = [&](double pr, double qr, double v, double a = 0.0) {
        return NormReport{s.d, s.k, s.mu(), pr, qr, v, NormMethod::CornerExact, Certification::Exact, 0, a};
    };
    return {rep(0.5, 0.5, 1.0), rep(1.0, 0.0, c * sup, arg), rep(1.0, 0.5, l2), rep(0.5, 0.0, l2)};
}

NormReport norm_lower_bound(SpectralIndex s, const ExponentPointD& x, NormMethod strategy,
                            std::uint64_t seed, const AscentOptions& opt) {
    if (!in_riesz_square(x)) throw DomainError("exponent point outside the Riesz square");
    double p = exponent(x.pr), q = exponent(x.qr);
    NormReport rep{s.d, s.k, s.mu(), x.pr, x.qr, 0.0, strategy, Certification::LowerBound, seed};
    switch (strategy) {
    case NormMethod::CornerExact:
        throw DomainError("corner_exact is not a lower-bound strategy");
    case NormMethod::SingleEigenfunction: {
        // Phi_{0,beta} with beta = (k, 0, ..., 0) factorizes over the coordinates.
        double num = phi0k_norm(s.k, q) * std::pow(phi0k_norm(0, q), s.d - 1);
        double den = phi0k_norm(s.k, p) * std::pow(phi0k_norm(0, p), s.d - 1);
        rep.value = num / den;
        return rep;
    }
    case NormMethod::RingExtremizer: {
        RingSystem rs = build_rings(s);
        RingMeasurement m = measure_ring(s);
        double c = std::abs(m.coefficient);
        // P_mu is self-adjoint, so the same f bounds the dual exponent pair.
        double direct = c * kernel_lq_norm(s, q) / ring_norm(rs, s, p);
        double pd = exponent(1.0 - x.qr), qd = exponent(1.0 - x.pr);
        double dual = c * kernel_lq_norm(s, qd) / ring_norm(rs, s, pd);
        rep.value = std::max(direct, dual);
        return rep;
    }
    case NormMethod::EigenspaceAscent:
        if (std::abs(x.pr - 0.5) > 1e-12) throw DomainError("eigenspace ascent requires pr = 1/2");
        return eigenspace_ascent(s, x, seed, opt);
    }
    return rep;
}

ScalingFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("fit needs at least two points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0) || !(y[i] > 0)) throw DomainError("log-log fit needs positive data");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = std::log(x[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y[i]) - my);
    }
    ScalingFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double e = std::log(y[i]) - f.intercept - f.slope * std::log(x[i]);
        ssr += e * e;
    }
    f.stderr_ = x.size() > 2 ? std::sqrt(ssr / (n - 2.0) / sxx) : 0.0;
    return f;
}

ScalingFit scaling_fit(const std::vector<NormReport>& reports) {
    std::set<int> mus;
    for (const auto& r : reports) {
        mus.insert(r.mu);
        const auto& f = reports.front();
        if (r.pr != f.pr || r.qr != f.qr || r.method != f.method)
            throw DomainError("scaling fit needs a common exponent pair and method");
    }
    if (mus.size() < 4) throw DomainError("scaling fit needs at least 4 distinct mu");
    std::vector<double> x, y;
    for (const auto& r : reports) {
        x.push_back(r.mu);
        y.push_back(r.value);
    }
    return loglog_fit(x, y);
}

} // namespace twistlab
