#include "twistlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "twistlab/error.hpp"
#include "twistlab/extremal.hpp"
#include "twistlab/laguerre.hpp"
#include "twistlab/oscillatory.hpp"
#include "twistlab/projector.hpp"
#include "twistlab/radial.hpp"
#include "twistlab/region.hpp"
#include "twistlab/resolvent.hpp"

namespace twistlab {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

using Lines = std::vector<VerifyLine>;

void add(Lines& out, const std::string& suite, const std::string& check, const std::string& detail,
         bool pass) {
    out.push_back({suite, check, detail, pass});
}

ExponentPoint P(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t e) {
    return {Rational(a, b), Rational(c, e)};
}

bool same(const ExponentPoint& a, const ExponentPoint& b) { return a.pr == b.pr && a.qr == b.qr; }

void suite_region(Lines& out, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int d = 1; d <= 5; ++d) {
        int mismatches = 0;
        for (int i = 0; i < 1000; ++i) {
            std::int64_t n = std::uniform_int_distribution<std::int64_t>(1, 400)(rng);
            std::uniform_int_distribution<std::int64_t> k(0, n);
            std::int64_t a = k(rng), b = k(rng);
            ExponentPoint x{Rational(1, 2) + Rational(a, 2 * n), Rational(b, 2 * n)};
            if (!(rho(x, d) == rho_piecewise(x, d))) ++mismatches;
        }
        add(out, "region", "rho_max_vs_piecewise", "d=" + std::to_string(d) + " points=1000 mismatches=" +
                                                       std::to_string(mismatches), mismatches == 0);
    }
    auto c1 = canonical_points(1);
    auto c2 = canonical_points(2);
    bool t1 = same(c1.A, P(5, 6, 1, 2)) && same(c1.B, P(11, 12, 1, 4)) && same(c1.C, P(1, 1, 1, 4)) &&
              same(c1.D, P(1, 1, 1, 2)) && same(c1.F, P(1, 1, 0, 1));
    bool t2 = same(c2.A, P(7, 10, 1, 2)) && same(c2.B, P(31, 40, 3, 8)) && same(c2.C, P(1, 1, 3, 8)) &&
              same(c2.D, P(3, 4, 1, 2));
    add(out, "region", "canonical_points", "d=1 A=(" + c1.A.pr.str() + "," + c1.A.qr.str() + ") d=2 A=(" +
                                               c2.A.pr.str() + "," + c2.A.qr.str() + ")", t1 && t2);
    struct Probe {
        ExponentPoint x;
        int d;
        EstimateTag tag;
    };
    const std::vector<Probe> probes = {
        {P(1, 2, 1, 2), 1, EstimateTag::Strong},         {P(1, 1, 1, 4), 1, EstimateTag::Weak},
        {P(3, 4, 1, 12), 1, EstimateTag::RestrictedWeak}, {P(11, 12, 1, 4), 1, EstimateTag::RestrictedWeak},
        {P(1, 2, 1, 6), 1, EstimateTag::Strong},         {P(3, 4, 0, 1), 1, EstimateTag::StrongFailsNoLorentzClaim}};
    int wrong = 0;
    for (const Probe& p : probes)
        if (classify_estimate(p.x, p.d).tag != p.tag) ++wrong;
    add(out, "region", "classifier_probes", "probes=" + std::to_string(probes.size()) + " wrong=" +
                                                std::to_string(wrong), wrong == 0);
}

void suite_laguerre(Lines& out) {
    double worst = 0.0;
    for (int k : {50, 100, 200})
        for (double alpha : {0.0, 1.0}) {
            double nu = 4.0 * k + 2.0 * alpha + 2.0;
            for (int i = 0; i < 40; ++i) {
                double t = nu / 64.0 * std::pow(16.0, i / 39.0);
                AsymptoticEval a = laguerre_asymptotic({k, alpha}, t);
                worst = std::max(worst, std::abs(normalized_laguerre({k, alpha}, t) - a.main) / a.error_envelope);
            }
        }
    add(out, "laguerre", "asymptotic_envelope", "max |L - main|/envelope=" + num(worst), worst <= 10.0);
}

void suite_kernel(Lines& out) {
    for (int k : {2, 4}) {
        SpectralIndex s{1, k};
        Grid g = default_grid(1, s.mu() + 2);
        Field K = varsigma_field(g, s);
        Field K2 = varsigma_field(g, {1, k + 1});
        double norm = lp_norm(K, 2.0);
        Field self = scale(twisted_convolution(K, K), 1.0 / (2.0 * kPi));
        Field cross = scale(twisted_convolution(K2, K), 1.0 / (2.0 * kPi));
        double idem = relative_l2_distance(self, K, norm);
        double ann = lp_norm(cross, 2.0) / norm;
        add(out, "kernel", "idempotence", "d=1 k=" + std::to_string(k) + " rel=" + num(idem), idem <= 0.02);
        add(out, "kernel", "annihilation", "d=1 k=" + std::to_string(k) + "," + std::to_string(k + 1) +
                                               " rel=" + num(ann), ann <= 0.02);
    }
}

void suite_corners(Lines& out) {
    double dev = 0.0;
    for (int k : {0, 10, 40}) {
        auto c = corner_norms({1, k});
        dev = std::max({dev, std::abs(c[1].value * 2.0 * kPi - 1.0),
                        std::abs(c[3].value * std::sqrt(2.0 * kPi) - 1.0)});
    }
    add(out, "corners", "d1_exact", "max relative deviation=" + num(dev), dev <= 1e-6);
    std::vector<double> mu, a, b;
    for (int k : {10, 20, 50, 100, 200}) {
        auto c = corner_norms({2, k});
        mu.push_back(2 * k + 2);
        b.push_back(c[1].value);
        a.push_back(c[3].value);
    }
    double s2 = loglog_fit(mu, a).slope, s1 = loglog_fit(mu, b).slope;
    add(out, "corners", "d2_slope_2_inf", "slope=" + num(s2), std::abs(s2 - 0.5) <= 0.02);
    add(out, "corners", "d2_slope_1_inf", "slope=" + num(s1), std::abs(s1 - 1.0) <= 0.05);
}

void suite_rings(Lines& out) {
    std::vector<double> mu, n1, n2, mn, ratio;
    for (int m : {101, 201, 401, 801}) {
        SpectralIndex s{1, (m - 1) / 2};
        RingMeasurement r = measure_ring(s);
        mu.push_back(m);
        n1.push_back(r.norm1);
        n2.push_back(r.norm2_sq);
        mn.push_back(r.near_origin_min);
        ratio.push_back(norm_lower_bound(s, {1.0, 0.25}, NormMethod::RingExtremizer, 0).value);
    }
    double a = loglog_fit(mu, n1).slope, b = loglog_fit(mu, n2).slope;
    double c = loglog_fit(mu, mn).slope, e = loglog_fit(mu, ratio).slope;
    add(out, "rings", "norm1_slope", "slope=" + num(a), a <= 0.5 + 0.1);
    add(out, "rings", "norm2sq_slope", "slope=" + num(b), b <= 0.0 + 0.1);
    add(out, "rings", "near_origin_slope", "slope=" + num(c), c >= -0.1);
    add(out, "rings", "ratio_slope_C", "slope=" + num(e), e >= -0.40);
}

void suite_routes(Lines& out) {
    for (int k : {2, 5}) {
        SpectralIndex s{1, k};
        Grid g = default_grid(1, s.mu());
        Field f = Field::sample(g, [](std::span<const double> z) {
            double dx = z[0] - 0.7, dy = z[1] + 0.4;
            return cplx(std::exp(-(dx * dx + dy * dy) / (2.0 * 1.5 * 1.5)));
        });
        Field e = project(f, s, ProjectionMethod::Eigen).field;
        Field kf = project(f, s, ProjectionMethod::Kernel).field;
        double rel = relative_l2_distance(kf, e, lp_norm(e, 2.0));
        add(out, "routes", "eigen_vs_kernel", "d=1 k=" + std::to_string(k) + " rel=" + num(rel), rel <= 0.01);
    }
}

void suite_windowed(Lines& out) {
    std::vector<double> x, y;
    for (int k = 2; k <= 6; ++k) {
        WindowedProxy p = windowed_proxy_1to2(1, 201, Window::psi_plus(k), 2000, {256.0, 4096.0, 65536.0});
        x.push_back(std::pow(2.0, -k));
        y.push_back(p.value);
    }
    double s = loglog_fit(x, y).slope;
    add(out, "windowed", "proxy_slope", "mu=201 k=2..6 slope=" + num(s), std::abs(s - 0.5) <= 0.1);
}

void suite_oscillatory(Lines& out) {
    std::vector<int> scales = {1, 2, 3, 4, 5, 6, 7, 8};
    auto rows = oscillatory_sweep({1e2, 1e3, 1e4}, scales);
    for (const SweepSpread& s : sweep_spread(rows))
        add(out, "oscillatory", "spread_" + s.kind, "spread=" + num(s.spread), s.spread < 5.0);
}

void suite_resolvent(Lines& out) {
    double worst = 0.0;
    for (int d : {1, 2, 3})
        for (double re : {1.2, 4.0, 7.3, 12.0, 30.5, 101.0})
            for (double im : {0.0, 0.6}) {
                SpectralParameterZ p = SpectralParameterZ::make({re + d - 1, im}, d);
                if (p.gap == 0.0) continue;
                DecompositionSymbols s = decomposition_symbols(p);
                for (int k = 0; k <= 300; ++k) {
                    int mu = 2 * k + d;
                    cplx exact = 1.0 / (double(mu) - p.z);
                    cplx total = s.I1(mu) + s.I2(mu) + s.I3(mu) + s.E(mu);
                    worst = std::max(worst, std::abs(total - exact) / std::abs(exact));
                }
            }
    add(out, "resolvent", "telescoping", "max relative=" + num(worst), worst <= 1e-10);
    RadialExpansion s = RadialExpansion::kernel(2, 10, 20);
    cplx z(22.0 + 1e-3, 0.0);
    double ratio = s.multiply([&](int m) { return 1.0 / (double(m) - z); }).l2_norm() / s.l2_norm();
    double dev = std::abs(ratio * (z.real() - 22.0) - 1.0);
    add(out, "resolvent", "eigenvector_blowup", "deviation=" + num(dev), dev <= 1e-10);
    PartialSumReport ps = partial_sum_sweep(1000);
    add(out, "resolvent", "partial_sum_bound", "n<=1000 constant=" + num(ps.constant), ps.constant < 4.0);
    for (auto [name, x] : {std::pair<const char*, ExponentPointD>{"half_half", {0.5, 0.5}},
                           std::pair<const char*, ExponentPointD>{"D_dual", {0.5, 0.25}}}) {
        SweepReport r = uniform_sweep(x, 2, 1.0, 50);
        add(out, "resolvent", std::string("sweep_") + name, "d=2 n<=50 diagnostic=" + num(r.diagnostic),
            r.diagnostic <= 3.0);
    }
}

} // namespace

const std::vector<std::string>& verify_suites() {
    static const std::vector<std::string> names = {"region", "laguerre", "kernel", "corners", "rings",
                                                   "routes", "windowed", "oscillatory", "resolvent"};
    return names;
}

std::vector<VerifyLine> run_verify(const std::string& suite, std::uint64_t seed) {
    Lines out;
    auto run_one = [&](const std::string& name) {
        if (name == "region") suite_region(out, seed);
        else if (name == "laguerre") suite_laguerre(out);
        else if (name == "kernel") suite_kernel(out);
        else if (name == "corners") suite_corners(out);
        else if (name == "rings") suite_rings(out);
        else if (name == "routes") suite_routes(out);
        else if (name == "windowed") suite_windowed(out);
        else if (name == "oscillatory") suite_oscillatory(out);
        else if (name == "resolvent") suite_resolvent(out);
        else throw DomainError("unknown verify suite '" + name + "'");
    };
    if (suite == "all")
        for (const std::string& name : verify_suites()) run_one(name);
    else
        run_one(suite);
    return out;
}

std::string format_verify(const std::vector<VerifyLine>& lines) {
    std::string s;
    for (const VerifyLine& l : lines)
        s += std::string(l.pass ? "PASS " : "FAIL ") + l.suite + "." + l.check + " " + l.detail + "\n";
    return s;
}

} // namespace twistlab
