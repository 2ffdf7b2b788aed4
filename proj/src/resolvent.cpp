#include "twistlab/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "twistlab/error.hpp"
#include "twistlab/parallel.hpp"
#include "twistlab/radial.hpp"

namespace twistlab {

namespace {

double smooth_step(double u) {
    // 0 at u <= 0, 1 at u >= 1, C-infinity in between.
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    double g0 = std::exp(-1.0 / u), g1 = std::exp(-1.0 / (1.0 - u));
    return g0 / (g0 + g1);
}

void require_anchor(const SpectralParameterZ& z) {
    if (!z.anchored)
        throw DomainError("anchor out of range: decomposition needs Re z > d - 1/2");
}

std::string format_lambda(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

} // namespace

double spectral_gap(cplx z, int d) {
    double k = std::max(0.0, std::round((z.real() - d) / 2.0));
    return std::abs(z - cplx(2.0 * k + d, 0.0));
}

SpectralParameterZ SpectralParameterZ::make(cplx z, int d) {
    if (d < 1) throw DomainError("dimension must be positive");
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("z must be finite");
    SpectralParameterZ p;
    p.z = z;
    p.d = d;
    p.gap = spectral_gap(z, d);
    p.anchored = z.real() > d - 0.5;
    if (p.anchored) {
        p.n = static_cast<int>(std::floor((z.real() - d) / 2.0 + 0.5));
        p.a = p.n + (d - z.real()) / 2.0;
        p.b = -z.imag() / 2.0;
    }
    return p;
}

double zeta(double x) { return smooth_step(2.0 * (1.0 - std::abs(x))); }

std::function<cplx(int)> resolvent_multiplier(const SpectralParameterZ& z) {
    if (z.gap == 0.0) throw DomainError("z lies on the spectrum");
    cplx zz = z.z;
    return [zz](int mu) { return 1.0 / (cplx(mu, 0.0) - zz); };
}

ResolventResult resolvent_apply(const SpectralExpansion& e, const SpectralParameterZ& z) {
    if (z.d != e.d()) throw DomainError("z dimension does not match the field");
    auto m = resolvent_multiplier(z);
    ResolventResult res;
    res.field = e.apply(m);
    Field f = e.synthesize();
    double mass = lp_norm(f, 2.0);
    double frac = e.tail_fraction();
    res.tail_bound = frac < 1.0 ? mass * std::sqrt(frac / (1.0 - frac)) / z.gap : INFINITY;
    return res;
}

ResolventResult resolvent_apply(const Field& f, const SpectralParameterZ& z, SeriesTruncation trunc) {
    if (z.gap == 0.0) throw DomainError("z lies on the spectrum");
    SpectralExpansion e(f, trunc);
    return resolvent_apply(e, z);
}

DecompositionSymbols decomposition_symbols(const SpectralParameterZ& z) {
    require_anchor(z);
    if (z.gap == 0.0) throw DomainError("z lies on the spectrum");
    const int n = z.n, d = z.d;
    const cplx w = z.w(), zz = z.z;
    DecompositionSymbols s;
    s.I1 = [=](int mu) { return mu == 2 * n + d ? 1.0 / (2.0 * w) : cplx(0.0); };
    s.I2 = [=](int mu) {
        int k = n - (mu - d) / 2;
        if (n == 0 || k < 1 || k > n) return cplx(0.0);
        return w * zeta(double(k) / n) / ((double(k) + w) * (w - double(k)));
    };
    s.I3 = [=](int mu) {
        if (n == 0) return cplx(0.0);
        int j = (mu - d) / 2 - n;
        int k = std::abs(j);
        if (k < 1) return cplx(0.0);
        cplx v = zeta(double(k) / n) / (2.0 * (double(k) + w));
        if (j > 0) return v;
        return k <= n ? -v : cplx(0.0);
    };
    s.E = [=](int mu) {
        int kp = (mu - d) / 2;
        double cut = n == 0 ? (kp == 0 ? 1.0 : 0.0) : zeta(double(kp - n) / n);
        return (1.0 - cut) / (cplx(mu, 0.0) - zz);
    };
    return s;
}

cplx symbol_mn(const SpectralParameterZ& z, double t) {
    require_anchor(z);
    double keep;
    if (z.n == 0)
        keep = t == z.d ? 0.0 : 1.0;
    else
        keep = 1.0 - zeta((t - 2.0 * z.n - z.d) / (2.0 * z.n));
    if (keep == 0.0) return 0.0;
    return t * keep / (cplx(t, 0.0) - z.z);
}

double symbol_derivative_bound(const SpectralParameterZ& z, int l, double t_max) {
    require_anchor(z);
    if (z.n < 1) throw DomainError("symbol derivatives need anchor n >= 1");
    if (l < 0 || l > 2) throw DomainError("derivative order must be 0, 1 or 2");
    if (t_max <= 0.0) t_max = 8.0 * (2.0 * z.n + z.d) + 50.0;
    const double h = 1e-3 * z.n;
    const int samples = 20000;
    double worst = 0.0;
    for (int i = 0; i <= samples; ++i) {
        double t = h + (t_max - h) * i / samples;
        double v;
        if (l == 0) {
            v = std::abs(symbol_mn(z, t));
        } else if (l == 1) {
            v = std::abs((symbol_mn(z, t + h) - symbol_mn(z, t - h)) / (2.0 * h));
        } else {
            v = std::abs((symbol_mn(z, t + h) - 2.0 * symbol_mn(z, t) + symbol_mn(z, t - h)) / (h * h));
        }
        worst = std::max(worst, std::pow(1.0 + t, l) * v);
    }
    return worst;
}

Decomposition decompose(const SpectralParameterZ& z, const SpectralExpansion& e) {
    if (z.d != e.d()) throw DomainError("z dimension does not match the field");
    DecompositionSymbols s = decomposition_symbols(z);
    return {e.apply(s.I1), e.apply(s.I2), e.apply(s.I3), e.apply(s.E)};
}

Decomposition decompose(const SpectralParameterZ& z, const Field& f, SeriesTruncation trunc) {
    require_anchor(z);
    SpectralExpansion e(f, trunc);
    return decompose(z, e);
}

Field decompose_E_via_symbol(const SpectralParameterZ& z, const SpectralExpansion& e) {
    require_anchor(z);
    if (z.gap == 0.0) throw DomainError("z lies on the spectrum");
    SpectralExpansion inv = e.multiplied([](int mu) { return cplx(1.0 / mu, 0.0); });
    return inv.apply([&](int mu) { return symbol_mn(z, mu); });
}

Field fractional_power(const Field& f, double s, SeriesTruncation trunc) {
    if (!(s > 0.0)) throw DomainError("fractional power needs s > 0");
    SpectralExpansion e(f, trunc);
    return e.apply([s](int mu) { return cplx(std::pow(double(mu), -s), 0.0); });
}

double partial_sum_max(int n, double a, double b) {
    if (n < 1) throw DomainError("partial sums need n >= 1");
    if (std::hypot(a, b) < 0.5 - 1e-12) throw DomainError("partial sums need |(a, b)| >= 1/2");
    const double pi = 3.14159265358979323846;
    std::vector<cplx> coef(n + 1);
    for (int k = 1; k <= n; ++k) coef[k] = zeta(double(k) / n) / cplx(k + a, b);
    // The sum is odd in t, so [0, pi/2] suffices; refine near the Gibbs scale 1/n.
    std::vector<double> ts;
    const int uniform = 4096;
    for (int i = 0; i <= uniform; ++i) ts.push_back(0.5 * pi * i / uniform);
    for (int i = 1; i <= 400; ++i) {
        double t = 0.02 * i / n;
        if (t < 0.5 * pi) ts.push_back(t);
    }
    double worst = 0.0;
    for (double t : ts) {
        double c2 = 2.0 * std::cos(2.0 * t);
        double s_prev = 0.0, s_cur = std::sin(2.0 * t);
        cplx acc = 0.0;
        for (int k = 1; k <= n; ++k) {
            acc += coef[k] * s_cur;
            double s_next = c2 * s_cur - s_prev;
            s_prev = s_cur;
            s_cur = s_next;
        }
        worst = std::max(worst, std::abs(acc));
    }
    return worst;
}

PartialSumReport partial_sum_sweep(int n_max) {
    if (n_max < 1) throw DomainError("n_max must be positive");
    PartialSumReport rep;
    for (int n = 1; n <= std::min(n_max, 24); ++n) rep.ns.push_back(n);
    for (int i = 0; i <= 40 && n_max > 24; ++i) {
        int n = static_cast<int>(std::lround(24.0 * std::pow(double(n_max) / 24.0, i / 40.0)));
        if (n > rep.ns.back()) rep.ns.push_back(n);
    }
    const std::vector<std::pair<double, double>> ab = {
        {0.5, 0.0}, {-0.5, 0.0}, {0.0, 0.5}, {0.0, -0.5}, {0.3, 0.4},
        {-0.3, -0.4}, {-0.5, 0.25}, {0.5, 2.0}, {-0.5, 10.0}, {0.0, 50.0}};
    std::vector<double> vals(rep.ns.size() * ab.size());
    parallel_for(vals.size(), [&](std::size_t i) {
        auto [a, b] = ab[i % ab.size()];
        vals[i] = partial_sum_max(rep.ns[i / ab.size()], a, b);
    });
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (vals[i] > rep.constant) {
            rep.constant = vals[i];
            rep.worst_n = rep.ns[i / ab.size()];
            rep.worst_a = ab[i % ab.size()].first;
            rep.worst_b = ab[i % ab.size()].second;
        }
    }
    return rep;
}

std::vector<std::string> default_test_family() {
    return {"gauss:0.25", "gauss:1", "gauss:4", "level:nearest"};
}

SweepReport uniform_sweep(const ExponentPointD& x, int d, double c, int n_max,
                          const std::vector<std::string>& family) {
    if (d < 2) throw DomainError("uniform resolvent sweeps need d >= 2");
    if (!(c > 0.0)) throw DomainError("gap constant c must be positive");
    if (n_max < 0) throw DomainError("n_max must be nonnegative");
    if (family.empty()) throw DomainError("empty test family");
    SweepReport rep;
    rep.d = d;
    rep.x = make_point(x.pr, x.qr);
    rep.c = c;
    rep.n_max = n_max;
    rep.verdict = in_resolvent_pentagon(rep.x, d);
    if (rep.verdict == PentagonVerdict::Outside)
        throw DomainError("exponent point refused by the resolvent pentagon: " + to_string(rep.verdict));
    const double p = 1.0 / rep.x.pr;
    const double q = rep.x.qr == 0.0 ? INFINITY : 1.0 / rep.x.qr;

    std::vector<double> lambdas;
    bool levels = false;
    for (const std::string& id : family) {
        if (id == "level:nearest") {
            levels = true;
        } else if (id.rfind("gauss:", 0) == 0) {
            double lam = std::stod(id.substr(6));
            if (!(lam > 0.0)) throw DomainError("Gaussian parameter must be positive");
            lambdas.push_back(lam);
        } else {
            throw DomainError("unknown test family member '" + id + "'");
        }
    }
    int K = n_max + 2;
    for (double lam : lambdas) {
        double qq = std::abs((lam - 1.0) / (lam + 1.0));
        if (qq > 0.0) K = std::max(K, static_cast<int>(std::ceil(std::log(1e-17) / std::log(qq))));
    }
    RadialRule rule = radial_rule(d, K);

    struct Input {
        std::string id;
        RadialExpansion e;
        double p_norm;
    };
    auto make_input = [&](std::string id, RadialExpansion e) {
        std::vector<cplx> v = e.evaluate(rule.r);
        double pn = radial_lp_norm(rule, v, p);
        return Input{std::move(id), std::move(e), pn};
    };
    std::vector<Input> gauss;
    for (std::size_t i = 0; i < lambdas.size(); ++i)
        gauss.push_back(make_input("gauss:" + format_lambda(lambdas[i]), RadialExpansion::gaussian(d, lambdas[i], K)));

    std::vector<cplx> zs;
    for (int n = 0; n <= n_max; ++n) zs.emplace_back(2.0 * n + d + 1.0, 0.0);
    for (int n = 0; n <= n_max; ++n) zs.emplace_back(2.0 * n + d, c);

    std::vector<std::vector<SweepRow>> cells(zs.size());
    parallel_for(zs.size(), [&](std::size_t iz) {
        cplx z = zs[iz];
        double gap = spectral_gap(z, d);
        auto m = [z](int mu) { return 1.0 / (cplx(mu, 0.0) - z); };
        auto ratio = [&](const Input& in) {
            std::vector<cplx> v = in.e.multiply(m).evaluate(rule.r);
            return radial_lp_norm(rule, v, q) / in.p_norm;
        };
        for (const Input& in : gauss) cells[iz].push_back({z, gap, in.id, ratio(in)});
        if (levels) {
            double t = (z.real() - d) / 2.0;
            std::vector<int> ks;
            int lo = static_cast<int>(std::floor(t)), hi = static_cast<int>(std::ceil(t));
            ks.push_back(std::max(0, lo));
            if (hi != lo && hi <= K) ks.push_back(hi);
            for (int k : ks) {
                Input in = make_input("level:" + std::to_string(k), RadialExpansion::kernel(d, k, K));
                cells[iz].push_back({z, gap, in.id, ratio(in)});
            }
        }
    });
    double hi = 0.0, lo = INFINITY;
    for (auto& cell : cells) {
        double best = 0.0;
        for (SweepRow& r : cell) {
            best = std::max(best, r.ratio);
            rep.rows.push_back(std::move(r));
        }
        rep.per_z_max.push_back(best);
        hi = std::max(hi, best);
        lo = std::min(lo, best);
    }
    rep.diagnostic = lo > 0.0 ? hi / lo : INFINITY;
    return rep;
}

std::vector<double> fractional_probe(const ExponentPointD& x, int d, double s,
                                     const std::vector<double>& lambdas) {
    if (!(s > 0.0)) throw DomainError("fractional power needs s > 0");
    ExponentPointD pt = make_point(x.pr, x.qr);
    const double p = 1.0 / pt.pr;
    const double q = pt.qr == 0.0 ? INFINITY : 1.0 / pt.qr;
    for (double lam : lambdas)
        if (!(lam > 0.0)) throw DomainError("Gaussian parameter must be positive");
    std::vector<double> out(lambdas.size());
    parallel_for(lambdas.size(), [&](std::size_t i) {
        double lam = lambdas[i];
        double qq = std::abs((lam - 1.0) / (lam + 1.0));
        int K = qq > 0.0 ? std::max(8, static_cast<int>(std::ceil(std::log(1e-17) / std::log(qq)))) : 8;
        RadialRule rule = radial_rule(d, K);
        std::vector<cplx> f(rule.r.size());
        for (std::size_t j = 0; j < f.size(); ++j) f[j] = std::exp(-lam * rule.r[j] * rule.r[j] / 4.0);
        RadialExpansion e = RadialExpansion::gaussian(d, lam, K);
        std::vector<cplx> g =
            e.multiply([s](int mu) { return cplx(std::pow(double(mu), -s), 0.0); }).evaluate(rule.r);
        out[i] = radial_lp_norm(rule, g, q) / radial_lp_norm(rule, f, p);
    });
    return out;
}

} // namespace twistlab
