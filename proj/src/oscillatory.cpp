#include "twistlab/oscillatory.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>

#include "twistlab/error.hpp"
#include "twistlab/parallel.hpp"

namespace twistlab {

namespace {

constexpr double kPi = std::numbers::pi;

void require_regular(double t) {
    if (std::abs(std::sin(t)) < 1e-14)
        throw DomainError("phase is singular at t in pi Z");
}

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    cplx value;
    double error;
};

class Integrator {
public:
    Integrator(const PhaseParams& p, const std::function<double(double)>& amp)
        : p_(p), amp_(amp) {}

    cplx integrand(double t) const {
        double a = amp_(t);
        if (a == 0.0) return 0.0;
        return a * std::exp(cplx(0.0, p_.mu * phase(p_, t)));
    }

    Panel kronrod(double a, double b) const {
        double c = 0.5 * (a + b), hw = 0.5 * (b - a);
        cplx fc = integrand(c);
        cplx k = kWgk[7] * fc, g = kWg[3] * fc;
        for (int i = 0; i < 7; ++i) {
            cplx f1 = integrand(c - hw * kXgk[i]), f2 = integrand(c + hw * kXgk[i]);
            k += kWgk[i] * (f1 + f2);
            if (i % 2 == 1) g += kWg[i / 2] * (f1 + f2);
        }
        return {k * hw, std::abs((k - g) * hw)};
    }

    // Levin collocation on Chebyshev–Lobatto points: p' + i mu phi' p = amp, so
    // the integral is p e^{i mu phi} evaluated between the endpoints.
    cplx levin(double a, double b, int N) const {
        Eigen::VectorXd x(N + 1);
        for (int i = 0; i <= N; ++i) x(i) = std::cos(kPi * i / N);
        Eigen::MatrixXcd A(N + 1, N + 1);
        Eigen::VectorXcd rhs(N + 1);
        double scale = 2.0 / (b - a);
        for (int i = 0; i <= N; ++i) {
            double ci = (i == 0 || i == N) ? 2.0 : 1.0;
            double diag = 0.0;
            for (int j = 0; j <= N; ++j) {
                if (i == j) continue;
                double cj = (j == 0 || j == N) ? 2.0 : 1.0;
                double v = (ci / cj) * (((i + j) % 2) ? -1.0 : 1.0) / (x(i) - x(j));
                A(i, j) = v * scale;
                diag -= v;
            }
            double t = 0.5 * (a + b) + 0.5 * (b - a) * x(i);
            A(i, i) = cplx(diag * scale, p_.mu * phase_d1(p_, t));
            rhs(i) = amp_(t);
        }
        Eigen::VectorXcd sol = A.partialPivLu().solve(rhs);
        return sol(0) * std::exp(cplx(0.0, p_.mu * phase(p_, b))) -
               sol(N) * std::exp(cplx(0.0, p_.mu * phase(p_, a)));
    }

    bool has_stationary_point(double a, double b) const {
        if (p_.separation == 0.0) return false;
        if (p_.separation >= 2.0) {
            // sin^2 t = s^2/4 >= 1 only at t = pi/2 + m pi when s = 2.
            if (p_.separation > 2.0) return false;
            double m = std::ceil((a - kPi / 2) / kPi);
            return kPi / 2 + m * kPi <= b;
        }
        double ts = std::asin(p_.separation / 2.0);
        for (double base : {ts, -ts}) {
            double m = std::ceil((a - base) / kPi);
            if (base + m * kPi <= b) return true;
        }
        return false;
    }

    // Sampled phase change mu max|phi'| (b - a) and mu min|phi'| (b - a).
    std::pair<double, double> phase_range(double a, double b) const {
        double lo = INFINITY, hi = 0.0;
        for (int i = 0; i <= 16; ++i) {
            double t = a + (b - a) * i / 16.0;
            double v = std::abs(phase_d1(p_, t));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return {p_.mu * hi * (b - a), p_.mu * lo * (b - a)};
    }

    OscillatoryValue run(double A, double B, const QuadratureOptions& opt) const {
        // Amplitude scale for the absolute tolerance.
        double mass = 0.0;
        const int m = 2048;
        for (int i = 0; i <= m; ++i) {
            double w = (i == 0 || i == m) ? 0.5 : 1.0;
            mass += w * std::abs(amp_(A + (B - A) * i / m));
        }
        mass *= (B - A) / m;
        double tol = opt.tolerance * std::max(mass, 1e-300);

        OscillatoryValue out;
        std::vector<std::pair<double, double>> stack{{A, B}};
        while (!stack.empty()) {
            auto [a, b] = stack.back();
            stack.pop_back();
            double local = std::max(tol * (b - a) / (B - A), 1e-17 * mass);
            if (++out.panels > opt.max_panels || (b - a) < 1e-14 * (B - A)) {
                throw ConvergenceError("oscillatory quadrature did not converge", out.error);
            }
            auto [vmax, vmin] = phase_range(a, b);
            if (vmax <= 8.0) {
                Panel k = kronrod(a, b);
                if (k.error <= local) {
                    out.value += k.value;
                    out.error += k.error;
                    continue;
                }
            } else if (!has_stationary_point(a, b) && vmin >= 2.0) {
                cplx l16 = levin(a, b, 16), l32 = levin(a, b, 32);
                double err = std::abs(l32 - l16);
                if (err <= local) {
                    out.value += l32;
                    out.error += err;
                    continue;
                }
            }
            double c = 0.5 * (a + b);
            // Right half first so the left half is processed next (left-to-right order).
            stack.push_back({c, b});
            stack.push_back({a, c});
        }
        return out;
    }

private:
    PhaseParams p_;
    const std::function<double(double)>& amp_;
};

void require_params(const PhaseParams& p) {
    if (!(p.mu > 1.0)) throw DomainError("oscillatory integrals need mu > 1");
    if (!(p.separation >= 0.0)) throw DomainError("separation must be nonnegative");
}

} // namespace

double phase(const PhaseParams& p, double t) {
    require_regular(t);
    return t + 0.25 * p.separation * p.separation * std::cos(t) / std::sin(t) + p.cross_term;
}

double phase_d1(const PhaseParams& p, double t) {
    require_regular(t);
    double s = std::sin(t);
    return (4.0 * s * s - p.separation * p.separation) / (4.0 * s * s);
}

double phase_d2(const PhaseParams& p, double t) {
    require_regular(t);
    double s = std::sin(t);
    return 0.5 * std::cos(t) * p.separation * p.separation / (s * s * s);
}

double Partition::reconstruct(double t) const {
    double sum = psi0(t);
    for (int j = 3; j < 1100; ++j) {
        if (std::ldexp(std::abs(t), j) >= 1.0) break;
        sum += psi_plus(j)(t) + psi_minus(j)(t);
    }
    return sum;
}

double Partition::reconstruct_phi(double t) const {
    double sum = phi0(t);
    double s = std::remainder(t, kPi);
    double off = std::abs(std::abs(s) - kPi / 2);
    for (int k = 5; k < 1100; ++k) {
        if (std::ldexp(off, k) >= 1.0) break;
        sum += phi_k(k, t);
    }
    return sum;
}

Partition build_partition() { return {}; }

Window default_eta() {
    return Window::custom([](double t) { return psi(std::abs(t)); }, "psi(|t|)");
}

OscillatoryValue oscillatory_integral(const PhaseParams& p, const std::function<double(double)>& amp,
                                      double a, double b, const QuadratureOptions& opt) {
    require_params(p);
    if (!(b > a)) throw DomainError("integration interval is empty");
    return Integrator(p, amp).run(a, b, opt);
}

OscillatoryValue integral_Ij(const PhaseParams& p, int j, const Window& eta, const QuadratureOptions& opt) {
    if (j < 1) throw DomainError("I_j needs j >= 1");
    std::function<double(double)> amp = [&](double t) { return eta(std::ldexp(t, j)); };
    double lo = std::ldexp(0.25, -j), hi = std::ldexp(1.0, -j);
    OscillatoryValue left = oscillatory_integral(p, amp, -hi, -lo, opt);
    OscillatoryValue right = oscillatory_integral(p, amp, lo, hi, opt);
    return {left.value + right.value, left.error + right.error, left.panels + right.panels};
}

OscillatoryValue integral_Jk(const PhaseParams& p, int k, const Window& eta, const QuadratureOptions& opt) {
    if (k < 1) throw DomainError("J_k needs k >= 1");
    std::function<double(double)> amp = [&](double t) {
        return psi0(t) * eta(std::ldexp(t - kPi / 2, k));
    };
    double lo = std::ldexp(0.25, -k), hi = std::ldexp(1.0, -k);
    OscillatoryValue left = oscillatory_integral(p, amp, kPi / 2 - hi, kPi / 2 - lo, opt);
    OscillatoryValue right = oscillatory_integral(p, amp, kPi / 2 + lo, kPi / 2 + hi, opt);
    return {left.value + right.value, left.error + right.error, left.panels + right.panels};
}

OscillatoryValue integral_J0(const PhaseParams& p, const QuadratureOptions& opt) {
    std::function<double(double)> amp = [](double t) { return phi0(t); };
    // psi^0 vanishes on |t| < 1/32, so the endpoints are never touched.
    return oscillatory_integral(p, amp, 1.0 / 32.0, kPi - 1.0 / 32.0, opt);
}

std::vector<double> separation_grid(int scale) {
    std::vector<double> g = {0.0, std::ldexp(1.0, -scale - 4), std::ldexp(1.0, -scale), 0.5, 1.5, 2.0, 2.5};
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end()); // 2^{-1} = 1/2
    return g;
}

std::vector<OscillatoryRow> oscillatory_sweep(const std::vector<double>& mus, const std::vector<int>& scales,
                                              const QuadratureOptions& opt) {
    std::vector<OscillatoryRow> rows;
    for (const char* kind : {"I", "J"})
        for (double mu : mus)
            for (int s : scales)
                for (double sep : separation_grid(s)) rows.push_back({kind, mu, s, sep});
    for (double mu : mus)
        for (double sep : separation_grid(0)) rows.push_back({"J0", mu, 0, sep});
    Window eta = default_eta();
    parallel_for(rows.size(), [&](std::size_t i) {
        OscillatoryRow& r = rows[i];
        PhaseParams p{r.separation, 0.0, r.mu};
        OscillatoryValue v;
        double norm = std::sqrt(r.mu);
        if (r.kind == "I") {
            v = integral_Ij(p, r.scale, eta, opt);
            norm *= std::pow(2.0, 0.5 * r.scale);
        } else if (r.kind == "J") {
            v = integral_Jk(p, r.scale, eta, opt);
            norm *= std::pow(2.0, -0.5 * r.scale);
        } else {
            v = integral_J0(p, opt);
        }
        r.abs_value = std::abs(v.value);
        r.normalized = r.abs_value * norm;
        r.error = v.error;
    });
    return rows;
}

std::vector<SweepSpread> sweep_spread(const std::vector<OscillatoryRow>& rows) {
    std::vector<SweepSpread> out;
    for (const char* kind : {"I", "J", "J0"}) {
        std::map<double, double> best;
        for (const auto& r : rows)
            if (r.kind == kind) best[r.mu] = std::max(best[r.mu], r.normalized);
        if (best.empty()) continue;
        SweepSpread s;
        s.kind = kind;
        double lo = INFINITY, hi = 0.0;
        for (auto [mu, c] : best) {
            s.mus.push_back(mu);
            s.constants.push_back(c);
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        s.spread = hi / lo;
        out.push_back(s);
    }
    return out;
}

} // namespace twistlab
