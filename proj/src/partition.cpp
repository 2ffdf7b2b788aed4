#include "twistlab/window.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "twistlab/error.hpp"

namespace twistlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Reduce t to [-pi/2, pi/2) using pi-periodicity.
double reduce(double t) {
    double r = std::fmod(t + kPi / 2, kPi);
    if (r < 0) r += kPi;
    return r - kPi / 2;
}

// Reduce t to (0, pi].
double reduce_positive(double t) {
    double r = std::fmod(t, kPi);
    if (r <= 0) r += kPi;
    return r;
}

double psi_tilde(double s) { return psi(std::abs(s)); }

// sum_{k >= 5} psi~(2^k s); every active k has 2^k |s| in (1/4, 1).
double phi_sum(double s) {
    if (s == 0.0) return 1.0; // limit value; the sum is 1 in a punctured neighbourhood
    double a = std::abs(s);
    double sum = 0.0;
    int k0 = std::max(5, static_cast<int>(std::floor(std::log2(0.25 / a))));
    for (int k = k0; k <= k0 + 3; ++k) sum += psi(std::ldexp(a, k));
    return sum;
}

} // namespace

double bump(double t) {
    if (t <= 0.25 || t >= 1.0) return 0.0;
    return std::exp(-1.0 / ((t - 0.25) * (1.0 - t)));
}

double psi(double t) {
    if (t <= 0.25 || t >= 1.0) return 0.0;
    // Terms with 2^j t in (1/4, 1): j in (log2(1/(4t)), log2(1/t)).
    double den = 0.0;
    int j0 = static_cast<int>(std::floor(std::log2(0.25 / t)));
    for (int j = j0; j <= j0 + 3; ++j) den += bump(std::ldexp(t, j));
    return bump(t) / den;
}

double psi0(double t) {
    double a = std::abs(reduce(t));
    if (a == 0.0) return 0.0;
    double sum = 0.0;
    int j0 = std::max(3, static_cast<int>(std::floor(std::log2(0.25 / a))));
    for (int j = j0; j <= j0 + 3; ++j) sum += psi(std::ldexp(a, j));
    return std::clamp(1.0 - sum, 0.0, 1.0);
}

double phi_k(int k, double t) {
    if (k < 5) throw DomainError("phi_k is defined for k >= 5");
    double r = reduce_positive(t);
    return psi0(r) * psi_tilde(std::ldexp(r - kPi / 2, k));
}

double phi0(double t) {
    double r = reduce_positive(t);
    return psi0(r) * (1.0 - phi_sum(r - kPi / 2));
}

std::string Window::label() const { return name; }

Window Window::psi_plus(int j) {
    if (j < 0) throw DomainError("dyadic window scale must be >= 0 to fit in [-pi/2, pi/2]");
    return {WindowKind::DyadicPsiPlus, j, [j](double t) { return psi(std::ldexp(t, j)); },
            "psi+:" + std::to_string(j)};
}

Window Window::psi_minus(int j) {
    if (j < 0) throw DomainError("dyadic window scale must be >= 0 to fit in [-pi/2, pi/2]");
    return {WindowKind::DyadicPsiMinus, j, [j](double t) { return psi(-std::ldexp(t, j)); },
            "psi-:" + std::to_string(j)};
}

Window Window::phi(int k) {
    if (k < 5) throw DomainError("phi_k is defined for k >= 5");
    return {WindowKind::PhiK, k, [k](double t) { return phi_k(k, t); }, "phi:" + std::to_string(k)};
}

Window Window::phi_zero() { return {WindowKind::Phi0, 0, [](double t) { return phi0(t); }, "phi0"}; }

Window Window::psi_zero() { return {WindowKind::Psi0, 0, [](double t) { return psi0(t); }, "psi0"}; }

Window Window::custom(std::function<double(double)> fn, std::string name) {
    return {WindowKind::Custom, 0, std::move(fn), std::move(name)};
}

Window Window::parse(const std::string& text) {
    auto colon = text.find(':');
    std::string head = text.substr(0, colon);
    auto scale = [&]() {
        if (colon == std::string::npos) throw DomainError("window '" + text + "' needs a scale");
        return std::stoi(text.substr(colon + 1));
    };
    if (head == "psi+") return psi_plus(scale());
    if (head == "psi-") return psi_minus(scale());
    if (head == "phi") return phi(scale());
    if (head == "phi0") return phi_zero();
    if (head == "psi0") return psi_zero();
    if (head == "one") return custom([](double) { return 1.0; }, "one");
    throw DomainError("unknown window '" + text + "'");
}

WindowTransform window_hat(const Window& w, int m, int points) {
    // Periodic trapezoid over one period: endpoints share a weight of 1/2 each.
    double h = kPi / points;
    double re = 0.0, im = 0.0;
    for (int i = 0; i <= points; ++i) {
        double t = -kPi / 2 + i * h;
        double weight = (i == 0 || i == points) ? 0.5 : 1.0;
        double v = w(t) * weight;
        if (v == 0.0) continue;
        re += v * std::cos(m * t);
        im -= v * std::sin(m * t);
    }
    return {re * h, im * h};
}

} // namespace twistlab
