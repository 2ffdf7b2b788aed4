#include "twistlab/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "twistlab/error.hpp"

namespace twistlab {

QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw DomainError("Gauss-Legendre needs n >= 1");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
    QuadratureRule rule = gauss_legendre(n);
    double mid = 0.5 * (a + b);
    double half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = mid + half * rule.nodes[i];
        rule.weights[i] *= half;
    }
    return rule;
}

namespace {

// Orthonormal Hermite functions h_0..h_{n} at x; returns sum_{j<n} h_j^2 and h_n, h_{n-1}.
struct HermiteTail {
    double sum_sq;
    double hn;
    double hn1;
};

HermiteTail hermite_tail(int n, double x) {
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
        sum += cur * cur;
        double next = std::sqrt(2.0 / (j + 1)) * x * cur - std::sqrt(double(j) / (j + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return {sum, cur, prev};
}

HermiteRule build_hermite(int n) {
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        jacobi(i, i - 1) = std::sqrt(i / 2.0);
        jacobi(i - 1, i) = jacobi(i, i - 1);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi, Eigen::EigenvaluesOnly);
    HermiteRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    rule.scaled_weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = solver.eigenvalues()(i);
        // Newton polish on h_n(x) = 0 using h_n' = sqrt(2n) h_{n-1} - x h_n.
        for (int iter = 0; iter < 4; ++iter) {
            auto t = hermite_tail(n, x);
            double deriv = std::sqrt(2.0 * n) * t.hn1 - x * t.hn;
            if (deriv == 0.0) break;
            double dx = t.hn / deriv;
            x -= dx;
            if (std::abs(dx) < 1e-15 * (1.0 + std::abs(x))) break;
        }
        auto t = hermite_tail(n, x);
        rule.nodes[i] = x;
        rule.scaled_weights[i] = 1.0 / t.sum_sq;
        rule.weights[i] = rule.scaled_weights[i] * std::exp(-x * x);
    }
    // Enforce exact symmetry of the rule.
    for (int i = 0; i < n / 2; ++i) {
        int j = n - 1 - i;
        double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        double w = 0.5 * (rule.scaled_weights[i] + rule.scaled_weights[j]);
        rule.nodes[i] = -x;
        rule.nodes[j] = x;
        rule.scaled_weights[i] = rule.scaled_weights[j] = w;
        rule.weights[i] = rule.weights[j] = w * std::exp(-x * x);
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

} // namespace

const HermiteRule& gauss_hermite(int n) {
    if (n < 1) throw DomainError("Gauss-Hermite needs n >= 1");
    static std::mutex guard;
    static std::map<int, std::unique_ptr<HermiteRule>> cache;
    std::lock_guard<std::mutex> lock(guard);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<HermiteRule>(build_hermite(n));
    return *slot;
}

} // namespace twistlab
