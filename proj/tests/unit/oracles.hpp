#pragma once

// Test-side reference computations, deliberately independent of the library's
// own recurrences and quadrature code.

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <vector>

namespace oracle {

using big = boost::multiprecision::cpp_dec_float_50;

// Direct summation of sum_j C(k+alpha, k-j) (-t)^j / j! in 50-digit arithmetic.
inline double laguerre_sum(int k, double alpha, double t) {
    big sum = 0;
    big tt = t;
    for (int j = 0; j <= k; ++j) {
        // C(k+alpha, k-j) = Gamma(k+alpha+1) / (Gamma(k-j+1) Gamma(alpha+j+1))
        big binom = 1;
        for (int m = 1; m <= k - j; ++m) binom = binom * (big(alpha) + j + m) / m;
        big term = binom * boost::multiprecision::pow(-tt, j);
        for (int m = 2; m <= j; ++m) term /= m;
        sum += term;
    }
    return sum.convert_to<double>();
}

struct Rule {
    std::vector<double> x;
    std::vector<double> scaled_w; // w_i e^{x_i} x_i^{-alpha}
};

// Gauss–Laguerre nodes for the weight t^alpha e^{-t} from the Jacobi matrix; weights
// from the closed form Gamma(n+alpha+1) x / (n! (n+1)^2 L_{n+1}(x)^2), evaluated with
// the 50-digit direct sum and already divided by the weight function.
inline Rule gauss_laguerre(int n, double alpha) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        J(i, i) = 2.0 * i + alpha + 1.0;
        if (i + 1 < n) J(i, i + 1) = J(i + 1, i) = -std::sqrt((i + 1.0) * (i + 1.0 + alpha));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
    Rule r;
    double log_c = std::lgamma(n + alpha + 1.0) - std::lgamma(n + 1.0) - 2.0 * std::log(n + 1.0);
    for (int i = 0; i < n; ++i) {
        double x = es.eigenvalues()(i);
        double l = laguerre_sum(n + 1, alpha, x);
        double log_w = log_c + std::log(x) - 2.0 * std::log(std::abs(l));
        r.x.push_back(x);
        r.scaled_w.push_back(std::exp(log_w + x - alpha * std::log(x)));
    }
    return r;
}

// Composite Simpson rule on [a, b] with m (even) panels.
template <class F>
auto simpson(F f, double a, double b, int m) {
    double h = (b - a) / m;
    decltype(f(a)) s = f(a) + f(b);
    for (int i = 1; i < m; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

} // namespace oracle
