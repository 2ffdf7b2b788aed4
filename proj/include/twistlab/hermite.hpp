#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "twistlab/field.hpp"

namespace twistlab {

struct MultiIndex {
    std::vector<int> c;
    int dim() const { return static_cast<int>(c.size()); }
    int order() const;
};

struct HermiteBasisTruncation {
    int alpha_max = 40; // cap on every component of alpha
    int d = 1;
};

inline constexpr int kQuadratureMargin = 20;

// Orthonormal Hermite function h_n(x), h_0 = pi^{-1/4} e^{-x^2/2}.
double hermite_fn(int n, double x);
void hermite_fn_sequence(double x, std::span<double> out);

// Gauss–Hermite node count for the Fourier–Wigner integral at total order
// |alpha|+|beta| and spatial extent |x| <= x_max.
int fourier_wigner_nodes(int order, double x_max);

// Phi_{alpha,beta}(z), z = (x_1..x_d, y_1..y_d). nodes = 0 picks the default rule;
// an explicit count below order + margin throws ConvergenceError.
cplx special_hermite(const MultiIndex& alpha, const MultiIndex& beta, std::span<const double> z,
                     int nodes = 0);

// Coefficients <f, Phi_{alpha,beta}> for alpha components <= a_max and beta
// components <= b_max. Layout: d = 1 -> [a][b]; d = 2 -> [a1][b1][a2][b2].
struct HermiteCoefficients {
    int d = 1;
    int a_max = 0;
    int b_max = 0;
    std::vector<cplx> c;

    std::size_t pair_count() const { return static_cast<std::size_t>(a_max + 1) * (b_max + 1); }
    // |beta| of a flat coefficient index.
    int level(std::size_t flat) const;
    double squared_mass() const;
};

// Separable analysis/synthesis on a grid (d = 1 or 2) using per-axis
// Fourier–Wigner tables: Phi_{a,b}(x_i, y_j) = (2 pi)^{-1/2} sum_m E(i,m) A_a(m,j) B_b(m,j).
class HermiteTransform {
public:
    HermiteTransform(const Grid& grid, int a_max, int b_max);

    const Grid& grid() const { return grid_; }
    int a_max() const { return a_max_; }
    int b_max() const { return b_max_; }
    int nodes() const { return nodes_; }

    HermiteCoefficients analyze(const Field& f) const;
    Field synthesize(const HermiteCoefficients& coeffs) const;

    // Phi_{alpha,beta} sampled on the grid (alpha, beta within the caps).
    Field basis_function(const MultiIndex& alpha, const MultiIndex& beta) const;

private:
    Eigen::MatrixXcd analyze_plane(const Eigen::MatrixXcd& F) const;   // n x n -> (a+1) x (b+1)
    Eigen::MatrixXcd synthesize_plane(const Eigen::MatrixXcd& C) const; // (a+1) x (b+1) -> n x n

    Grid grid_;
    int a_max_;
    int b_max_;
    int nodes_;
    Eigen::MatrixXcd E_;              // n x M, e^{i x_i xi_m}
    std::vector<Eigen::MatrixXd> A_;  // per y_j: (a_max+1) x M, sqrt(W_m) h_a(xi_m + y_j/2)
    std::vector<Eigen::MatrixXd> B_;  // per y_j: (b_max+1) x M, sqrt(W_m) h_b(xi_m - y_j/2)
};

enum class EigenOperator { Twisted, Hermite };

struct EigenrelationResult {
    double residual = 0.0;   // ||L Phi - lambda Phi||_2 / ||Phi||_2 on the stencil interior
    double eigenvalue = 0.0; // 2|beta| + d, or |alpha| + |beta| + d for the Hermite operator
    bool under_resolved = false;
};

// Applies L = -Delta + i sum_j (y_j d/dx_j - x_j d/dy_j) + |z|^2/4 (or the Hermite
// operator -Delta + |z|^2/4) with 4th-order centred differences.
EigenrelationResult verify_eigenrelation(const MultiIndex& alpha, const MultiIndex& beta,
                                         const Grid& grid,
                                         EigenOperator op = EigenOperator::Twisted);

} // namespace twistlab
