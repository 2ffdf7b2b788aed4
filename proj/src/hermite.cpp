#include "twistlab/hermite.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "twistlab/error.hpp"
#include "twistlab/parallel.hpp"
#include "twistlab/quadrature.hpp"

namespace twistlab {

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

void check_pair(const MultiIndex& alpha, const MultiIndex& beta) {
    if (alpha.dim() != beta.dim() || alpha.dim() < 1)
        throw DomainError("multi-index dimensions disagree");
    for (int v : alpha.c)
        if (v < 0) throw DomainError("multi-index components must be >= 0");
    for (int v : beta.c)
        if (v < 0) throw DomainError("multi-index components must be >= 0");
}

} // namespace

int MultiIndex::order() const { return std::accumulate(c.begin(), c.end(), 0); }

double hermite_fn(int n, double x) {
    if (n < 0) throw DomainError("Hermite index must be >= 0");
    std::vector<double> seq(n + 1);
    hermite_fn_sequence(x, seq);
    return seq[n];
}

void hermite_fn_sequence(double x, std::span<double> out) {
    if (out.empty()) return;
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    out[0] = cur;
    for (std::size_t j = 0; j + 1 < out.size(); ++j) {
        double next = std::sqrt(2.0 / (j + 1.0)) * x * cur - std::sqrt(j / (j + 1.0)) * prev;
        prev = cur;
        cur = next;
        out[j + 1] = cur;
    }
}

int fourier_wigner_nodes(int order, double x_max) {
    int base = std::max(40, 2 * order + kQuadratureMargin);
    return base + static_cast<int>(std::ceil(0.5 * x_max * x_max));
}

cplx special_hermite(const MultiIndex& alpha, const MultiIndex& beta, std::span<const double> z,
                     int nodes) {
    check_pair(alpha, beta);
    const int d = alpha.dim();
    if (static_cast<int>(z.size()) != 2 * d) throw DomainError("point dimension mismatch");
    int order = alpha.order() + beta.order();
    if (nodes != 0 && nodes < order + kQuadratureMargin)
        throw ConvergenceError("Fourier-Wigner quadrature needs at least " +
                                   std::to_string(order + kQuadratureMargin) + " nodes",
                               nodes);
    cplx value = 1.0;
    for (int j = 0; j < d; ++j) {
        double x = z[j];
        double y = z[d + j];
        int a = alpha.c[j];
        int b = beta.c[j];
        int M = nodes != 0 ? nodes : fourier_wigner_nodes(a + b, std::abs(x));
        const auto& rule = gauss_hermite(M);
        std::vector<double> ha(a + 1), hb(b + 1);
        cplx s{};
        for (int m = 0; m < M; ++m) {
            double xi = rule.nodes[m];
            hermite_fn_sequence(xi + 0.5 * y, ha);
            hermite_fn_sequence(xi - 0.5 * y, hb);
            s += rule.scaled_weights[m] * std::polar(1.0, x * xi) * ha[a] * hb[b];
        }
        value *= kInvSqrt2Pi * s;
    }
    return value;
}

int HermiteCoefficients::level(std::size_t flat) const {
    std::size_t B = static_cast<std::size_t>(b_max + 1);
    std::size_t P = pair_count();
    if (d == 1) return static_cast<int>(flat % B);
    std::size_t p1 = flat / P;
    std::size_t p2 = flat % P;
    return static_cast<int>(p1 % B + p2 % B);
}

double HermiteCoefficients::squared_mass() const {
    double s = 0.0;
    for (cplx v : c) s += std::norm(v);
    return s;
}

HermiteTransform::HermiteTransform(const Grid& grid, int a_max, int b_max)
    : grid_(grid), a_max_(a_max), b_max_(b_max) {
    if (grid.d > 2) throw DomainError("special Hermite grids are limited to d <= 2");
    if (a_max < 0 || b_max < 0) throw DomainError("truncation caps must be >= 0");
    const int n = grid.n;
    double x_max = grid.R;
    nodes_ = fourier_wigner_nodes(a_max + b_max, x_max);
    const auto& rule = gauss_hermite(nodes_);
    const int M = nodes_;
    E_.resize(n, M);
    for (int i = 0; i < n; ++i)
        for (int m = 0; m < M; ++m) E_(i, m) = std::polar(1.0, grid.coord(i) * rule.nodes[m]);
    A_.assign(n, Eigen::MatrixXd(a_max + 1, M));
    B_.assign(n, Eigen::MatrixXd(b_max + 1, M));
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t j) {
        double y = grid.coord(static_cast<int>(j));
        std::vector<double> ha(a_max + 1), hb(b_max + 1);
        for (int m = 0; m < M; ++m) {
            double sw = std::sqrt(rule.scaled_weights[m]);
            hermite_fn_sequence(rule.nodes[m] + 0.5 * y, ha);
            hermite_fn_sequence(rule.nodes[m] - 0.5 * y, hb);
            for (int a = 0; a <= a_max; ++a) A_[j](a, m) = sw * ha[a];
            for (int b = 0; b <= b_max; ++b) B_[j](b, m) = sw * hb[b];
        }
    });
}

Eigen::MatrixXcd HermiteTransform::analyze_plane(const Eigen::MatrixXcd& F) const {
    // c_ab = h^2 (2 pi)^{-1/2} sum_{m,j} A_a(m,j) B_b(m,j) G(m,j), G = E^H F.
    const int n = grid_.n;
    Eigen::MatrixXcd G = E_.adjoint() * F;
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(a_max_ + 1, b_max_ + 1);
    for (int j = 0; j < n; ++j) {
        Eigen::MatrixXcd scaled = A_[j].cast<cplx>() * G.col(j).asDiagonal();
        C.noalias() += scaled * B_[j].transpose().cast<cplx>();
    }
    double h = grid_.h();
    return C * (h * h * kInvSqrt2Pi);
}

Eigen::MatrixXcd HermiteTransform::synthesize_plane(const Eigen::MatrixXcd& C) const {
    // H(m,j) = sum_ab c_ab A_a(m,j) B_b(m,j); F = (2 pi)^{-1/2} E H.
    const int n = grid_.n;
    Eigen::MatrixXcd H(nodes_, n);
    for (int j = 0; j < n; ++j) {
        Eigen::MatrixXcd CB = C * B_[j].cast<cplx>(); // (a+1) x M
        H.col(j) = (A_[j].cast<cplx>().cwiseProduct(CB)).colwise().sum().transpose();
    }
    return (E_ * H) * kInvSqrt2Pi;
}

HermiteCoefficients HermiteTransform::analyze(const Field& f) const {
    if (!(f.grid() == grid_)) throw DomainError("field grid does not match the transform grid");
    const int n = grid_.n;
    HermiteCoefficients out;
    out.d = grid_.d;
    out.a_max = a_max_;
    out.b_max = b_max_;
    const int A = a_max_ + 1;
    const int B = b_max_ + 1;
    if (grid_.d == 1) {
        Eigen::MatrixXcd F(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) F(i, j) = f[static_cast<std::size_t>(i) * n + j];
        Eigen::MatrixXcd C = analyze_plane(F);
        out.c.resize(static_cast<std::size_t>(A) * B);
        for (int a = 0; a < A; ++a)
            for (int b = 0; b < B; ++b) out.c[static_cast<std::size_t>(a) * B + b] = C(a, b);
        return out;
    }
    // d = 2, axes (x1, x2, y1, y2): first contract the (x1, y1) plane for every
    // (x2, y2), then the (x2, y2) plane for every (a1, b1).
    const std::size_t nn = static_cast<std::size_t>(n) * n;
    const std::size_t P = static_cast<std::size_t>(A) * B;
    std::vector<cplx> stage(P * nn); // [(a1,b1)][(i2,j2)]
    parallel_for(nn, [&](std::size_t s) {
        std::size_t i2 = s / n, j2 = s % n;
        Eigen::MatrixXcd F(n, n);
        for (int i1 = 0; i1 < n; ++i1)
            for (int j1 = 0; j1 < n; ++j1)
                F(i1, j1) = f[((static_cast<std::size_t>(i1) * n + i2) * n + j1) * n + j2];
        Eigen::MatrixXcd C = analyze_plane(F);
        for (int a = 0; a < A; ++a)
            for (int b = 0; b < B; ++b) stage[(static_cast<std::size_t>(a) * B + b) * nn + s] = C(a, b);
    });
    out.c.resize(P * P);
    parallel_for(P, [&](std::size_t p1) {
        Eigen::MatrixXcd F(n, n);
        for (int i2 = 0; i2 < n; ++i2)
            for (int j2 = 0; j2 < n; ++j2) F(i2, j2) = stage[p1 * nn + static_cast<std::size_t>(i2) * n + j2];
        Eigen::MatrixXcd C = analyze_plane(F);
        for (int a = 0; a < A; ++a)
            for (int b = 0; b < B; ++b) out.c[p1 * P + static_cast<std::size_t>(a) * B + b] = C(a, b);
    });
    return out;
}

Field HermiteTransform::synthesize(const HermiteCoefficients& coeffs) const {
    if (coeffs.d != grid_.d || coeffs.a_max != a_max_ || coeffs.b_max != b_max_)
        throw DomainError("coefficient layout does not match the transform");
    const int n = grid_.n;
    const int A = a_max_ + 1;
    const int B = b_max_ + 1;
    std::vector<cplx> data(grid_.size());
    if (grid_.d == 1) {
        Eigen::MatrixXcd C(A, B);
        for (int a = 0; a < A; ++a)
            for (int b = 0; b < B; ++b) C(a, b) = coeffs.c[static_cast<std::size_t>(a) * B + b];
        Eigen::MatrixXcd F = synthesize_plane(C);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) data[static_cast<std::size_t>(i) * n + j] = F(i, j);
        return Field(grid_, std::move(data));
    }
    const std::size_t nn = static_cast<std::size_t>(n) * n;
    const std::size_t P = static_cast<std::size_t>(A) * B;
    std::vector<cplx> stage(P * nn); // [(a1,b1)][(i2,j2)]
    parallel_for(P, [&](std::size_t p1) {
        Eigen::MatrixXcd C(A, B);
        bool any = false;
        for (int a = 0; a < A; ++a)
            for (int b = 0; b < B; ++b) {
                C(a, b) = coeffs.c[p1 * P + static_cast<std::size_t>(a) * B + b];
                any = any || C(a, b) != cplx{};
            }
        if (!any) return;
        Eigen::MatrixXcd F = synthesize_plane(C);
        for (int i2 = 0; i2 < n; ++i2)
            for (int j2 = 0; j2 < n; ++j2) stage[p1 * nn + static_cast<std::size_t>(i2) * n + j2] = F(i2, j2);
    });
    parallel_for(nn, [&](std::size_t s) {
        std::size_t i2 = s / n, j2 = s % n;
        Eigen::MatrixXcd C(A, B);
        for (int a = 0; a < A; ++a)
            for (int b = 0; b < B; ++b) C(a, b) = stage[(static_cast<std::size_t>(a) * B + b) * nn + s];
        Eigen::MatrixXcd F = synthesize_plane(C);
        for (int i1 = 0; i1 < n; ++i1)
            for (int j1 = 0; j1 < n; ++j1)
                data[((static_cast<std::size_t>(i1) * n + i2) * n + j1) * n + j2] = F(i1, j1);
    });
    return Field(grid_, std::move(data));
}

Field HermiteTransform::basis_function(const MultiIndex& alpha, const MultiIndex& beta) const {
    check_pair(alpha, beta);
    if (alpha.dim() != grid_.d) throw DomainError("multi-index dimension does not match the grid");
    HermiteCoefficients c;
    c.d = grid_.d;
    c.a_max = a_max_;
    c.b_max = b_max_;
    std::size_t P = c.pair_count();
    c.c.assign(grid_.d == 1 ? P : P * P, cplx{});
    const std::size_t B = static_cast<std::size_t>(b_max_ + 1);
    for (int j = 0; j < grid_.d; ++j)
        if (alpha.c[j] > a_max_ || beta.c[j] > b_max_)
            throw DomainError("basis index exceeds the transform caps");
    if (grid_.d == 1)
        c.c[alpha.c[0] * B + beta.c[0]] = 1.0;
    else
        c.c[(alpha.c[0] * B + beta.c[0]) * P + alpha.c[1] * B + beta.c[1]] = 1.0;
    return synthesize(c);
}

EigenrelationResult verify_eigenrelation(const MultiIndex& alpha, const MultiIndex& beta,
                                         const Grid& grid, EigenOperator op) {
    check_pair(alpha, beta);
    const int d = grid.d;
    if (alpha.dim() != d) throw DomainError("multi-index dimension does not match the grid");
    EigenrelationResult res;
    int level = alpha.order() + beta.order();
    res.eigenvalue = op == EigenOperator::Twisted ? 2.0 * beta.order() + d : level + d;
    // Phi_{alpha,beta} lives in |z| <~ sqrt(2(|alpha|+|beta|) + 2) plus Gaussian tails and
    // oscillates on the scale of that radius; flag grids that cannot carry it.
    double extent = std::sqrt(2.0 * level + 2.0) + 6.0;
    res.under_resolved = grid.R < extent || !resolves(grid, level + d);

    int a_cap = *std::max_element(alpha.c.begin(), alpha.c.end());
    int b_cap = *std::max_element(beta.c.begin(), beta.c.end());
    HermiteTransform T(grid, a_cap, b_cap);
    Field phi = T.basis_function(alpha, beta);

    const int axes = grid.axes();
    const int n = grid.n;
    const double h = grid.h();
    std::vector<std::size_t> stride(axes);
    stride[axes - 1] = 1;
    for (int a = axes - 2; a >= 0; --a) stride[a] = stride[a + 1] * n;

    double num = 0.0, den = 0.0;
    std::vector<int> off(axes);
    for (std::size_t idx = 0; idx < phi.size(); ++idx) {
        grid.offsets(idx, off.data());
        bool interior = true;
        for (int a = 0; a < axes; ++a)
            if (off[a] + n / 2 < 2 || off[a] + n / 2 > n - 3) interior = false;
        if (!interior) continue;
        auto d1 = [&](int a) {
            std::size_t s = stride[a];
            return (-phi[idx + 2 * s] + 8.0 * phi[idx + s] - 8.0 * phi[idx - s] + phi[idx - 2 * s]) /
                   (12.0 * h);
        };
        auto d2 = [&](int a) {
            std::size_t s = stride[a];
            return (-phi[idx + 2 * s] + 16.0 * phi[idx + s] - 30.0 * phi[idx] + 16.0 * phi[idx - s] -
                    phi[idx - 2 * s]) /
                   (12.0 * h * h);
        };
        cplx lap{};
        double r2 = 0.0;
        for (int a = 0; a < axes; ++a) {
            lap += d2(a);
            r2 += std::pow(off[a] * h, 2);
        }
        cplx Lphi = -lap + 0.25 * r2 * phi[idx];
        if (op == EigenOperator::Twisted) {
            cplx rot{};
            for (int j = 0; j < d; ++j) rot += off[d + j] * h * d1(j) - off[j] * h * d1(d + j);
            Lphi += cplx(0.0, 1.0) * rot;
        }
        num += std::norm(Lphi - res.eigenvalue * phi[idx]);
        den += std::norm(phi[idx]);
    }
    res.residual = std::sqrt(num / den);
    return res;
}

} // namespace twistlab
