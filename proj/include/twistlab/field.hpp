#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace twistlab {

using cplx = std::complex<double>;

inline constexpr std::size_t kDefaultPointBudget = std::size_t{1} << 25;
inline constexpr double kDefaultPairBudget = 4e10;

// Uniform cube grid on R^{2d}: per axis x_i = (i - n/2) h, h = 2R/n, i = 0..n-1.
// Axis order is (x_1..x_d, y_1..y_d), flattened row-major.
struct Grid {
    int d = 1;
    double R = 1.0;
    int n = 2;

    double h() const { return 2.0 * R / n; }
    int axes() const { return 2 * d; }
    std::size_t size() const;
    double coord(int i) const { return (i - n / 2) * h(); }
    double cell_volume() const;
    // Integer offsets i - n/2 of every axis for a flat index.
    void offsets(std::size_t flat, int* out) const;
    std::size_t flat(const int* offsets) const;

    static Grid make(int d, double R, int n, std::size_t point_budget = kDefaultPointBudget);
    friend bool operator==(const Grid&, const Grid&) = default;
};

// R = 2 sqrt(mu) + 4 and h <= min(pi / (4 sqrt(mu)), R / 64), n even.
Grid default_grid(int d, double mu, std::size_t point_budget = kDefaultPointBudget);
bool resolves(const Grid& g, double mu);
void require_resolves(const Grid& g, double mu);

// Immutable complex samples on a grid. Copies share storage.
class Field {
public:
    Field() = default;
    Field(Grid grid, std::vector<cplx> samples);

    static Field zeros(const Grid& grid);
    // fn receives the 2d coordinates of a grid point.
    static Field sample(const Grid& grid, const std::function<cplx(std::span<const double>)>& fn);

    const Grid& grid() const { return grid_; }
    std::span<const cplx> samples() const { return {data_->data(), data_->size()}; }
    cplx operator[](std::size_t i) const { return (*data_)[i]; }
    std::size_t size() const { return data_ ? data_->size() : 0; }
    std::size_t nonzeros() const;

private:
    Grid grid_;
    std::shared_ptr<const std::vector<cplx>> data_ = std::make_shared<const std::vector<cplx>>();
};

Field scale(const Field& f, cplx c);
Field axpy(cplx a, const Field& x, const Field& y); // a x + y
Field map_samples(const Field& f, const std::function<cplx(cplx)>& op);

// Riemann-sum norms; p = infinity gives the max.
double lp_norm(const Field& f, double p);
// Weak L^{q,infinity} and L^{p,1} norms from the sorted sample distribution.
double lorentz_weak_norm(const Field& f, double q);
double lorentz_p1_norm(const Field& f, double p);
// <f, g> = h^{2d} sum f conj(g).
cplx inner(const Field& f, const Field& g);
double relative_l2_distance(const Field& a, const Field& b, double reference);

struct ConvolutionOptions {
    double phase_scale = 1.0; // multiplies Im(z . conj w); m != 1 gives the scaled kernels
    double pair_budget = kDefaultPairBudget;
};

// (f x g)(z) = sum_w f(z-w) g(w) e^{(i s/2) Im(z . conj w)} h^{2d}, zero outside the cube.
// Loops over the sparser factor.
Field twisted_convolution(const Field& f, const Field& g, const ConvolutionOptions& opt = {});

// (f x K)(z) at the given output points for an analytic kernel K evaluated at z - u.
std::vector<cplx> twisted_convolution_at(const Field& f,
                                         const std::function<cplx(std::span<const double>)>& kernel,
                                         const std::vector<std::vector<double>>& points,
                                         double phase_scale = 1.0);

nlohmann::json to_twf(const Field& f);
Field from_twf(const nlohmann::json& j);
void write_twf(const std::string& path, const Field& f);
Field read_twf(const std::string& path);

} // namespace twistlab
