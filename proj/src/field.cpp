#include "twistlab/field.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "twistlab/encoding.hpp"
#include "twistlab/error.hpp"
#include "twistlab/parallel.hpp"

static_assert(std::endian::native == std::endian::little, "twf encoding assumes a little-endian host");

namespace twistlab {

std::size_t Grid::size() const {
    std::size_t s = 1;
    for (int a = 0; a < axes(); ++a) s *= static_cast<std::size_t>(n);
    return s;
}

double Grid::cell_volume() const { return std::pow(h(), axes()); }

void Grid::offsets(std::size_t flat, int* out) const {
    for (int a = axes() - 1; a >= 0; --a) {
        out[a] = static_cast<int>(flat % n) - n / 2;
        flat /= n;
    }
}

std::size_t Grid::flat(const int* off) const {
    std::size_t idx = 0;
    for (int a = 0; a < axes(); ++a) idx = idx * n + static_cast<std::size_t>(off[a] + n / 2);
    return idx;
}

Grid Grid::make(int d, double R, int n, std::size_t point_budget) {
    if (d < 1) throw DomainError("grid dimension must be >= 1");
    if (!(R > 0.0)) throw DomainError("grid half-width must be positive");
    if (n < 2 || n % 2 != 0) throw DomainError("grid points per axis must be even and >= 2");
    double total = std::pow(static_cast<double>(n), 2 * d);
    if (total > static_cast<double>(point_budget))
        throw BudgetError("grid has " + std::to_string(total) + " points, over the budget");
    return Grid{d, R, n};
}

Grid default_grid(int d, double mu, std::size_t point_budget) {
    if (!(mu > 0.0)) throw DomainError("eigenvalue must be positive");
    double R = 2.0 * std::sqrt(mu) + 4.0;
    double h = std::min(std::numbers::pi / (4.0 * std::sqrt(mu)), R / 64.0);
    int n = static_cast<int>(std::ceil(2.0 * R / h));
    if (n % 2) ++n;
    return Grid::make(d, R, n, point_budget);
}

bool resolves(const Grid& g, double mu) {
    return g.h() <= std::numbers::pi / (4.0 * std::sqrt(mu)) * (1.0 + 1e-12);
}

void require_resolves(const Grid& g, double mu) {
    if (!resolves(g, mu))
        throw DomainError("grid step " + std::to_string(g.h()) + " does not resolve mu = " +
                          std::to_string(mu));
}

Field::Field(Grid grid, std::vector<cplx> samples) : grid_(grid) {
    if (samples.size() != grid.size()) throw DomainError("sample count does not match the grid");
    data_ = std::make_shared<const std::vector<cplx>>(std::move(samples));
}

Field Field::zeros(const Grid& grid) { return Field(grid, std::vector<cplx>(grid.size())); }

Field Field::sample(const Grid& grid, const std::function<cplx(std::span<const double>)>& fn) {
    std::vector<cplx> data(grid.size());
    int axes = grid.axes();
    double h = grid.h();
    parallel_ranges(data.size(), [&](std::size_t b, std::size_t e) {
        std::vector<int> off(axes);
        std::vector<double> x(axes);
        for (std::size_t i = b; i < e; ++i) {
            grid.offsets(i, off.data());
            for (int a = 0; a < axes; ++a) x[a] = off[a] * h;
            data[i] = fn(x);
        }
    });
    return Field(grid, std::move(data));
}

std::size_t Field::nonzeros() const {
    return static_cast<std::size_t>(
        std::count_if(data_->begin(), data_->end(), [](cplx v) { return v != cplx{}; }));
}

Field scale(const Field& f, cplx c) {
    std::vector<cplx> out(f.samples().begin(), f.samples().end());
    for (auto& v : out) v *= c;
    return Field(f.grid(), std::move(out));
}

Field axpy(cplx a, const Field& x, const Field& y) {
    if (!(x.grid() == y.grid())) throw DomainError("grid mismatch");
    std::vector<cplx> out(x.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x[i] + y[i];
    return Field(x.grid(), std::move(out));
}

Field map_samples(const Field& f, const std::function<cplx(cplx)>& op) {
    std::vector<cplx> out(f.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(f[i]);
    return Field(f.grid(), std::move(out));
}

double lp_norm(const Field& f, double p) {
    if (!(p >= 1.0)) throw DomainError("lp_norm requires p >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (cplx v : f.samples()) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    if (p == 2.0)
        for (cplx v : f.samples()) s += std::norm(v);
    else if (p == 1.0)
        for (cplx v : f.samples()) s += std::abs(v);
    else
        for (cplx v : f.samples()) s += std::pow(std::abs(v), p);
    return std::pow(s * f.grid().cell_volume(), 1.0 / p);
}

namespace {

std::vector<double> sorted_moduli(const Field& f) {
    std::vector<double> a;
    a.reserve(f.size());
    for (cplx v : f.samples()) {
        double m = std::abs(v);
        if (m > 0.0) a.push_back(m);
    }
    std::sort(a.begin(), a.end(), std::greater<>());
    return a;
}

} // namespace

double lorentz_weak_norm(const Field& f, double q) {
    if (!(q >= 1.0)) throw DomainError("lorentz_weak_norm requires q >= 1");
    auto a = sorted_moduli(f);
    double V = f.grid().cell_volume();
    double best = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        // sup over lambda just below a_i counts every sample >= a_i.
        if (i + 1 < a.size() && a[i + 1] == a[i]) continue;
        double measure = static_cast<double>(i + 1) * V;
        best = std::max(best, std::isinf(q) ? a[i] : a[i] * std::pow(measure, 1.0 / q));
    }
    return best;
}

double lorentz_p1_norm(const Field& f, double p) {
    if (!(p >= 1.0)) throw DomainError("lorentz_p1_norm requires p >= 1");
    auto a = sorted_moduli(f);
    double V = f.grid().cell_volume();
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double next = i + 1 < a.size() ? a[i + 1] : 0.0;
        double measure = static_cast<double>(i + 1) * V;
        s += (a[i] - next) * (std::isinf(p) ? 1.0 : std::pow(measure, 1.0 / p));
    }
    return s;
}

cplx inner(const Field& f, const Field& g) {
    if (!(f.grid() == g.grid())) throw DomainError("grid mismatch");
    cplx s{};
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * std::conj(g[i]);
    return s * f.grid().cell_volume();
}

double relative_l2_distance(const Field& a, const Field& b, double reference) {
    return lp_norm(axpy(-1.0, b, a), 2.0) / reference;
}

namespace {

struct SparseEntry {
    std::size_t index;
    cplx value;
};

std::vector<SparseEntry> nonzero_entries(const Field& f) {
    std::vector<SparseEntry> out;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] != cplx{}) out.push_back({i, f[i]});
    return out;
}

// Phase factors e^{i c m} for integer m in [-M, M], or direct evaluation when
// the table would be large.
class PhaseTable {
public:
    PhaseTable(double c, long long M) : c_(c), M_(M) {
        if (M <= (1LL << 22)) {
            table_.resize(static_cast<std::size_t>(2 * M + 1));
            for (long long m = -M; m <= M; ++m)
                table_[static_cast<std::size_t>(m + M)] = std::polar(1.0, c * static_cast<double>(m));
        }
    }
    cplx operator()(long long m) const {
        if (!table_.empty()) return table_[static_cast<std::size_t>(m + M_)];
        return std::polar(1.0, c_ * static_cast<double>(m));
    }

private:
    double c_;
    long long M_;
    std::vector<cplx> table_;
};

} // namespace

Field twisted_convolution(const Field& f, const Field& g, const ConvolutionOptions& opt) {
    if (!(f.grid() == g.grid())) throw DomainError("twisted_convolution: grid mismatch");
    const Grid& grid = f.grid();
    const int d = grid.d;
    const int axes = grid.axes();
    const int n = grid.n;
    const int half = n / 2;

    // Loop over the nonzeros of the sparser factor. With w in supp g:
    //   (f x g)(z) = sum_w f(z-w) g(w) e^{(i s/2) Im(z . conj w)}
    // and with u in supp f (w = z - u):
    //   (f x g)(z) = sum_u f(u) g(z-u) e^{-(i s/2) Im(z . conj u)}.
    auto sf = nonzero_entries(f);
    auto sg = nonzero_entries(g);
    bool over_g = sg.size() <= sf.size();
    const auto& sparse = over_g ? sg : sf;
    const Field& dense = over_g ? f : g;
    double sign = over_g ? 1.0 : -1.0;

    double pairs = static_cast<double>(grid.size()) * static_cast<double>(sparse.size());
    if (pairs > opt.pair_budget)
        throw BudgetError("twisted convolution needs " + std::to_string(pairs) +
                          " kernel evaluations, over the budget");

    // Integer offsets of the sparse factor.
    std::vector<int> sparse_off(sparse.size() * axes);
    for (std::size_t s = 0; s < sparse.size(); ++s) grid.offsets(sparse[s].index, &sparse_off[s * axes]);

    long long M = static_cast<long long>(d) * 2LL * half * half;
    PhaseTable phase(sign * 0.5 * opt.phase_scale * grid.h() * grid.h(), M);
    const double vol = grid.cell_volume();

    std::vector<cplx> out(grid.size());
    parallel_ranges(grid.size(), [&](std::size_t b, std::size_t e) {
        std::vector<int> zoff(axes);
        for (std::size_t zi = b; zi < e; ++zi) {
            grid.offsets(zi, zoff.data());
            cplx acc{};
            for (std::size_t s = 0; s < sparse.size(); ++s) {
                const int* w = &sparse_off[s * axes];
                std::size_t idx = 0;
                bool inside = true;
                for (int a = 0; a < axes; ++a) {
                    int diff = zoff[a] - w[a];
                    if (diff < -half || diff >= half) {
                        inside = false;
                        break;
                    }
                    idx = idx * n + static_cast<std::size_t>(diff + half);
                }
                if (!inside) continue;
                long long m = 0;
                for (int j = 0; j < d; ++j)
                    m += static_cast<long long>(zoff[d + j]) * w[j] -
                         static_cast<long long>(zoff[j]) * w[d + j];
                acc += dense[idx] * sparse[s].value * phase(m);
            }
            out[zi] = acc * vol;
        }
    });
    return Field(grid, std::move(out));
}

std::vector<cplx> twisted_convolution_at(const Field& f,
                                         const std::function<cplx(std::span<const double>)>& kernel,
                                         const std::vector<std::vector<double>>& points,
                                         double phase_scale) {
    const Grid& grid = f.grid();
    const int d = grid.d;
    const int axes = grid.axes();
    auto sf = nonzero_entries(f);
    std::vector<double> coords(sf.size() * axes);
    {
        std::vector<int> off(axes);
        for (std::size_t s = 0; s < sf.size(); ++s) {
            grid.offsets(sf[s].index, off.data());
            for (int a = 0; a < axes; ++a) coords[s * axes + a] = off[a] * grid.h();
        }
    }
    std::vector<cplx> out(points.size());
    const double vol = grid.cell_volume();
    parallel_for(points.size(), [&](std::size_t p) {
        const auto& z = points[p];
        if (static_cast<int>(z.size()) != axes) throw DomainError("point dimension mismatch");
        std::vector<double> diff(axes);
        cplx acc{};
        for (std::size_t s = 0; s < sf.size(); ++s) {
            const double* u = &coords[s * axes];
            double im = 0.0; // Im(z . conj u)
            for (int j = 0; j < d; ++j) im += z[d + j] * u[j] - z[j] * u[d + j];
            for (int a = 0; a < axes; ++a) diff[a] = z[a] - u[a];
            acc += sf[s].value * kernel(diff) * std::polar(1.0, -0.5 * phase_scale * im);
        }
        out[p] = acc * vol;
    });
    return out;
}

nlohmann::json to_twf(const Field& f) {
    const auto& g = f.grid();
    std::vector<double> raw(2 * f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        raw[2 * i] = f[i].real();
        raw[2 * i + 1] = f[i].imag();
    }
    nlohmann::json j;
    j["magic"] = "TWF1";
    j["d"] = g.d;
    j["R"] = g.R;
    j["n"] = g.n;
    j["encoding"] = "le-f64-interleaved";
    j["data"] = base64_encode(raw.data(), raw.size() * sizeof(double));
    return j;
}

Field from_twf(const nlohmann::json& j) {
    try {
        if (j.at("magic").get<std::string>() != "TWF1") throw DomainError("not a TWF1 field");
        if (j.at("encoding").get<std::string>() != "le-f64-interleaved")
            throw DomainError("unsupported field encoding");
        Grid g = Grid::make(j.at("d").get<int>(), j.at("R").get<double>(), j.at("n").get<int>());
        auto bytes = base64_decode(j.at("data").get<std::string>());
        if (bytes.size() != g.size() * 2 * sizeof(double))
            throw DomainError("field payload size does not match the grid");
        std::vector<cplx> samples(g.size());
        for (std::size_t i = 0; i < samples.size(); ++i) {
            double re, im;
            std::memcpy(&re, &bytes[16 * i], 8);
            std::memcpy(&im, &bytes[16 * i + 8], 8);
            samples[i] = {re, im};
        }
        return Field(g, std::move(samples));
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed field file: ") + e.what());
    }
}

void write_twf(const std::string& path, const Field& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open " + path + " for writing");
    out << to_twf(f).dump() << "\n";
}

Field read_twf(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed field file: ") + e.what());
    }
    return from_twf(j);
}

} // namespace twistlab
