#include "twistlab/region.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "twistlab/error.hpp"

namespace twistlab {

namespace {

constexpr double kTol = 1e-12;

int sgn(const Rational& v) { return v.sign(); }
int sgn(double v) { return v > kTol ? 1 : (v < -kTol ? -1 : 0); }

template <class T>
T lift(const Rational& r);

template <>
Rational lift<Rational>(const Rational& r) { return r; }

template <>
double lift<double>(const Rational& r) { return r.to_double(); }

template <class T>
T half() { return lift<T>(Rational(1, 2)); }

void require_dimension(int d) {
    if (d < 1) throw DomainError("dimension d must be >= 1");
}

template <class T>
void require_square(const BasicPoint<T>& x) {
    if (!in_riesz_square(x))
        throw DomainError("exponent point outside [1/2,1]x[0,1/2]");
}

template <class T>
T cross(const BasicPoint<T>& o, const BasicPoint<T>& a, const BasicPoint<T>& b) {
    return (a.pr - o.pr) * (b.qr - o.qr) - (a.qr - o.qr) * (b.pr - o.pr);
}

template <class T>
bool on_segment(const BasicPoint<T>& x, const BasicPoint<T>& p, const BasicPoint<T>& q) {
    if (sgn(cross(p, q, x)) != 0) return false;
    T dot = (x.pr - p.pr) * (q.pr - p.pr) + (x.qr - p.qr) * (q.qr - p.qr);
    T len = (q.pr - p.pr) * (q.pr - p.pr) + (q.qr - p.qr) * (q.qr - p.qr);
    return sgn(dot) >= 0 && sgn(dot - len) <= 0;
}

// Closed convex polygon membership; vertex order may be either orientation
// and repeated or collinear vertices are tolerated.
template <class T>
bool in_convex_polygon(const BasicPoint<T>& x, const std::vector<BasicPoint<T>>& poly) {
    bool seen_pos = false;
    bool seen_neg = false;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % poly.size()];
        if (same_point(a, b)) continue;
        int s = sgn(cross(a, b, x));
        if (s > 0) seen_pos = true;
        if (s < 0) seen_neg = true;
        if (seen_pos && seen_neg) return false;
    }
    return true;
}

template <class T>
struct Geometry {
    BasicCanonicalPoints<T> pts;
    BasicPoint<T> center, corner_one_half, corner_one_zero;
};

template <class T>
BasicCanonicalPoints<T> lift_points(const CanonicalPoints& c) {
    auto lp = [](const ExponentPoint& p) { return BasicPoint<T>{lift<T>(p.pr), lift<T>(p.qr)}; };
    BasicCanonicalPoints<T> out;
    out.d = c.d;
    out.A = lp(c.A);
    out.B = lp(c.B);
    out.C = lp(c.C);
    out.D = lp(c.D);
    out.F = lp(c.F);
    out.A_dual = lp(c.A_dual);
    out.B_dual = lp(c.B_dual);
    out.C_dual = lp(c.C_dual);
    out.D_dual = lp(c.D_dual);
    out.F_dual = lp(c.F_dual);
    return out;
}

template <class T>
Geometry<T> geometry(int d) {
    Geometry<T> g;
    g.pts = lift_points<T>(canonical_points(d));
    g.center = {half<T>(), half<T>()};
    g.corner_one_half = {lift<T>(Rational(1)), half<T>()};
    g.corner_one_zero = {lift<T>(Rational(1)), lift<T>(Rational(0))};
    return g;
}

template <class T>
std::array<T, 4> affine_terms(const BasicPoint<T>& x, int d) {
    T dd = lift<T>(Rational(d));
    T one = lift<T>(Rational(1));
    T diff = x.pr - x.qr;
    T sum = x.pr + x.qr;
    return {
        -half<T>() * diff,                                    // R1
        dd * sum - lift<T>(Rational(2 * d + 1, 2)),           // R2
        lift<T>(Rational(2 * d - 1, 2)) - dd * sum,           // R2'
        dd * diff - one,                                      // R3
    };
}

} // namespace

std::string to_string(RegionTag tag) {
    switch (tag) {
    case RegionTag::R1: return "R1";
    case RegionTag::R2: return "R2";
    case RegionTag::R2Dual: return "R2_dual";
    case RegionTag::R3Closed: return "R3_closed";
    case RegionTag::SegmentBC: return "SegmentBC";
    case RegionTag::SegmentBCDual: return "SegmentBCdual";
    case RegionTag::OutsideRieszSquare: return "OutsideRieszSquare";
    }
    return "?";
}

std::string to_string(EstimateTag tag) {
    switch (tag) {
    case EstimateTag::Strong: return "Strong";
    case EstimateTag::Weak: return "Weak";
    case EstimateTag::RestrictedWeak: return "RestrictedWeak";
    case EstimateTag::StrongFailsNoLorentzClaim: return "StrongFailsNoLorentzClaim";
    }
    return "?";
}

std::string to_string(PentagonVerdict verdict) {
    switch (verdict) {
    case PentagonVerdict::InteriorOrEdge: return "interior-or-edge";
    case PentagonVerdict::RestrictedWeakVertex: return "restricted-weak-vertex";
    case PentagonVerdict::Outside: return "outside";
    }
    return "?";
}

template <class T>
bool in_riesz_square(const BasicPoint<T>& x) {
    T one = lift<T>(Rational(1));
    T zero = lift<T>(Rational(0));
    return sgn(x.pr - half<T>()) >= 0 && sgn(x.pr - one) <= 0 && sgn(x.qr - zero) >= 0 &&
           sgn(x.qr - half<T>()) <= 0;
}

template <class T>
BasicPoint<T> make_point(T pr, T qr) {
    BasicPoint<T> x{pr, qr};
    require_square(x);
    return x;
}

template <class T>
bool same_point(const BasicPoint<T>& a, const BasicPoint<T>& b) {
    return sgn(a.pr - b.pr) == 0 && sgn(a.qr - b.qr) == 0;
}

template <class T>
BasicPoint<T> dual_point(const BasicPoint<T>& x) {
    require_square(x);
    T one = lift<T>(Rational(1));
    return {one - x.qr, one - x.pr};
}

CanonicalPoints canonical_points(int d) {
    require_dimension(d);
    const std::int64_t D = d;
    CanonicalPoints c;
    c.d = d;
    c.A = {Rational(2 * D + 3, 2 * (2 * D + 1)), Rational(1, 2)};
    c.B = {Rational(4 * D * D + 8 * D - 1, 4 * D * (2 * D + 1)), Rational(2 * D - 1, 4 * D)};
    c.C = {Rational(1), Rational(2 * D - 1, 4 * D)};
    c.D = {Rational(D + 1, 2 * D), Rational(1, 2)};
    c.F = {Rational(4 * D * D + 4 * D - 4, 4 * D * (2 * D - 1)), Rational(D - 1, 2 * D - 1)};
    c.A_dual = dual_point(c.A);
    c.B_dual = dual_point(c.B);
    c.C_dual = dual_point(c.C);
    c.D_dual = dual_point(c.D);
    c.F_dual = dual_point(c.F);
    return c;
}

BasicCanonicalPoints<double> canonical_points_double(int d) {
    return lift_points<double>(canonical_points(d));
}

template <class T>
T rho(const BasicPoint<T>& x, int d) {
    require_dimension(d);
    require_square(x);
    auto t = affine_terms(x, d);
    T best = t[0];
    for (int i = 1; i < 4; ++i)
        if (t[i] > best) best = t[i];
    return best;
}

template <class T>
RegionTag classify_region(const BasicPoint<T>& x, int d) {
    require_dimension(d);
    if (!in_riesz_square(x)) return RegionTag::OutsideRieszSquare;
    auto g = geometry<T>(d);
    const auto& p = g.pts;
    if (on_segment(x, p.B, p.C)) return RegionTag::SegmentBC;
    if (on_segment(x, p.B_dual, p.C_dual)) return RegionTag::SegmentBCDual;
    if (in_convex_polygon(x, {g.center, p.A, p.B, p.B_dual, p.A_dual})) return RegionTag::R1;
    if (in_convex_polygon(x, {p.A, g.corner_one_half, p.C, p.B})) return RegionTag::R2;
    BasicPoint<T> corner_dual = {half<T>(), lift<T>(Rational(0))};
    if (in_convex_polygon(x, {p.A_dual, p.B_dual, p.C_dual, corner_dual})) return RegionTag::R2Dual;
    if (in_convex_polygon(x, {p.B, p.C, g.corner_one_zero, p.C_dual, p.B_dual}))
        return RegionTag::R3Closed;
    // Unreachable when the regions tile the square; kept as a guard.
    throw DomainError("point not covered by any region");
}

template <class T>
T rho_piecewise(const BasicPoint<T>& x, int d) {
    auto t = affine_terms(x, d);
    switch (classify_region(x, d)) {
    case RegionTag::R1: return t[0];
    case RegionTag::R2: return t[1];
    case RegionTag::R2Dual: return t[2];
    case RegionTag::R3Closed:
    case RegionTag::SegmentBC:
    case RegionTag::SegmentBCDual: return t[3];
    case RegionTag::OutsideRieszSquare: break;
    }
    throw DomainError("exponent point outside [1/2,1]x[0,1/2]");
}

double rho_2q(double q, int d) {
    require_dimension(d);
    if (!(q >= 2.0)) throw DomainError("rho_2q requires q >= 2");
    double inv = std::isinf(q) ? 0.0 : 1.0 / q;
    double breakpoint = 2.0 * (2 * d + 1) / (2 * d - 1);
    if (q <= breakpoint) return -0.5 * (0.5 - inv);
    return 0.5 * (d - 1) - d * inv;
}

Rational rho_2q_exact(const Rational& qr, int d) {
    require_dimension(d);
    if (qr.sign() < 0 || qr > Rational(1, 2)) throw DomainError("rho_2q requires q >= 2");
    Rational threshold(2 * d - 1, 2 * (2 * d + 1)); // 1/q at the breakpoint
    if (qr >= threshold) return Rational(-1, 2) * (Rational(1, 2) - qr);
    return Rational(d - 1, 2) - Rational(d) * qr;
}

template <class T>
BasicEstimateClass<T> classify_estimate(const BasicPoint<T>& x, int d) {
    RegionTag tag = classify_region(x, d);
    if (tag == RegionTag::OutsideRieszSquare)
        throw DomainError("exponent point outside [1/2,1]x[0,1/2]");
    BasicEstimateClass<T> out;
    out.exponent = rho(x, d);
    auto g = geometry<T>(d);
    if (tag == RegionTag::SegmentBC)
        out.tag = same_point(x, g.pts.B) ? EstimateTag::RestrictedWeak : EstimateTag::Weak;
    else if (tag == RegionTag::SegmentBCDual)
        out.tag = same_point(x, g.pts.B_dual) ? EstimateTag::RestrictedWeak
                                              : EstimateTag::StrongFailsNoLorentzClaim;
    else
        out.tag = EstimateTag::Strong;
    return out;
}

template <class T>
PentagonVerdict in_resolvent_pentagon(const BasicPoint<T>& x, int d) {
    if (d < 2) throw DomainError("resolvent pentagon requires d >= 2");
    require_square(x);
    auto g = geometry<T>(d);
    const auto& p = g.pts;
    if (same_point(x, p.F) || same_point(x, p.F_dual)) return PentagonVerdict::RestrictedWeakVertex;
    if (in_convex_polygon(x, {g.center, p.D, p.F, p.F_dual, p.D_dual}))
        return PentagonVerdict::InteriorOrEdge;
    return PentagonVerdict::Outside;
}

#define TWISTLAB_INSTANTIATE(T)                                                          \
    template bool in_riesz_square<T>(const BasicPoint<T>&);                              \
    template BasicPoint<T> make_point<T>(T, T);                                          \
    template bool same_point<T>(const BasicPoint<T>&, const BasicPoint<T>&);             \
    template BasicPoint<T> dual_point<T>(const BasicPoint<T>&);                          \
    template T rho<T>(const BasicPoint<T>&, int);                                        \
    template T rho_piecewise<T>(const BasicPoint<T>&, int);                              \
    template RegionTag classify_region<T>(const BasicPoint<T>&, int);                    \
    template BasicEstimateClass<T> classify_estimate<T>(const BasicPoint<T>&, int);      \
    template PentagonVerdict in_resolvent_pentagon<T>(const BasicPoint<T>&, int);

TWISTLAB_INSTANTIATE(Rational)
TWISTLAB_INSTANTIATE(double)

#undef TWISTLAB_INSTANTIATE

} // namespace twistlab
