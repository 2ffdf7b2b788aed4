#pragma once

#include <string>

#include "twistlab/rational.hpp"

namespace twistlab {

// (1/p, 1/q) on the Riesz square [1/2, 1] x [0, 1/2]; q = infinity is qr = 0.
template <class T>
struct BasicPoint {
    T pr{};
    T qr{};
};

using ExponentPoint = BasicPoint<Rational>;
using ExponentPointD = BasicPoint<double>;

template <class T>
struct BasicCanonicalPoints {
    int d = 1;
    BasicPoint<T> A, B, C, D, F;
    BasicPoint<T> A_dual, B_dual, C_dual, D_dual, F_dual;
};

using CanonicalPoints = BasicCanonicalPoints<Rational>;

enum class RegionTag { R1, R2, R2Dual, R3Closed, SegmentBC, SegmentBCDual, OutsideRieszSquare };
enum class EstimateTag { Strong, Weak, RestrictedWeak, StrongFailsNoLorentzClaim };
enum class PentagonVerdict { InteriorOrEdge, RestrictedWeakVertex, Outside };

template <class T>
struct BasicEstimateClass {
    EstimateTag tag = EstimateTag::Strong;
    T exponent{};
};

std::string to_string(RegionTag tag);
std::string to_string(EstimateTag tag);
std::string to_string(PentagonVerdict verdict);

// Validating constructor; throws DomainError outside the square (floats use a
// 1e-12 absolute tolerance).
template <class T>
BasicPoint<T> make_point(T pr, T qr);

template <class T>
bool in_riesz_square(const BasicPoint<T>& x);

template <class T>
bool same_point(const BasicPoint<T>& a, const BasicPoint<T>& b);

template <class T>
BasicPoint<T> dual_point(const BasicPoint<T>& x);

CanonicalPoints canonical_points(int d);
BasicCanonicalPoints<double> canonical_points_double(int d);

// Maximum of the four affine functions.
template <class T>
T rho(const BasicPoint<T>& x, int d);

// The region-wise affine formula selected by classify_region.
template <class T>
T rho_piecewise(const BasicPoint<T>& x, int d);

// Exponent of the L^2 -> L^q bound; q = infinity allowed.
double rho_2q(double q, int d);
Rational rho_2q_exact(const Rational& qr, int d);

template <class T>
RegionTag classify_region(const BasicPoint<T>& x, int d);

template <class T>
BasicEstimateClass<T> classify_estimate(const BasicPoint<T>& x, int d);

// Closed pentagon (1/2,1/2), D, F, F', D' with F and F' singled out; d >= 2.
template <class T>
PentagonVerdict in_resolvent_pentagon(const BasicPoint<T>& x, int d);

inline double to_double(const Rational& r) { return r.to_double(); }
inline double to_double(double v) { return v; }

inline ExponentPointD to_double(const ExponentPoint& x) {
    return {x.pr.to_double(), x.qr.to_double()};
}

} // namespace twistlab
