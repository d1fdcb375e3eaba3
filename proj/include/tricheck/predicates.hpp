#pragma once

// Exactly-decided geometric predicates. Each test first evaluates its
// determinant in plain binary64 and compares against a rigorously derived
// error bound (a floating-point filter); only when the filter cannot certify
// the sign does it fall back to error-free evaluation over power-of-two
// scaled integers. The returned sign is always the exact one.
//
// All predicate functions are pure; the optional PredicateStats pointer lets
// a caller accumulate call/fallback counters per thread and merge afterward.

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "tricheck/core.hpp"

namespace tricheck {

static_assert(std::numeric_limits<double>::is_iec559, "binary64 arithmetic required");

enum class Sign : int { Negative = -1, Zero = 0, Positive = 1 };

inline Sign sign_from_int(int s) { return s > 0 ? Sign::Positive : (s < 0 ? Sign::Negative : Sign::Zero); }
inline Sign opposite(Sign s) { return sign_from_int(-static_cast<int>(s)); }
inline int to_int(Sign s) { return static_cast<int>(s); }

// Machine constants the filters are built from. All values are exactly
// representable in binary64 (checked in the test suite by round-trip).
struct FilterConstants {
    static constexpr double u = 0x1p-53;     // rounding unit
    static constexpr double u_N = 0x1p-1022; // smallest positive normalized
    static constexpr double u_s = 0x1p-1074; // smallest positive subnormal

    static constexpr double theta_ot = 3.0 * u;
    static constexpr double ict_linear_coeff = 10.0 * u + 176.0 * (u * u);
    static constexpr double ict_underflow_coeff = 5.0 * u_s;
};

struct PredicateStats {
    std::uint64_t ot_calls = 0;
    std::uint64_t ot_fallbacks = 0;
    std::uint64_t ict_calls = 0;
    std::uint64_t ict_fallbacks = 0;

    PredicateStats& operator+=(const PredicateStats& o) {
        ot_calls += o.ot_calls;
        ot_fallbacks += o.ot_fallbacks;
        ict_calls += o.ict_calls;
        ict_fallbacks += o.ict_fallbacks;
        return *this;
    }
};

struct NonFiniteInputError : std::invalid_argument {
    NonFiniteInputError() : std::invalid_argument("predicate input is not finite") {}
};

struct DegenerateSegmentError : std::invalid_argument {
    DegenerateSegmentError() : std::invalid_argument("segment endpoints coincide") {}
};

namespace detail {

using BigInt = boost::multiprecision::cpp_int;

inline void require_finite(Point p) {
    if (!point_is_finite(p)) throw NonFiniteInputError{};
}

// v = mant * 2^exp with |mant| < 2^53. Exact for every finite binary64,
// subnormals included.
struct Decomposed {
    std::int64_t mant;
    int exp;
};

inline Decomposed decompose(double v) {
    int e = 0;
    const double f = std::frexp(v, &e);
    return {static_cast<std::int64_t>(std::ldexp(f, 53)), e - 53};
}

// Scale a tuple of doubles by one common power of two so each becomes an
// exact integer. Positive scaling preserves determinant signs.
template <std::size_t N>
inline std::array<BigInt, N> scale_to_integers(const std::array<double, N>& vals) {
    std::array<Decomposed, N> d;
    int emin = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < N; ++i) {
        d[i] = decompose(vals[i]);
        if (d[i].mant != 0 && d[i].exp < emin) emin = d[i].exp;
    }
    std::array<BigInt, N> out;
    for (std::size_t i = 0; i < N; ++i) {
        if (d[i].mant == 0) {
            out[i] = 0;
        } else {
            out[i] = BigInt(d[i].mant);
            out[i] <<= static_cast<unsigned>(d[i].exp - emin);
        }
    }
    return out;
}

}  // namespace detail

// Exact sign of the 2x2 orientation determinant
//   | x_a - x_c   y_a - y_c |
//   | x_b - x_c   y_b - y_c |
// evaluated over scaled integers (x and y may scale independently).
inline Sign exact_determinant_sign_ot(Point pa, Point pb, Point pc) {
    detail::require_finite(pa);
    detail::require_finite(pb);
    detail::require_finite(pc);
    const auto xs = detail::scale_to_integers<3>({pa.x, pb.x, pc.x});
    const auto ys = detail::scale_to_integers<3>({pa.y, pb.y, pc.y});
    const detail::BigInt det = (xs[0] - xs[2]) * (ys[1] - ys[2]) - (xs[1] - xs[2]) * (ys[0] - ys[2]);
    return sign_from_int(det.sign());
}

// Exact sign of the 4x4 incircle determinant (rows [1, x, y, x^2+y^2]);
// Positive means p_d strictly outside the circumcircle of the
// counterclockwise triangle (p_a, p_b, p_c).
inline Sign exact_determinant_sign_ict(Point pa, Point pb, Point pc, Point pd) {
    detail::require_finite(pa);
    detail::require_finite(pb);
    detail::require_finite(pc);
    detail::require_finite(pd);
    const auto s = detail::scale_to_integers<8>({pa.x, pa.y, pb.x, pb.y, pc.x, pc.y, pd.x, pd.y});
    const detail::BigInt adx = s[0] - s[6], ady = s[1] - s[7];
    const detail::BigInt bdx = s[2] - s[6], bdy = s[3] - s[7];
    const detail::BigInt cdx = s[4] - s[6], cdy = s[5] - s[7];
    // 3x3 reduction of the 4x4 determinant; the reduction negates the sign.
    const detail::BigInt det3 = (adx * adx + ady * ady) * (bdx * cdy - bdy * cdx) +
                                (bdx * bdx + bdy * bdy) * (cdx * ady - cdy * adx) +
                                (cdx * cdx + cdy * cdy) * (adx * bdy - ady * bdx);
    return sign_from_int(-det3.sign());
}

// Orientation test: Positive iff p_c is strictly left of the directed
// segment p_a -> p_b, Zero iff collinear. Filtered with theta = 3u; the u_N
// term keeps the bound valid under underflow.
inline Sign orientation(Point pa, Point pb, Point pc, PredicateStats* stats = nullptr) {
    detail::require_finite(pa);
    detail::require_finite(pb);
    detail::require_finite(pc);
    if (stats) ++stats->ot_calls;

    const double l = (pa.x - pc.x) * (pb.y - pc.y);
    const double r = (pb.x - pc.x) * (pa.y - pc.y);
    const double det = l - r;
    const double criteria = FilterConstants::theta_ot * (std::fabs(l + r) + FilterConstants::u_N);
    // NaN from overflow fails this comparison and routes to the exact path.
    if (std::fabs(det) > criteria) return det > 0.0 ? Sign::Positive : Sign::Negative;

    if (stats) ++stats->ot_fallbacks;
    return exact_determinant_sign_ot(pa, pb, pc);
}

// Incircle test for a counterclockwise, non-collinear triangle
// (p_a, p_b, p_c): Positive iff p_d is strictly outside the circumcircle,
// Negative iff strictly inside, Zero iff cocircular. The filtered expression
// evaluates the equivalent 3x3 determinant (whose sign is the opposite of
// the 4x4 one) with an error bound that stays valid under underflow; on
// overflow every branch lands in the exact path.
inline Sign incircle(Point pa, Point pb, Point pc, Point pd, PredicateStats* stats = nullptr) {
    detail::require_finite(pa);
    detail::require_finite(pb);
    detail::require_finite(pc);
    detail::require_finite(pd);
    if (stats) ++stats->ict_calls;

    const double adx = pa.x - pd.x, ady = pa.y - pd.y;
    const double bdx = pb.x - pd.x, bdy = pb.y - pd.y;
    const double cdx = pc.x - pd.x, cdy = pc.y - pd.y;

    const double aa1 = adx * adx + ady * ady;
    const double aa2 = bdx * cdy - bdy * cdx;
    const double aa2p = std::fabs(bdx * cdy) + std::fabs(bdy * cdx);
    const double alpha_a = aa1 * aa2;

    const double ab1 = bdx * bdx + bdy * bdy;
    const double ab2 = cdx * ady - cdy * adx;
    const double ab2p = std::fabs(cdx * ady) + std::fabs(cdy * adx);
    const double alpha_b = ab1 * ab2;

    const double ac1 = cdx * cdx + cdy * cdy;
    const double ac2 = adx * bdy - ady * bdx;
    const double ac2p = std::fabs(adx * bdy) + std::fabs(ady * bdx);
    const double alpha_c = ac1 * ac2;

    const double det = (alpha_a + alpha_b) + alpha_c;

    const double beta_a = aa1 * aa2p;
    const double beta_b = ab1 * ab2p;
    const double beta_c = ac1 * ac2p;

    const double errbound =
        FilterConstants::ict_linear_coeff * ((beta_a + beta_b) + beta_c) +
        FilterConstants::ict_underflow_coeff *
            ((((aa2p + aa1) + (ab2p + ab1)) + (ac2p + ac1)) + 1.0);

    // det here is the negated 4x4 determinant, hence the swapped mapping.
    if (std::fabs(det) > errbound) return det > 0.0 ? Sign::Negative : Sign::Positive;

    if (stats) ++stats->ict_fallbacks;
    return exact_determinant_sign_ict(pa, pb, pc, pd);
}

namespace detail {

// Assumes the three points are collinear: true iff p_c lies strictly inside
// the closed bounding box of (p_a, p_b) and is not an endpoint. The closed
// box plus endpoint exclusion handles axis-aligned segments, where a strict
// box test would reject genuine interior points.
inline bool collinear_on_open_segment(Point pa, Point pb, Point pc) {
    if (same_point(pc, pa) || same_point(pc, pb)) return false;
    return std::fmin(pa.x, pb.x) <= pc.x && pc.x <= std::fmax(pa.x, pb.x) &&
           std::fmin(pa.y, pb.y) <= pc.y && pc.y <= std::fmax(pa.y, pb.y);
}

}  // namespace detail

// True iff p_c lies on the open segment (p_a, p_b): collinear, strictly
// between the endpoints, and equal to neither.
inline bool on_segment(Point pa, Point pb, Point pc, PredicateStats* stats = nullptr) {
    detail::require_finite(pc);
    if (same_point(pa, pb)) throw DegenerateSegmentError{};
    if (orientation(pa, pb, pc, stats) != Sign::Zero) return false;
    return detail::collinear_on_open_segment(pa, pb, pc);
}

// Segment intersection with shared endpoints excluded: true iff the closed
// segments share a point that is not a common endpoint. Decides with two
// orientation tests when the first pair of signs already separates the
// segments.
inline bool segments_intersect(Point pa, Point pb, Point pc, Point pd, PredicateStats* stats = nullptr) {
    if (same_point(pa, pb) || same_point(pc, pd)) throw DegenerateSegmentError{};

    const Sign o1 = orientation(pa, pb, pc, stats);
    const Sign o2 = orientation(pa, pb, pd, stats);
    if (o1 != Sign::Zero && o1 == o2) return false;
    const Sign o3 = orientation(pc, pd, pa, stats);
    const Sign o4 = orientation(pc, pd, pb, stats);
    if (o3 != Sign::Zero && o3 == o4) return false;

    if (o1 != Sign::Zero && o2 != Sign::Zero && o3 != Sign::Zero && o4 != Sign::Zero)
        return true;  // proper crossing

    // Touching configurations: an endpoint on the open interior of the other
    // segment intersects; meeting only at shared endpoints does not.
    if (o1 == Sign::Zero && detail::collinear_on_open_segment(pa, pb, pc)) return true;
    if (o2 == Sign::Zero && detail::collinear_on_open_segment(pa, pb, pd)) return true;
    if (o3 == Sign::Zero && detail::collinear_on_open_segment(pc, pd, pa)) return true;
    if (o4 == Sign::Zero && detail::collinear_on_open_segment(pc, pd, pb)) return true;
    return false;
}

}  // namespace tricheck
