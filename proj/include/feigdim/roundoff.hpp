#pragma once
// Directed-rounding primitives and the scalar interval type.
//
// No rounding-mode switching anywhere: every operation is evaluated in the
// default round-to-nearest mode and then nudged outward by one ulp with
// nextafter. Since a round-to-nearest result is within half an ulp of the
// exact value, the nudged value is a certified one-sided bound. This keeps
// the arithmetic thread-safe, vectorization-safe, and bit-reproducible.
//
// The op-level error constants below are used by the ball layer:
//  * kEpsAdd: relative error of one round-to-nearest op, u/(1-u), padded.
//  * kEpsMul: componentwise relative error of the naive complex product
//    (w = ac-bd, x = ad+bc evaluated without FMA), sqrt(5)*u, padded.
//    This is the Brent-Percival-Zimmermann bound and it is only proven for
//    multiplication.
//  * kEpsDiv: relative error of complex division computed explicitly as
//    q = a*conj(b)/|b|^2: the numerator contributes sqrt(5)u, |b|^2
//    contributes 3u through the quotient, the final componentwise division
//    one u: (1+sqrt5 u)(1+3u)(1+u)-1 < 6.3u, padded to 6.5u.

#include <cmath>
#include <limits>

namespace feigdim {

inline constexpr double kU = 0x1p-53;                     // unit roundoff
inline constexpr double kEpsAdd = 1.1102230246251577e-16;  // > u/(1-u)
inline constexpr double kEpsMul = 2.4825341532472820e-16;  // > sqrt(5)*u/(1-sqrt5*u)
inline constexpr double kEpsDiv = 7.2164496600635200e-16;  // > 6.5*u
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double up(double x) { return std::nextafter(x, kInf); }
inline double dn(double x) { return std::nextafter(x, -kInf); }

inline double add_up(double a, double b) { return up(a + b); }
inline double add_dn(double a, double b) { return dn(a + b); }
inline double sub_up(double a, double b) { return up(a - b); }
inline double sub_dn(double a, double b) { return dn(a - b); }
inline double mul_up(double a, double b) { return up(a * b); }
inline double mul_dn(double a, double b) { return dn(a * b); }
inline double div_up(double a, double b) { return up(a / b); }
inline double div_dn(double a, double b) { return dn(a / b); }
inline double sqrt_up(double a) { return up(std::sqrt(a)); }
inline double sqrt_dn(double a) { return a <= 0 ? 0.0 : dn(std::sqrt(a)); }

// Closed interval [lo, hi] of reals. Used for scale factors (powers of
// lambda), folded polygon coordinates, and certified norms. Operations
// return enclosures of the exact image set.
struct IReal {
    double lo = 0, hi = 0;

    static IReal point(double x) { return {x, x}; }
    bool contains(double x) const { return lo <= x && x <= hi; }
    double width() const { return hi - lo; }
    double mag() const { return std::max(std::fabs(lo), std::fabs(hi)); }
};

inline IReal iadd(IReal a, IReal b) { return {add_dn(a.lo, b.lo), add_up(a.hi, b.hi)}; }
inline IReal isub(IReal a, IReal b) { return {sub_dn(a.lo, b.hi), sub_up(a.hi, b.lo)}; }
inline IReal ineg(IReal a) { return {-a.hi, -a.lo}; }

inline IReal imul(IReal a, IReal b) {
    const double p1l = mul_dn(a.lo, b.lo), p1h = mul_up(a.lo, b.lo);
    const double p2l = mul_dn(a.lo, b.hi), p2h = mul_up(a.lo, b.hi);
    const double p3l = mul_dn(a.hi, b.lo), p3h = mul_up(a.hi, b.lo);
    const double p4l = mul_dn(a.hi, b.hi), p4h = mul_up(a.hi, b.hi);
    return {std::min(std::min(p1l, p2l), std::min(p3l, p4l)),
            std::max(std::max(p1h, p2h), std::max(p3h, p4h))};
}

// Division by an interval that must not contain zero. The reciprocal
// enclosure [1/hi, 1/lo] is valid for both sign cases.
inline IReal idiv(IReal a, IReal b) {
    if (b.lo <= 0 && b.hi >= 0) return {-kInf, kInf};
    return imul(a, IReal{div_dn(1.0, b.hi), div_up(1.0, b.lo)});
}

inline IReal isqr(IReal a) {
    if (a.lo >= 0) return {mul_dn(a.lo, a.lo), mul_up(a.hi, a.hi)};
    if (a.hi <= 0) return {mul_dn(a.hi, a.hi), mul_up(a.lo, a.lo)};
    const double m = std::max(-a.lo, a.hi);
    return {0.0, mul_up(m, m)};
}

inline IReal isqrt(IReal a) {  // requires a.lo >= 0
    return {sqrt_dn(a.lo), sqrt_up(a.hi)};
}

// Real ball {c, r}: the interval [c-r, c+r] kept in midpoint-radius form.
// Used for scalar constants where tight relative radii matter.
struct RBall {
    double c = 0, r = 0;

    IReal to_interval() const { return {sub_dn(c, r), add_up(c, r)}; }
    double lo() const { return sub_dn(c, r); }
    double hi() const { return add_up(c, r); }

    // Enclosure of a decimal interval [lo_str, hi_str]; the center is the
    // rounded lower endpoint and the radius covers both parse roundings.
    static RBall from_bounds(double lo_parsed, double hi_parsed) {
        RBall b;
        b.c = lo_parsed;
        b.r = up(add_up(sub_up(hi_parsed, lo_parsed), 2.0 * up(std::fabs(hi_parsed)) * kEpsAdd));
        return b;
    }
};

inline RBall rball_mul(RBall a, RBall b) {
    const double m = a.c * b.c;
    const double r = add_up(add_up(mul_up(std::fabs(a.c), b.r), mul_up(std::fabs(b.c), a.r)),
                            add_up(mul_up(a.r, b.r), mul_up(kEpsAdd, std::fabs(m))));
    return {m, r};
}

inline RBall rball_div(RBall a, RBall b) {  // requires |b.c| > b.r
    const double q = a.c / b.c;
    const double bmag_lo = sub_dn(std::fabs(b.c), b.r);
    const double grow = div_up(add_up(mul_up(a.r, std::fabs(b.c)), mul_up(std::fabs(a.c), b.r)),
                               mul_dn(std::fabs(b.c), bmag_lo));
    return {q, add_up(grow, mul_up(kEpsAdd, std::fabs(q)))};
}

}  // namespace feigdim
