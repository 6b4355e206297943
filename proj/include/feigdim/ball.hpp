#pragma once
// Complex ball arithmetic: {center, radius} enclosures with certified
// outward-rounded radius propagation.
//
// Every operation returns a ball that contains op(z, w) for all z, w in the
// input balls, including the roundoff of the computed center itself. Center
// arithmetic is written out explicitly (no std::complex operators) so the
// error model provably matches the evaluated expression: complex multiply is
// the naive 4-mul/2-add product covered by the sqrt(5)u componentwise bound,
// division goes through a*conj(b)/|b|^2 with an explicit 6.5u budget.
//
// Operations are pure; all state lives in the arguments. A ball is "exact"
// when r == 0 (centers of grid cells, integer constants).

#include <complex>
#include <stdexcept>

#include "feigdim/roundoff.hpp"

namespace feigdim {

using C = std::complex<double>;

inline C cadd(C a, C b) { return {a.real() + b.real(), a.imag() + b.imag()}; }
inline C csub(C a, C b) { return {a.real() - b.real(), a.imag() - b.imag()}; }
inline C cmul(C a, C b) {
    return {a.real() * b.real() - a.imag() * b.imag(),
            a.real() * b.imag() + a.imag() * b.real()};
}

// Certified bounds on |z|.
inline double mag_up(C z) {
    return sqrt_up(add_up(mul_up(z.real(), z.real()), mul_up(z.imag(), z.imag())));
}
inline double mag_dn(C z) {
    const double s = add_dn(mul_dn(z.real(), z.real()), mul_dn(z.imag(), z.imag()));
    return sqrt_dn(s);
}

struct Ball {
    C c{0.0, 0.0};
    double r = 0;

    static Ball exact(double re, double im = 0.0) { return {C{re, im}, 0.0}; }
    static Ball exact(C z) { return {z, 0.0}; }

    // Certified enclosure of {|z| : z in ball}.
    IReal norm() const {
        const double lo = sub_dn(mag_dn(c), r);
        return {lo > 0 ? lo : 0.0, add_up(mag_up(c), r)};
    }
    double norm_ub() const { return add_up(mag_up(c), r); }
    double norm_lb() const {
        const double lo = sub_dn(mag_dn(c), r);
        return lo > 0 ? lo : 0.0;
    }
    bool may_contain_zero() const { return mag_dn(c) <= r; }
};

inline Ball ball_add(Ball a, Ball b) {
    const C m = cadd(a.c, b.c);
    const double r = add_up(add_up(a.r, b.r), mul_up(kEpsAdd, mag_up(m)));
    return {m, r};
}

inline Ball ball_sub(Ball a, Ball b) {
    const C m = csub(a.c, b.c);
    const double r = add_up(add_up(a.r, b.r), mul_up(kEpsAdd, mag_up(m)));
    return {m, r};
}

inline Ball ball_neg(Ball a) { return {C{-a.c.real(), -a.c.imag()}, a.r}; }
inline Ball ball_conj(Ball a) { return {C{a.c.real(), -a.c.imag()}, a.r}; }

inline Ball ball_mul(Ball a, Ball b) {
    const C m = cmul(a.c, b.c);
    const double cross = add_up(add_up(mul_up(mag_up(a.c), b.r), mul_up(mag_up(b.c), a.r)),
                                mul_up(a.r, b.r));
    return {m, add_up(cross, mul_up(kEpsMul, mag_up(m)))};
}

// Scale a complex ball by a real ball (componentwise real multiply: one
// rounding per component, relative error <= u).
inline Ball ball_scale(RBall s, Ball b) {
    const C m{s.c * b.c.real(), s.c * b.c.imag()};
    const double cross = add_up(mul_up(std::fabs(s.c), b.r),
                                mul_up(s.r, add_up(mag_up(b.c), b.r)));
    return {m, add_up(cross, mul_up(kEpsAdd, mag_up(m)))};
}

// a / b via a*conj(b)/|b|^2. Requires a certified nonzero divisor:
// |b.c| - b.r > 0, otherwise the quotient set is unbounded.
inline Ball ball_div(Ball a, Ball b) {
    const double bmag_dn = mag_dn(b.c);
    if (!(bmag_dn > b.r)) throw std::domain_error("ball_div: divisor ball meets zero");
    const C n = cmul(a.c, C{b.c.real(), -b.c.imag()});
    const double d = b.c.real() * b.c.real() + b.c.imag() * b.c.imag();
    const C q{n.real() / d, n.imag() / d};
    // Exact-interval growth of z/w over the input balls, evaluated outward:
    // (r_a|b| + |a|r_b) / (|b|(|b| - r_b)).
    const double grow = div_up(add_up(mul_up(a.r, mag_up(b.c)), mul_up(mag_up(a.c), b.r)),
                               mul_dn(bmag_dn, sub_dn(bmag_dn, b.r)));
    return {q, add_up(grow, mul_up(kEpsDiv, mag_up(q)))};
}

// Principal square root. Requires the ball to be certifiably bounded away
// from the branch cut pole: r <= |c|/4. Soundness does not depend on the
// accuracy of the sqrt used for the center; the center is certified a
// posteriori through its residual |w^2 - c|.
Ball ball_sqrt(Ball a);

// Certified upper bound for how an evaluation error eps at scale z_scale
// propagates through a univalent composition with derivative magnitude
// deriv_mag: eps / (1 - eps/z_scale)^2 * deriv_mag, rounded up.
double koebe_composition_bound(double eps, double z_scale, double deriv_mag);

}  // namespace feigdim
