#include "feigdim/ball.hpp"

#include <cmath>

namespace feigdim {

Ball ball_sqrt(Ball a) {
    const double mc = mag_dn(a.c);
    if (!(a.r <= 0.25 * mc) || mc == 0.0)
        throw std::domain_error("ball_sqrt: ball not bounded away from 0 (need r <= |c|/4)");
    // The principal branch is discontinuous across (-inf, 0]; a ball that
    // meets the cut has no connected enclosure. Certified distance to the cut:
    const double cut_dist = a.c.real() > 0 ? mc : dn(std::fabs(a.c.imag()));
    if (!(cut_dist > a.r)) throw std::domain_error("ball_sqrt: ball meets the branch cut");

    const C w = std::sqrt(C{a.c.real(), a.c.imag()});
    // Residual certification of the center: |w^2 - c| bounds how far w is
    // from the true sqrt(c) without trusting libm's complex sqrt accuracy.
    const double resid = add_up(mag_up(csub(cmul(w, w), a.c)),
                                mul_up(kEpsMul, mag_up(cmul(w, w))));

    // For every z in the ball, |sqrt(z) - w| = |z - w^2| / |sqrt(z) + w|.
    // Numerator: <= r + resid. Denominator: both z and w^2 lie in the disk
    // D(c, r+resid), so their arguments differ from arg(c) by at most
    // asin((r+resid)/|c|) each; the principal square root halves arguments,
    // hence the angle between sqrt(z) and w is at most
    //   phi = asin((r+resid)/|c|),
    // (half of the worst-case 2*asin spread between z and w^2), and
    //   |sqrt(z) + w| >= (|sqrt(z)| + |w|) cos(phi/2).
    // With r <= |c|/4 and resid tiny, phi <= asin(0.3) and the cosine factor
    // exceeds 0.988; libm asin/cos are padded by two ulps.
    const double num = add_up(a.r, resid);
    const double angle_arg = div_up(num, mc);
    if (angle_arg >= 0.3) throw std::domain_error("ball_sqrt: residual too large");
    const double phi = up(up(std::asin(angle_arg)));
    const double cos_lb = dn(dn(std::cos(up(0.5 * phi))));
    const double den = mul_dn(cos_lb, add_dn(sqrt_dn(sub_dn(mc, a.r)), mag_dn(w)));
    if (!(den > 0)) throw std::domain_error("ball_sqrt: degenerate denominator");
    return {w, div_up(num, den)};
}

double koebe_composition_bound(double eps, double z_scale, double deriv_mag) {
    if (!(eps >= 0) || !(z_scale > 0) || !(deriv_mag >= 0))
        throw std::domain_error("koebe_composition_bound: bad arguments");
    const double q = div_up(eps, z_scale);
    if (q >= 1.0) throw std::domain_error("koebe_composition_bound: eps >= z_scale");
    const double den = sub_dn(1.0, q);
    return mul_up(div_up(eps, mul_dn(den, den)), deriv_mag);
}

}  // namespace feigdim
