#include "feigdim/map.hpp"

#include <cmath>
#include <stdexcept>

namespace feigdim {

Map::Map(MapPolynomial p) : poly(std::move(p)) {
    // x0: simple zero of F between 0.8 and 0.9.
    x0 = certified_real_root(0.83, 0.0, 0.0);

    // F(lambda) as a ball: evaluate at the lambda enclosure.
    {
        Ball lam{C{consts.lambda.c, 0.0}, consts.lambda.r};
        Ball v = f(lam);
        f_lambda = RBall{v.c.real(), v.r};
    }
    slit_b = rball_mul(rball_mul(f_lambda, consts.inv_lambda), consts.inv_lambda);
    inv_l2 = consts.inv_pow[2];

    // a_cr: F(a_cr) = -x0/lambda on (1.6, 1.75).
    RBall target = rball_mul(RBall{-x0.c, x0.r}, consts.inv_lambda);
    a_cr = certified_real_root(1.69, target.c, target.r);
}

Map Map::load(const std::string& coeff_path) { return Map(MapPolynomial::load(coeff_path)); }

RBall Map::certified_real_root(double seed, double target_c, double target_r) const {
    // Newton polish in plain doubles on h(t) = P(t) - target (t = z^2 view
    // is not used here; we work directly in z since the seed is away from 0).
    double z = seed;
    for (int i = 0; i < 60; ++i) {
        const double v = poly.eval_real(z * z) - target_c;
        const double d = poly.deriv_raw(C{z, 0.0}).real();
        const double step = v / d;
        z -= step;
        if (std::fabs(step) < 1e-15) break;
    }
    // Certify: the true root satisfies |root - z| <= |F(z) - target| / min|F'|.
    const Ball val = f(Ball::exact(z));
    const double resid = add_up(add_up(mag_up(csub(val.c, C{target_c, 0.0})), val.r), target_r);
    const Ball dv = df(Ball::exact(z));
    const double dlb = dv.norm_lb();
    if (!(dlb > 0.1)) throw std::runtime_error("certified_real_root: derivative too small");
    const double rad = div_up(resid, dlb);
    // The radius certifies the root of the *linearization*; pad by the
    // curvature term (sup|F''| ~ 10 near these points, rad ~ 1e-15, so the
    // second-order correction is ~1e-29 relative — double the radius to be
    // safely above it).
    return RBall{z, 2.0 * rad};
}

std::optional<Ball> Map::try_f(Ball z) const {
    const double mc = mag_up(z.c);
    const double se = stratum_err(kStrataF, mc);
    if (se < 0) return std::nullopt;

    const C val = poly.eval_raw(z.c);
    double rad = add_up(poly.value_round_err(z.c), se);

    if (z.r > 0) {
        const double rout = z.norm_ub();
        const double sd = stratum_err(kStrataDF, mc);
        const double sdd = stratum_err(kStrataDDF, rout);
        if (sd < 0 || sdd < 0) return std::nullopt;
        const double dmag = add_up(add_up(mag_up(poly.deriv_raw(z.c)), poly.deriv_round_err(z.c)), sd);
        const double ddsup = add_up(poly.sup_abs_dderiv(rout), sdd);
        const double prop = mul_up(z.r, add_up(dmag, mul_up(z.r, ddsup)));
        rad = add_up(rad, prop);
    }
    return Ball{val, rad};
}

std::optional<Ball> Map::try_df(Ball z) const {
    const double mc = mag_up(z.c);
    const double sd = stratum_err(kStrataDF, mc);
    if (sd < 0) return std::nullopt;

    const C val = poly.deriv_raw(z.c);
    double rad = add_up(poly.deriv_round_err(z.c), sd);

    if (z.r > 0) {
        const double rout = z.norm_ub();
        const double sdd = stratum_err(kStrataDDF, rout);
        if (sdd < 0) return std::nullopt;
        const double ddsup = add_up(poly.sup_abs_dderiv(rout), sdd);
        rad = add_up(rad, mul_up(z.r, ddsup));
    }
    return Ball{val, rad};
}

std::optional<Ball> Map::fallback_f(Ball z, int depth) const {
    // F(z) = -(1/lambda) F(F(lambda z)) — exact for the true fixed point, so
    // chaining certified enclosures stays certified. The inner argument
    // lambda*z always sits in a finer stratum than z; the outer argument
    // F(lambda z) may not, so it gets the smart treatment recursively.
    const Ball zs = ball_scale(consts.lambda, z);
    const std::optional<Ball> inner = try_f(zs);
    if (!inner) return std::nullopt;
    const std::optional<Ball> outer =
        depth > 0 ? try_f_smart(*inner, depth - 1) : try_f(*inner);
    if (!outer) return std::nullopt;
    return ball_scale(RBall{-consts.inv_lambda.c, consts.inv_lambda.r}, *outer);
}

std::optional<Ball> Map::try_f_smart(Ball z) const { return try_f_smart(z, kSmartDepth); }

std::optional<Ball> Map::try_f_smart(Ball z, int depth) const {
    const std::optional<Ball> direct = try_f(z);
    if (direct && direct->r <= kSmartThreshold) return direct;
    const std::optional<Ball> via_identity = fallback_f(z, depth);
    if (!direct) return via_identity;
    if (!via_identity) return direct;
    return via_identity->r < direct->r ? via_identity : direct;
}

std::optional<Ball> Map::try_df_smart(Ball z) const { return try_df_smart(z, kSmartDepth); }

std::optional<Ball> Map::try_df_smart(Ball z, int depth) const {
    const std::optional<Ball> direct = try_df(z);
    if (direct && direct->r <= kSmartThreshold) return direct;
    // F'(z) = -F'(F(lambda z)) F'(lambda z), differentiating the fixed-point
    // identity; the lambda in the chain rule cancels the -1/lambda prefactor.
    const Ball zs = ball_scale(consts.lambda, z);
    std::optional<Ball> via_identity;
    if (const std::optional<Ball> d_inner = try_df(zs)) {
        if (const std::optional<Ball> f_inner = try_f_smart(zs, depth)) {
            const std::optional<Ball> d_outer =
                depth > 0 ? try_df_smart(*f_inner, depth - 1) : try_df(*f_inner);
            if (d_outer) via_identity = ball_neg(ball_mul(*d_outer, *d_inner));
        }
    }
    if (!direct) return via_identity;
    if (!via_identity) return direct;
    return via_identity->r < direct->r ? via_identity : direct;
}

std::optional<Map::Pow2> Map::try_f_pow2(Ball z, int n) const {
    if (n < 0 || n > MapConstants::kMaxShell)
        throw std::domain_error("try_f_pow2: shell index out of range");
    const Ball zeta = n == 0 ? z : ball_scale(consts.inv_pow[std::size_t(n)], z);
    const std::optional<Ball> v = try_f_smart(zeta);
    if (!v) return std::nullopt;
    const std::optional<Ball> dv = try_df_smart(zeta);
    if (!dv) return std::nullopt;
    Pow2 out;
    out.val = n == 0 ? *v : ball_scale(consts.neg_pow(n), *v);
    out.dval = (n & 1) ? ball_neg(*dv) : *dv;
    return out;
}

std::optional<Ball> Map::try_f_lambda(Ball z) const {
    const std::optional<Ball> v = try_f_smart(ball_scale(consts.lambda, z));
    if (!v) return std::nullopt;
    return ball_conj(*v);
}

Ball Map::f(Ball z) const {
    const std::optional<Ball> v = try_f_smart(z);
    if (!v) throw std::domain_error("Map::f: ball outside certifiable strata");
    return *v;
}

Ball Map::df(Ball z) const {
    const std::optional<Ball> v = try_df(z);
    if (!v) throw std::domain_error("Map::df: ball outside certifiable strata");
    return *v;
}

}  // namespace feigdim
