#pragma once
// Certified evaluation of the renormalization fixed point F and its
// derivative on complex balls, plus the rescaled iterates
// F^(2^n)(z) = (-lambda)^n F(z / lambda^n).
//
// All enclosures are of the *true* fixed point: polynomial roundoff,
// polynomial-vs-F approximation strata, and ball-radius propagation are all
// included. Radius propagation across a ball of radius r uses the local
// derivative at the center, not a global sup:
//   |F(z) - F(c)| <= r (|F'(c)| + r sup|F''|)   on |z - c| <= r,
// which is what keeps long compositions close to the worst-case ledger.
//
// For |z| beyond the second stratum the direct bounds degrade quickly; the
// evaluator can then route through the fixed-point identity
//   F(z) = -(1/lambda) F(F(lambda z)),
// which re-enters the tight strata (|lambda z| is small). try_f_smart picks
// whichever route certifies the smaller radius; the cutover is a fixed
// threshold so results are deterministic.

#include <optional>
#include <string>

#include "feigdim/ball.hpp"
#include "feigdim/constants.hpp"
#include "feigdim/polynomial.hpp"

namespace feigdim {

class Map {
  public:
    MapPolynomial poly;
    MapConstants consts;

    // Certified enclosures of distinguished real points of F, computed at
    // construction from the loaded polynomial:
    RBall x0;        // the zero of F in (0.8, 0.9)
    RBall a_cr;      // F(a_cr) = -x0/lambda, a_cr in (1.6, 1.75)
    RBall f_lambda;  // F(lambda)
    RBall slit_b;    // F(lambda)/lambda^2, right endpoint of the Koebe slit
    RBall inv_l2;    // lambda^-2, right endpoint of the escape-region slit

    explicit Map(MapPolynomial p);
    static Map load(const std::string& coeff_path = "");

    // Enclosure of F over the ball; nullopt when the ball reaches outside
    // the strata needed to certify it (caller must rescale or subdivide).
    std::optional<Ball> try_f(Ball z) const;
    std::optional<Ball> try_df(Ball z) const;

    // Direct or fixed-point-identity route, whichever certifies a smaller
    // radius. The identity route is only priced when the direct radius
    // misses kSmartThreshold, so tight inner-window orbits stay cheap.
    std::optional<Ball> try_f_smart(Ball z) const;

    // Same routing for the derivative, via F'(z) = -F'(F(lambda z)) F'(lambda z);
    // both factors are evaluated at arguments pulled back into tight strata.
    std::optional<Ball> try_df_smart(Ball z) const;

    struct Pow2 {
        Ball val;   // F^(2^n)(z)
        Ball dval;  // (F^(2^n))'(z)  ( = (-1)^n F'(z/lambda^n) exactly )
    };
    std::optional<Pow2> try_f_pow2(Ball z, int n) const;

    // The auxiliary folded map F_lambda(z) = conj(F(lambda z)).
    std::optional<Ball> try_f_lambda(Ball z) const;

    // Throwing conveniences for non-hot paths.
    Ball f(Ball z) const;
    Ball df(Ball z) const;

    static constexpr double kSmartThreshold = 1e-12;

    // How many times the fixed-point identity may be re-applied to the outer
    // factor F(F(lambda z)). One level pulls |z| in (sqrt 2, 2.83) into the
    // second stratum; a second level is needed when that outer argument
    // itself lands beyond sqrt 2 (deep-iterate orbits graze such points).
    static constexpr int kSmartDepth = 3;

  private:
    std::optional<Ball> try_f_smart(Ball z, int depth) const;
    std::optional<Ball> fallback_f(Ball z, int depth) const;
    std::optional<Ball> try_df_smart(Ball z, int depth) const;
    RBall certified_real_root(double seed, double target_c, double target_r) const;
};

}  // namespace feigdim
