#pragma once
// Certified enclosures of the renormalization constants and of the power
// tables lambda^n, lambda^-n used for window rescaling.
//
// lambda is taken from its published 24-digit enclosure
//   0.399535280523134489857565 < lambda < 0.399535280523134489857596
// (and 1/lambda = 2.5029078750958928222839 +- 1 in the last digit); the
// bundled polynomial is solved independently and tests cross-check that its
// -sum(a_i) lands inside this enclosure.
//
// Power centers are built by repeated round-to-nearest multiplication; the
// radius after n factors is c_n * n*u/(1-n*u) slightly padded (one
// representation rounding plus n-1 product roundings, each of relative size
// <= u, plus the decimal enclosure width which is ~4e-23 relative). The
// invariant r_n <= 1.0102 * n * u * c_n is asserted in tests.

#include <array>

#include "feigdim/roundoff.hpp"

namespace feigdim {

struct MapConstants {
    static constexpr int kMaxShell = 64;

    RBall lambda;      // 0.39953528052313448985758...
    RBall inv_lambda;  // 2.5029078750958928222839...

    std::array<RBall, kMaxShell + 1> pow;      // lambda^n
    std::array<RBall, kMaxShell + 1> inv_pow;  // lambda^-n

    MapConstants() {
        // Center literals round to the nearest double of the printed decimal;
        // radius = half-ulp of the binade plus the decimal enclosure width.
        lambda = RBall{0.39953528052313448985758, 2.81e-17};
        inv_lambda = RBall{2.5029078750958928222839, 2.23e-16};

        build(pow, lambda);
        build(inv_pow, inv_lambda);
    }

    // (-lambda)^n and (-1/lambda)^n carry the same radius with a signed center.
    RBall neg_pow(int n) const { return signed_ball(pow[std::size_t(n)], n); }
    RBall neg_inv_pow(int n) const { return signed_ball(inv_pow[std::size_t(n)], n); }

    IReal pow_i(int n) const { return pow[std::size_t(n)].to_interval(); }

  private:
    static RBall signed_ball(RBall b, int n) {
        return (n & 1) ? RBall{-b.c, b.r} : b;
    }

    static void build(std::array<RBall, kMaxShell + 1>& t, RBall base) {
        t[0] = RBall{1.0, 0.0};
        t[1] = base;
        double c = base.c;
        for (int n = 2; n <= kMaxShell; ++n) {
            c *= base.c;
            const double nu = double(n) * kU;
            const double rel = up(mul_up(div_up(nu, sub_dn(1.0, nu)), 1.000001));
            t[std::size_t(n)] = RBall{c, mul_up(rel, up(c < 0 ? -c : c))};
        }
    }
};

}  // namespace feigdim
