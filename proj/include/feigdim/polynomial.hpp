#pragma once
// The degree-80 even polynomial model of the renormalization fixed point,
// its derivative ladders, and certified evaluation error bounds.
//
// Two independent error sources are tracked:
//
//  1. Approximation strata: published rigorous bounds on |F - P| (and the
//     first two derivatives) on nested disks, where F is the true fixed
//     point and P this polynomial. They are step functions of |z|.
//
//  2. Floating-point roundoff of evaluating P at a point by Horner's rule
//     in x = z^2. A per-term Wilkinson-style bound is used:
//       |fl(P(z)) - P(z)| <= eps_c * sum_i w_i |a_i| |x|^i,
//     where eps_c = sqrt(5)u (componentwise complex op bound) and the weight
//     w_i counts the (1+delta) factors the i-th term accumulates: i products
//     by x, i inherited roundings from forming x = z*z, and i+1 additions,
//     padded to w_i = 3i+2. The derivative ladder gets w_i = 3i+4 (extra
//     coefficient representation rounding and the final multiply by z).
//
// The weighted absolute-coefficient sums are evaluated by upward-rounded
// Horner, so the bounds are certified, not modeled.

#include <array>
#include <cstdint>
#include <string>

#include "feigdim/ball.hpp"
#include "feigdim/roundoff.hpp"

namespace feigdim {

struct Stratum {
    double radius;  // bound applies for |z| < radius
    double err;
};

// |F^(d) - P^(d)| bounds on nested disks (d = 0, 1, 2).
inline constexpr std::array<Stratum, 4> kStrataF{{
    {1.224, 1.5e-23}, {1.414, 5.5e-13}, {2.449, 5.0e-7}, {2.828, 1.7e-2}}};
inline constexpr std::array<Stratum, 4> kStrataDF{{
    {1.12, 1.5e-22}, {1.31, 5.5e-12}, {2.34, 5.0e-6}, {2.72, 1.7e-1}}};
inline constexpr std::array<Stratum, 4> kStrataDDF{{
    {1.02, 1.5e-21}, {1.21, 5.5e-11}, {2.24, 5.0e-5}, {2.62, 1.7}}};

// Smallest stratum bound applicable at |z| <= m, or -1 if m is outside the
// outermost disk.
inline double stratum_err(const std::array<Stratum, 4>& table, double m) {
    for (const Stratum& s : table)
        if (m < s.radius) return s.err;
    return -1.0;
}

// Padded sqrt(5)u covering products of up to ~130 (1+delta) factors.
inline constexpr double kPolyRound = 2.4825341532476e-16;

class MapPolynomial {
  public:
    static constexpr int kOrder = 40;  // degree 80 in z, 41 coefficients in x

    std::array<double, 41> a{};  // P(z) = sum a[i] x^i, x = z^2
    std::uint64_t checksum = 0;

    // Derivative ladder in x (exact-real coefficient arrays, rounded once):
    //   P'(z)  = z * sum_j d1[j] x^j          d1[j] = 2(j+1) a[j+1]
    //   P''(z) =     sum_j d2[j] x^j          d2[j] = (2j+1) d1[j]
    std::array<double, 40> d1{};
    std::array<double, 40> d2{};

    // Loads and validates the coefficient data file (absolute path, or the
    // bundled file when empty). Throws std::runtime_error on format or
    // checksum mismatch.
    static MapPolynomial load(const std::string& path = "");

    static std::string default_path();

    // --- raw point evaluations (round-to-nearest, no enclosure) ---

    C eval_raw(C z) const {
        const C x = cmul(z, z);
        C s{a[40], 0.0};
        for (int j = 39; j >= 0; --j) s = cadd(cmul(s, x), C{a[std::size_t(j)], 0.0});
        return s;
    }
    C deriv_raw(C z) const {
        const C x = cmul(z, z);
        C s{d1[39], 0.0};
        for (int j = 38; j >= 0; --j) s = cadd(cmul(s, x), C{d1[std::size_t(j)], 0.0});
        return cmul(z, s);
    }
    C dderiv_raw(C z) const {
        const C x = cmul(z, z);
        C s{d2[39], 0.0};
        for (int j = 38; j >= 0; --j) s = cadd(cmul(s, x), C{d2[std::size_t(j)], 0.0});
        return s;
    }
    double eval_real(double y) const {  // P as a function of x = z^2, real axis
        double s = a[40];
        for (int j = 39; j >= 0; --j) s = s * y + a[std::size_t(j)];
        return s;
    }

    // --- certified roundoff bounds for the raw evaluations at center z ---

    double value_round_err(C z) const { return round_err(wilk_a_.data(), 41, z, false); }
    double deriv_round_err(C z) const { return round_err(wilk_d1_.data(), 40, z, true); }
    double dderiv_round_err(C z) const { return round_err(wilk_d2_.data(), 40, z, false); }

    // --- upward absolute-value sups on |z| <= R (true-polynomial bounds) ---

    double sup_abs_value(double R) const { return sup_abs(abs_a_.data(), 41, R, false); }
    double sup_abs_deriv(double R) const { return sup_abs(abs_d1_.data(), 40, R, true); }
    double sup_abs_dderiv(double R) const { return sup_abs(abs_d2_.data(), 40, R, false); }

  private:
    std::array<double, 41> wilk_a_{}, abs_a_{};
    std::array<double, 40> wilk_d1_{}, abs_d1_{};
    std::array<double, 40> wilk_d2_{}, abs_d2_{};

    void finalize();  // builds d1/d2 and the weight arrays

    double round_err(const double* w, int n, C z, bool times_z) const {
        const double t = mag_up(cmul(z, z));
        double s = w[n - 1];
        for (int j = n - 2; j >= 0; --j) s = add_up(mul_up(s, t), w[j]);
        if (times_z) s = mul_up(s, mag_up(z));
        return mul_up(kPolyRound, s);
    }
    double sup_abs(const double* c, int n, double R, bool times_z) const {
        const double t = mul_up(R, R);
        double s = c[n - 1];
        for (int j = n - 2; j >= 0; --j) s = add_up(mul_up(s, t), c[j]);
        if (times_z) s = mul_up(s, R);
        return mul_up(s, 1.0000000000001);  // pad the upward chain itself
    }
};

}  // namespace feigdim
