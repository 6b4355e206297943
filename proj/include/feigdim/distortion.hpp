#pragma once
// Certified distortion bounds for univalent functions on the slit plane
//
//   C_slit = C \ ( (-inf, -1/lambda]  U  [b, +inf) ),   b = F(lambda)/lambda^2.
//
// The Moebius-square-root uniformizer
//
//   psi(z) = sqrt( (z - a) / (b - z) ),   a = -1/lambda,
//
// maps C_slit conformally onto the right half-plane, sending the interval
// (a, b) to (0, +inf). The pseudo-hyperbolic coordinate of z seen from w is
//
//   |H_w(z)| = | (psi z - psi w) / (psi z + conj(psi w)) |  in  [0, 1),
//
// and the classical Koebe distortion theorem applied to phi o H_w^{-1} for a
// univalent phi on C_slit yields the distortion kernel
//
//   C(z, w) = (1 + |H|) / (1 - |H|)^3 * |H'_w(z)| / |H'_w(w)|
//           >= |phi'(z)| / |phi'(w)|  for every univalent phi on C_slit.
//
// Writing u = psi(z), v = psi(w), the derivative ratio has the closed form
//
//   |H'_w(z)| / |H'_w(w)| = (2 Re v)^2 / |u + conj v|^2
//                           * (|v| |b - w|^2) / (|u| |b - z|^2),
//
// because H_w = tau_v o psi with tau_v(s) = (s - v)/(s + conj v), and
// psi' = (b - a) / (2 psi (b - z)^2). Everything below evaluates these
// expressions with directed rounding so the returned bounds are certified.
//
// The density g_A(z) = integral over A of dA(w) / C(z, w)^2 is bounded from
// below over a packing by grid cells: each cell of side h contributes
// h^2 / (C_up(z, w_k) * gamma_k)^2, where gamma_k bounds the variation of
// the kernel across the cell's covering disk (radius r, inside the maximal
// round disk of radius R_k about the center):
//
//   sup_{|w - w_k| <= r} C(w_k, w) <= (1 + r/R_k) / (1 - r/R_k)^3.
//
// The same disk factor, with the probe cover's radius t, converts density
// bounds at probe centers into a bound of sup 1/g over the covered region.

#include <cstddef>
#include <vector>

#include "feigdim/ball.hpp"
#include "feigdim/cover.hpp"
#include "feigdim/domains.hpp"
#include "feigdim/map.hpp"

namespace feigdim {

struct Uniformizer {
    Ball a;                // -1/lambda, real ball
    Ball b;                // F(lambda)/lambda^2, real ball
    double slit_b_lo = 0;  // certified lower endpoint of the right slit

    Uniformizer() = default;
    explicit Uniformizer(const Map& map);

    // psi(z) = sqrt((z - a)/(b - z)). Throws std::domain_error when the ball
    // is not certifiably inside the slit plane (division by a ball meeting b,
    // or a Moebius image meeting the square-root branch cut).
    Ball psi(Ball z) const;
};

// Two-sided enclosure of |H_w(z)|; the upper end is certified < 1 for balls
// inside the slit plane (throws if that cannot be established).
IReal pseudo_hyperbolic(const Uniformizer& uni, Ball z, Ball w);

// Certified upper bound of the distortion kernel C(z, w).
double distortion_upper(const Uniformizer& uni, Ball z, Ball w);

// (1 + rho)/(1 - rho)^3 rounded up; the within-disk variation factor for a
// subdisk at relative radius rho < 1 of a maximal round disk.
double koebe_disk_factor_up(double rho_up);

// Uniformizer data precomputed at the centers of a packing, four-fold
// symmetrized. Each stored first-quadrant center w contributes the terms of
// w and of its mirror -conj(w); the two lower-half-plane reflections reuse
// the same scalars (the slits lie on the real axis, so all cached quantities
// are conjugation-invariant) with the imaginary part of psi negated on the
// fly. Mirrors across the imaginary axis need their own psi: the slit plane
// is not symmetric under x -> -x.
struct UniformizerCache {
    Uniformizer uni;         // the uniformizer the cache was built against
    double cell_area = 0.0;  // h^2, exact dyadic
    double radius_up = 0.0;  // covering-disk radius of a cell
    // Per stored center, two variants (index 2k: w_k, index 2k+1: -conj w_k):
    std::vector<C> psi_c;            // center of psi(w)
    std::vector<double> psi_r;       // its certified radius
    std::vector<double> num_up;      // (2 Re v)^2 * |v| * |b - w|^2, rounded up
    std::vector<double> area_gamma;  // h^2 / gamma_k^2, rounded down (0: skip)
    std::size_t skipped = 0;         // variants dropped (disk not inside the slit plane)
};

UniformizerCache build_uniformizer_cache(const Uniformizer& uni, const Domains& dom,
                                         const Cover& packing);

// Certified lower bound of sum_k h^2 / (C(z, w_k) gamma_k)^2 over the
// symmetrized packing cells: a lower bound of the density g_A(z) for the
// union A of the packing cells. Empty packing gives 0. Terms that cannot be
// certified (pseudo-hyperbolic distance not provably < 1) are dropped, which
// only lowers the bound.
double g_density(const UniformizerCache& cache, Ball z);
double g_density(const Uniformizer& uni, const Domains& dom, Ball z, const Cover& packing);

struct DistortionBound {
    double m_up = 0.0;        // certified upper bound of sup over probes of 1/g
    C witness{0.0, 0.0};      // probe center attaining the bound
    double witness_g = 0.0;   // downward-rounded density at the witness
    std::size_t probes = 0;   // probe points evaluated (two per stored cell)
    std::vector<double> g_values;  // per-probe density lower bounds
    std::vector<C> probe_points;   // matching probe centers
};

// Certified upper bound of the Koebe area-comparison constant M = sup 1/g
// over the region covered by s_cover. The comparison is applied one quadrant
// tile at a time, so the bound is the larger of two oriented sweeps: probes
// at the stored cell centers paired with the quadrant-I packing terms, and
// probes at their mirrors across the imaginary axis paired with the mirrored
// terms. Conjugation symmetry of the kernel covers the lower half-plane
// tiles at no extra cost. Every probe is inflated by the within-probe-disk
// variation factor at the cover's radius. Throws when a probe disk cannot be
// certified inside the slit plane. Probes with zero certified density yield
// an infinite bound.
DistortionBound m_upper(const Uniformizer& uni, const Domains& dom, const Cover& packing,
                        const Cover& s_cover, int threads = 1);

}  // namespace feigdim
