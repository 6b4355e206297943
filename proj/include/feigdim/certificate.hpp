#pragma once
// Assembly of the dimension certificate. The headline inequality is
//
//   eta_n * M_n * ar(P0) < 1,
//
// where eta_n = ar(Xtilde_n ∩ P1) / ar(P1) is the relative trapped area in
// the first rescaled piece P1 = lambda * P0, and M_n is the distortion bound
// over the Sigma_n packing. Every area in this file is the area of ONE
// quadrant-I tile: the trapped set, the packing, and P0 itself all carry the
// same four-fold symmetry, so the quadrant-I convention is consistent on
// both sides of every inequality and no factor of four appears anywhere.
// Since ar(P1) = lambda^2 * ar(P0) exactly, the product collapses to
//
//   eta_n * M_n * ar(P0) = A_n * M_n / lambda^2,   A_n = ar(Xtilde_n ∩ P1),
//
// and ar(P0) cancels. The certificate still reports the three factors: the
// stored eta_upper is normalized against the *computed upper bound* of
// ar(P0), i.e. eta_upper = A_up / (lambda^2_dn * areaP0_up). That choice
// makes the reported product
//
//   up( up(eta_upper * M_upper) * areaP0_upper ) >= A_up * M_up / lambda^2_dn
//
// a certified upper bound of the true product, with no dependence on a lower
// bound for ar(P0). (Normalizing against a lower bound instead would inflate
// the product by the area gap and is not done.)

#include <cstddef>
#include <cstdint>
#include <string>

#include "feigdim/cover.hpp"
#include "feigdim/distortion.hpp"
#include "feigdim/domains.hpp"
#include "feigdim/map.hpp"

namespace feigdim {

struct Certificate {
    int n = 0;
    double eta_upper = 0.0;      // A_up / (lambda^2_dn * areaP0_up)
    double m_upper = 0.0;        // certified upper bound of M_n
    double area_p0_upper = 0.0;  // quadrant-I tile upper bound of ar(P0)
    double product = 0.0;        // outward-rounded eta * M * arP0
    bool certified = false;      // product < 1, all stages validated

    // Derived headline normalization: eta_n * ar(P0) <= A_up / lambda^2_dn.
    double eta_norm = 0.0;

    // Provenance.
    int x_spacing_exp = 0, sigma_spacing_exp = 0, p0_spacing_exp = 0;
    int p0_depth = 0, max_steps = 0;
    std::uint64_t coeff_checksum = 0;
    std::size_t x_cells = 0, sigma_cells = 0, p0_cells = 0, probes = 0;
    double eps_max = 0.0, delta_max = 0.0;  // accumulated step-error maxima
    C m_witness{0.0, 0.0};
    double m_witness_g = 0.0;
};

// Validates cover kinds/targets/levels and coefficient checksums against the
// map (throws std::runtime_error on any mismatch: fail-closed, no
// certificate), then assembles the outward-rounded product and verdict.
Certificate assemble_certificate(const Map& map, const Cover& x_cover,
                                 const Cover& sigma_packing, const Cover& p0_cover,
                                 const DistortionBound& dist,
                                 const StepErrorLedger* ledger = nullptr);

// Deterministic JSON document (one object, fixed key order).
std::string certificate_json(const Certificate& cert);

// Certified lower bound of the quadrant-I tile area of P0 from the inscribed
// region: shoelace area of the folded boundary chain, scaled and rounded
// down.
double p0_area_lower(const Domains& dom);

// One row of the recursive-estimate diagnostic
//
//   eta_{n+m} <= M_{n,m} * ar(P0) * eta_n * eta_{m+1}.
//
// With eta_k = A_k / (lambda^2 ar(P0)), multiplying both sides by
// lambda^2 ar(P0) cancels ar(P0) completely and the inequality becomes the
// pure area form
//
//   A_{n+m} <= M * A_n * A_{m+1} / lambda^2.
//
// Both sides are computed as upper bounds, so a small inversion only
// reflects cover overshoot at level n+m; a violation beyond `slack`
// (lhs > (1+slack)*rhs) indicates an implementation bug and is flagged.
struct RecursiveRow {
    int n = 0, m = 0;
    double lhs_up = 0.0;   // upper bound of A_{n+m}
    double rhs_up = 0.0;   // upper bound of M * A_n * A_{m+1} / lambda^2
    double ratio = 0.0;    // lhs / rhs (0 when rhs is infinite)
    bool violation = false;
};

RecursiveRow recursive_estimate_row(const Map& map, const Domains& dom, const Cover& x_n,
                                    const Cover& x_m1, const Cover& x_nm, double m_bound_n,
                                    double slack);

}  // namespace feigdim
