#include "feigdim/certificate.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "feigdim/roundoff.hpp"

namespace feigdim {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::runtime_error(std::string("certificate: ") + what);
}

// Quadrant-I upper area of a cover: count * h^2, outward. All certificate
// quantities are per quadrant tile: the area-comparison inequality is stated
// for the quadrant-I piece, and the four-fold symmetry makes the tiles'
// areas equal, so no factor of four appears anywhere.
double tile_area_up(const Cover& c) {
    return area_bound(c).bound;
}

double ledger_max(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

}  // namespace

Certificate assemble_certificate(const Map& map, const Cover& x_cover,
                                 const Cover& sigma_packing, const Cover& p0_cover,
                                 const DistortionBound& dist, const StepErrorLedger* ledger) {
    require(x_cover.target == CoverTarget::Xtilde && x_cover.kind == CoverKind::UpperCover,
            "first cover must be an upper cover of Xtilde");
    require(sigma_packing.target == CoverTarget::Sigma &&
                sigma_packing.kind == CoverKind::LowerPacking,
            "second cover must be a lower packing of Sigma");
    require(p0_cover.target == CoverTarget::P0 && p0_cover.kind == CoverKind::UpperCover,
            "third cover must be an upper cover of P0");
    require(x_cover.n == sigma_packing.n, "Xtilde and Sigma levels differ");
    const std::uint64_t ck = map.poly.checksum;
    require(x_cover.coeff_checksum == ck && sigma_packing.coeff_checksum == ck &&
                p0_cover.coeff_checksum == ck,
            "coefficient checksum mismatch");
    require(dist.m_up > 0, "distortion bound missing");

    Certificate cert;
    cert.n = x_cover.n;
    cert.m_upper = dist.m_up;
    cert.area_p0_upper = tile_area_up(p0_cover);
    require(cert.area_p0_upper > 0, "empty P0 cover");

    const double a_up = tile_area_up(x_cover);
    const double l2_dn = map.consts.pow[2].lo();
    cert.eta_norm = div_up(a_up, l2_dn);
    cert.eta_upper = div_up(a_up, mul_dn(l2_dn, cert.area_p0_upper));
    cert.product = mul_up(mul_up(cert.eta_upper, cert.m_upper), cert.area_p0_upper);
    cert.certified = std::isfinite(cert.product) && cert.product < 1.0;

    cert.x_spacing_exp = int(std::lround(-std::log2(x_cover.grid.h)));
    cert.sigma_spacing_exp = int(std::lround(-std::log2(sigma_packing.grid.h)));
    cert.p0_spacing_exp = int(std::lround(-std::log2(p0_cover.grid.h)));
    cert.p0_depth = p0_cover.n;
    cert.max_steps = x_cover.max_iter;
    cert.coeff_checksum = ck;
    cert.x_cells = x_cover.cells.size();
    cert.sigma_cells = sigma_packing.cells.size();
    cert.p0_cells = p0_cover.cells.size();
    cert.probes = dist.probes;
    if (ledger) {
        cert.eps_max = ledger_max(ledger->eps);
        cert.delta_max = ledger_max(ledger->delta);
    }
    cert.m_witness = dist.witness;
    cert.m_witness_g = dist.witness_g;
    return cert;
}

std::string certificate_json(const Certificate& cert) {
    char buf[2048];
    std::snprintf(
        buf, sizeof buf,
        "{\n"
        "  \"n\": %d,\n"
        "  \"eta_upper\": %.17g,\n"
        "  \"M_upper\": %.17g,\n"
        "  \"areaP0_upper\": %.17g,\n"
        "  \"product\": %.17g,\n"
        "  \"verdict\": \"%s\",\n"
        "  \"eta_times_areaP0\": %.17g,\n"
        "  \"provenance\": {\n"
        "    \"x_spacing_exp\": %d,\n"
        "    \"sigma_spacing_exp\": %d,\n"
        "    \"p0_spacing_exp\": %d,\n"
        "    \"p0_depth\": %d,\n"
        "    \"max_steps\": %d,\n"
        "    \"coeff_checksum\": \"%016" PRIx64 "\",\n"
        "    \"x_cells\": %zu,\n"
        "    \"sigma_cells\": %zu,\n"
        "    \"p0_cells\": %zu,\n"
        "    \"distortion_probes\": %zu,\n"
        "    \"eps_max\": %.17g,\n"
        "    \"delta_max\": %.17g,\n"
        "    \"m_witness\": [%.17g, %.17g],\n"
        "    \"m_witness_g\": %.17g\n"
        "  }\n"
        "}\n",
        cert.n, cert.eta_upper, cert.m_upper, cert.area_p0_upper, cert.product,
        cert.certified ? "Certified" : "NotCertified", cert.eta_norm, cert.x_spacing_exp,
        cert.sigma_spacing_exp, cert.p0_spacing_exp, cert.p0_depth, cert.max_steps,
        cert.coeff_checksum, cert.x_cells, cert.sigma_cells, cert.p0_cells, cert.probes,
        cert.eps_max, cert.delta_max, cert.m_witness.real(), cert.m_witness.imag(),
        cert.m_witness_g);
    return std::string(buf);
}

double p0_area_lower(const Domains& dom) {
    // Shoelace area of the closed first-quadrant polygon (0,0) -> chain ->
    // (0,0), rounded down, times the squared scale lower bound.  This is
    // the area of one quadrant tile, matching the per-tile convention used
    // throughout the certificate arithmetic.
    const auto& chain = dom.pin().base_chain();
    if (chain.size() < 2) return 0.0;
    double twice = 0.0;  // sum of cross products, rounded down (all terms
                         // are nonnegative for a monotone outer chain)
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        const double cross =
            sub_dn(mul_dn(chain[i].x, chain[i + 1].y), mul_up(chain[i].y, chain[i + 1].x));
        twice = add_dn(twice, cross);
    }
    if (twice < 0) twice = 0.0;
    const double s_lo = dom.pin().scale().lo;
    return mul_dn(0.5, mul_dn(twice, mul_dn(s_lo, s_lo)));
}

RecursiveRow recursive_estimate_row(const Map& map, const Domains& dom, const Cover& x_n,
                                    const Cover& x_m1, const Cover& x_nm, double m_bound_n,
                                    double slack) {
    (void)dom;
    require(x_n.target == CoverTarget::Xtilde && x_m1.target == CoverTarget::Xtilde &&
                x_nm.target == CoverTarget::Xtilde,
            "recursive estimate needs Xtilde covers");
    const std::uint64_t ck = map.poly.checksum;
    require(x_n.coeff_checksum == ck && x_m1.coeff_checksum == ck && x_nm.coeff_checksum == ck,
            "coefficient checksum mismatch");
    RecursiveRow row;
    row.n = x_n.n;
    row.m = x_nm.n - x_n.n;
    require(x_m1.n == row.m + 1, "cover levels are not (n, m+1, n+m)");

    row.lhs_up = tile_area_up(x_nm);
    const double l2_dn = map.consts.pow[2].lo();
    row.rhs_up = std::isfinite(m_bound_n)
                     ? mul_up(m_bound_n,
                              div_up(mul_up(tile_area_up(x_n), tile_area_up(x_m1)), l2_dn))
                     : std::numeric_limits<double>::infinity();
    row.ratio = std::isfinite(row.rhs_up) && row.rhs_up > 0 ? row.lhs_up / row.rhs_up : 0.0;
    row.violation = std::isfinite(row.rhs_up) && row.lhs_up > (1.0 + slack) * row.rhs_up;
    return row;
}

}  // namespace feigdim
