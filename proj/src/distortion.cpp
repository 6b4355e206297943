#include "feigdim/distortion.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "feigdim/roundoff.hpp"

namespace feigdim {

namespace {

// Branch-light directed rounding for the hot pair kernel. For finite
// doubles, stepping the payload bits by one reproduces nextafter exactly
// (the binary64 bit pattern is monotone on each sign half); zeros map to
// the signed smallest subnormal. Semantics match the shared helpers in
// roundoff.hpp on every value the kernel produces (finite, never NaN).
inline double fup(double x) {
    std::uint64_t b;
    if (x > 0.0) {
        std::memcpy(&b, &x, 8);
        ++b;
        std::memcpy(&x, &b, 8);
        return x;
    }
    if (x < 0.0) {
        std::memcpy(&b, &x, 8);
        --b;
        std::memcpy(&x, &b, 8);
        return x;
    }
    return 0x1p-1074;
}
inline double fdn(double x) {
    std::uint64_t b;
    if (x > 0.0) {
        std::memcpy(&b, &x, 8);
        --b;
        std::memcpy(&x, &b, 8);
        return x;
    }
    if (x < 0.0) {
        std::memcpy(&b, &x, 8);
        ++b;
        std::memcpy(&x, &b, 8);
        return x;
    }
    return -0x1p-1074;
}
inline double f_add_up(double a, double b) { return fup(a + b); }
inline double f_sub_dn(double a, double b) { return fdn(a - b); }
inline double f_mul_up(double a, double b) { return fup(a * b); }
inline double f_mul_dn(double a, double b) { return fdn(a * b); }
inline double f_div_up(double a, double b) { return fup(a / b); }
inline double f_div_dn(double a, double b) { return fdn(a / b); }
inline double f_mag_up(C z) {
    return fup(std::sqrt(f_add_up(f_mul_up(z.real(), z.real()), f_mul_up(z.imag(), z.imag()))));
}
inline double f_mag_dn(C z) {
    const double s = fdn(f_mul_dn(z.real(), z.real()) + f_mul_dn(z.imag(), z.imag()));
    return s <= 0 ? 0.0 : fdn(std::sqrt(s));
}

// The two Moebius data slots of one half-plane point: certified bounds of
// the numerator product (2 Re v)^2 |v| |b - w|^2 and of the denominator
// factors depend only on conjugation-invariant quantities, so one record
// serves both v and conj(v).
struct ProbeData {
    C uc{0.0, 0.0};      // center of u = psi(z)
    double ur = 0.0;     // radius of u
    double den_dn = 0.0; // |u| * |b - z|^2, rounded down
};

// fac1(d) = (1 + d)/(1 - d)^3 rounded up; requires d < 1.
double fac1_up(double d_up) {
    const double one_m = sub_dn(1.0, d_up);
    if (!(one_m > 0)) throw std::domain_error("distortion: pseudo-hyperbolic bound reaches 1");
    const double cube = mul_dn(one_m, mul_dn(one_m, one_m));
    return div_up(add_up(1.0, d_up), cube);
}

// One symmetrized term of the density sum: the contribution of the packing
// cell with cached data (vc or conj vc) to the probe with data p. Returns 0
// when the pair cannot be certified (dropping a nonnegative term is sound).
double pair_term_dn(const ProbeData& p, C vc, double vr, double num_k_up, double area_gamma_dn) {
    // Pseudo-hyperbolic upper bound d = |u - v| / |u + conj v|.
    const C dc = csub(p.uc, vc);
    const double cross = f_add_up(f_add_up(p.ur, vr), f_mul_up(kEpsAdd, f_mag_up(dc)));
    const double num_d = f_add_up(f_mag_up(dc), cross);
    const C sc = cadd(p.uc, C{vc.real(), -vc.imag()});
    const double den_d =
        f_sub_dn(f_mag_dn(sc), f_add_up(f_add_up(p.ur, vr), f_mul_up(kEpsAdd, f_mag_up(sc))));
    if (!(den_d > 0)) return 0.0;
    const double d_up = f_div_up(num_d, den_d);
    const double one_m = f_sub_dn(1.0, d_up);
    if (!(one_m > 0)) return 0.0;

    // C_up = (1+d)/(1-d)^3 * num_k / (|u + conj v|^2 * |u| * |b - z|^2).
    const double f1 = f_div_up(f_add_up(1.0, d_up), f_mul_dn(one_m, f_mul_dn(one_m, one_m)));
    const double denom = f_mul_dn(f_mul_dn(den_d, den_d), p.den_dn);
    if (!(denom > 0)) return 0.0;
    const double c_up = f_mul_up(f1, f_div_up(num_k_up, denom));
    return f_div_dn(area_gamma_dn, f_mul_up(c_up, c_up));
}

ProbeData make_probe(const Uniformizer& uni, Ball z) {
    ProbeData p;
    const Ball u = uni.psi(z);
    p.uc = u.c;
    p.ur = u.r;
    const Ball bz = ball_sub(uni.b, z);
    const double bz_lb = bz.norm_lb();
    p.den_dn = mul_dn(u.norm_lb(), mul_dn(bz_lb, bz_lb));
    if (!(p.den_dn > 0)) throw std::domain_error("distortion: probe degenerate (|u| or |b - z| not positive)");
    return p;
}

// Density sum over the full four-fold symmetrization of the stored packing:
// both stored orientations of every center plus their conjugates. A valid
// lower bound for g of the symmetric escaping set.
double g_probe_symmetric(const UniformizerCache& cache, const ProbeData& p) {
    double g = 0.0;
    const std::size_t n = cache.psi_c.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double ag = cache.area_gamma[k];
        if (ag == 0.0) continue;
        const C vc = cache.psi_c[k];
        const double vr = cache.psi_r[k];
        const double nk = cache.num_up[k];
        g = add_dn(g, pair_term_dn(p, vc, vr, nk, ag));
        g = add_dn(g, pair_term_dn(p, C{vc.real(), -vc.imag()}, vr, nk, ag));
    }
    return g;
}

// Density sum over a single tile's share of the packing. The area-comparison
// argument is applied one quadrant tile at a time (the inverse branch maps a
// copy onto one tile), so probes of the quadrant-I tile may only integrate
// over quadrant-I packing disks (orientation 0), and probes of the mirrored
// tile only over the mirrored disks (orientation 1). Conjugate tiles need no
// separate sweep: psi commutes with conjugation, so their sums are equal.
double g_probe_tile(const UniformizerCache& cache, const ProbeData& p, int orientation) {
    double g = 0.0;
    const std::size_t n = cache.psi_c.size();
    for (std::size_t k = std::size_t(orientation); k < n; k += 2) {
        const double ag = cache.area_gamma[k];
        if (ag == 0.0) continue;
        g = add_dn(g, pair_term_dn(p, cache.psi_c[k], cache.psi_r[k], cache.num_up[k], ag));
    }
    return g;
}

}  // namespace

Uniformizer::Uniformizer(const Map& map) {
    const RBall il = map.consts.inv_lambda;
    a = Ball{C{-il.c, 0.0}, il.r};
    b = Ball{C{map.slit_b.c, 0.0}, map.slit_b.r};
    slit_b_lo = map.slit_b.lo();
}

Ball Uniformizer::psi(Ball z) const {
    // ball_div refuses a divisor meeting zero and ball_sqrt refuses a ball
    // meeting the branch cut (-inf, 0]; together these certify that z stays
    // inside the slit plane, because the Moebius map (z - a)/(b - z) sends
    // exactly the two slits onto the cut.
    return ball_sqrt(ball_div(ball_sub(z, a), ball_sub(b, z)));
}

IReal pseudo_hyperbolic(const Uniformizer& uni, Ball z, Ball w) {
    const Ball u = uni.psi(z);
    const Ball v = uni.psi(w);
    const Ball num = ball_sub(u, v);
    const Ball den = ball_add(u, ball_conj(v));
    const double den_lb = den.norm_lb();
    if (!(den_lb > 0)) throw std::domain_error("pseudo_hyperbolic: denominator meets zero");
    const double hi = div_up(num.norm_ub(), den_lb);
    const double lo = div_dn(num.norm_lb(), den.norm_ub());
    return {lo > 0 ? lo : 0.0, hi};
}

double distortion_upper(const Uniformizer& uni, Ball z, Ball w) {
    const Ball u = uni.psi(z);
    const Ball v = uni.psi(w);

    const Ball num = ball_sub(u, v);
    const Ball den = ball_add(u, ball_conj(v));
    const double den_lb = den.norm_lb();
    if (!(den_lb > 0)) throw std::domain_error("distortion_upper: denominator meets zero");
    const double d_up = div_up(num.norm_ub(), den_lb);
    const double f1 = fac1_up(d_up);

    // Derivative ratio (2 Re v)^2 / |u + conj v|^2 * |v| |b-w|^2 / (|u| |b-z|^2).
    const double re_v_up = add_up(v.c.real(), v.r);
    const double re_v_dn = sub_dn(v.c.real(), v.r);
    if (!(re_v_dn > 0)) throw std::domain_error("distortion_upper: psi(w) not in the right half-plane");
    const double two_rev_sq = mul_up(mul_up(2.0, re_v_up), mul_up(2.0, re_v_up));
    const Ball bw = ball_sub(uni.b, w);
    const Ball bz = ball_sub(uni.b, z);
    const double bw_ub = bw.norm_ub();
    const double bz_lb = bz.norm_lb();
    const double u_lb = u.norm_lb();
    if (!(bz_lb > 0) || !(u_lb > 0))
        throw std::domain_error("distortion_upper: degenerate |b - z| or |psi(z)|");
    const double num_r = mul_up(two_rev_sq, mul_up(v.norm_ub(), mul_up(bw_ub, bw_ub)));
    const double den_r = mul_dn(mul_dn(den_lb, den_lb), mul_dn(u_lb, mul_dn(bz_lb, bz_lb)));
    return mul_up(f1, div_up(num_r, den_r));
}

double koebe_disk_factor_up(double rho_up) {
    if (!(rho_up >= 0) || !(rho_up < 1))
        throw std::domain_error("koebe_disk_factor_up: need 0 <= rho < 1");
    return fac1_up(rho_up);
}

UniformizerCache build_uniformizer_cache(const Uniformizer& uni, const Domains& dom,
                                         const Cover& packing) {
    UniformizerCache cache;
    cache.uni = uni;
    cache.cell_area = packing.grid.h * packing.grid.h;  // dyadic, exact
    cache.radius_up = packing.grid.disk_radius_up();

    const std::size_t n = packing.cells.size();
    cache.psi_c.reserve(2 * n);
    cache.psi_r.reserve(2 * n);
    cache.num_up.reserve(2 * n);
    cache.area_gamma.reserve(2 * n);

    auto push_variant = [&](C w) {
        // Certified maximal-disk radius about the center; the cell's covering
        // disk must fit strictly inside or the variation factor is void.
        const double big_r = dom.dist_koebe_slits_lb(w, uni.slit_b_lo);
        if (!(big_r > cache.radius_up)) {
            ++cache.skipped;
            cache.psi_c.push_back(C{0.0, 0.0});
            cache.psi_r.push_back(0.0);
            cache.num_up.push_back(0.0);
            cache.area_gamma.push_back(0.0);
            return;
        }
        const double gamma = koebe_disk_factor_up(div_up(cache.radius_up, big_r));
        const Ball v = uni.psi(Ball::exact(w));
        const double re_v_dn = sub_dn(v.c.real(), v.r);
        if (!(re_v_dn > 0)) throw std::domain_error("uniformizer cache: psi image leaves the right half-plane");
        const double re_v_up = add_up(v.c.real(), v.r);
        const double two_rev_sq = mul_up(mul_up(2.0, re_v_up), mul_up(2.0, re_v_up));
        const Ball bw = ball_sub(uni.b, Ball::exact(w));
        const double bw_ub = bw.norm_ub();
        cache.psi_c.push_back(v.c);
        cache.psi_r.push_back(v.r);
        cache.num_up.push_back(mul_up(two_rev_sq, mul_up(v.norm_ub(), mul_up(bw_ub, bw_ub))));
        cache.area_gamma.push_back(div_dn(cache.cell_area, mul_up(gamma, gamma)));
    };

    for (const auto& [ix, iy] : packing.cells) {
        const C w = packing.grid.center(ix, iy);
        push_variant(w);
        push_variant(C{-w.real(), w.imag()});
    }
    return cache;
}

double g_density(const UniformizerCache& cache, Ball z) {
    if (cache.psi_c.empty()) return 0.0;
    return g_probe_symmetric(cache, make_probe(cache.uni, z));
}

double g_density(const Uniformizer& uni, const Domains& dom, Ball z, const Cover& packing) {
    return g_density(build_uniformizer_cache(uni, dom, packing), z);
}

DistortionBound m_upper(const Uniformizer& uni, const Domains& dom, const Cover& packing,
                        const Cover& s_cover, int threads) {
    const UniformizerCache cache = build_uniformizer_cache(uni, dom, packing);
    const double t_up = s_cover.grid.disk_radius_up();

    const std::size_t ncells = s_cover.cells.size();
    DistortionBound out;
    out.probes = 2 * ncells;
    out.g_values.assign(out.probes, 0.0);
    out.probe_points.assign(out.probes, C{0.0, 0.0});
    std::vector<double> m_values(out.probes, 0.0);

    const int nthreads = std::max(1, threads);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&]() {
        try {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= ncells || failed.load(std::memory_order_relaxed)) return;
                const auto [ix, iy] = s_cover.cells[i];
                const C c0 = s_cover.grid.center(ix, iy);
                for (int variant = 0; variant < 2; ++variant) {
                    const C zj = variant == 0 ? c0 : C{-c0.real(), c0.imag()};
                    const double big_r = dom.dist_koebe_slits_lb(zj, uni.slit_b_lo);
                    if (!(big_r > t_up))
                        throw std::domain_error("m_upper: probe disk not inside the slit plane");
                    const double gs = koebe_disk_factor_up(div_up(t_up, big_r));
                    const double g0 = g_probe_tile(cache, make_probe(uni, Ball::exact(zj)), variant);
                    const std::size_t slot = 2 * i + std::size_t(variant);
                    out.probe_points[slot] = zj;
                    out.g_values[slot] = g0;
                    m_values[slot] = g0 > 0 ? div_up(mul_up(gs, gs), g0)
                                            : std::numeric_limits<double>::infinity();
                }
            }
        } catch (...) {
            const std::lock_guard<std::mutex> lock(error_mu);
            if (!failed.exchange(true)) error = std::current_exception();
        }
    };
    if (nthreads == 1 || ncells < 2) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(std::size_t(nthreads));
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failed.load()) std::rethrow_exception(error);

    // Deterministic reduction: scan in probe order; first maximum wins.
    out.m_up = 0.0;
    std::size_t arg = 0;
    for (std::size_t s = 0; s < m_values.size(); ++s) {
        if (m_values[s] > out.m_up) {
            out.m_up = m_values[s];
            arg = s;
        }
    }
    if (!m_values.empty()) {
        out.witness = out.probe_points[arg];
        out.witness_g = out.g_values[arg];
    }
    if (m_values.empty()) out.m_up = std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace feigdim
