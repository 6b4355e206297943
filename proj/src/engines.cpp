// Decision procedures for the three grid sweeps.
//
// Soundness polarity, uniformly: a test whose failure would break the
// one-sided guarantee is decided on the conservative side. Upper covers
// retain on any ambiguity; the packing includes a cell only when every
// certificate in the chain is strict. Escape from the H-extension is
// certified against the outer approximation (outside it implies outside the
// true set); capture is certified against the outer capture approximation
// (outside it implies the true capture set was avoided).
//
// Exclusion and inclusion both rest on the shrinking-disk certificate: if
// the iterate ladder reaches a point whose distance R to the escape slits
// and the second escape region exceeds 4 r |DF| for the accumulated
// derivative, the Koebe one-quarter theorem pulls a disk of radius r back
// along the orbit. The capture-avoidance hypothesis of that certificate is
// checked at every visited return point; between return points it holds
// structurally, because a return point certifiably outside the level-n
// capture approximation has window depth at most n-1, and the intermediate
// iterates of a first-return jump from depth m stay outside the depth-(m-1)
// window, which contains the level-n capture set whenever m <= n.

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

#include "feigdim/cover.hpp"
#include "feigdim/orbit.hpp"
#include "feigdim/roundoff.hpp"

namespace feigdim {

namespace {

double ball_mag_up(const Ball& b) { return add_up(mag_up(b.c), b.r); }

// ---- upper cover of the level-n capture set -------------------------------
//
// True when the cell's covering disk must stay in the cover. The orbit
// iterated is that of the exact cell center; the covering radius enters
// only through the final inequality, where the Koebe one-quarter theorem
// pulls the certified clearance disk back over the whole cell. Excluding
// requires the full certificate: capture approximation avoided at every
// visited return point of the center orbit, escape certified, and the
// escape point's clearance beating 4 r |DF|.
bool xtilde_retains(const Map& map, const Domains& dom, int n, Ball z0, double r_up, int K,
                    StepErrorLedger* led) {
    const FoldedRegion& capture = dom.wtilde_hat(n);
    OrbitState st = make_orbit(z0);
    for (int k = 0; k < K; ++k) {
        if (capture.classify(st.z) != Pos::Outside) return true;
        if (dom.hout1().classify(st.z) == Pos::Outside) {
            const double R = dom.dist_v2star_lb(st.z);
            const double rhs = mul_up(4.0, mul_up(r_up, ball_mag_up(st.deriv)));
            return !(R > rhs);
        }
        if (k + 1 == K) return true;  // never certifiably escaped within K returns
        if (first_return_step(map, dom, st) != StepOutcome::Ok) return true;
        if (led) led->record(st.steps, st.z.r, st.deriv.r);
    }
    return true;
}

// ---- lower packing of the level-n dissipative set --------------------------
//
// True when the cell's disk, rescaled by lambda^n, is certified inside the
// target: the center orbit certifiably leaves the H-extension, and the
// rescaled escape point's own orbit certifiably leaves again while avoiding
// the capture approximation at every visited return point, with the final
// clearance beating 4 r |DF(w-phase)| |DF(z-phase)|. Every ambiguity
// discards (a packing may only lose cells).
bool sigma_includes(const Map& map, const Domains& dom, int n, Ball z0, double r_up, int K,
                    StepErrorLedger* led) {
    OrbitState zst = make_orbit(z0);
    bool escaped = false;
    for (int k = 0; k < K; ++k) {
        if (dom.hout1().classify(zst.z) == Pos::Outside) {
            escaped = true;
            break;
        }
        if (k + 1 == K) break;
        if (first_return_step(map, dom, zst) != StepOutcome::Ok) return false;
        if (led) led->record(zst.steps, zst.z.r, zst.deriv.r);
    }
    if (!escaped) return false;

    const FoldedRegion& capture = dom.wtilde_hat(n);
    OrbitState wst = make_orbit(ball_scale(map.consts.pow[std::size_t(n)], zst.z));
    for (int l = 1; l < K; ++l) {
        if (first_return_step(map, dom, wst) != StepOutcome::Ok) return false;
        if (led) led->record(wst.steps, wst.z.r, wst.deriv.r);
        if (capture.classify(wst.z) != Pos::Outside) return false;
        if (dom.hout1().classify(wst.z) == Pos::Outside) {
            const double R = dom.dist_v2star_lb(wst.z);
            const double dprod = mul_up(ball_mag_up(wst.deriv), ball_mag_up(zst.deriv));
            return R > mul_up(4.0, mul_up(r_up, dprod));
        }
    }
    return false;  // never certifiably escaped again: possibly recurrent
}

// ---- upper cover of the central piece --------------------------------------
//
// True when the cell's disk must stay in the cover of the piece. The disk
// image is tracked through 2^m - 1 iterates at depth m; it is discarded when
// some image certifiably misses the outer window, or certifiably misses the
// quadrant of the tracked interior reference point. Both discards are sound
// for points of the piece: every image tile of the depth-m scaled piece
// stays inside the window for fewer than 2^m steps, and tiles are confined
// to one quadrant, shared with the image of the interior reference point.
// Pinching the cover to the true piece near the real axis matters: the
// distortion probes drawn from this cover must stay clear of the slits.
bool p0_retains(const Map& map, const Domains& dom, int m, Ball cell) {
    if (dom.pin().dist_lb(cell) <= 0.0) return true;  // may meet the inner piece box

    const RBall depth = map.consts.pow[std::size_t(m)];
    Ball w = ball_scale(depth, cell);
    Ball q = ball_scale(depth, Ball::exact(0.1, 0.1));
    const int steps = (1 << m) - 1;
    for (int j = 1; j <= steps; ++j) {
        const auto fw = map.try_f_smart(w);
        const auto fq = map.try_f_smart(q);
        if (!fw || !fq) return true;  // enclosure blew past the certified strata
        w = *fw;
        q = *fq;
        if (w.norm_lb() <= 0.0) return true;  // image may contain the critical value
        if (dom.wout(0).dist_lb(w) > 0.0) return false;
        const auto qq = certified_quadrant(q);
        if (qq && dist_quadrant_lb(w, *qq) > 0.0) return false;
    }
    return true;
}

// ---- sweep driver -----------------------------------------------------------

struct SweepPlan {
    GridSpec grid;
    const Cover* base = nullptr;  // when set, visit only subcells of its cells
    int factor = 1;
};

template <class Decide>
std::vector<std::pair<int, int>> sweep(const SweepPlan& plan, int threads, StepErrorLedger* ledger,
                                       Decide decide) {
    // Candidate columns per parent row (refinement restricts the sweep).
    std::vector<std::vector<int>> parent_rows;
    if (plan.base) {
        parent_rows.resize(std::size_t(plan.base->grid.ny));
        for (const auto& [ix, iy] : plan.base->cells) parent_rows[std::size_t(iy)].push_back(ix);
    }

    const int nthreads = std::max(1, threads);
    std::vector<std::vector<std::pair<int, int>>> outs(static_cast<std::size_t>(nthreads));
    std::vector<StepErrorLedger> leds(static_cast<std::size_t>(nthreads));
    std::atomic<int> next_row{0};

    auto worker = [&](int tid) {
        StepErrorLedger* led = ledger ? &leds[std::size_t(tid)] : nullptr;
        auto& out = outs[std::size_t(tid)];
        for (;;) {
            const int iy = next_row.fetch_add(1);
            if (iy >= plan.grid.ny) break;
            if (plan.base) {
                for (int pix : parent_rows[std::size_t(iy / plan.factor)])
                    for (int dx = 0; dx < plan.factor; ++dx) {
                        const int ix = pix * plan.factor + dx;
                        if (decide(ix, iy, led)) out.emplace_back(ix, iy);
                    }
            } else {
                for (int ix = 0; ix < plan.grid.nx; ++ix)
                    if (decide(ix, iy, led)) out.emplace_back(ix, iy);
            }
        }
    };

    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(std::size_t(nthreads));
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }

    std::size_t total = 0;
    for (const auto& o : outs) total += o.size();
    std::vector<std::pair<int, int>> cells;
    cells.reserve(total);
    for (const auto& o : outs) cells.insert(cells.end(), o.begin(), o.end());
    std::sort(cells.begin(), cells.end());
    if (ledger)
        for (const auto& l : leds) ledger->merge(l);
    return cells;
}

Cover make_cover(CoverKind kind, CoverTarget target, int n, int K, const GridSpec& grid,
                 const Map& map, std::vector<std::pair<int, int>> cells) {
    Cover c;
    c.kind = kind;
    c.target = target;
    c.n = n;
    c.max_iter = K;
    c.grid = grid;
    c.coeff_checksum = map.poly.checksum;
    c.cells = std::move(cells);
    return c;
}

Cover run_xtilde(const Map& map, const Domains& dom, int n, const SweepPlan& plan, int K,
                 const EngineOptions& opts) {
    if (n < 3) throw std::invalid_argument("cover_xtilde: n must be at least 3");
    if (K < 1) throw std::invalid_argument("cover_xtilde: K must be positive");
    const double r_up = plan.grid.disk_radius_up();
    auto cells = sweep(plan, opts.threads, opts.ledger, [&](int ix, int iy, StepErrorLedger* led) {
        return xtilde_retains(map, dom, n, Ball::exact(plan.grid.center(ix, iy)), r_up, K, led);
    });
    return make_cover(CoverKind::UpperCover, CoverTarget::Xtilde, n, K, plan.grid, map,
                      std::move(cells));
}

Cover run_sigma(const Map& map, const Domains& dom, int n, const SweepPlan& plan, int K,
                const EngineOptions& opts) {
    if (n < 3) throw std::invalid_argument("cover_sigma: n must be at least 3");
    if (K < 1) throw std::invalid_argument("cover_sigma: K must be positive");
    const double r_up = plan.grid.disk_radius_up();
    auto cells = sweep(plan, opts.threads, opts.ledger, [&](int ix, int iy, StepErrorLedger* led) {
        return sigma_includes(map, dom, n, Ball::exact(plan.grid.center(ix, iy)), r_up, K, led);
    });
    return make_cover(CoverKind::LowerPacking, CoverTarget::Sigma, n, K, plan.grid, map,
                      std::move(cells));
}

Cover run_p0(const Map& map, const Domains& dom, int m, const SweepPlan& plan,
             const EngineOptions& opts) {
    if (m < 1 || m > 20) throw std::invalid_argument("cover_p0: m out of range");
    auto cells = sweep(plan, opts.threads, nullptr, [&](int ix, int iy, StepErrorLedger*) {
        return p0_retains(map, dom, m, plan.grid.cell_ball(ix, iy));
    });
    return make_cover(CoverKind::UpperCover, CoverTarget::P0, m, (1 << m) - 1, plan.grid, map,
                      std::move(cells));
}

}  // namespace

Cover cover_xtilde(const Map& map, const Domains& dom, int n, const GridSpec& grid, int K,
                   const EngineOptions& opts) {
    return run_xtilde(map, dom, n, SweepPlan{grid, nullptr, 1}, K, opts);
}

Cover cover_sigma(const Map& map, const Domains& dom, int n, const GridSpec& grid, int K,
                  const EngineOptions& opts) {
    return run_sigma(map, dom, n, SweepPlan{grid, nullptr, 1}, K, opts);
}

Cover cover_p0(const Map& map, const Domains& dom, int m, const GridSpec& grid,
               const EngineOptions& opts) {
    return run_p0(map, dom, m, SweepPlan{grid, nullptr, 1}, opts);
}

Cover refine(const Map& map, const Domains& dom, const Cover& base, int factor,
             const EngineOptions& opts) {
    if (map.poly.checksum != base.coeff_checksum)
        throw std::runtime_error("refine: cover was built from different map coefficients");
    const SweepPlan plan{base.grid.refined(factor), &base, factor};
    switch (base.target) {
        case CoverTarget::Xtilde: return run_xtilde(map, dom, base.n, plan, base.max_iter, opts);
        case CoverTarget::Sigma: return run_sigma(map, dom, base.n, plan, base.max_iter, opts);
        case CoverTarget::P0: return run_p0(map, dom, base.n, plan, opts);
    }
    throw std::logic_error("refine: unknown target");
}

}  // namespace feigdim
