#include "feigdim/domains.hpp"

#include <cmath>
#include <stdexcept>

namespace feigdim {

namespace {

IReal iabs(IReal a) {
    if (a.lo >= 0) return a;
    if (a.hi <= 0) return {-a.hi, -a.lo};
    return {0.0, std::max(-a.lo, a.hi)};
}

IReal imax(IReal a, IReal b) { return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)}; }

IReal seg_dist_axis(IReal c1, IReal c2lo, IReal c2hi, double p_along, double p_across) {
    // Distance from exact point (p_along, p_across) to the segment
    // {along in [c2lo, c2hi], across = c1} in rotated coordinates.
    const IReal P = IReal::point(p_along);
    const IReal da = imax(imax(isub(c2lo, P), isub(P, c2hi)), IReal{0.0, 0.0});
    const IReal dc = iabs(isub(IReal::point(p_across), c1));
    return isqrt(iadd(isqr(da), isqr(dc)));
}

// Generic point-to-segment distance with interval endpoints.
IReal seg_dist(IReal ax, IReal ay, IReal bx, IReal by, double px, double py) {
    const IReal vx = isub(bx, ax), vy = isub(by, ay);
    const IReal wx = isub(IReal::point(px), ax), wy = isub(IReal::point(py), ay);
    const IReal vv = iadd(isqr(vx), isqr(vy));
    if (vv.lo <= 0) {  // degenerate; fall back to endpoint distance
        return isqrt(iadd(isqr(wx), isqr(wy)));
    }
    IReal t = idiv(iadd(imul(wx, vx), imul(wy, vy)), vv);
    t.lo = std::max(t.lo, 0.0);
    t.hi = std::min(t.hi, 1.0);
    if (t.lo > t.hi) t = IReal::point(t.lo > 1.0 ? 1.0 : 0.0);
    const IReal dx = isub(wx, imul(t, vx));
    const IReal dy = isub(wy, imul(t, vy));
    return isqrt(iadd(isqr(dx), isqr(dy)));
}

}  // namespace

FoldedRegion::FoldedRegion(std::vector<Pt> chain, IReal scale)
    : base_(std::move(chain)), scale_(scale) {
    if (base_.size() < 2 || base_.front().y != 0.0 || base_.back().x != 0.0)
        throw std::invalid_argument("FoldedRegion: chain must run x-axis -> y-axis");
    if (!(scale_.lo > 0))
        throw std::invalid_argument("FoldedRegion: scale must be positive");
    vx_.reserve(base_.size());
    vy_.reserve(base_.size());
    for (const Pt& p : base_) {
        vx_.push_back(imul(scale_, IReal::point(p.x)));
        vy_.push_back(imul(scale_, IReal::point(p.y)));
    }
    is_box_ = base_.size() == 3 && base_[0].x == base_[1].x && base_[1].y == base_[2].y;
}

FoldedRegion::In FoldedRegion::point_in(double px, double py) const {
    const IReal X = vx_.front(), Y = vy_.back();
    if (is_box_) {
        if (px < X.lo && py < Y.lo) return In::Yes;
        if (px > X.hi || py > Y.hi) return In::No;
        // On-closure cases count as inside; only the fuzzy band is unsure.
        if (px <= X.lo && py <= Y.lo) return In::Yes;
        return In::Unsure;
    }
    if (py == 0.0) return px < X.lo ? In::Yes : (px > X.hi ? In::No : In::Unsure);
    if (px == 0.0) return py < Y.lo ? In::Yes : (py > Y.hi ? In::No : In::Unsure);

    // Even-odd ray cast to +x. Only chain edges can cross (the axis-closing
    // edges sit at y = 0 and x = 0). Any uncertain predicate -> Unsure.
    bool inside = false;
    for (std::size_t e = 0; e + 1 < base_.size(); ++e) {
        const IReal ay = vy_[e], by = vy_[e + 1];
        int a_above, b_above;
        if (ay.lo > py) a_above = 1;
        else if (ay.hi < py) a_above = 0;
        else return In::Unsure;
        if (by.lo > py) b_above = 1;
        else if (by.hi < py) b_above = 0;
        else return In::Unsure;
        if (a_above == b_above) continue;
        const IReal dy = isub(by, ay);
        if (dy.lo <= 0 && dy.hi >= 0) return In::Unsure;
        const IReal t = idiv(isub(IReal::point(py), ay), dy);
        const IReal xint = iadd(vx_[e], imul(t, isub(vx_[e + 1], vx_[e])));
        if (xint.lo > px) inside = !inside;
        else if (xint.hi >= px) return In::Unsure;
    }
    return inside ? In::Yes : In::No;
}

IReal FoldedRegion::dist_chain(double px, double py) const {
    IReal best{kInf, kInf};
    for (std::size_t e = 0; e + 1 < base_.size(); ++e) {
        IReal d;
        if (base_[e].x == base_[e + 1].x) {  // vertical edge
            const bool fwd = base_[e].y < base_[e + 1].y;
            d = seg_dist_axis(vx_[e], fwd ? vy_[e] : vy_[e + 1],
                              fwd ? vy_[e + 1] : vy_[e], py, px);
        } else if (base_[e].y == base_[e + 1].y) {  // horizontal edge
            const bool fwd = base_[e].x < base_[e + 1].x;
            d = seg_dist_axis(vy_[e], fwd ? vx_[e] : vx_[e + 1],
                              fwd ? vx_[e + 1] : vx_[e], px, py);
        } else {
            d = seg_dist(vx_[e], vy_[e], vx_[e + 1], vy_[e + 1], px, py);
        }
        best.lo = std::min(best.lo, d.lo);
        best.hi = std::min(best.hi, d.hi);
    }
    return best;
}

Pos FoldedRegion::classify(Ball b) const {
    const double px = std::fabs(b.c.real()), py = std::fabs(b.c.imag());
    const In in = point_in(px, py);
    if (in == In::Unsure) return Pos::Straddle;
    const IReal d = dist_chain(px, py);
    if (d.lo > b.r) return in == In::Yes ? Pos::Inside : Pos::Outside;
    return Pos::Straddle;
}

double FoldedRegion::dist_lb(Ball b) const {
    const double px = std::fabs(b.c.real()), py = std::fabs(b.c.imag());
    if (point_in(px, py) != In::No) return 0.0;
    const double d = sub_dn(dist_chain(px, py).lo, b.r);
    return d > 0 ? d : 0.0;
}

double FoldedRegion::inside_depth_lb(Ball b) const {
    const double px = std::fabs(b.c.real()), py = std::fabs(b.c.imag());
    if (point_in(px, py) != In::Yes) return 0.0;
    const double d = sub_dn(dist_chain(px, py).lo, b.r);
    return d > 0 ? d : 0.0;
}

Domains::Domains(const MapConstants& mc) {
    const std::vector<Pt> win_chain{{2.07, 0.0}, {2.07, 2.06}, {0.0, 2.06}};
    const std::vector<Pt> wout_chain{{2.495, 0.0}, {2.495, 2.81}, {0.0, 2.81}};
    win_.reserve(MapConstants::kMaxShell + 1);
    wout_.reserve(MapConstants::kMaxShell + 1);
    for (int m = 0; m <= MapConstants::kMaxShell; ++m) {
        win_.emplace_back(win_chain, mc.pow_i(m));
        wout_.emplace_back(wout_chain, mc.pow_i(m));
    }

    const IReal l1 = mc.pow_i(1), l2 = mc.pow_i(2);
    hin1_.emplace(std::vector<Pt>{{3.75, 0.0}, {3.75, 1.65}, {2.07, 1.65}, {2.07, 2.06}, {0.0, 2.06}}, l1);
    hout1_.emplace(std::vector<Pt>{{4.25, 0.0}, {4.25, 2.35}, {2.495, 2.35}, {2.495, 2.81}, {0.0, 2.81}}, l1);
    v2hat_.emplace(std::vector<Pt>{{9.33, 0.0}, {9.33, 0.85}, {0.0, 4.075}}, l2);
    pin_.emplace(win_chain, IReal::point(1.0));
    pout_.emplace(wout_chain, IReal::point(1.0));

    // Capture approximations W-tilde-hat(n), indexed from n = 3.
    const std::vector<Pt> bump5{{2.495, 0.0}, {2.495, 1.79}, {3.0, 1.79}, {3.0, 3.65},
                                {1.2, 3.65},  {1.2, 2.81},  {0.0, 2.81}};
    const std::vector<Pt> bump6{{2.495, 0.0}, {2.495, 2.81}, {2.2, 2.81}, {2.2, 3.23},
                                {1.3, 3.23},  {1.3, 2.81},  {0.0, 2.81}};
    wtilde_.emplace_back(wout_chain, l1);                                   // n = 3
    wtilde_.emplace_back(std::vector<Pt>{{0.09, 0.0}, {0.09, 0.15}, {0.0, 0.15}},
                         IReal::point(1.0));                                // n = 4
    wtilde_.emplace_back(bump5, mc.pow_i(5));                               // n = 5
    for (int n = 6; n <= MapConstants::kMaxShell; ++n)
        wtilde_.emplace_back(bump6, mc.pow_i(n));

    inv_lambda_lo_ = mc.inv_lambda.lo();
    inv_l2_lo_ = mc.inv_pow[2].lo();
}

const FoldedRegion& Domains::wtilde_hat(int n) const {
    if (n < 3 || n > MapConstants::kMaxShell)
        throw std::domain_error("wtilde_hat: n out of range");
    return wtilde_[std::size_t(n - 3)];
}

Domains::Shell Domains::max_wn_shell(Ball b, int cap) const {
    // The inner approximation certifies true window membership, so the
    // deepest certified level alone validates one first-return jump: the
    // jump exponent may understate the true depth, but the return time is
    // constant on each window and a deeper true level only means the jump
    // lands inside the next inner window rather than in the annulus.
    int m_low = -1;
    for (int m = 0; m <= cap; ++m) {
        if (win_[std::size_t(m)].classify(b) == Pos::Inside) m_low = m;
        else break;
    }
    Shell s;
    s.m = m_low;
    s.i = m_low > 1 ? m_low - 1 : 0;
    s.certain = true;
    return s;
}

double Domains::dist_v2star_lb(Ball b) const {
    const double x = b.c.real(), y = b.c.imag();
    // Left ray (-inf, -1/lambda]: use the endpoint closest to 0.
    const double eL = -inv_lambda_lo_;
    double dL;
    if (x <= eL) dL = dn(std::fabs(y));
    else dL = dn(std::hypot(dn(x - eL), y));
    // Right ray [1/lambda^2, inf).
    const double eR = inv_l2_lo_;
    double dR;
    if (x >= eR) dR = dn(std::fabs(y));
    else dR = dn(std::hypot(dn(eR - x), y));
    // Central region V2hat.
    const double dV = [&] {
        const double px = std::fabs(x), py = std::fabs(y);
        if (v2hat_->point_in(px, py) != FoldedRegion::In::No) return 0.0;
        return v2hat_->dist_chain(px, py).lo;
    }();
    const double d = sub_dn(std::min(std::min(dL, dR), dV), b.r);
    return d > 0 ? d : 0.0;
}

double Domains::dist_koebe_slits_lb(C p, double slit_b_lo) const {
    const double x = p.real(), y = p.imag();
    const double eL = -inv_lambda_lo_;
    double dL;
    if (x <= eL) dL = dn(std::fabs(y));
    else dL = dn(std::hypot(dn(x - eL), y));
    double dR;
    if (x >= slit_b_lo) dR = dn(std::fabs(y));
    else dR = dn(std::hypot(dn(slit_b_lo - x), y));
    return std::min(dL, dR);
}

std::optional<Quadrant> certified_quadrant(Ball b) {
    const double ax = std::fabs(b.c.real()), ay = std::fabs(b.c.imag());
    if (!(sub_dn(ax, b.r) > 0) || !(sub_dn(ay, b.r) > 0)) return std::nullopt;
    return Quadrant{b.c.real() > 0 ? 1 : -1, b.c.imag() > 0 ? 1 : -1};
}

double dist_quadrant_lb(Ball b, Quadrant q) {
    const double wx = -double(q.sx) * b.c.real();  // positive when on wrong side
    const double wy = -double(q.sy) * b.c.imag();
    double d;
    if (wx > 0 && wy > 0) d = dn(std::hypot(dn(wx), dn(wy)));
    else if (wx > 0) d = dn(wx);
    else if (wy > 0) d = dn(wy);
    else d = 0.0;
    d = sub_dn(d, b.r);
    return d > 0 ? d : 0.0;
}

}  // namespace feigdim
