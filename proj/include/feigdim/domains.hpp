#pragma once
// Window geometry. Every domain in play is symmetric under both coordinate
// reflections, so each is stored as its outer boundary chain in the closed
// first quadrant together with an interval scale factor (a power of lambda).
// The two axis segments closing the chain are interior glue of the symmetric
// set, never boundary.
//
// Classification of a ball against a region uses the folding lemma: the
// componentwise fold z -> (|Re z|, |Im z|) is 1-Lipschitz, so the fold of
// B(c, r) is contained in B(fold c, r), and membership of the symmetric set
// reduces to membership of the first-quadrant part. Certified answers are
// three-valued; anything not certain is Straddle and the callers treat it
// conservatively (retain in upper covers, discard in packings).

#include <array>
#include <optional>
#include <vector>

#include "feigdim/ball.hpp"
#include "feigdim/constants.hpp"
#include "feigdim/roundoff.hpp"

namespace feigdim {

struct Pt {
    double x, y;
};

enum class Pos { Inside, Outside, Straddle };

class FoldedRegion {
  public:
    // `chain` runs from a vertex on the positive x-axis to a vertex on the
    // positive y-axis and must stay in the closed first quadrant.
    FoldedRegion(std::vector<Pt> chain, IReal scale);

    Pos classify(Ball b) const;

    // Certified distance from the *folded* point to the outer chain.
    IReal dist_chain(double px, double py) const;

    // Distance from a ball to the symmetric region (0 if it may intersect);
    // the returned value is a certified lower bound.
    double dist_lb(Ball b) const;

    // Depth of a ball inside the symmetric region: certified lower bound of
    // the distance from the ball to the region's boundary, 0 unless the ball
    // is certifiably contained.
    double inside_depth_lb(Ball b) const;

    // Three-valued membership of an exact folded point.
    enum class In { Yes, No, Unsure };
    In point_in(double px, double py) const;

    const std::vector<Pt>& base_chain() const { return base_; }
    IReal scale() const { return scale_; }

  private:
    std::vector<Pt> base_;
    IReal scale_;
    // Scaled vertex enclosures, precomputed.
    std::vector<IReal> vx_, vy_;
    bool is_box_;  // chain is (X,0) -> (X,Y) -> (0,Y)
};

// The fixed window set: scaled inner/outer analytic windows, the H-shaped
// extensions at scale lambda, the capture regions, and the escape slits.
class Domains {
  public:
    explicit Domains(const MapConstants& mc);

    static constexpr int kMaxShell = MapConstants::kMaxShell - 1;

    const FoldedRegion& win(int m) const { return win_[std::size_t(m)]; }
    const FoldedRegion& wout(int m) const { return wout_[std::size_t(m)]; }
    const FoldedRegion& hin1() const { return *hin1_; }
    const FoldedRegion& hout1() const { return *hout1_; }
    const FoldedRegion& v2hat() const { return *v2hat_; }
    const FoldedRegion& pin() const { return *pin_; }          // unit scale
    const FoldedRegion& pout_region() const { return *pout_; }  // unit scale

    // Capture region approximation for the n-th renormalization level
    // (n >= 3); contains the true capture set, so "certifiably outside" is
    // a sound avoidance certificate.
    const FoldedRegion& wtilde_hat(int n) const;

    // Window shell of a ball: the certified rescaling exponent for one
    // first-return step. The inner windows certify true membership, so the
    // deepest certified level is always a valid (possibly conservative)
    // jump; `certain` is retained for callers that must bail defensively.
    struct Shell {
        int m;  // largest m with ball certifiably inside lambda^m * Win
        int i;  // stepping exponent max(0, m-1)
        bool certain;
    };
    Shell max_wn_shell(Ball b, int cap = kMaxShell) const;

    // Certified lower bound of the distance from the ball to the escape
    // region (-inf, -1/lambda] U V2hat U [1/lambda^2, inf).
    double dist_v2star_lb(Ball b) const;

    // Pointwise lower bound of the distance to the two Koebe slits
    // (-inf, -1/lambda] U [slit_b, inf); slit_b is supplied by the map.
    double dist_koebe_slits_lb(C p, double slit_b_lo) const;

    double inv_lambda_lo() const { return inv_lambda_lo_; }
    double inv_l2_lo() const { return inv_l2_lo_; }

  private:
    std::vector<FoldedRegion> win_, wout_, wtilde_;
    std::optional<FoldedRegion> hin1_, hout1_, v2hat_, pin_, pout_;
    double inv_lambda_lo_ = 0;  // left slit starts at -inv_lambda_lo_
    double inv_l2_lo_ = 0;      // right escape slit starts here
};

// Sign pattern of an open quadrant; +1 or -1 per axis.
struct Quadrant {
    int sx, sy;
};

// The open quadrant certifiably containing the ball, if any.
std::optional<Quadrant> certified_quadrant(Ball b);

// Certified lower bound of the distance from the ball to the *closed*
// quadrant q (0 if the ball may touch it).
double dist_quadrant_lb(Ball b, Quadrant q);

}  // namespace feigdim
