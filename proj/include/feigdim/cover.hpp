#pragma once
// Grid covers and packings of the renormalization target sets.
//
// Three decision procedures share one sweep driver:
//
//  * an upper cover of the capture set at level n (points of the first
//    rescaled window whose orbits land in the n-th window): a cell is
//    excluded only with a certified escape disk, per the shrinking-disk
//    certificate  dist(F^l(z), V2*) > 4 r |DF^l(z)|  (Koebe one-quarter);
//  * a lower packing of the level-n dissipative set (points of the n-th
//    window whose rescaled escape orbits never return): a cell is included
//    only when every certificate in the two-phase orbit test holds;
//  * an upper cover of the central puzzle piece, tracked through 2^m - 1
//    plain iterates of the rescaled disk image.
//
// All decisions are per-cell, pure, and deterministic; the sweep is a data
// parallel map followed by an order-free union, so the resulting cell set
// is identical for every thread count. Cells are squares of side h (h a
// dyadic rational); the covering disk of a cell is the circumscribed disk
// of radius h*sqrt(2)/2 centered at the cell center.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "feigdim/ball.hpp"
#include "feigdim/domains.hpp"
#include "feigdim/map.hpp"

namespace feigdim {

enum class CoverKind { UpperCover, LowerPacking };
enum class CoverTarget { Xtilde, Sigma, P0 };

struct GridSpec {
    double ox = 0.0, oy = 0.0;  // lower-left corner of cell (0, 0)
    double h = 0.0;             // cell side, a dyadic rational
    int nx = 0, ny = 0;         // cells per axis

    // Certified upper bound of the covering-disk radius h*sqrt(2)/2.
    double disk_radius_up() const;

    // Cell centers are exact: for dyadic ox, oy, h and moderate indices the
    // expression ox + (2 ix + 1) (h/2) has no rounding.
    C center(int ix, int iy) const;

    // Ball containing the whole cell (center + certified disk radius).
    Ball cell_ball(int ix, int iy) const;

    GridSpec refined(int factor) const;

    bool operator==(const GridSpec&) const = default;
};

// Grid over the unit-scale outer window box, spacing 2^-spacing_exp.
GridSpec unit_window_grid(const Domains& dom, int spacing_exp);
// Grid over the lambda-scaled outer window box (the first rescaled window).
GridSpec scaled_window_grid(const Map& map, const Domains& dom, int spacing_exp);

struct Cover {
    CoverKind kind = CoverKind::UpperCover;
    CoverTarget target = CoverTarget::Xtilde;
    int n = 0;         // renormalization level (Xtilde, Sigma) or disk-tracking depth m (P0)
    int max_iter = 0;  // first-return step budget K (2^m - 1 tracked iterates for P0)
    GridSpec grid;
    std::uint64_t coeff_checksum = 0;
    std::vector<std::pair<int, int>> cells;  // sorted lexicographically (ix, then iy)

    bool contains(int ix, int iy) const;
};

struct AreaBound {
    long long cell_count = 0;
    double cell_area = 0.0;  // h^2 (exact dyadic)
    double bound = 0.0;      // upper cover: count*h^2 rounded up;
                             // lower packing: count*h^2 rounded down
};

// First-quadrant area content of the cover. For an upper cover the bound is
// an outward-rounded upper bound of the covered area; for a packing it is a
// downward-rounded lower bound of the certified content (each cell is the
// inscribed square, of area 2r^2 = h^2, of its certified disk).
AreaBound area_bound(const Cover& cover);

// Running maxima of the orbit enclosure radii, indexed by the number of
// composed first-return steps: eps[k] bounds |value ball radius| and
// delta[k] bounds |derivative ball radius| after k steps.
struct StepErrorLedger {
    std::vector<double> eps, delta;

    void record(int steps, double value_r, double deriv_r);
    void merge(const StepErrorLedger& other);
};

struct EngineOptions {
    int threads = 1;
    StepErrorLedger* ledger = nullptr;  // filled when non-null
};

Cover cover_xtilde(const Map& map, const Domains& dom, int n, const GridSpec& grid, int K,
                   const EngineOptions& opts = {});
Cover cover_sigma(const Map& map, const Domains& dom, int n, const GridSpec& grid, int K,
                  const EngineOptions& opts = {});
Cover cover_p0(const Map& map, const Domains& dom, int m, const GridSpec& grid,
               const EngineOptions& opts = {});

// Re-runs the generating decision procedure at spacing h/factor, visiting
// only subcells of the retained cells (factor a power of two). For upper
// covers the result is contained in the parent cells and its area bound is
// nonincreasing.
Cover refine(const Map& map, const Domains& dom, const Cover& base, int factor,
             const EngineOptions& opts = {});

// Text serialization: a fixed header followed by one "ix iy" line per cell,
// sorted; byte-exact reproducible (hex floats for origin and spacing).
std::string cover_to_text(const Cover& cover);
Cover cover_from_text(std::istream& in);
void save_cover(const Cover& cover, const std::string& path);
Cover load_cover(const std::string& path);

}  // namespace feigdim
