#pragma once
// The six certified verifications that pin the analytic window hierarchy
// between its polygonal approximations:
//
//   (a) the image of the inner-window boundary avoids the slits
//       (-inf, -1/lambda] and [1/lambda^2, inf),
//   (b) the scaled H-arm maps into the inner window,
//   (c) the third image of the escape-region boundary surrounds the outer
//       window (boundary gap + winding number),
//   (d) the folded map exits the outer box only through two triangles whose
//       second images leave the box by a stated distance,
//   (e) the H-extension's folded image covers the upper half window, with a
//       gamma-curve certificate Re < -0.024 on the leftover boundary curve,
//   (f) the 54-fold iterate of the deep-window boundary clears the reflected
//       level-2 box except inside a guard triangle, with certified real-axis
//       crossing data.
//
// Boundary curves are swept by adaptive bisection: a piece is accepted only
// when its image enclosure certifies one of the check's certificates and the
// image diameter is below a quarter of the certified margin; otherwise it is
// bisected, down to a depth cap (cap hit = honest failure with the offending
// parameter recorded).  Region checks do the same on quadtree cells.

#include <array>
#include <string>

#include "feigdim/domains.hpp"
#include "feigdim/map.hpp"

namespace feigdim {

struct CheckReport {
    std::string name;          // short slug, e.g. "slit-avoidance"
    bool pass = false;         // every piece certified
    double margin = 0;         // headline certified margin (check-specific)
    double margin_stated = 0;  // value the margin must reproduce (20% band)
    bool margin_in_band = false;
    double err = 0;            // max point-evaluation enclosure radius seen
    double err_budget = 0;     // stated ceiling for err (0 = none)
    long long pieces = 0;      // accepted pieces / cells
    double seconds = 0;
    std::string detail;        // auxiliary certified quantities, human readable
    std::string failure;       // first offending point when !pass
};

struct DomainVerification {
    std::array<CheckReport, 6> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    bool all_in_band() const {
        for (const auto& c : checks)
            if (!c.pass || !c.margin_in_band) return false;
        return true;
    }
};

CheckReport check_image_avoids_slits(const Map& map, const Domains& dom);
CheckReport check_arm_maps_into_window(const Map& map, const Domains& dom);
CheckReport check_escape_image_covers_window(const Map& map, const Domains& dom);
CheckReport check_folded_exit_triangles(const Map& map, const Domains& dom);
CheckReport check_extension_covers_window(const Map& map, const Domains& dom);
CheckReport check_deep_iterate_clearance(const Map& map, const Domains& dom);

// Runs all six checks in order (a)..(f).
DomainVerification verify_domain_inclusions(const Map& map, const Domains& dom);

}  // namespace feigdim
