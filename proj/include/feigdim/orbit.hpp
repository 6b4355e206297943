#pragma once
// First-return orbits through the scaled window hierarchy.
//
// A point certifiably inside lambda^m * Win (and certifiably not deeper)
// advances by the rescaled iterate F^(2^i), i = max(0, m-1), which lands it
// back near window scale while the per-step enclosure stays tight.  The
// accumulated derivative ball tracks (F^(2^j))' along the orbit, which the
// covering engines compare against the distance to the escape region.

#include "feigdim/ball.hpp"
#include "feigdim/domains.hpp"
#include "feigdim/map.hpp"

namespace feigdim {

struct OrbitState {
    Ball z;          // current iterate enclosure
    Ball deriv;      // enclosure of the accumulated derivative
    int steps = 0;   // first-return steps taken
    long long j = 0; // iterates of F represented: sum of 2^i over steps
};

inline OrbitState make_orbit(Ball z0) { return OrbitState{z0, Ball::exact(1.0, 0.0), 0, 0}; }

enum class StepOutcome {
    Ok,
    AmbiguousShell,  // window depth not certified; caller must subdivide
    OutOfDomain,     // rescaled point left the certified evaluation strata
};

StepOutcome first_return_step(const Map& map, const Domains& dom, OrbitState& st);

}  // namespace feigdim
