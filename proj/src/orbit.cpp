#include "feigdim/orbit.hpp"

namespace feigdim {

StepOutcome first_return_step(const Map& map, const Domains& dom, OrbitState& st) {
    const Domains::Shell shell = dom.max_wn_shell(st.z);
    if (!shell.certain) return StepOutcome::AmbiguousShell;
    const auto step = map.try_f_pow2(st.z, shell.i);
    if (!step) return StepOutcome::OutOfDomain;
    st.z = step->val;
    st.deriv = ball_mul(st.deriv, step->dval);
    st.j += 1LL << shell.i;
    st.steps += 1;
    return StepOutcome::Ok;
}

}  // namespace feigdim
