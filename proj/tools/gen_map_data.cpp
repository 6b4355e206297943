// Regenerates data/feigenbaum_map.txt: the degree-80 even polynomial
// approximation of the renormalization fixed point, solved at 64 decimal
// digits and printed to 28 significant digits (double holds ~17, the rest is
// margin for independent cross-checks). Also prints the distinguished
// constants of the solved map so tests can freeze them as oracle values.
//
// The output is deterministic: same order, same precision, same Newton path.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "feigdim/solver.hpp"

using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<64>>;

int main(int argc, char** argv) {
    const std::string out_path = argc > 1 ? argv[1] : "data/feigenbaum_map.txt";
    const int order = 40;

    feigdim::FixedPointSolution<Real> sol = feigdim::solve_fixed_point<Real>(order, 64);
    std::ostringstream body;
    body.setf(std::ios_base::scientific);
    for (const Real& c : sol.a) body << c.str(28, std::ios_base::scientific) << "\n";
    const std::uint64_t checksum = feigdim::fnv1a64(body.str());

    FILE* f = std::fopen(out_path.c_str(), "wb");
    if (!f) {
        std::perror("open output");
        return 1;
    }
    std::fprintf(f, "degree %d\n", 2 * order);
    std::fputs(body.str().c_str(), f);
    std::fprintf(f, "checksum %016llx\n", static_cast<unsigned long long>(checksum));
    std::fclose(f);

    const Real lam = sol.lambda;
    // x0: positive root of F on (0,1); a_cr: solution of F(a) = -x0/lambda
    // on (1.6, 1.75). Both via Newton on the series in x = z^2.
    auto F = [&](Real z) { return sol.eval_x(z * z); };
    auto dF = [&](Real z) { return Real(2) * z * sol.deriv_x(z * z); };
    const Real x0 = feigdim::newton_root<Real>(F, dF, Real("0.83"));
    const Real target = -x0 / lam;
    const Real a_cr = feigdim::newton_root<Real>(
        [&](Real z) { return F(z) - target; }, dF, Real("1.69"));

    std::cout << "order          " << order << "\n"
              << "residual_sup   " << sol.residual_sup.str(3) << "\n"
              << "newton_steps   " << sol.newton_steps << "\n"
              << "checksum       " << std::hex << checksum << std::dec << "\n"
              << "lambda         " << lam.str(40) << "\n"
              << "1/lambda       " << (Real(1) / lam).str(40) << "\n"
              << "x0             " << x0.str(40) << "\n"
              << "a_cr           " << a_cr.str(40) << "\n"
              << "F(lambda)      " << F(lam).str(40) << "\n"
              << "F(lambda)/l^2  " << (F(lam) / (lam * lam)).str(40) << "\n"
              << "sqrt(l/F(l))   " << sqrt(lam / F(lam)).str(40) << "\n"
              << "F(x0/lambda)   " << F(x0 / lam).str(40) << "\n";
    return 0;
}
