#pragma once
// Extended-precision Newton solver for the even power-series fixed point of
// the period-doubling renormalization operator:
//
//     F(z) = -(1/lambda) * F(F(lambda*z)),   F(0) = 1,   lambda = -F(1).
//
// F is even and analytic, so everything is done on series in x = z^2:
// F(z) = sum_{i=0..N} a_i x^i with a_0 = 1. Writing u(x) for the series of
// F(lambda*z) (again in x), p = u^2, the composition F(F(lambda*z)) is
// v(x) = sum_k a_k p(x)^k, and the residual system is
//
//     R_j(a) = a_j + (1/lambda) v_j(a) = 0,   j = 1..N,
//
// with lambda(a) = -sum_i a_i. (R_0 vanishes identically for a_0 = 1.)
// The Jacobian is assembled analytically; one Newton step costs about three
// residual evaluations. Truncation order 40 (polynomial degree 80 in z)
// leaves a truncation error far below working precision for the precisions
// used here, because |a_i| decays like (1/8.5)^i.
//
// The solver is templated on the scalar so tests can instantiate it at
// several precisions (e.g. boost::multiprecision::cpp_bin_float).

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace feigdim {

namespace series {

// c = a*b truncated to degree N (vectors have size N+1).
template <class Real>
std::vector<Real> mul(const std::vector<Real>& a, const std::vector<Real>& b) {
    const std::size_t n = a.size();
    std::vector<Real> c(n, Real(0));
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j + i < n; ++j) c[i + j] += a[i] * b[j];
    }
    return c;
}

template <class Real>
void axpy(std::vector<Real>& y, const Real& s, const std::vector<Real>& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * x[i];
}

}  // namespace series

template <class Real>
struct FixedPointSolution {
    std::vector<Real> a;   // a_0..a_N, a_0 = 1
    Real lambda;           // -sum a_i, in (0,1)
    Real residual_sup;     // max_j |R_j| at the returned point
    int newton_steps = 0;

    Real eval_x(const Real& x) const {  // F as a function of x = z^2
        Real s(0);
        for (std::size_t i = a.size(); i-- > 0;) s = s * x + a[i];
        return s;
    }
    Real deriv_x(const Real& x) const {  // dF/dx
        Real s(0);
        for (std::size_t i = a.size(); i-- > 1;) s = s * x + Real(double(i)) * a[i];
        return s;
    }
};

namespace detail {

// Dense LU solve with partial pivoting; dimensions are tiny (<= 40).
template <class Real>
std::vector<Real> lu_solve(std::vector<std::vector<Real>> A, std::vector<Real> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        Real best = abs(A[col][col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            Real m = abs(A[r][col]);
            if (m > best) { best = m; piv = r; }
        }
        if (best == 0) throw std::runtime_error("singular Jacobian in series solver");
        if (piv != col) { std::swap(A[piv], A[col]); std::swap(b[piv], b[col]); }
        const Real inv = Real(1) / A[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const Real f = A[r][col] * inv;
            if (f == 0) continue;
            A[r][col] = 0;
            for (std::size_t c = col + 1; c < n; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<Real> x(n, Real(0));
    for (std::size_t r = n; r-- > 0;) {
        Real s = b[r];
        for (std::size_t c = r + 1; c < n; ++c) s -= A[r][c] * x[c];
        x[r] = s / A[r][r];
    }
    return x;
}

template <class Real>
struct ResidualParts {
    std::vector<Real> R;                  // size N+1, R[0] == 0
    std::vector<std::vector<Real>> ppow;  // p^k, k = 0..N
    std::vector<Real> u, ud, v, w;
    Real lambda;
};

template <class Real>
ResidualParts<Real> residual(const std::vector<Real>& a) {
    const std::size_t N = a.size() - 1;
    ResidualParts<Real> out;
    Real lam(0);
    for (const Real& c : a) lam -= c;
    if (!(lam > 0)) throw std::runtime_error("series solver left the lambda>0 branch");
    out.lambda = lam;
    const Real lam2 = lam * lam;

    out.u.assign(N + 1, Real(0));
    out.ud.assign(N + 1, Real(0));
    Real l2i(1);  // lambda^(2i)
    for (std::size_t i = 0; i <= N; ++i) {
        out.u[i] = a[i] * l2i;
        out.ud[i] = Real(2.0 * double(i)) * a[i] * l2i;
        l2i *= lam2;
    }
    std::vector<Real> p = series::mul(out.u, out.u);

    out.ppow.resize(N + 1);
    out.ppow[0].assign(N + 1, Real(0));
    out.ppow[0][0] = 1;
    for (std::size_t k = 1; k <= N; ++k) out.ppow[k] = series::mul(out.ppow[k - 1], p);

    out.v.assign(N + 1, Real(0));
    out.w.assign(N + 1, Real(0));
    for (std::size_t k = 0; k <= N; ++k) {
        series::axpy(out.v, a[k], out.ppow[k]);
        if (k >= 1) series::axpy(out.w, Real(double(k)) * a[k], out.ppow[k - 1]);
    }

    out.R.assign(N + 1, Real(0));
    const Real invl = Real(1) / lam;
    for (std::size_t j = 0; j <= N; ++j) out.R[j] = a[j] + invl * out.v[j];
    return out;
}

}  // namespace detail

// Newton iteration for the truncated fixed-point system, starting from `a0`
// (size N+1 with a0[0] == 1). Converges quadratically; `tol` is the target
// sup-norm of the residual coefficients.
template <class Real>
FixedPointSolution<Real> newton_refine(std::vector<Real> a, const Real& tol,
                                       int max_steps = 60) {
    using std::abs;
    const std::size_t N = a.size() - 1;
    FixedPointSolution<Real> sol;
    Real res_sup(0);
    int step = 0;
    for (; step < max_steps; ++step) {
        auto parts = detail::residual(a);
        res_sup = 0;
        for (std::size_t j = 1; j <= N; ++j) {
            Real m = abs(parts.R[j]);
            if (m > res_sup) res_sup = m;
        }
        if (res_sup < tol) break;

        const Real lam = parts.lambda;
        const Real invl = Real(1) / lam;
        const Real invl2 = invl * invl;
        // k-independent pieces of the Jacobian columns.
        std::vector<Real> s1 = series::mul(parts.u, parts.w);
        for (Real& c : s1) c *= 2;
        std::vector<Real> s2 = series::mul(s1, parts.ud);
        std::vector<Real> base(N + 1, Real(0));
        series::axpy(base, invl2, parts.v);
        series::axpy(base, -invl2, s2);

        // J[j][k] = base_j + delta_jk + invl*p^k_j + lam^(2k-1) * s1_{j-k}
        std::vector<std::vector<Real>> J(N, std::vector<Real>(N, Real(0)));
        Real l2k = lam;  // lambda^(2k-1) for k=1
        const Real lam2 = lam * lam;
        for (std::size_t k = 1; k <= N; ++k) {
            for (std::size_t j = 1; j <= N; ++j) {
                Real cell = base[j] + invl * parts.ppow[k][j];
                if (j == k) cell += 1;
                if (j >= k) cell += l2k * s1[j - k];
                J[j - 1][k - 1] = cell;
            }
            l2k *= lam2;
        }
        std::vector<Real> rhs(N);
        for (std::size_t j = 1; j <= N; ++j) rhs[j - 1] = -parts.R[j];
        std::vector<Real> delta = detail::lu_solve(std::move(J), std::move(rhs));
        for (std::size_t j = 1; j <= N; ++j) a[j] += delta[j - 1];
    }
    auto parts = detail::residual(a);
    res_sup = 0;
    for (std::size_t j = 1; j <= N; ++j) {
        Real m = abs(parts.R[j]);
        if (m > res_sup) res_sup = m;
    }
    sol.a = std::move(a);
    sol.lambda = parts.lambda;
    sol.residual_sup = res_sup;
    sol.newton_steps = step;
    return sol;
}

// Solve the truncated system at the given order (degree 2*order in z) by
// continuation in the order: short Newton runs at orders 5, 10, 20, ...,
// zero-padding between stages. `digits10` controls the convergence target.
template <class Real>
FixedPointSolution<Real> solve_fixed_point(int order, int digits10) {
    if (order < 5) throw std::invalid_argument("order must be >= 5");
    std::vector<Real> a(6, Real(0));
    a[0] = 1;
    a[1] = Real("-1.52");
    a[2] = Real("0.10");
    const Real coarse_tol = Real("1e-30");
    FixedPointSolution<Real> sol = newton_refine(std::move(a), coarse_tol);
    for (int n = 10; n < order; n = n * 2) {
        sol.a.resize(std::size_t(std::min(n, order)) + 1, Real(0));
        sol = newton_refine(std::move(sol.a), coarse_tol);
    }
    sol.a.resize(std::size_t(order) + 1, Real(0));
    Real tol = 1;
    for (int i = 0; i < digits10 - 6; ++i) tol /= 10;
    return newton_refine(std::move(sol.a), tol);
}

// Simple Newton root find for a smooth scalar function given by functors
// (value, derivative); used for distinguished real points of the solved map.
template <class Real, class Fn, class Dn>
Real newton_root(Fn f, Dn df, Real x, int steps = 80) {
    using std::abs;
    Real prev_dx(0);
    for (int i = 0; i < steps; ++i) {
        Real dx = f(x) / df(x);
        x -= dx;
        if (i > 4 && abs(dx) >= prev_dx && prev_dx > 0) break;  // stalled at roundoff
        prev_dx = abs(dx);
        if (dx == 0) break;
    }
    return x;
}

// FNV-1a 64-bit hash, used to fingerprint the coefficient file so covers and
// certificates record which map data they were produced against.
inline std::uint64_t fnv1a64(const void* data, std::size_t len,
                             std::uint64_t h = 1469598103934665603ULL) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::uint64_t fnv1a64(const std::string& s, std::uint64_t h = 1469598103934665603ULL) {
    return fnv1a64(s.data(), s.size(), h);
}

}  // namespace feigdim
