#pragma once

// Bounds on the difference of integral means over [a,b] and [c,d] in [a,b].
//
// The (b-a) powers here are the scale-consistent ones: every bound is
// invariant under the affine change of variables onto [0,1], and coincides
// with the classical unit-interval statements there.

#include <algorithm>
#include <cmath>

#include "cheby/errors.hpp"
#include "cheby/funcspace.hpp"
#include "cheby/numerics.hpp"

namespace cheby {

/// (b-a) v = c - a, (b-a) rho = d - c, (b-a) lambda = b - d.
struct SubintervalGeometry {
    double v;
    double rho;
    double lambda;

    static SubintervalGeometry of(const Interval& outer, const Interval& inner) {
        if (!outer.contains(inner)) throw DomainError("inner interval must lie inside the outer interval");
        const double L = outer.length();
        SubintervalGeometry g{(inner.a - outer.a) / L, inner.length() / L, (outer.b - inner.b) / L};
        if (inner == outer) g = {0.0, 1.0, 0.0};
        return g;
    }
};

struct BarnettBound {
    double first;
    double second;
};

inline double derivative_norm(const FunctionSpec& f, const Interval& iv, const Exponent& p,
                              const Tolerance& tol = {}) {
    return lp_norm(f.derivative, iv, f.breakpoints, p, tol);
}

/// first  = [1/4 + (((a+b)/2 - (c+d)/2) / gap)^2] * gap * ||f'||_inf
/// second = gap/2 * ||f'||_inf,  gap = (b-a) - (d-c).
/// Both are 0 when inner == outer.
inline BarnettBound barnett_bound(const FunctionSpec& f, const Interval& outer, const Interval& inner,
                                  const Tolerance& tol = {}) {
    if (!outer.contains(inner)) throw DomainError("inner interval must lie inside the outer interval");
    const double gap = outer.length() - inner.length();
    if (inner == outer || gap <= 0.0) return {0.0, 0.0};
    const double sup = derivative_norm(f, outer, Exponent::infinity(), tol);
    const double shift = (outer.midpoint() - inner.midpoint()) / gap;
    return {(0.25 + shift * shift) * gap * sup, 0.5 * gap * sup};
}

namespace detail {

// (x^k + y^k)^(1/q) without overflow for large k.
inline double power_sum_root(double x, double y, double k, double q) {
    const double hi = std::max(x, y), lo = std::min(x, y);
    if (hi == 0.0) return 0.0;
    return std::pow(hi, k / q) * std::pow(1.0 + std::pow(lo / hi, k), 1.0 / q);
}

// (q+1)^(1/q), -> 1 as q -> inf.
inline double q_root(const Exponent& q) {
    if (q.is_infinite()) return 1.0;
    return std::pow(q.value() + 1.0, 1.0 / q.value());
}

}  // namespace detail

/// Coefficient multiplying ||f'||_p (p > 1) or ||f'||_1 (p = 1).
///   p > 1: (b-a)^{1/q}/(q+1)^{1/q} [1 + (rho/(1-rho))^q]^{1/q} [v^{q+1} + lambda^{q+1}]^{1/q}
///   p = 1: 1/2 [1 - rho + |v - lambda|]
inline double cerone_constant(const SubintervalGeometry& geo, double length, const Exponent& p) {
    if (p.is_one()) return 0.5 * (1.0 - geo.rho + std::abs(geo.v - geo.lambda));
    if (geo.rho >= 1.0) throw DomainError("first branch is undefined for rho = 1; use the L1 or Barnett bound");
    const double q = p.conjugate().value();
    const double ratio = geo.rho / (1.0 - geo.rho);
    return std::pow(length, 1.0 / q) / std::pow(q + 1.0, 1.0 / q) *
           detail::power_sum_root(1.0, ratio, q, q) * detail::power_sum_root(geo.v, geo.lambda, q + 1.0, q);
}

inline double cerone_bound(const FunctionSpec& f, const Interval& outer, const Interval& inner,
                           const Exponent& p, const Tolerance& tol = {}) {
    const auto geo = SubintervalGeometry::of(outer, inner);
    const double c = cerone_constant(geo, outer.length(), p);
    return c * derivative_norm(f, outer, p, tol);
}

/// Specialization with c = a, d = t:
///   (b-t)^{1/q} [(t-a)^q + (b-t)^q]^{1/q} / ((q+1)^{1/q} (b-a))  * ||g'||_p.
inline double kernel_constant(const Interval& outer, double t, const Exponent& p) {
    if (!(t > outer.a && t < outer.b)) throw DomainError("kernel bound needs a < t < b");
    if (p.is_one()) throw DomainError("kernel bound needs p > 1");
    const Exponent q = p.conjugate();
    const double qv = q.value();
    return std::pow(outer.b - t, 1.0 / qv) * detail::power_sum_root(t - outer.a, outer.b - t, qv, qv) /
           (detail::q_root(q) * outer.length());
}

inline double kernel_bound(const FunctionSpec& g, const Interval& outer, double t, const Exponent& p,
                           const Tolerance& tol = {}) {
    const double c = kernel_constant(outer, t, p);
    return c * derivative_norm(g, outer, p, tol);
}

}  // namespace cheby
