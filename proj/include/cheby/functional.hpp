#pragma once

// The Cebysev functional
//   T(f,g) = 1/(b-a) int fg - (1/(b-a) int f)(1/(b-a) int g)
// by the direct identity and by the integration-by-parts kernel form, plus
// the difference of two integral means.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "cheby/errors.hpp"
#include "cheby/funcspace.hpp"
#include "cheby/numerics.hpp"

namespace cheby {

enum class TRoute { Identity, PartsKernel };

inline const char* to_string(TRoute r) { return r == TRoute::Identity ? "Identity" : "PartsKernel"; }

struct TValue {
    double value;
    TRoute route;
    double error_estimate;
};

inline std::vector<double> merged_breakpoints(std::span<const double> x, std::span<const double> y) {
    std::vector<double> out(x.begin(), x.end());
    out.insert(out.end(), y.begin(), y.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline TValue cheb_T(const FunctionSpec& f, const FunctionSpec& g, const Interval& iv,
                     const Tolerance& tol = {}) {
    const auto bps = merged_breakpoints(f.breakpoints, g.breakpoints);
    const double L = iv.length();
    const auto fg = integrate([&](double x) { return f.value(x) * g.value(x); }, iv, bps, tol);
    const auto fi = integrate(f.value, iv, bps, tol);
    const auto gi = integrate(g.value, iv, bps, tol);
    const double mf = fi.value / L;
    const double mg = gi.value / L;
    const double err = fg.error_estimate / L + std::abs(mg) * fi.error_estimate / L +
                       std::abs(mf) * gi.error_estimate / L;
    return {fg.value / L - mf * mg, TRoute::Identity, err};
}

/// G(x) = int_a^x g on an adaptively refined grid, evaluated between nodes by
/// cubic Hermite interpolation with the exact slopes G' = g. A panel is
/// accepted once the interpolant matches direct quadrature at its quarter
/// points to within the interpolation tolerance.
class CumulativeIntegral {
public:
    CumulativeIntegral(const ScalarFn& g, const Interval& iv, std::span<const double> breakpoints,
                       const Tolerance& tol = {})
        : g_(g), iv_(iv), tol_(tol) {
        const double mass = integrate([&](double x) { return std::abs(g(x)); }, iv, breakpoints, tol).value;
        interp_tol_ = 1e-13 * std::max(1.0, mass);
        min_width_ = 1e-10 * iv.length();

        const auto edges = detail::segment_edges(iv, breakpoints);
        nodes_.push_back(iv.a);
        values_.push_back(0.0);
        slopes_.push_back(g(iv.a));
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) refine(edges[i], edges[i + 1]);
    }

    double operator()(double x) const {
        if (x <= nodes_.front()) return values_.front();
        if (x >= nodes_.back()) return values_.back();
        const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
        return hermite(nodes_[i], values_[i], slopes_[i], nodes_[i + 1], values_[i + 1], slopes_[i + 1], x);
    }

    double total() const { return values_.back(); }
    const std::vector<double>& nodes() const { return nodes_; }

private:
    static double hermite(double x0, double y0, double s0, double x1, double y1, double s1, double x) {
        const double h = x1 - x0;
        const double t = (x - x0) / h;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * s0 + (-2 * t3 + 3 * t2) * y1 +
               (t3 - t2) * h * s1;
    }

    double piece(double lo, double hi) const {
        return integrate(g_, Interval(lo, hi), std::span<const double>{}, tol_).value;
    }

    // Appends accepted nodes covering (x0, x1]; nodes_.back() == x0 on entry.
    void refine(double x0, double x1) {
        struct Job {
            double lo, hi;
        };
        std::vector<Job> stack{{x0, x1}};
        while (!stack.empty()) {
            const Job job = stack.back();
            stack.pop_back();
            const double y0 = values_.back();
            const double s0 = slopes_.back();
            const double h = job.hi - job.lo;
            const double y1 = y0 + piece(job.lo, job.hi);
            const double s1 = g_(job.hi);

            bool accept = h <= min_width_;
            if (!accept) {
                double worst = 0.0;
                for (double frac : {0.25, 0.5, 0.75}) {
                    const double x = job.lo + frac * h;
                    const double exact = y0 + piece(job.lo, x);
                    worst = std::max(worst, std::abs(exact - hermite(job.lo, y0, s0, job.hi, y1, s1, x)));
                }
                accept = worst <= interp_tol_;
            }
            if (accept) {
                nodes_.push_back(job.hi);
                values_.push_back(y1);
                slopes_.push_back(s1);
            } else {
                const double mid = job.lo + 0.5 * h;
                stack.push_back({mid, job.hi});
                stack.push_back({job.lo, mid});
            }
        }
    }

    ScalarFn g_;
    Interval iv_;
    Tolerance tol_;
    double interp_tol_ = 0.0;
    double min_width_ = 0.0;
    std::vector<double> nodes_;
    std::vector<double> values_;
    std::vector<double> slopes_;
};

/// T(f,g) = -1/(b-a) int_a^b (G(t) - (t-a)/(b-a) G(b)) f'(t) dt with
/// G(t) = int_a^t g.
inline TValue cheb_T_parts(const FunctionSpec& f, const FunctionSpec& g, const Interval& iv,
                           const Tolerance& tol = {}) {
    const double L = iv.length();
    const CumulativeIntegral G(g.value, iv, g.breakpoints, tol);
    const double Gb = G.total();
    auto bps = merged_breakpoints(f.breakpoints, G.nodes());
    const auto r = integrate(
        [&](double t) { return (G(t) - (t - iv.a) / L * Gb) * f.derivative(t); }, iv, bps, tol);
    return {-r.value / L, TRoute::PartsKernel, r.error_estimate / L};
}

/// 1/(b-a) int_outer f - 1/(d-c) int_inner f.
inline double mean_difference(const FunctionSpec& f, const Interval& outer, const Interval& inner,
                              const Tolerance& tol = {}) {
    if (!outer.contains(inner)) throw DomainError("inner interval must lie inside the outer interval");
    if (outer == inner) return 0.0;
    const double mo = integrate(f.value, outer, f.breakpoints, tol).value / outer.length();
    const double mi = integrate(f.value, inner, f.breakpoints, tol).value / inner.length();
    return mo - mi;
}

}  // namespace cheby
