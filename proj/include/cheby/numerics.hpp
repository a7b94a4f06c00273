#pragma once

// Numerical substrate: adaptive Gauss-Kronrod quadrature with breakpoint
// splitting, L_p norms (with a dedicated infinity exponent), and the
// Gamma/Beta functions used by the inequality constants.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "cheby/errors.hpp"

namespace cheby {

using ScalarFn = std::function<double(double)>;

/// Closed interval [a, b] with a < b, both finite.
struct Interval {
    double a;
    double b;

    Interval(double left, double right) : a(left), b(right) {
        if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
            throw DomainError("interval requires finite endpoints with a < b");
    }

    double length() const { return b - a; }
    double midpoint() const { return 0.5 * (a + b); }
    bool contains(double x) const { return a <= x && x <= b; }
    bool contains(const Interval& other) const { return a <= other.a && other.b <= b; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

inline Interval unit_interval() { return Interval(0.0, 1.0); }

struct Tolerance {
    double abs_tol = 1e-11;
    double rel_tol = 1e-10;
    int max_subdivisions = 2000;

    void validate() const {
        if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0) || (abs_tol == 0.0 && rel_tol == 0.0))
            throw DomainError("tolerance needs abs_tol or rel_tol > 0");
        if (max_subdivisions < 1) throw DomainError("max_subdivisions must be positive");
    }
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int subdivisions_used = 0;
};

/// Lebesgue exponent p in [1, inf]. Infinity is a separate state, never a
/// large float, so that 1/p and conjugation are exact at the endpoints.
class Exponent {
public:
    /// Accepts p >= 1; +inf maps onto the infinity sentinel.
    explicit Exponent(double p) {
        if (std::isinf(p) && p > 0) {
            infinite_ = true;
            return;
        }
        if (!(p >= 1.0)) throw DomainError("exponent must satisfy p >= 1");
        value_ = p;
    }

    static Exponent infinity() {
        Exponent e(1.0);
        e.infinite_ = true;
        e.value_ = 0.0;
        return e;
    }

    bool is_infinite() const { return infinite_; }
    bool is_one() const { return !infinite_ && value_ == 1.0; }

    double value() const {
        if (infinite_) throw DomainError("finite value requested from the infinity exponent");
        return value_;
    }

    /// 1/p with 1/inf := 0.
    double reciprocal() const { return infinite_ ? 0.0 : 1.0 / value_; }

    Exponent conjugate() const {
        if (infinite_) return Exponent(1.0);
        if (value_ == 1.0) return infinity();
        return Exponent(value_ / (value_ - 1.0));
    }

    /// "inf" for the sentinel, otherwise 17 significant digits.
    std::string to_string() const {
        if (infinite_) return "inf";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", value_);
        return buf;
    }

    friend bool operator==(const Exponent& x, const Exponent& y) {
        return x.infinite_ == y.infinite_ && (x.infinite_ || x.value_ == y.value_);
    }
    friend std::partial_ordering operator<=>(const Exponent& x, const Exponent& y) {
        if (x.infinite_ || y.infinite_) return x.infinite_ <=> y.infinite_;
        return x.value_ <=> y.value_;
    }

private:
    double value_ = 1.0;
    bool infinite_ = false;
};

namespace detail {

// QUADPACK qk15 nodes/weights.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool roundoff_limited;
};

template <class F>
Panel gauss_kronrod15(F& f, double a, double b) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double centr = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);
    const double dhlgth = std::abs(hlgth);

    std::array<double, 7> fv1{}, fv2{};
    const double fc = f(centr);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::abs(resk);
    for (int j = 0; j < 3; ++j) {
        const int jtw = 2 * j + 1;
        const double absc = hlgth * kXgk[jtw];
        const double f1 = f(centr - absc);
        const double f2 = f(centr + absc);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += kWg[j] * (f1 + f2);
        resk += kWgk[jtw] * (f1 + f2);
        resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
    }
    for (int j = 0; j < 4; ++j) {
        const int jtwm1 = 2 * j;
        const double absc = hlgth * kXgk[jtwm1];
        const double f1 = f(centr - absc);
        const double f2 = f(centr + absc);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += kWgk[jtwm1] * (f1 + f2);
        resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
    }
    const double reskh = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

    const double result = resk * hlgth;
    resabs *= dhlgth;
    resasc *= dhlgth;
    double abserr = std::abs((resk - resg) * hlgth);
    if (resasc != 0.0 && abserr != 0.0)
        abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
    bool roundoff = false;
    const double floor = 50.0 * eps * resabs;
    if (abserr <= floor) {
        abserr = floor;
        roundoff = true;
    }
    if (!std::isfinite(result)) throw DomainError("integrand is not finite on the interval");
    return {a, b, result, abserr, roundoff};
}

/// Sorted, de-duplicated breakpoints strictly inside (a, b), framed by a and b.
inline std::vector<double> segment_edges(const Interval& iv, std::span<const double> breakpoints) {
    std::vector<double> edges;
    edges.reserve(breakpoints.size() + 2);
    edges.push_back(iv.a);
    for (double x : breakpoints)
        if (x > iv.a && x < iv.b) edges.push_back(x);
    edges.push_back(iv.b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

struct NeumaierSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

}  // namespace detail

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature. The interval is cut
/// at every breakpoint first; the panel with the largest error estimate is
/// bisected until the total estimate meets max(abs_tol, rel_tol*|value|).
/// Panels whose estimate sits at the rounding floor are not split further.
template <class F>
QuadResult integrate(F&& h, const Interval& iv, std::span<const double> breakpoints,
                     const Tolerance& tol = {}) {
    tol.validate();
    const auto edges = detail::segment_edges(iv, breakpoints);

    auto by_error = [](const detail::Panel& x, const detail::Panel& y) { return x.error < y.error; };
    std::priority_queue<detail::Panel, std::vector<detail::Panel>, decltype(by_error)> open(by_error);
    std::vector<detail::Panel> closed;

    double value = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        auto p = detail::gauss_kronrod15(h, edges[i], edges[i + 1]);
        value += p.value;
        error += p.error;
        open.push(p);
    }

    const double scale = std::max({1.0, std::abs(iv.a), std::abs(iv.b)});
    int subdivisions = 0;
    auto target = [&] { return std::max(tol.abs_tol, tol.rel_tol * std::abs(value)); };

    double closed_error = 0.0;
    while (error - closed_error > target() && !open.empty()) {
        detail::Panel worst = open.top();
        open.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const bool too_narrow = (worst.b - worst.a) < 64.0 * std::numeric_limits<double>::epsilon() * scale ||
                                !(worst.a < mid && mid < worst.b);
        if (worst.roundoff_limited || too_narrow) {
            closed_error += worst.error;
            closed.push_back(worst);
            continue;
        }
        if (subdivisions >= tol.max_subdivisions) {
            open.push(worst);
            break;
        }
        auto left = detail::gauss_kronrod15(h, worst.a, mid);
        auto right = detail::gauss_kronrod15(h, mid, worst.b);
        ++subdivisions;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        open.push(left);
        open.push(right);
    }

    detail::NeumaierSum total;
    double err_total = 0.0;
    double err_open = 0.0;
    for (const auto& p : closed) {
        total.add(p.value);
        err_total += p.error;
    }
    while (!open.empty()) {
        total.add(open.top().value);
        err_total += open.top().error;
        err_open += open.top().error;
        open.pop();
    }
    QuadResult out{total.value(), err_total, subdivisions};
    // Only refinable panels count against the budget; rounding-floor panels cannot improve.
    if (err_open > std::max(tol.abs_tol, tol.rel_tol * std::abs(out.value))) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "quadrature did not converge on [%.6g, %.6g] after %d subdivisions (error %.3g)",
                      iv.a, iv.b, subdivisions, err_total);
        throw NonConvergence(buf);
    }
    return out;
}

template <class F>
QuadResult integrate(F&& h, const Interval& iv, const Tolerance& tol = {}) {
    return integrate(std::forward<F>(h), iv, std::span<const double>{}, tol);
}

// ---------------------------------------------------------------------------
// Gamma / Beta

namespace detail {

// Lanczos approximation, g = 7, n = 9. Relative error below 1e-15 for x > 0;
// the documented target is 1e-12.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

inline double lanczos_sum(double z) {
    double a = kLanczosCoef[0];
    for (int i = 1; i < 9; ++i) a += kLanczosCoef[i] / (z + i);
    return a;
}

}  // namespace detail

/// log Gamma(x) for x > 0.
inline double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("log_gamma requires x > 0");
    if (x < 0.5) {
        const double pi = std::numbers::pi;
        return std::log(pi / std::sin(pi * x)) - log_gamma(1.0 - x);
    }
    const double z = x - 1.0;
    const double t = z + detail::kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
           std::log(detail::lanczos_sum(z));
}

/// Gamma(x) for x > 0; overflows to +inf past x ~ 171.6.
inline double gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("gamma requires x > 0");
    const double pi = std::numbers::pi;
    if (x < 0.5) return pi / (std::sin(pi * x) * gamma(1.0 - x));
    const double z = x - 1.0;
    const double t = z + detail::kLanczosG + 0.5;
    // Split t^(z+1/2) so the power does not overflow before e^-t compensates.
    const double half = std::pow(t, 0.5 * (z + 0.5));
    return std::sqrt(2.0 * pi) * half * (half * std::exp(-t)) * detail::lanczos_sum(z);
}

inline double log_beta(double x, double y) {
    if (!(x > 0.0) || !(y > 0.0)) throw DomainError("beta requires positive arguments");
    return log_gamma(x) + log_gamma(y) - log_gamma(x + y);
}

inline double beta(double x, double y) {
    if (!(x > 0.0) || !(y > 0.0)) throw DomainError("beta requires positive arguments");
    if (x + y < 150.0) return gamma(x) * gamma(y) / gamma(x + y);
    return std::exp(log_beta(x, y));
}

/// B(x, y)^power evaluated in log space; used for B^{1/p} factors with large p.
inline double beta_pow(double x, double y, double power) { return std::exp(power * log_beta(x, y)); }

// ---------------------------------------------------------------------------
// Norms

/// Essential supremum of |h| on iv. Each breakpoint-delimited segment is
/// sampled at `samples` points (endpoints nudged inward, so breakpoint values
/// are one-sided limits), then the best sample is refined by golden section.
template <class F>
double ess_sup(F&& h, const Interval& iv, std::span<const double> breakpoints, int samples = 513) {
    if (samples < 3) throw DomainError("ess_sup needs at least 3 samples per segment");
    const auto edges = detail::segment_edges(iv, breakpoints);
    double best = 0.0;
    auto mag = [&](double x) {
        const double v = std::abs(h(x));
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
        const double width = edges[s + 1] - edges[s];
        const double nudge = 1e-12 * width;
        const double lo = edges[s] + nudge;
        const double hi = edges[s + 1] - nudge;
        const double step = (hi - lo) / (samples - 1);
        int arg = 0;
        double top = -1.0;
        for (int i = 0; i < samples; ++i) {
            const double x = (i == samples - 1) ? hi : lo + i * step;
            const double v = mag(x);
            if (v > top) {
                top = v;
                arg = i;
            }
        }
        // Max on a segment end: probe toward the edge by decades. Increments that
        // keep pace (log) or grow (power) mean |h| is unbounded there.
        if (arg == 0 || arg == samples - 1) {
            const double edge = arg == 0 ? edges[s] : edges[s + 1];
            const double dir = arg == 0 ? 1.0 : -1.0;
            double prev = mag(edge + dir * 1e-3 * width);
            double prev_inc = 0.0;
            int growing = 0;
            for (int k = 4; k <= 12; ++k) {
                const double v = mag(edge + dir * std::pow(10.0, -k) * width);
                const double inc = v - prev;
                if (std::isinf(v)) return v;
                if (inc > 1e-9 * std::max(1.0, v) && (k == 4 || inc >= 0.5 * prev_inc))
                    ++growing;
                else
                    growing = 0;
                prev = v;
                prev_inc = inc;
            }
            if (growing >= 3) return std::numeric_limits<double>::infinity();
        }
        double left = lo + std::max(arg - 1, 0) * step;
        double right = (arg + 1 >= samples - 1) ? hi : lo + (arg + 1) * step;
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = right - inv_phi * (right - left);
        double x2 = left + inv_phi * (right - left);
        double f1 = mag(x1), f2 = mag(x2);
        for (int it = 0; it < 80 && (right - left) > 1e-13 * width; ++it) {
            if (f1 < f2) {
                left = x1;
                x1 = x2;
                f1 = f2;
                x2 = left + inv_phi * (right - left);
                f2 = mag(x2);
            } else {
                right = x2;
                x2 = x1;
                f2 = f1;
                x1 = right - inv_phi * (right - left);
                f1 = mag(x1);
            }
        }
        best = std::max({best, top, f1, f2});
    }
    return best;
}

/// ||h||_p on iv. Finite p integrates |h|^p (rescaled by the sup for p > 4 to
/// keep the integrand in range); p = inf is the essential supremum.
template <class F>
double lp_norm(F&& h, const Interval& iv, std::span<const double> breakpoints, const Exponent& p,
               const Tolerance& tol = {}) {
    if (p.is_infinite()) return ess_sup(h, iv, breakpoints);
    const double pv = p.value();
    if (pv == 1.0)
        return integrate([&](double x) { return std::abs(h(x)); }, iv, breakpoints, tol).value;
    double scale = 1.0;
    if (pv > 4.0) {
        scale = ess_sup(h, iv, breakpoints);
        if (scale == 0.0) return 0.0;
    }
    const auto r = integrate([&](double x) { return std::pow(std::abs(h(x)) / scale, pv); }, iv,
                             breakpoints, tol);
    return scale * std::pow(std::max(r.value, 0.0), 1.0 / pv);
}

}  // namespace cheby
