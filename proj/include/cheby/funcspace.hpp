#pragma once

// Absolutely continuous test functions: closed-form constructors, the
// Example-style ramp pair, a seeded random corpus, and affine rescaling.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cheby/errors.hpp"
#include "cheby/numerics.hpp"

namespace cheby {

struct RangeBounds {
    double lo;
    double hi;
};

/// An absolutely continuous function on `domain` together with its a.e.
/// derivative. `exact_norms` holds closed-form values of ||f'||_p when known.
struct FunctionSpec {
    ScalarFn value;
    ScalarFn derivative;
    Interval domain;
    std::vector<double> breakpoints;
    std::optional<RangeBounds> range_bounds;
    std::map<Exponent, double> exact_norms;
    std::string label;
};

/// Conjugate exponents 1/p + 1/q = 1, including the endpoint pairs (1, inf)
/// and (inf, 1).
class ConjugatePair {
public:
    ConjugatePair(Exponent p, Exponent q) : p_(p), q_(q) {
        if (std::abs(p.reciprocal() + q.reciprocal() - 1.0) > 1e-12)
            throw DomainError("exponents are not conjugate: 1/p + 1/q != 1");
    }

    static ConjugatePair from_p(Exponent p) { return {p, p.conjugate()}; }
    static ConjugatePair from_p(double p) { return from_p(Exponent(p)); }

    const Exponent& p() const { return p_; }
    const Exponent& q() const { return q_; }

    ConjugatePair swapped() const { return {q_, p_}; }

    friend bool operator==(const ConjugatePair&, const ConjugatePair&) = default;

private:
    Exponent p_;
    Exponent q_;
};

enum class RampKind { AffineExtension, ClampedRamp };

inline const char* to_string(RampKind k) {
    return k == RampKind::AffineExtension ? "AffineExtension" : "ClampedRamp";
}

struct RampVariant {
    RampKind kind;
    double epsilon;

    RampVariant(RampKind k, double eps) : kind(k), epsilon(eps) {
        if (!(eps > 0.0 && eps < 0.5)) throw DomainError("ramp epsilon must lie in (0, 1/2)");
    }
};

namespace detail {

inline std::string fmt_g(double x, int digits = 6) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

inline double horner(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

inline std::vector<double> differentiate(const std::vector<double>& c) {
    if (c.size() <= 1) return {0.0};
    std::vector<double> d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = static_cast<double>(i) * c[i];
    return d;
}

inline std::vector<double> trimmed(std::vector<double> c) {
    while (c.size() > 1 && c.back() == 0.0) c.pop_back();
    return c;
}

/// Real roots of a polynomial inside [lo, hi]. Critical points (roots of the
/// derivative, found recursively) split the interval into monotone pieces,
/// each bisected when it brackets a sign change.
inline std::vector<double> real_roots(const std::vector<double>& coeffs, double lo, double hi) {
    const auto c = trimmed(coeffs);
    if (c.size() <= 1) return {};
    if (c.size() == 2) {
        const double r = -c[0] / c[1];
        if (r >= lo && r <= hi) return {r};
        return {};
    }
    std::vector<double> knots{lo};
    for (double x : real_roots(differentiate(c), lo, hi)) knots.push_back(x);
    knots.push_back(hi);

    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        double l = knots[i], r = knots[i + 1];
        double fl = horner(c, l), fr = horner(c, r);
        if (fl == 0.0) {
            roots.push_back(l);
            continue;
        }
        if (fr == 0.0 || (fl < 0.0) == (fr < 0.0)) continue;
        for (int it = 0; it < 200 && r - l > 0.0; ++it) {
            const double m = 0.5 * (l + r);
            if (m <= l || m >= r) break;
            const double fm = horner(c, m);
            if ((fm < 0.0) == (fl < 0.0)) {
                l = m;
                fl = fm;
            } else {
                r = m;
            }
        }
        roots.push_back(0.5 * (l + r));
    }
    if (horner(c, hi) == 0.0) roots.push_back(hi);
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

/// splitmix64 finaliser; decorrelates (seed, index) into a generator seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + index + 0x632BE59BD9B4E019ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Portable uniform draws; std::uniform_real_distribution is implementation-defined.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream) : engine_(mix_seed(seed, stream)) {}
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

private:
    std::mt19937_64 engine_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Constructors

/// f(x) = sum_k c_k x^k with analytic derivative and exact range from its
/// critical points.
inline FunctionSpec make_polynomial(std::vector<double> coefficients, const Interval& iv) {
    if (coefficients.empty()) throw DomainError("polynomial needs at least one coefficient");
    auto c = coefficients;
    auto d = detail::differentiate(c);

    double lo = std::min(detail::horner(c, iv.a), detail::horner(c, iv.b));
    double hi = std::max(detail::horner(c, iv.a), detail::horner(c, iv.b));
    for (double x : detail::real_roots(d, iv.a, iv.b)) {
        const double v = detail::horner(c, x);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    std::string label = "poly[";
    for (std::size_t i = 0; i < c.size(); ++i) label += (i ? ";" : "") + detail::fmt_g(c[i], 4);
    label += "]";

    FunctionSpec f{[c](double x) { return detail::horner(c, x); },
                   [d](double x) { return detail::horner(d, x); },
                   iv,
                   {},
                   RangeBounds{lo, hi},
                   {},
                   label};
    if (detail::trimmed(d).size() == 1) {
        const double slope = std::abs(d[0]);
        f.exact_norms = {{Exponent(1.0), slope * iv.length()},
                         {Exponent(2.0), slope * std::sqrt(iv.length())},
                         {Exponent::infinity(), slope}};
    }
    return f;
}

inline FunctionSpec make_constant(double c, const Interval& iv) {
    auto f = make_polynomial({c}, iv);
    f.label = "const[" + detail::fmt_g(c, 4) + "]";
    return f;
}

/// f(x) = cos(w*pi*(x-a)/(b-a) + phase) for real frequency w > 0.
inline FunctionSpec make_cosine(double w, double phase, const Interval& iv) {
    if (!(w > 0.0)) throw DomainError("cosine frequency must be positive");
    const double a = iv.a;
    const double k = w * std::numbers::pi / iv.length();
    const double t0 = phase;
    const double t1 = phase + w * std::numbers::pi;

    double lo = std::min(std::cos(t0), std::cos(t1));
    double hi = std::max(std::cos(t0), std::cos(t1));
    for (double m = std::ceil(t0 / std::numbers::pi); m * std::numbers::pi <= t1; m += 1.0) {
        const bool even = std::fmod(std::abs(m), 2.0) == 0.0;
        (even ? hi : lo) = even ? 1.0 : -1.0;
    }
    return FunctionSpec{[=](double x) { return std::cos(k * (x - a) + phase); },
                        [=](double x) { return -k * std::sin(k * (x - a) + phase); },
                        iv,
                        {},
                        RangeBounds{lo, hi},
                        {},
                        "cos[w=" + detail::fmt_g(w, 4) + ";phase=" + detail::fmt_g(phase, 4) + "]"};
}

/// f(x) = cos(k*pi*(x-a)/(b-a) + phase), k a positive integer, with the
/// derivative norms for p in {1, 2, inf} in closed form.
inline FunctionSpec make_trig(int k, double phase, const Interval& iv) {
    if (k < 1) throw DomainError("trig frequency must be a positive integer");
    auto f = make_cosine(static_cast<double>(k), phase, iv);
    const double L = iv.length();
    const double kp = k * std::numbers::pi;
    f.exact_norms = {{Exponent(1.0), 2.0 * k},
                     {Exponent(2.0), kp / std::sqrt(2.0 * L)},
                     {Exponent::infinity(), kp / L}};
    f.label = "trig[k=" + std::to_string(k) + ";phase=" + detail::fmt_g(phase, 4) + "]";
    return f;
}

/// f(x) = amplitude * exp(rate*(x-a)/(b-a)).
inline FunctionSpec make_exponential(double rate, double amplitude, const Interval& iv) {
    const double a = iv.a;
    const double L = iv.length();
    auto val = [=](double x) { return amplitude * std::exp(rate * (x - a) / L); };
    const double ea = val(iv.a), eb = val(iv.b);
    return FunctionSpec{val,
                        [=](double x) { return amplitude * rate / L * std::exp(rate * (x - a) / L); },
                        iv,
                        {},
                        RangeBounds{std::min(ea, eb), std::max(ea, eb)},
                        {},
                        "exp[r=" + detail::fmt_g(rate, 4) + ";A=" + detail::fmt_g(amplitude, 4) + "]"};
}

/// Continuous ramp rising by `amplitude` across the window
/// [center - half_width, center + half_width] (given in normalized [0,1]
/// coordinates of iv and clipped to iv), constant outside it. The derivative
/// is the density amplitude / window width.
inline FunctionSpec make_clamped_ramp(double center, double half_width, double amplitude,
                                      const Interval& iv) {
    if (!(half_width > 0.0)) throw DomainError("ramp half-width must be positive");
    const double L = iv.length();
    const double lo = iv.a + L * (center - half_width);
    const double hi = iv.a + L * (center + half_width);
    const double width = hi - lo;
    const double density = amplitude / width;

    auto val = [=](double x) { return amplitude * std::clamp((x - lo) / width, 0.0, 1.0); };
    auto der = [=](double x) { return (x > lo && x < hi) ? density : 0.0; };

    std::vector<double> bps;
    if (lo > iv.a && lo < iv.b) bps.push_back(lo);
    if (hi > iv.a && hi < iv.b) bps.push_back(hi);

    const double covered = std::max(0.0, std::min(hi, iv.b) - std::max(lo, iv.a));
    const double va = val(iv.a), vb = val(iv.b);
    FunctionSpec f{val,
                   der,
                   iv,
                   bps,
                   RangeBounds{std::min(va, vb), std::max(va, vb)},
                   {},
                   "ramp[c=" + detail::fmt_g(center, 4) + ";eps=" + detail::fmt_g(half_width, 4) +
                       ";A=" + detail::fmt_g(amplitude, 4) + "]"};
    if (covered > 0.0)
        f.exact_norms = {{Exponent(1.0), std::abs(density) * covered},
                         {Exponent(2.0), std::abs(density) * std::sqrt(covered)},
                         {Exponent::infinity(), std::abs(density)}};
    return f;
}

/// amplitude * sqrt((x - c)^2 + width^2): a smoothed |x - c| with derivative
/// bounded by |amplitude|. c is registered as a breakpoint hint.
inline FunctionSpec make_mollified_kink(double center, double amplitude, const Interval& iv,
                                        double width = 1e-3) {
    const double c = iv.a + iv.length() * center;
    auto val = [=](double x) { return amplitude * std::hypot(x - c, width); };
    const double vals[] = {val(iv.a), val(iv.b), val(std::clamp(c, iv.a, iv.b))};
    std::vector<double> bps;
    if (c > iv.a && c < iv.b) bps.push_back(c);
    return FunctionSpec{val,
                        [=](double x) { return amplitude * (x - c) / std::hypot(x - c, width); },
                        iv,
                        bps,
                        RangeBounds{*std::min_element(std::begin(vals), std::end(vals)),
                                    *std::max_element(std::begin(vals), std::end(vals))},
                        {},
                        "kink[c=" + detail::fmt_g(center, 4) + ";A=" + detail::fmt_g(amplitude, 4) + "]"};
}

/// g(x) = x on [0,1] and the ramp f built from the density 1/(2 eps) on
/// (1/2 - eps, 1/2 + eps): clamped (the integral of the density) or affine
/// (the ramp formula extended over all of [0,1]).
inline std::pair<FunctionSpec, FunctionSpec> make_example1_pair(const RampVariant& variant) {
    const Interval unit = unit_interval();
    const double eps = variant.epsilon;
    auto g = make_polynomial({0.0, 1.0}, unit);
    g.label = "identity";

    FunctionSpec f = variant.kind == RampKind::ClampedRamp
                         ? make_clamped_ramp(0.5, eps, 1.0, unit)
                         : make_polynomial({(eps - 0.5) / (2.0 * eps), 1.0 / (2.0 * eps)}, unit);
    f.label = std::string(variant.kind == RampKind::ClampedRamp ? "clamped_ramp" : "affine_ramp") +
              "[eps=" + detail::fmt_g(eps, 6) + "]";
    return {std::move(f), std::move(g)};
}

/// alpha * f + offset.
inline FunctionSpec scaled(const FunctionSpec& f, double alpha, double offset = 0.0) {
    FunctionSpec out = f;
    out.value = [v = f.value, alpha, offset](double x) { return alpha * v(x) + offset; };
    out.derivative = [d = f.derivative, alpha](double x) { return alpha * d(x); };
    if (f.range_bounds) {
        const double l = alpha * f.range_bounds->lo + offset;
        const double h = alpha * f.range_bounds->hi + offset;
        out.range_bounds = RangeBounds{std::min(l, h), std::max(l, h)};
    }
    for (auto& [p, n] : out.exact_norms) n *= std::abs(alpha);
    out.label = detail::fmt_g(alpha, 4) + "*" + f.label + (offset != 0.0 ? "+" + detail::fmt_g(offset, 4) : "");
    return out;
}

/// Composition of f (defined on `from`) with the increasing affine map sending
/// `to` onto `from`. The derivative picks up the map's slope |from|/|to|.
inline FunctionSpec affine_rescale(const FunctionSpec& f, const Interval& from, const Interval& to) {
    if (from == to) return f;
    const double slope = from.length() / to.length();
    const double fa = from.a, ta = to.a;
    auto to_source = [=](double u) { return fa + (u - ta) * slope; };

    FunctionSpec out = f;
    out.domain = to;
    out.value = [v = f.value, to_source](double u) { return v(to_source(u)); };
    out.derivative = [d = f.derivative, to_source, slope](double u) { return slope * d(to_source(u)); };
    out.breakpoints.clear();
    for (double x : f.breakpoints) out.breakpoints.push_back(ta + (x - fa) / slope);
    for (auto& [p, n] : out.exact_norms) n *= std::pow(slope, 1.0 - p.reciprocal());
    out.label = f.label;
    return out;
}

// ---------------------------------------------------------------------------
// Corpus

/// Deterministic mix of polynomials (degree <= 5, coefficients in [-2, 2]),
/// trig functions, exponentials, clamped ramps (eps in {0.05, 0.1, 0.25}) and
/// mollified kinks. Member i depends only on (seed, i, iv).
inline std::vector<FunctionSpec> corpus(std::uint64_t seed, int count, const Interval& iv) {
    if (count < 1) throw DomainError("corpus count must be at least 1");
    constexpr double kRampEps[] = {0.05, 0.1, 0.25};
    std::vector<FunctionSpec> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        detail::Rng rng(seed, static_cast<std::uint64_t>(i));
        switch (rng.below(5)) {
            case 0: {
                const auto degree = rng.below(6);
                std::vector<double> c(degree + 1);
                for (auto& x : c) x = rng.uniform(-2.0, 2.0);
                out.push_back(make_polynomial(c, iv));
                break;
            }
            case 1: {
                const int k = 1 + static_cast<int>(rng.below(3));
                const double phase = rng.uniform(-std::numbers::pi, std::numbers::pi);
                const double amp = rng.uniform(-2.0, 2.0);
                out.push_back(scaled(make_trig(k, phase, iv), amp));
                break;
            }
            case 2: {
                const double rate = rng.uniform(-2.0, 2.0);
                const double amp = rng.uniform(-2.0, 2.0);
                out.push_back(make_exponential(rate, amp, iv));
                break;
            }
            case 3: {
                const double eps = kRampEps[rng.below(3)];
                const double center = rng.uniform(0.3, 0.7);
                const double amp = rng.uniform(-2.0, 2.0);
                out.push_back(make_clamped_ramp(center, eps, amp, iv));
                break;
            }
            default: {
                const double center = rng.uniform(0.2, 0.8);
                const double amp = rng.uniform(-2.0, 2.0);
                out.push_back(make_mollified_kink(center, amp, iv));
                break;
            }
        }
        out.back().label = "#" + std::to_string(i) + ":" + out.back().label;
    }
    return out;
}

/// Up to `max_pairs` ordered index pairs (i, j) of a corpus of size `count`,
/// drawn without replacement by a seeded partial shuffle and returned sorted.
/// All count^2 pairs when that is no more than max_pairs.
inline std::vector<std::pair<std::size_t, std::size_t>> corpus_pairs(std::uint64_t seed, std::size_t count,
                                                                     std::size_t max_pairs) {
    const std::size_t total = count * count;
    std::vector<std::size_t> flat(total);
    for (std::size_t k = 0; k < total; ++k) flat[k] = k;
    const std::size_t take = std::min(total, max_pairs);
    detail::Rng rng(seed, 0x70616972ULL);
    if (take < total) {
        for (std::size_t k = 0; k < take; ++k) std::swap(flat[k], flat[k + rng.below(total - k)]);
        flat.resize(take);
        std::sort(flat.begin(), flat.end());
    }
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(flat.size());
    for (std::size_t k : flat) out.emplace_back(k / count, k % count);
    return out;
}

// ---------------------------------------------------------------------------
// Invariant checks

struct AbsoluteContinuityReport {
    double max_integral_gap = 0.0;  // max |f(x) - f(a) - int_a^x f'| over probes
    double max_jump = 0.0;          // max |f(x+) - f(x-)| over breakpoints
    bool range_ok = true;

    bool ok() const { return max_integral_gap <= 1e-8 && max_jump <= 1e-9 && range_ok; }
};

inline AbsoluteContinuityReport check_absolute_continuity(const FunctionSpec& f, int probes = 17) {
    const Interval& iv = f.domain;
    const Tolerance tight{1e-13, 1e-13, 4000};
    AbsoluteContinuityReport rep;
    const double fa = f.value(iv.a);
    double x_prev = iv.a;
    double accumulated = 0.0;
    for (int i = 1; i < probes; ++i) {
        const double x = (i == probes - 1) ? iv.b : iv.a + iv.length() * i / (probes - 1);
        accumulated += integrate(f.derivative, Interval(x_prev, x), f.breakpoints, tight).value;
        rep.max_integral_gap = std::max(rep.max_integral_gap, std::abs(f.value(x) - fa - accumulated));
        x_prev = x;
    }
    for (double x : f.breakpoints) {
        const double h = 1e-12 * std::max(1.0, std::abs(x));
        rep.max_jump = std::max(rep.max_jump, std::abs(f.value(x + h) - f.value(x - h)));
    }
    if (f.range_bounds) {
        for (int i = 0; i <= 1024; ++i) {
            const double v = f.value(iv.a + iv.length() * i / 1024.0);
            if (v < f.range_bounds->lo - 1e-9 || v > f.range_bounds->hi + 1e-9) rep.range_ok = false;
        }
    }
    return rep;
}

}  // namespace cheby
