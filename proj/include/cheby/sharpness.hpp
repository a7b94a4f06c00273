#pragma once

// Extremal pairs, the ramp counterexample family, and a seeded search for
// lower bounds on the best constant C(p,q) in |T| <= C ||f'||_p ||g'||_q.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "cheby/cheb_bounds.hpp"
#include "cheby/errors.hpp"
#include "cheby/funcspace.hpp"
#include "cheby/functional.hpp"
#include "cheby/numerics.hpp"
#include "cheby/parallel.hpp"

namespace cheby {

// ---------------------------------------------------------------------------
// Ratio

/// |T(f,g)| / (||f'||_p ||g'||_q).
inline double ratio(const FunctionSpec& f, const FunctionSpec& g, const Interval& iv, const ConjugatePair& pair,
                    const Tolerance& tol = {}) {
    const double nf = derivative_norm(f, iv, pair.p(), tol);
    const double ng = derivative_norm(g, iv, pair.q(), tol);
    if (nf == 0.0 || ng == 0.0) throw DegenerateInput("ratio undefined: a derivative norm vanishes");
    if (!std::isfinite(nf) || !std::isfinite(ng)) throw DegenerateInput("ratio undefined: a derivative norm is infinite");
    return std::abs(cheb_T(f, g, iv, tol).value) / (nf * ng);
}

// ---------------------------------------------------------------------------
// Ramp counterexample

struct Example1Report {
    double epsilon;
    RampKind variant;
    double t_value;
    double t_parts;
    std::map<std::string, double> norms;  // "f'_1", "f'_inf", "g'_1", "g'_inf"
    double ratio_inf_1;                   // |T| / (||f'||_inf ||g'||_1)
    double ratio_1_inf;                   // |T| / (||f'||_1 ||g'||_inf)
};

inline Example1Report example1(double epsilon, RampKind kind, const Tolerance& tol = {}) {
    const RampVariant variant(kind, epsilon);
    const auto [f, g] = make_example1_pair(variant);
    const Interval unit = unit_interval();
    const Exponent one(1.0), inf = Exponent::infinity();

    Example1Report r{epsilon, kind, 0.0, 0.0, {}, 0.0, 0.0};
    r.t_value = cheb_T(f, g, unit, tol).value;
    r.t_parts = cheb_T_parts(f, g, unit, tol).value;
    r.norms["f'_1"] = derivative_norm(f, unit, one, tol);
    r.norms["f'_inf"] = derivative_norm(f, unit, inf, tol);
    r.norms["g'_1"] = derivative_norm(g, unit, one, tol);
    r.norms["g'_inf"] = derivative_norm(g, unit, inf, tol);
    const double t = std::abs(r.t_value);
    r.ratio_inf_1 = t / (r.norms["f'_inf"] * r.norms["g'_1"]);
    r.ratio_1_inf = t / (r.norms["f'_1"] * r.norms["g'_inf"]);
    return r;
}

// ---------------------------------------------------------------------------
// Equality witnesses

struct Witness {
    BoundId id;
    FunctionSpec f;
    FunctionSpec g;
    double t_abs;
    double bound_value;  // the bound, or the reference constant times the norms
    double ratio;        // t_abs / bound_value
    std::string note;
};

inline std::vector<Witness> equality_witnesses(const Tolerance& tol = {}) {
    const Interval unit = unit_interval();
    const auto pair2 = ConjugatePair::from_p(2.0);
    std::vector<Witness> out;

    auto against = [&](BoundId id, FunctionSpec f, FunctionSpec g, std::string note) {
        const double t = std::abs(cheb_T(f, g, unit, tol).value);
        const auto ev = evaluate(id, f, g, unit, pair2, std::nullopt, tol);
        out.push_back({id, std::move(f), std::move(g), t, ev.value, t / ev.value, std::move(note)});
    };

    auto x = make_polynomial({0.0, 1.0}, unit);
    x.label = "identity";
    against(BoundId::Thm4, x, x, "1/12 attained by the identity");
    against(BoundId::Cebysev112, x, x, "1/12 attained by the identity");

    auto c = make_cosine(1.0, 0.0, unit);
    c.label = "cos(pi x)";
    against(BoundId::Lupas1PiSq, c, c, "1/pi^2 attained by cos(pi x)");

    {
        // Affine ramp: |T| = (1/12) ||f'||_inf ||g'||_1 for every eps, so 1/8 is not reached.
        const auto [f, g] = make_example1_pair(RampVariant(RampKind::AffineExtension, 0.1));
        const double t = std::abs(cheb_T(f, g, unit, tol).value);
        const double ref = (1.0 / 12.0) * derivative_norm(f, unit, Exponent::infinity(), tol) *
                           derivative_norm(g, unit, Exponent(1.0), tol);
        out.push_back({BoundId::PPbasic, f, g, t, ref, t / ref,
                       "affine ramp, roles ||f'||_inf ||g'||_1, against the constant 1/12"});
    }

    {
        const auto [f, g] = make_example1_pair(RampVariant(RampKind::ClampedRamp, 0.05));
        against(BoundId::Ostrowski18, f, g, "clamped ramp eps=0.05; ratio 1 - 4 eps^2/3 -> 1");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Nelder-Mead on a box

struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    std::vector<double> clamp(std::vector<double> x) const {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
        return x;
    }
};

struct NelderMeadResult {
    std::vector<double> x;
    double value;
    int evaluations;
};

/// Minimizes fn over the box; trial points are projected onto it. Stops when
/// every vertex lies within `xtol` of the best one (max norm) or after
/// `max_evals` evaluations.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& fn,
                                    std::vector<double> x0, const Box& box, double xtol = 1e-6,
                                    int max_evals = 600) {
    const std::size_t n = x0.size();
    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return fn(x);
    };

    std::vector<std::vector<double>> simplex{box.clamp(std::move(x0))};
    for (std::size_t i = 0; i < n; ++i) {
        auto v = simplex[0];
        const double step = 0.1 * (box.hi[i] - box.lo[i]);
        v[i] = v[i] + step <= box.hi[i] ? v[i] + step : v[i] - step;
        simplex.push_back(box.clamp(v));
    }
    std::vector<double> fv;
    for (const auto& v : simplex) fv.push_back(eval(v));

    std::vector<std::size_t> idx(n + 1);
    while (evals < max_evals) {
        for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(), [&](auto i, auto j) { return fv[i] < fv[j]; });
        const auto& best = simplex[idx[0]];

        double spread = 0.0;
        for (std::size_t k = 1; k <= n; ++k)
            for (std::size_t i = 0; i < n; ++i) spread = std::max(spread, std::abs(simplex[idx[k]][i] - best[i]));
        if (spread <= xtol) break;

        const std::size_t worst = idx[n], second = idx[n - 1];
        std::vector<double> centroid(n, 0.0);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[idx[k]][i] / static_cast<double>(n);

        auto along = [&](double t) {
            std::vector<double> v(n);
            for (std::size_t i = 0; i < n; ++i) v[i] = centroid[i] + t * (simplex[worst][i] - centroid[i]);
            return box.clamp(v);
        };

        auto xr = along(-1.0);
        const double fr = eval(xr);
        if (fr < fv[idx[0]]) {
            auto xe = along(-2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[worst] = xe;
                fv[worst] = fe;
            } else {
                simplex[worst] = xr;
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second]) {
            simplex[worst] = xr;
            fv[worst] = fr;
            continue;
        }
        const bool outside = fr < fv[worst];
        auto xc = along(outside ? -0.5 : 0.5);
        const double fc = eval(xc);
        if (fc < (outside ? fr : fv[worst])) {
            simplex[worst] = xc;
            fv[worst] = fc;
            continue;
        }
        // shrink toward the best vertex
        const auto anchor = simplex[idx[0]];
        for (std::size_t k = 1; k <= n; ++k) {
            auto& v = simplex[idx[k]];
            for (std::size_t i = 0; i < n; ++i) v[i] = anchor[i] + 0.5 * (v[i] - anchor[i]);
            fv[idx[k]] = eval(v);
        }
    }
    const auto it = std::min_element(fv.begin(), fv.end());
    const auto k = static_cast<std::size_t>(it - fv.begin());
    return {simplex[k], *it, evals};
}

// ---------------------------------------------------------------------------
// Best-constant search

enum class SearchFamily { Trig, Ramp, Poly };

inline const char* to_string(SearchFamily s) {
    switch (s) {
        case SearchFamily::Trig: return "trig";
        case SearchFamily::Ramp: return "ramp";
        case SearchFamily::Poly: return "poly";
    }
    return "?";
}

/// Parameter box of a family. Each point defines a pair (f, g) on [0,1]:
///   trig (w1, phi1, w2, phi2): f = cos(w1 pi x + phi1), g = cos(w2 pi x + phi2)
///   ramp (c1, e1, c2, e2):     unit ramps over [c - e, c + e] clipped to [0,1]
///   poly (a1..a3, b1..b3):     f = a1 x + a2 x^2 + a3 x^3, g likewise
inline Box family_box(SearchFamily fam) {
    constexpr double pi = std::numbers::pi;
    switch (fam) {
        case SearchFamily::Trig: return {{0.25, -pi, 0.25, -pi}, {4.0, pi, 4.0, pi}};
        case SearchFamily::Ramp: return {{0.0, 1e-3, 0.0, 1e-3}, {1.0, 1.0, 1.0, 1.0}};
        case SearchFamily::Poly: return {std::vector<double>(6, -2.0), std::vector<double>(6, 2.0)};
    }
    throw DomainError("unknown search family");
}

inline std::pair<FunctionSpec, FunctionSpec> family_pair(SearchFamily fam, const std::vector<double>& x) {
    const Interval unit = unit_interval();
    switch (fam) {
        case SearchFamily::Trig: return {make_cosine(x[0], x[1], unit), make_cosine(x[2], x[3], unit)};
        case SearchFamily::Ramp:
            return {make_clamped_ramp(x[0], x[1], 1.0, unit), make_clamped_ramp(x[2], x[3], 1.0, unit)};
        case SearchFamily::Poly:
            return {make_polynomial({0.0, x[0], x[1], x[2]}, unit), make_polynomial({0.0, x[3], x[4], x[5]}, unit)};
    }
    throw DomainError("unknown search family");
}

/// Random point of the family box; ramp widths are drawn log-uniformly.
inline std::vector<double> family_sample(SearchFamily fam, detail::Rng& rng) {
    const Box box = family_box(fam);
    std::vector<double> x(box.lo.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const bool width = fam == SearchFamily::Ramp && (i % 2 == 1);
        x[i] = width ? std::exp(rng.uniform(std::log(box.lo[i]), std::log(box.hi[i])))
                     : rng.uniform(box.lo[i], box.hi[i]);
    }
    return x;
}

struct SearchConfig {
    std::uint64_t seed = 0;
    int iterations = 200;
    std::vector<SearchFamily> families{SearchFamily::Trig, SearchFamily::Ramp, SearchFamily::Poly};
    int refine_top = 3;     // best samples per family handed to Nelder-Mead
    double xtol = 1e-6;
    int max_evals = 600;    // per refinement
    unsigned workers = 0;   // 0: hardware concurrency
    Tolerance tol{};
};

struct RatioSample {
    SearchFamily family;
    std::vector<double> params;
    double ratio;
    bool refined;
};

struct RatioStudy {
    BoundId bound_id = BoundId::BMV;
    ConjugatePair exponents = ConjugatePair::from_p(2.0);
    std::vector<RatioSample> samples;
    double best_ratio = 0.0;
    std::vector<double> best_params;
    SearchFamily best_family = SearchFamily::Trig;
    std::string best_f;
    std::string best_g;
    double ceiling = 0.0;  // omega(p) on [0,1]: a proved upper bound for C(p,q)
};

/// Objective value of one parameter point; pairs where the ratio is
/// undefined or the quadrature fails count as 0.
inline double family_ratio(SearchFamily fam, const std::vector<double>& x, const ConjugatePair& pair,
                           const Tolerance& tol) {
    try {
        const auto [f, g] = family_pair(fam, x);
        return ratio(f, g, unit_interval(), pair, tol);
    } catch (const DegenerateInput&) {
        return 0.0;
    } catch (const NonConvergence&) {
        return 0.0;
    }
}

/// Lower bound on C(p,q) over the configured families: `iterations` seeded
/// random samples (round-robin over families, sample i drawn from stream i),
/// then Nelder-Mead from the best `refine_top` samples of each family.
inline RatioStudy search_best_constant(const ConjugatePair& pair, const SearchConfig& config) {
    if (config.iterations < 1) throw DomainError("search needs at least one iteration");
    if (config.families.empty()) throw DomainError("search needs at least one family");

    RatioStudy study;
    study.exponents = pair;
    study.ceiling = omega(pair.p());

    const auto nfam = config.families.size();
    auto random = detail::parallel_map<RatioSample>(
        static_cast<std::size_t>(config.iterations),
        [&](std::size_t i) {
            const SearchFamily fam = config.families[i % nfam];
            detail::Rng rng(config.seed, i);
            auto x = family_sample(fam, rng);
            const double r = family_ratio(fam, x, pair, config.tol);
            return RatioSample{fam, std::move(x), r, false};
        },
        config.workers);

    // Starting points: top `refine_top` per family, ties broken by sample index.
    std::vector<std::size_t> starts;
    for (SearchFamily fam : config.families) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < random.size(); ++i)
            if (random[i].family == fam) idx.push_back(i);
        std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return random[a].ratio > random[b].ratio; });
        idx.resize(std::min<std::size_t>(idx.size(), static_cast<std::size_t>(std::max(0, config.refine_top))));
        starts.insert(starts.end(), idx.begin(), idx.end());
    }

    auto refined = detail::parallel_map<RatioSample>(
        starts.size(),
        [&](std::size_t k) {
            const auto& s = random[starts[k]];
            const Box box = family_box(s.family);
            auto res = nelder_mead([&](const std::vector<double>& x) { return -family_ratio(s.family, x, pair, config.tol); },
                                   s.params, box, config.xtol, config.max_evals);
            return RatioSample{s.family, std::move(res.x), -res.value, true};
        },
        config.workers);

    study.samples = std::move(random);
    study.samples.insert(study.samples.end(), refined.begin(), refined.end());

    const RatioSample* best = nullptr;
    for (const auto& s : study.samples)
        if (!best || s.ratio > best->ratio) best = &s;
    study.best_ratio = best->ratio;
    study.best_params = best->params;
    study.best_family = best->family;
    const auto [f, g] = family_pair(best->family, best->params);
    study.best_f = f.label;
    study.best_g = g.label;
    return study;
}

}  // namespace cheby
