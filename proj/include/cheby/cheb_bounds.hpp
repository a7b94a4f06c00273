#pragma once

// Catalog of upper bounds on |T(f,g)| in terms of derivative norms, each
// evaluable with an explicit applicability verdict, and the verification
// sweep that checks all of them against the computed functional.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "cheby/errors.hpp"
#include "cheby/funcspace.hpp"
#include "cheby/functional.hpp"
#include "cheby/meandiff_bounds.hpp"
#include "cheby/numerics.hpp"

namespace cheby {

enum class BoundId {
    Cebysev112,
    Lupas1PiSq,
    Ostrowski18,
    PPbasic,
    PPgamma,
    PPgammaQ1eqP,
    PPgammaQ1eqQ,
    BMV,
    Thm4,
    Thm5,
    Thm6Lp,
    Thm6L1,
    Thm7Linf,
    Thm7Lp,
    Thm7L1,
    RemarkS,
};

inline constexpr std::array<BoundId, 16> kAllBounds = {
    BoundId::Cebysev112, BoundId::Lupas1PiSq,   BoundId::Ostrowski18,  BoundId::PPbasic,
    BoundId::PPgamma,    BoundId::PPgammaQ1eqP, BoundId::PPgammaQ1eqQ, BoundId::BMV,
    BoundId::Thm4,       BoundId::Thm5,         BoundId::Thm6Lp,       BoundId::Thm6L1,
    BoundId::Thm7Linf,   BoundId::Thm7Lp,       BoundId::Thm7L1,       BoundId::RemarkS};

inline const char* to_string(BoundId id) {
    switch (id) {
        case BoundId::Cebysev112: return "Cebysev112";
        case BoundId::Lupas1PiSq: return "Lupas1PiSq";
        case BoundId::Ostrowski18: return "Ostrowski18";
        case BoundId::PPbasic: return "PPbasic";
        case BoundId::PPgamma: return "PPgamma";
        case BoundId::PPgammaQ1eqP: return "PPgammaQ1eqP";
        case BoundId::PPgammaQ1eqQ: return "PPgammaQ1eqQ";
        case BoundId::BMV: return "BMV";
        case BoundId::Thm4: return "Thm4";
        case BoundId::Thm5: return "Thm5";
        case BoundId::Thm6Lp: return "Thm6Lp";
        case BoundId::Thm6L1: return "Thm6L1";
        case BoundId::Thm7Linf: return "Thm7Linf";
        case BoundId::Thm7Lp: return "Thm7Lp";
        case BoundId::Thm7L1: return "Thm7L1";
        case BoundId::RemarkS: return "RemarkS";
    }
    return "?";
}

/// Ids whose constant does not depend on a conjugate pair.
inline bool is_exponent_free(BoundId id) {
    return id == BoundId::Cebysev112 || id == BoundId::Lupas1PiSq || id == BoundId::Ostrowski18 ||
           id == BoundId::Thm4 || id == BoundId::Thm6L1;
}

/// Ids that read the auxiliary pair (p1, q1) or (alpha, beta).
inline bool needs_aux_pair(BoundId id) {
    return id == BoundId::PPgamma || id == BoundId::Thm7Linf || id == BoundId::Thm7Lp ||
           id == BoundId::Thm7L1;
}

struct NormFactor {
    std::string role;                 // "f'", "g'", or "M-m"
    std::optional<Exponent> exponent; // empty for the oscillation M - m
    double value;
};

struct BoundEvaluation {
    BoundId id;
    std::optional<ConjugatePair> pair;
    std::optional<ConjugatePair> aux;
    double constant = 0.0;
    std::vector<NormFactor> norms;
    double value = 0.0;
    bool applicable = false;
    std::string reason;
    bool rescaled = false;  // norms taken on the pair mapped onto [0,1]
};

// ---------------------------------------------------------------------------
// Constants

/// omega(p,q) = 1/4 ((2^p-1)/(p(p+1)))^{1/p} ((2^q-1)/(q(q+1)))^{1/q}, q = p/(p-1).
inline double omega(double p) {
    if (!(p > 1.0)) throw DomainError("omega requires p > 1");
    const double q = std::isinf(p) ? 1.0 : p / (p - 1.0);
    auto factor_log = [](double r) {
        // log((2^r - 1)/(r(r+1))) / r, stable for large r.
        const double log_num = r * std::numbers::ln2 + std::log1p(-std::exp2(-r));
        return (log_num - std::log(r) - std::log1p(r)) / r;
    };
    if (std::isinf(p)) return 0.25 * std::exp(factor_log(q)) * 2.0;
    return 0.25 * std::exp(factor_log(p) + factor_log(q));
}

/// Extends omega to the endpoint exponents by continuity: omega(1) = omega(inf) = 1/4.
inline double omega(const Exponent& p) {
    if (p.is_infinite() || p.is_one()) return 0.25;
    return omega(p.value());
}

/// || u^r (1-u)^s ||_{L_beta[0,1]}: B(r beta + 1, s beta + 1)^{1/beta}, or the
/// supremum r^r s^s / (r+s)^{r+s} at beta = inf.
inline double weight_norm(double r, double s, const Exponent& beta_exp) {
    if (beta_exp.is_infinite()) {
        auto xlogx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
        return std::exp(xlogx(r) + xlogx(s) - xlogx(r + s));
    }
    const double b = beta_exp.value();
    return beta_pow(r * b + 1.0, s * b + 1.0, 1.0 / b);
}

/// (b-a)^{1+1/p} (q+1)^{-1/q} B^{1/p}(p+1, p/q+1): the Thm7 constant at
/// alpha = q, beta = p. Exposed separately so its q -> 1 limit can be probed
/// with non-conjugate arguments.
inline double remark_s_constant(double length, double p, double q) {
    const double s = 1.0 / q;
    return std::pow(length, 1.0 / p + s) * beta_pow(p + 1.0, p / q + 1.0, 1.0 / p) / std::pow(q + 1.0, s);
}

// ---------------------------------------------------------------------------
// Norm caches

/// Memoized ||f'||_p over an interval.
class NormTable {
public:
    NormTable(FunctionSpec f, const Interval& iv, const Tolerance& tol) : f_(std::move(f)), iv_(iv), tol_(tol) {}

    double operator()(const Exponent& p) {
        auto it = cache_.find(p);
        if (it != cache_.end()) return it->second;
        double v;
        try {
            v = derivative_norm(f_, iv_, p, tol_);
        } catch (const NonConvergence&) {
            // A diverging quadrature only counts as an infinite norm when f' is unbounded.
            if (p.is_infinite() || std::isfinite((*this)(Exponent::infinity()))) throw;
            v = std::numeric_limits<double>::infinity();
        }
        cache_.emplace(p, v);
        return v;
    }

    const FunctionSpec& function() const { return f_; }

private:
    FunctionSpec f_;
    Interval iv_;
    Tolerance tol_;
    std::map<Exponent, double> cache_;
};

/// Everything evaluate() needs for one (f, g, [a,b]) triple. Norms of the
/// pair rescaled onto [0,1] are kept separately for the bounds stated there.
class BoundContext {
public:
    BoundContext(const FunctionSpec& f, const FunctionSpec& g, const Interval& iv, const Tolerance& tol = {})
        : iv_(iv),
          f_(f),
          f_norms_(f, iv, tol),
          g_norms_(g, iv, tol),
          f_unit_(affine_rescale(f, iv, unit_interval()), unit_interval(), tol),
          g_unit_(affine_rescale(g, iv, unit_interval()), unit_interval(), tol) {}

    const Interval& interval() const { return iv_; }
    const FunctionSpec& f() const { return f_; }
    NormTable& f_norms() { return f_norms_; }
    NormTable& g_norms() { return g_norms_; }
    NormTable& f_unit_norms() { return f_unit_; }
    NormTable& g_unit_norms() { return g_unit_; }

private:
    Interval iv_;
    FunctionSpec f_;
    NormTable f_norms_, g_norms_;
    NormTable f_unit_, g_unit_;
};

// ---------------------------------------------------------------------------
// Evaluation

inline BoundEvaluation evaluate(BoundContext& ctx, BoundId id, const ConjugatePair& pair,
                                const std::optional<ConjugatePair>& aux = std::nullopt) {
    BoundEvaluation ev;
    ev.id = id;
    if (!is_exponent_free(id)) ev.pair = pair;
    if (needs_aux_pair(id)) ev.aux = aux;

    if (needs_aux_pair(id) && !aux) {
        ev.applicable = false;
        ev.reason = "auxiliary exponent pair required";
        return ev;
    }

    const double L = ctx.interval().length();
    const Exponent& p = pair.p();
    const Exponent& q = pair.q();
    const double s = q.reciprocal();
    const Exponent inf = Exponent::infinity();
    const Exponent one(1.0);

    auto fn = [&](const Exponent& e) { return NormFactor{"f'", e, ctx.f_norms()(e)}; };
    auto gn = [&](const Exponent& e) { return NormFactor{"g'", e, ctx.g_norms()(e)}; };
    auto fu = [&](const Exponent& e) { return NormFactor{"f'", e, ctx.f_unit_norms()(e)}; };
    auto gu = [&](const Exponent& e) { return NormFactor{"g'", e, ctx.g_unit_norms()(e)}; };

    switch (id) {
        case BoundId::Cebysev112:
            ev.constant = L * L / 12.0;
            ev.norms = {fn(inf), gn(inf)};
            break;
        case BoundId::Thm4:
            ev.constant = L * L / 12.0;
            ev.norms = {gn(inf), fn(inf)};
            break;
        case BoundId::Lupas1PiSq:
            ev.constant = L / (std::numbers::pi * std::numbers::pi);
            ev.norms = {fn(Exponent(2.0)), gn(Exponent(2.0))};
            break;
        case BoundId::Ostrowski18: {
            const auto& range = ctx.f().range_bounds;
            if (!range) {
                ev.applicable = false;
                ev.reason = "f has no range bounds (m <= f <= M)";
                return ev;
            }
            ev.constant = L / 8.0;
            ev.norms = {NormFactor{"M-m", std::nullopt, range->hi - range->lo}, gn(inf)};
            break;
        }
        case BoundId::PPbasic:
            ev.constant = 0.125;
            ev.norms = {gu(p), fu(q)};
            ev.rescaled = true;
            break;
        case BoundId::PPgamma: {
            const Exponent& p1 = aux->p();
            ev.constant = weight_norm(1.0, 1.0, p1) / detail::q_root(q);
            ev.norms = {gu(p), fu(aux->q())};
            ev.rescaled = true;
            break;
        }
        case BoundId::PPgammaQ1eqP:
            ev.constant = weight_norm(1.0, 1.0, q) / detail::q_root(q);
            ev.norms = {gu(p), fu(p)};
            ev.rescaled = true;
            break;
        case BoundId::PPgammaQ1eqQ:
            ev.constant = weight_norm(1.0, 1.0, p) / detail::q_root(q);
            ev.norms = {gu(p), fu(q)};
            ev.rescaled = true;
            break;
        case BoundId::BMV:
            ev.constant = L * omega(p);
            ev.norms = {fn(p), gn(q)};
            break;
        case BoundId::Thm5:
            ev.constant = std::pow(L, 1.0 + s) / detail::q_root(q) * weight_norm(1.0, s, one);
            ev.norms = {gn(p), fn(inf)};
            break;
        case BoundId::Thm6Lp:
            ev.constant = std::pow(L, s) / (4.0 * detail::q_root(q));
            ev.norms = {fn(one), gn(p)};
            break;
        case BoundId::Thm6L1:
            ev.constant = 0.25;
            ev.norms = {fn(one), gn(one)};
            break;
        case BoundId::Thm7Linf: {
            const Exponent& alpha = aux->p();
            const Exponent& beta = aux->q();
            ev.constant = std::pow(L, 1.0 + beta.reciprocal()) / 2.0 * weight_norm(1.0, 1.0, beta);
            ev.norms = {fn(alpha), gn(inf)};
            break;
        }
        case BoundId::Thm7Lp: {
            const Exponent& alpha = aux->p();
            const Exponent& beta = aux->q();
            ev.constant = std::pow(L, beta.reciprocal() + s) / detail::q_root(q) * weight_norm(1.0, s, beta);
            ev.norms = {fn(alpha), gn(p)};
            break;
        }
        case BoundId::Thm7L1: {
            const Exponent& alpha = aux->p();
            const Exponent& beta = aux->q();
            ev.constant = std::pow(L, beta.reciprocal()) * weight_norm(1.0, 1.0, beta);
            ev.norms = {fn(alpha), gn(one)};
            break;
        }
        case BoundId::RemarkS:
            // alpha = q, beta = p in the Thm7 L_p branch.
            ev.constant = std::pow(L, p.reciprocal() + s) / detail::q_root(q) * weight_norm(1.0, s, p);
            ev.norms = {fn(q), gn(p)};
            break;
    }

    ev.value = ev.constant;
    for (const auto& n : ev.norms) {
        if (!std::isfinite(n.value)) {
            ev.applicable = false;
            ev.reason = n.role + " norm is not finite";
            ev.value = 0.0;
            return ev;
        }
        ev.value *= n.value;
    }
    ev.applicable = std::isfinite(ev.value) && ev.value >= 0.0;
    if (!ev.applicable) ev.reason = "bound value is not finite";
    return ev;
}

inline BoundEvaluation evaluate(BoundId id, const FunctionSpec& f, const FunctionSpec& g, const Interval& iv,
                                const ConjugatePair& pair,
                                const std::optional<ConjugatePair>& aux = std::nullopt,
                                const Tolerance& tol = {}) {
    BoundContext ctx(f, g, iv, tol);
    return evaluate(ctx, id, pair, aux);
}

/// p in {1, 1.25, 1.5, 2, 3, 5, 10, inf} with conjugates.
inline std::vector<ConjugatePair> default_exponent_grid() {
    std::vector<ConjugatePair> grid;
    for (double p : {1.0, 1.25, 1.5, 2.0, 3.0, 5.0, 10.0}) grid.push_back(ConjugatePair::from_p(p));
    grid.push_back(ConjugatePair::from_p(Exponent::infinity()));
    return grid;
}

inline ConjugatePair default_aux_pair() { return ConjugatePair::from_p(2.0); }

/// Every id at every grid point, ordered by (id, p). Exponent-free ids appear
/// once; Thm7Linf/Thm7L1 take (alpha, beta) from the grid, PPgamma and Thm7Lp
/// take it from `aux`.
inline std::vector<BoundEvaluation> evaluate_all(BoundContext& ctx, std::vector<ConjugatePair> grid,
                                                 const ConjugatePair& aux = default_aux_pair()) {
    if (grid.empty()) throw DomainError("exponent grid must not be empty");
    std::sort(grid.begin(), grid.end(), [](const auto& x, const auto& y) { return x.p() < y.p(); });
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<BoundEvaluation> out;
    for (BoundId id : kAllBounds) {
        if (is_exponent_free(id)) {
            out.push_back(evaluate(ctx, id, grid.front()));
            continue;
        }
        for (const auto& pair : grid) {
            const bool grid_aux = id == BoundId::Thm7Linf || id == BoundId::Thm7L1;
            out.push_back(evaluate(ctx, id, pair, grid_aux ? pair : aux));
        }
    }
    return out;
}

inline std::vector<BoundEvaluation> evaluate_all(const FunctionSpec& f, const FunctionSpec& g, const Interval& iv,
                                                 const std::vector<ConjugatePair>& grid,
                                                 const ConjugatePair& aux = default_aux_pair(),
                                                 const Tolerance& tol = {}) {
    BoundContext ctx(f, g, iv, tol);
    return evaluate_all(ctx, grid, aux);
}

// ---------------------------------------------------------------------------
// Verification

inline constexpr double kRouteAgreement = 1e-8;
inline constexpr double kSlackTolerance = 1e-8;

/// A bound is violated when value < |T| - 1e-8 * max(1, value).
inline bool violates(const BoundEvaluation& ev, double t_abs) {
    return ev.applicable && ev.value - t_abs < -kSlackTolerance * std::max(1.0, ev.value);
}

struct VerificationRecord {
    std::string f_label;
    std::string g_label;
    double t_identity = 0.0;
    double t_parts = 0.0;
    double t_abs = 0.0;
    std::vector<BoundEvaluation> evaluations;

    double slack(std::size_t i) const { return evaluations[i].value - t_abs; }

    int violations() const {
        int n = 0;
        for (const auto& ev : evaluations) n += violates(ev, t_abs) ? 1 : 0;
        return n;
    }

    bool pass() const { return violations() == 0; }

    /// Index of the applicable bound with the smallest slack relative to its value.
    std::optional<std::size_t> tightest() const {
        std::optional<std::size_t> best;
        double best_rel = 0.0;
        for (std::size_t i = 0; i < evaluations.size(); ++i) {
            const auto& ev = evaluations[i];
            if (!ev.applicable) continue;
            const double rel = slack(i) / std::max(1e-300, ev.value);
            if (!best || rel < best_rel) {
                best = i;
                best_rel = rel;
            }
        }
        return best;
    }
};

/// T by both routes (which must agree to 1e-8 max(1,|T|)), then every bound.
inline VerificationRecord verify(const FunctionSpec& f, const FunctionSpec& g, const Interval& iv,
                                 const std::vector<ConjugatePair>& grid, const Tolerance& tol = {},
                                 const ConjugatePair& aux = default_aux_pair()) {
    VerificationRecord rec;
    rec.f_label = f.label;
    rec.g_label = g.label;
    rec.t_identity = cheb_T(f, g, iv, tol).value;
    rec.t_parts = cheb_T_parts(f, g, iv, tol).value;
    if (std::abs(rec.t_identity - rec.t_parts) > kRouteAgreement * std::max(1.0, std::abs(rec.t_identity)))
        throw NonConvergence("identity and integration-by-parts routes disagree for (" + f.label + ", " +
                             g.label + ")");
    rec.t_abs = std::abs(rec.t_identity);
    BoundContext ctx(f, g, iv, tol);
    rec.evaluations = evaluate_all(ctx, grid, aux);
    return rec;
}

}  // namespace cheby
