#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "cheby/cheb_bounds.hpp"

using namespace cheby;

namespace {

const Interval kUnit = unit_interval();
constexpr double kPi = std::numbers::pi;

FunctionSpec identity(const Interval& iv = kUnit) { return make_polynomial({0.0, 1.0}, iv); }

const BoundEvaluation& find(const std::vector<BoundEvaluation>& evs, BoundId id) {
    for (const auto& e : evs)
        if (e.id == id) return e;
    throw std::runtime_error("bound not found");
}

std::vector<ConjugatePair> grid(std::initializer_list<double> ps) {
    std::vector<ConjugatePair> out;
    for (double p : ps) out.push_back(ConjugatePair::from_p(Exponent(p)));
    return out;
}

}  // namespace

TEST(Omega, ValueAtTwo) { EXPECT_NEAR(omega(2.0), 0.125, 1e-12); }

TEST(Omega, NearOneAgainstHighPrecision) {
    // mpmath, 30 digits
    EXPECT_NEAR(omega(1.01), 0.22945941213783695064, 1e-12);
    EXPECT_NEAR(omega(1.001), 0.24671534472602122362, 1e-12);
    EXPECT_NEAR(omega(1000.0), 0.24671257473293735383, 1e-12);
    EXPECT_LT(std::abs(omega(1.001) - 0.25), 4e-3);
    EXPECT_LT(omega(1.1), omega(1.01));
    EXPECT_LT(omega(1.01), omega(1.001));
}

TEST(Omega, RangeAndSymmetry) {
    for (double p : {1.1, 1.5, 2.0, 3.0, 10.0, 100.0}) {
        EXPECT_GE(omega(p), 0.125 - 1e-10);
        EXPECT_LE(omega(p), 0.25 + 1e-10);
        EXPECT_NEAR(omega(p), omega(p / (p - 1.0)), 1e-12);
    }
    for (int i = 1; i <= 50; ++i) {
        const double p = std::pow(1000.0, i / 50.0);
        if (p == 1.0) continue;
        EXPECT_GE(omega(p), 0.125 - 1e-12) << p;
        EXPECT_LE(omega(p), 0.25 + 1e-12) << p;
    }
    EXPECT_THROW(omega(1.0), DomainError);
    EXPECT_THROW(omega(0.5), DomainError);
    EXPECT_EQ(omega(Exponent(1.0)), 0.25);
    EXPECT_EQ(omega(Exponent::infinity()), 0.25);
    EXPECT_TRUE(std::isfinite(omega(1e6)));
}

TEST(WeightNorm, BetaAndSupremum) {
    EXPECT_NEAR(weight_norm(1.0, 1.0, Exponent(1.0)), 1.0 / 6.0, 1e-14);
    EXPECT_NEAR(weight_norm(1.0, 1.0, Exponent(2.0)), std::sqrt(1.0 / 30.0), 1e-14);
    EXPECT_NEAR(weight_norm(1.0, 1.0, Exponent::infinity()), 0.25, 1e-15);
    EXPECT_NEAR(weight_norm(1.0, 0.0, Exponent::infinity()), 1.0, 1e-15);
    EXPECT_NEAR(weight_norm(1.0, 1.0, Exponent(1e4)), 0.25, 1e-3);
}

TEST(Evaluate, Thm4IdentityEquality) {
    const auto x = identity();
    const auto ev = evaluate(BoundId::Thm4, x, x, kUnit, ConjugatePair::from_p(2.0));
    EXPECT_NEAR(ev.constant, 1.0 / 12.0, 1e-15);
    ASSERT_EQ(ev.norms.size(), 2u);
    EXPECT_NEAR(ev.norms[0].value * ev.norms[1].value, 1.0, 1e-12);
    EXPECT_NEAR(ev.value, 1.0 / 12.0, 1e-12);
    EXPECT_TRUE(ev.applicable);
    EXPECT_FALSE(ev.pair);
}

TEST(Evaluate, LupasCosineEquality) {
    const auto c = make_cosine(1.0, 0.0, kUnit);
    const auto ev = evaluate(BoundId::Lupas1PiSq, c, c, kUnit, ConjugatePair::from_p(2.0));
    EXPECT_NEAR(ev.value, 0.5, 1e-10);
    EXPECT_NEAR(std::abs(cheb_T(c, c, kUnit).value), ev.value, 1e-9);
}

TEST(Evaluate, Thm5ReducesToThm4AtQEqualOne) {
    for (const Interval& iv : {kUnit, Interval(-1.0, 3.0)}) {
        const auto x = identity(iv);
        const auto pair = ConjugatePair::from_p(Exponent::infinity());
        const double c5 = evaluate(BoundId::Thm5, x, x, iv, pair).constant;
        const double c4 = evaluate(BoundId::Thm4, x, x, iv, pair).constant;
        EXPECT_NEAR(c5, c4, 1e-12 * c4);
        EXPECT_NEAR(c5, iv.length() * iv.length() / 12.0, 1e-12 * c4);
    }
}

TEST(Evaluate, RemarkSApproachesOneEighth) {
    const double l3 = remark_s_constant(1.0, 1e3, 1.0);
    const double l4 = remark_s_constant(1.0, 1e4, 1.0);
    EXPECT_NEAR(l3, 0.124553918509502924, 1e-12);
    EXPECT_NEAR(l4, 0.124940939083134499, 1e-12);
    EXPECT_LT(std::abs(l3 - 0.125) / 0.125, 1e-2);
    EXPECT_LT(std::abs(l4 - 0.125) / 0.125, 1e-3);
    EXPECT_LT(std::abs(l4 - 0.125), std::abs(l3 - 0.125));
    EXPECT_NEAR(remark_s_constant(4.0, 1e4, 1.0), std::pow(4.0, 1.0 + 1e-4) * l4, 1e-12);

    // Through evaluate: the limit pair (inf, 1) gives exactly (b-a)/8.
    const auto x = identity();
    const auto ev = evaluate(BoundId::RemarkS, x, x, kUnit, ConjugatePair::from_p(Exponent::infinity()));
    EXPECT_NEAR(ev.constant, 0.125, 1e-15);
}

TEST(Evaluate, BmvAtTwo) {
    for (const Interval& iv : {kUnit, Interval(-1.0, 3.0)}) {
        const auto x = identity(iv);
        const auto ev = evaluate(BoundId::BMV, x, x, iv, ConjugatePair::from_p(2.0));
        EXPECT_NEAR(ev.constant, iv.length() / 8.0, 1e-12);
    }
}

TEST(Evaluate, OstrowskiNeedsRange) {
    auto f = make_exponential(1.0, 1.0, kUnit);
    f.range_bounds.reset();
    const auto ev = evaluate(BoundId::Ostrowski18, f, identity(), kUnit, ConjugatePair::from_p(2.0));
    EXPECT_FALSE(ev.applicable);
    EXPECT_FALSE(ev.reason.empty());
}

TEST(Evaluate, UnboundedDerivativeIsInapplicable) {
    FunctionSpec root{[](double x) { return std::sqrt(x); },
                      [](double x) { return x > 0 ? 0.5 / std::sqrt(x) : INFINITY; },
                      kUnit, {}, RangeBounds{0.0, 1.0}, {}, "sqrt"};
    const auto ev = evaluate(BoundId::Cebysev112, root, identity(), kUnit, ConjugatePair::from_p(2.0));
    EXPECT_FALSE(ev.applicable);
    EXPECT_EQ(ev.value, 0.0);
}

TEST(Evaluate, AuxPairRequiredForPPgamma) {
    const auto x = identity();
    const auto ev = evaluate(BoundId::PPgamma, x, x, kUnit, ConjugatePair::from_p(2.0));
    EXPECT_FALSE(ev.applicable);
    const auto ok = evaluate(BoundId::PPgamma, x, x, kUnit, ConjugatePair::from_p(2.0), ConjugatePair::from_p(2.0));
    EXPECT_TRUE(ok.applicable);
    EXPECT_TRUE(ok.rescaled);
}

TEST(Evaluate, PPgammaCorollariesMatchGeneralForm) {
    const auto f = make_exponential(1.5, 1.0, kUnit);
    const auto g = make_trig(1, 0.3, kUnit);
    for (double p : {1.5, 2.0, 4.0}) {
        const auto pair = ConjugatePair::from_p(p);
        const auto qq = evaluate(BoundId::PPgamma, f, g, kUnit, pair, pair);
        EXPECT_NEAR(evaluate(BoundId::PPgammaQ1eqQ, f, g, kUnit, pair).value, qq.value, 1e-12 * qq.value);
        const auto pp = evaluate(BoundId::PPgamma, f, g, kUnit, pair, pair.swapped());
        EXPECT_NEAR(evaluate(BoundId::PPgammaQ1eqP, f, g, kUnit, pair).value, pp.value, 1e-12 * pp.value);
    }
}

TEST(Evaluate, Thm7LpHasSingleGFactor) {
    const auto x = identity();
    const auto ev = evaluate(BoundId::Thm7Lp, x, x, kUnit, ConjugatePair::from_p(3.0), ConjugatePair::from_p(2.0));
    int g_factors = 0;
    for (const auto& n : ev.norms) g_factors += n.role == "g'";
    EXPECT_EQ(g_factors, 1);
}

TEST(EvaluateAll, IdentityGridTwo) {
    const auto x = identity();
    const auto evs = evaluate_all(x, x, kUnit, grid({2.0}));
    EXPECT_NEAR(find(evs, BoundId::BMV).value, 0.125, 1e-12);
    EXPECT_NEAR(find(evs, BoundId::Lupas1PiSq).value, 1.0 / (kPi * kPi), 1e-12);
    EXPECT_LT(find(evs, BoundId::Lupas1PiSq).value, find(evs, BoundId::BMV).value);
    EXPECT_EQ(evs.size(), kAllBounds.size());
}

TEST(EvaluateAll, DeterministicOrderByIdThenP) {
    const auto x = identity();
    auto g = default_exponent_grid();
    std::reverse(g.begin(), g.end());
    const auto evs = evaluate_all(x, x, kUnit, g);
    const std::size_t free_ids = 5;
    EXPECT_EQ(evs.size(), free_ids + (kAllBounds.size() - free_ids) * 8);
    for (std::size_t i = 0; i + 1 < evs.size(); ++i) {
        const auto a = static_cast<int>(evs[i].id), b = static_cast<int>(evs[i + 1].id);
        ASSERT_LE(a, b);
        if (a == b) {
            ASSERT_TRUE(evs[i].pair && evs[i + 1].pair);
            EXPECT_LT(evs[i].pair->p(), evs[i + 1].pair->p());
        }
    }
    EXPECT_THROW(evaluate_all(x, x, kUnit, {}), DomainError);
}

TEST(EvaluateAll, ConstantFunction) {
    const auto c = make_constant(2.0, kUnit);
    const auto g = make_trig(2, 0.1, kUnit);
    const auto rec = verify(c, g, kUnit, default_exponent_grid());
    EXPECT_NEAR(rec.t_abs, 0.0, 1e-12);
    for (const auto& ev : rec.evaluations) {
        EXPECT_TRUE(ev.applicable) << to_string(ev.id);
        EXPECT_GE(ev.value, 0.0);
    }
    EXPECT_TRUE(rec.pass());
}

TEST(Verify, IdentityEqualityAtThm4) {
    const auto x = identity();
    const auto rec = verify(x, x, kUnit, grid({1.0, 1.5, 2.0, 3.0, 10.0, INFINITY}));
    EXPECT_TRUE(rec.pass());
    for (std::size_t i = 0; i < rec.evaluations.size(); ++i) {
        const auto id = rec.evaluations[i].id;
        if (id == BoundId::Thm4 || id == BoundId::Cebysev112) {
            EXPECT_NEAR(rec.slack(i), 0.0, 1e-9);
        }
    }
    const auto t = rec.tightest();
    ASSERT_TRUE(t);
    EXPECT_NEAR(rec.slack(*t), 0.0, 1e-9);
}

TEST(Verify, ZeroGGivesSlackEqualToValue) {
    const auto z = make_constant(0.0, kUnit);
    const auto rec = verify(make_exponential(2.0, 1.0, kUnit), z, kUnit, default_exponent_grid());
    EXPECT_EQ(rec.t_abs, 0.0);
    for (std::size_t i = 0; i < rec.evaluations.size(); ++i)
        if (rec.evaluations[i].applicable) {
            EXPECT_EQ(rec.slack(i), rec.evaluations[i].value);
        }
}

TEST(Verify, PassIsFunctionOfFields) {
    auto rec = verify(identity(), identity(), kUnit, grid({2.0}));
    EXPECT_TRUE(rec.pass());
    rec.t_abs = 10.0;
    EXPECT_FALSE(rec.pass());
    EXPECT_GT(rec.violations(), 0);
}

TEST(Verify, CorpusSoundOnBothIntervals) {
    const auto g = grid({1.0, 1.5, 2.0, 3.0, 10.0, INFINITY});
    for (const Interval& iv : {kUnit, Interval(-1.0, 3.0)}) {
        const auto fs = corpus(1, 20, iv);
        for (auto [i, j] : corpus_pairs(1, fs.size(), 100)) {
            const auto rec = verify(fs[i], fs[j], iv, g);
            for (std::size_t k = 0; k < rec.evaluations.size(); ++k)
                EXPECT_FALSE(violates(rec.evaluations[k], rec.t_abs))
                    << fs[i].label << " / " << fs[j].label << " " << to_string(rec.evaluations[k].id);
        }
    }
}

TEST(Covariance, EveryBoundInvariantUnderRescaleToUnit) {
    const Interval iv(-1.0, 3.0);
    const auto fs = corpus(9, 6, iv);
    const auto g = grid({1.0, 1.5, 2.0, 3.0, 10.0, INFINITY});
    for (std::size_t i = 0; i + 1 < fs.size(); ++i) {
        const auto a = evaluate_all(fs[i], fs[i + 1], iv, g);
        const auto b = evaluate_all(affine_rescale(fs[i], iv, kUnit), affine_rescale(fs[i + 1], iv, kUnit), kUnit, g);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t k = 0; k < a.size(); ++k)
            EXPECT_NEAR(a[k].value, b[k].value, 1e-9 * std::max(a[k].value, 1e-300))
                << to_string(a[k].id) << " p=" << (a[k].pair ? a[k].pair->p().to_string() : "-");
    }
}

TEST(Homogeneity, ScalingFunctionsScalesBounds) {
    const auto f = make_trig(1, 0.2, kUnit);
    const auto g = make_exponential(-1.0, 0.5, kUnit);
    const auto gr = grid({1.0, 2.0, 3.0, INFINITY});
    const auto base = evaluate_all(f, g, kUnit, gr);
    for (double alpha : {-2.0, 0.5})
        for (double beta : {3.0, -0.25}) {
            const auto s = evaluate_all(scaled(f, alpha), scaled(g, beta), kUnit, gr);
            for (std::size_t k = 0; k < s.size(); ++k) {
                const double want = std::abs(alpha * beta) * base[k].value;
                EXPECT_NEAR(s[k].value, want, 1e-10 * want) << to_string(s[k].id);
            }
        }
}

TEST(Evaluate, UnboundedDerivativeInfiniteAtLargeP) {
    FunctionSpec root{[](double x) { return std::sqrt(x); },
                      [](double x) { return x > 0 ? 0.5 / std::sqrt(x) : INFINITY; },
                      kUnit, {}, RangeBounds{0.0, 1.0}, {}, "sqrt"};
    BoundContext ctx(root, identity(), kUnit);
    EXPECT_TRUE(std::isinf(ctx.f_norms()(Exponent::infinity())));
    const auto ev = evaluate(ctx, BoundId::Cebysev112, ConjugatePair::from_p(Exponent::infinity()));
    EXPECT_FALSE(ev.applicable);
}

TEST(EssSup, BoundedSteepFunctionStaysFinite) {
    const double v = ess_sup([](double x) { return 1.0 / (x + 1e-3); }, kUnit, {});
    EXPECT_NEAR(v, 1000.0, 1e-6);
    const double w = ess_sup([](double x) { return std::log(1.0 / x); }, kUnit, {});
    EXPECT_TRUE(std::isinf(w));
}
