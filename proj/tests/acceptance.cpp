// Acceptance checks 1-9; one PASS/FAIL line each, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "cheby/cheby.hpp"

using namespace cheby;

namespace {

const Interval kUnit = unit_interval();

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[200];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

std::vector<ConjugatePair> pairs(std::initializer_list<double> ps) {
    std::vector<ConjugatePair> out;
    for (double p : ps) out.push_back(ConjugatePair::from_p(Exponent(p)));
    return out;
}

Check soundness() {
    Check c;
    const auto grid = pairs({1.0, 1.5, 2.0, 3.0, 10.0, INFINITY});
    int violations = 0, checked = 0;
    for (const Interval& iv : {kUnit, Interval(-1.0, 3.0)}) {
        const auto fs = corpus(1, 20, iv);
        for (auto [i, j] : corpus_pairs(1, fs.size(), 100)) {
            const auto rec = verify(fs[i], fs[j], iv, grid);
            for (const auto& ev : rec.evaluations) {
                checked += ev.applicable;
                if (violates(ev, rec.t_abs)) {
                    ++violations;
                    c.require(false, fs[i].label + " / " + fs[j].label + " violates " + to_string(ev.id));
                }
            }
        }
    }
    c.detail = c.ok ? std::to_string(checked) + " applicable evaluations, 0 violations" : c.detail;
    (void)violations;
    return c;
}

Check witnesses() {
    Check c;
    const auto x = make_polynomial({0.0, 1.0}, kUnit);
    const double t = std::abs(cheb_T(x, x, kUnit).value);
    c.require(std::abs(t - 1.0 / 12.0) <= 1e-10, fmt("|T(x,x)| = %.17g", t));
    for (BoundId id : {BoundId::Thm4, BoundId::Cebysev112}) {
        const auto ev = evaluate(id, x, x, kUnit, ConjugatePair::from_p(2.0));
        c.require(std::abs(ev.value - t) <= 1e-9, std::string(to_string(id)) + fmt(" slack %.3g", ev.value - t));
    }
    const auto cs = make_cosine(1.0, 0.0, kUnit);
    const double tc = std::abs(cheb_T(cs, cs, kUnit).value);
    const double bound = evaluate(BoundId::Lupas1PiSq, cs, cs, kUnit, ConjugatePair::from_p(2.0)).value;
    c.require(std::abs(tc / bound - 1.0) <= 1e-8, fmt("cosine ratio %.17g", tc / bound));
    if (c.ok) c.detail = fmt("|T(x,x)| = %.17g, cosine ratio %.17g", t, tc / bound);
    return c;
}

Check example1_affine() {
    Check c;
    std::string vals;
    for (double eps : {0.25, 0.1, 0.01}) {
        const auto r = example1(eps, RampKind::AffineExtension);
        c.require(std::abs(r.ratio_inf_1 - 1.0 / 12.0) <= 1e-9, fmt("eps %g ratio_inf_1 %.17g", eps, r.ratio_inf_1));
        vals += fmt(" %.12g", r.ratio_inf_1);
    }
    if (c.ok) c.detail = "ratio_inf_1 =" + vals + " (1/12 < 1/8)";
    return c;
}

Check clamped_oracle() {
    Check c;
    for (double eps : {0.25, 0.1, 0.05}) {
        const auto r = example1(eps, RampKind::ClampedRamp);
        const double want = 0.125 - eps * eps / 6.0;
        c.require(std::abs(std::abs(r.t_value) - want) <= 1e-8, fmt("eps %g |T| %.17g", eps, r.t_value));
    }
    const auto r = example1(0.05, RampKind::ClampedRamp);
    c.require(std::abs(r.ratio_1_inf - 0.125) <= 2e-3, fmt("ratio_1_inf %.17g", r.ratio_1_inf));
    if (c.ok) c.detail = fmt("ratio_1_inf(0.05) = %.12g", r.ratio_1_inf);
    return c;
}

Check constants() {
    Check c;
    c.require(std::abs(omega(2.0) - 0.125) <= 1e-12, fmt("omega(2) = %.17g", omega(2.0)));
    for (int i = 1; i <= 50; ++i) {
        const double p = std::pow(1000.0, i / 50.0);
        const double w = omega(p);
        c.require(w >= 0.125 - 1e-12 && w <= 0.25 + 1e-12, fmt("omega(%g) = %.17g", p, w));
    }
    for (const Interval& iv : {kUnit, Interval(-1.0, 3.0)}) {
        const auto x = make_polynomial({0.0, 1.0}, iv);
        const double c5 = evaluate(BoundId::Thm5, x, x, iv, ConjugatePair::from_p(Exponent::infinity())).constant;
        const double want = iv.length() * iv.length() / 12.0;
        c.require(std::abs(c5 - want) <= 1e-12, fmt("Thm5(q=1) %.17g vs %.17g", c5, want));
        const double rs = remark_s_constant(iv.length(), 1e4, 1.0);
        c.require(std::abs(rs - iv.length() / 8.0) <= 1e-3 * iv.length() / 8.0, fmt("RemarkS %.17g", rs));
    }
    if (c.ok) c.detail = fmt("omega(2) = %.17g, RemarkS(p=1e4) = %.12g", omega(2.0), remark_s_constant(1.0, 1e4, 1.0));
    return c;
}

Check route_agreement() {
    Check c;
    double worst = 0.0;
    for (const Interval& iv : {kUnit, Interval(-1.0, 3.0)}) {
        const auto fs = corpus(1, 20, iv);
        for (const auto& f : fs)
            for (const auto& g : fs) {
                const double a = cheb_T(f, g, iv).value;
                const double b = cheb_T_parts(f, g, iv).value;
                const double rel = std::abs(a - b) / std::max(1.0, std::abs(a));
                worst = std::max(worst, rel);
                c.require(rel <= 1e-8, f.label + " / " + g.label + fmt(" gap %.3g", rel));
            }
    }
    if (c.ok) c.detail = fmt("worst relative gap %.3g over 800 pairs", worst);
    return c;
}

Check specialization() {
    Check c;
    double worst = 0.0;
    for (const Interval& iv : {kUnit, Interval(-1.0, 3.0)}) {
        const auto g = make_trig(2, 0.3, iv);
        for (double p : {1.5, 2.0, 3.0})
            for (int i = 1; i <= 31; ++i) {
                const double t = iv.a + iv.length() * i / 32.0;
                const double k = kernel_bound(g, iv, t, Exponent(p));
                const double b = cerone_bound(g, iv, Interval(iv.a, t), Exponent(p));
                const double rel = std::abs(k - b) / b;
                worst = std::max(worst, rel);
                c.require(rel <= 1e-10, fmt("p %g t %g", p, t));
            }
    }
    if (c.ok) c.detail = fmt("worst relative gap %.3g on 31-point grids", worst);
    return c;
}

Check search_floor() {
    Check c;
    SearchConfig cfg;
    cfg.seed = 7;
    cfg.iterations = 200;
    const auto s = search_best_constant(ConjugatePair::from_p(2.0), cfg);
    const double lo = 1.0 / (std::numbers::pi * std::numbers::pi) - 1e-4, hi = omega(2.0) + 1e-6;
    c.require(s.best_ratio >= lo && s.best_ratio <= hi, fmt("best_ratio %.17g", s.best_ratio));
    c.detail = fmt("best_ratio %.15g (1/pi^2 = %.15g)", s.best_ratio, 1.0 / (std::numbers::pi * std::numbers::pi));
    return c;
}

Check determinism() {
    Check c;
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "cheby_acceptance";
    fs::create_directories(dir);
    std::string files[2];
    for (int k = 0; k < 2; ++k) {
        const fs::path out = dir / ("verify_" + std::to_string(k) + ".json");
        fs::remove(out);
        const std::string cmd = std::string(CHEBY_CLI_PATH) +
                                " verify --seed 1 --corpus 20 --interval 0 1 --p 1.5 2 3 inf --out " + out.string();
        const int raw = std::system(cmd.c_str());
        c.require(raw == 0, "verify exited with status " + std::to_string(raw));
        std::ifstream in(out, std::ios::binary);
        files[k].assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    c.require(!files[0].empty(), "empty report");
    c.require(files[0] == files[1], "reports differ");
    if (c.ok) c.detail = std::to_string(files[0].size()) + " bytes, identical";
    return c;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Check()>>> criteria{
        {"soundness sweep", soundness},
        {"equality witnesses", witnesses},
        {"ramp counterexample (affine)", example1_affine},
        {"clamped ramp oracle", clamped_oracle},
        {"constant identities", constants},
        {"route agreement", route_agreement},
        {"kernel specialization", specialization},
        {"search floor/ceiling", search_floor},
        {"report determinism", determinism},
    };
    const auto start = std::chrono::steady_clock::now();
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        try {
            c = criteria[i].second();
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        failed += !c.ok;
        std::printf("%s %zu %s: %s\n", c.ok ? "PASS" : "FAIL", i + 1, criteria[i].first, c.detail.c_str());
        std::fflush(stdout);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d/%zu passed in %.1f s\n", static_cast<int>(criteria.size()) - failed, criteria.size(), secs);
    return failed == 0 ? 0 : 1;
}
