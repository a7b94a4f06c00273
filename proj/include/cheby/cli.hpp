#pragma once

// Report generation behind the `cheby` command-line tool. Every command
// produces a list of flat records that is written either as JSON
//   {"schema_version": 1, "command": ..., "records": [...]}
// or as CSV (header row, LF endings). Reals carry 17 significant digits and
// the exponent infinity is the string "inf".

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cheby/cheb_bounds.hpp"
#include "cheby/errors.hpp"
#include "cheby/funcspace.hpp"
#include "cheby/functional.hpp"
#include "cheby/numerics.hpp"
#include "cheby/parallel.hpp"
#include "cheby/sharpness.hpp"

namespace cheby::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitError = 2;

enum class Command { Verify, Table, Example1, Search, Witnesses };
enum class Format { Json, Csv };

inline const char* to_string(Command c) {
    switch (c) {
        case Command::Verify: return "verify";
        case Command::Table: return "table";
        case Command::Example1: return "example1";
        case Command::Search: return "search";
        case Command::Witnesses: return "witnesses";
    }
    return "?";
}

/// Invalid flags or flag combinations.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
    const char* kind() const noexcept override { return "ConfigError"; }
};

struct RunConfig {
    Command command = Command::Verify;
    Interval interval = unit_interval();
    std::uint64_t seed = 1;
    int corpus_size = 20;
    std::size_t max_pairs = 100;
    std::vector<Exponent> exponents;  // empty: command default
    std::vector<double> epsilons;     // empty: {0.25, 0.1, 0.05, 0.01}
    int iterations = 200;
    std::string f_name = "identity";
    std::string g_name = "identity";
    std::string output_path;          // empty: stdout
    Format format = Format::Json;
    Tolerance tol{};
    unsigned workers = 0;

    void validate() const {
        if (corpus_size < 1) throw ConfigError("--corpus must be at least 1");
        if (max_pairs < 1) throw ConfigError("--max-pairs must be at least 1");
        if (iterations < 1) throw ConfigError("--iterations must be at least 1");
        for (double e : epsilons)
            if (!(e > 0.0 && e < 0.5)) throw ConfigError("--eps values must lie in (0, 1/2)");
        tol.validate();
    }
};

/// "inf" (or "infinity") or a real >= 1.
inline Exponent parse_exponent(const std::string& text) {
    if (text == "inf" || text == "infinity" || text == "Inf") return Exponent::infinity();
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("not an exponent: '" + text + "'");
    }
    if (used != text.size()) throw ConfigError("not an exponent: '" + text + "'");
    if (!(v >= 1.0)) throw ConfigError("exponent must be >= 1 or inf: '" + text + "'");
    return Exponent(v);
}

/// Functions selectable by name in `table`, defined on iv.
inline const std::vector<std::string>& function_names() {
    static const std::vector<std::string> names{"identity", "square", "cubic", "cos", "sin",
                                                "exp",      "kink",   "ramp",  "constant"};
    return names;
}

inline FunctionSpec named_function(const std::string& name, const Interval& iv) {
    auto build = [&]() -> FunctionSpec {
        if (name == "identity") return make_polynomial({0.0, 1.0}, iv);
        if (name == "square") return make_polynomial({0.0, 0.0, 1.0}, iv);
        if (name == "cubic") return make_polynomial({0.0, 0.0, 0.0, 1.0}, iv);
        if (name == "cos") return make_cosine(1.0, 0.0, iv);
        if (name == "sin") return make_cosine(1.0, -std::numbers::pi / 2.0, iv);
        if (name == "exp") return make_exponential(1.0, 1.0, iv);
        if (name == "kink") return make_mollified_kink(0.5, 1.0, iv);
        if (name == "ramp") return make_clamped_ramp(0.5, 0.1, 1.0, iv);
        if (name == "constant") return make_constant(1.0, iv);
        throw ConfigError("unknown function name '" + name + "'");
    };
    FunctionSpec f = build();
    f.label = name;
    return f;
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

inline std::string real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void emit_json(std::ostream& os, const Json& j, int indent, int depth) {
    const std::string pad = indent < 0 ? "" : std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close = indent < 0 ? "" : std::string(static_cast<std::size_t>(indent * depth), ' ');
    const char* nl = indent < 0 ? "" : "\n";
    const char* sep = indent < 0 ? ":" : ": ";
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << '{' << nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ',' << nl;
                first = false;
                os << pad << Json(it.key()).dump() << sep;
                emit_json(os, it.value(), indent, depth + 1);
            }
            os << nl << close << '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            os << '[' << nl;
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ',' << nl;
                os << pad;
                emit_json(os, j[i], indent, depth + 1);
            }
            os << nl << close << ']';
            return;
        }
        case Json::value_t::number_float: {
            const double x = j.get<double>();
            if (std::isfinite(x)) os << real(x);
            else os << '"' << real(x) << '"';
            return;
        }
        default: os << j.dump(); return;
    }
}

inline std::string csv_cell(const Json& v) {
    std::string s;
    if (v.is_string()) s = v.get<std::string>();
    else if (v.is_number_float()) s = real(v.get<double>());
    else if (v.is_null()) s = "";
    else if (v.is_structured()) {
        std::ostringstream os;
        emit_json(os, v, -1, 0);
        s = os.str();
    } else s = v.dump();
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + '"';
}

}  // namespace detail

/// JSON document with the schema version, command name and records.
inline void write_json(std::ostream& os, Command command, const Json& records) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = to_string(command);
    doc["records"] = records;
    detail::emit_json(os, doc, 2, 0);
    os << '\n';
}

/// CSV with the keys of the first record as header; nested values are
/// written as compact JSON.
inline void write_csv(std::ostream& os, const Json& records) {
    if (records.empty()) return;
    bool first = true;
    for (auto it = records[0].begin(); it != records[0].end(); ++it) {
        if (!first) os << ',';
        first = false;
        os << detail::csv_cell(it.key());
    }
    os << '\n';
    for (const auto& rec : records) {
        first = true;
        for (auto it = records[0].begin(); it != records[0].end(); ++it) {
            if (!first) os << ',';
            first = false;
            os << (rec.contains(it.key()) ? detail::csv_cell(rec[it.key()]) : std::string());
        }
        os << '\n';
    }
}

inline Json error_record(const std::string& kind, const std::string& message) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["error"] = {{"kind", kind}, {"message", message}};
    return j;
}

inline void write_error(std::ostream& os, const std::string& kind, const std::string& message) {
    detail::emit_json(os, error_record(kind, message), -1, 0);
    os << '\n';
}

// ---------------------------------------------------------------------------
// Records

namespace detail {

inline Json exponent_json(const Exponent& e) {
    if (e.is_infinite()) return "inf";
    return e.value();
}

inline Json norms_json(const std::vector<NormFactor>& norms) {
    Json out = Json::array();
    for (const auto& n : norms) {
        Json j;
        j["role"] = n.role;
        j["p"] = n.exponent ? exponent_json(*n.exponent) : Json(nullptr);
        j["value"] = n.value;
        out.push_back(j);
    }
    return out;
}

inline std::vector<ConjugatePair> pairs_of(const std::vector<Exponent>& ps) {
    std::vector<ConjugatePair> out;
    for (const auto& p : ps) out.push_back(ConjugatePair::from_p(p));
    return out;
}

struct Report {
    Json records = Json::array();
    int violations = 0;
};

inline Report run_verify(const RunConfig& cfg) {
    const auto grid = cfg.exponents.empty() ? default_exponent_grid() : pairs_of(cfg.exponents);
    const auto fns = corpus(cfg.seed, cfg.corpus_size, cfg.interval);
    const auto pairs = corpus_pairs(cfg.seed, fns.size(), cfg.max_pairs);

    auto records = cheby::detail::parallel_map<VerificationRecord>(
        pairs.size(),
        [&](std::size_t k) { return verify(fns[pairs[k].first], fns[pairs[k].second], cfg.interval, grid, cfg.tol); },
        cfg.workers);

    Report rep;
    for (const auto& rec : records) {
        // one row per exponent; exponent-free bounds are repeated in each row
        std::vector<ConjugatePair> seen;
        for (const auto& ev : rec.evaluations)
            if (ev.pair && std::find(seen.begin(), seen.end(), *ev.pair) == seen.end()) seen.push_back(*ev.pair);
        for (const auto& pair : seen) {
            int applicable = 0, violations = 0;
            std::optional<double> min_slack;
            std::string tightest;
            for (const auto& ev : rec.evaluations) {
                if (ev.pair && !(*ev.pair == pair)) continue;
                if (!ev.applicable) continue;
                ++applicable;
                const double slack = ev.value - rec.t_abs;
                if (!min_slack || slack < *min_slack) {
                    min_slack = slack;
                    tightest = cheby::to_string(ev.id);
                }
                if (violates(ev, rec.t_abs)) ++violations;
            }
            Json j;
            j["f"] = rec.f_label;
            j["g"] = rec.g_label;
            j["p"] = exponent_json(pair.p());
            j["q"] = exponent_json(pair.q());
            j["t_identity"] = rec.t_identity;
            j["t_parts"] = rec.t_parts;
            j["t_abs"] = rec.t_abs;
            j["applicable"] = applicable;
            j["min_slack"] = min_slack ? Json(*min_slack) : Json(nullptr);
            j["tightest"] = tightest;
            j["violations"] = violations;
            j["pass"] = violations == 0;
            rep.records.push_back(j);
            rep.violations += violations;
        }
    }
    return rep;
}

inline Report run_table(const RunConfig& cfg) {
    const auto grid = cfg.exponents.empty() ? default_exponent_grid() : pairs_of(cfg.exponents);
    const auto f = named_function(cfg.f_name, cfg.interval);
    const auto g = named_function(cfg.g_name, cfg.interval);
    const auto rec = verify(f, g, cfg.interval, grid, cfg.tol);

    Report rep;
    for (std::size_t i = 0; i < rec.evaluations.size(); ++i) {
        const auto& ev = rec.evaluations[i];
        Json j;
        j["bound"] = cheby::to_string(ev.id);
        j["p"] = ev.pair ? exponent_json(ev.pair->p()) : Json(nullptr);
        j["q"] = ev.pair ? exponent_json(ev.pair->q()) : Json(nullptr);
        j["aux_p"] = ev.aux ? exponent_json(ev.aux->p()) : Json(nullptr);
        j["aux_q"] = ev.aux ? exponent_json(ev.aux->q()) : Json(nullptr);
        j["constant"] = ev.constant;
        j["norms"] = norms_json(ev.norms);
        j["value"] = ev.value;
        j["t_abs"] = rec.t_abs;
        j["slack"] = rec.slack(i);
        j["applicable"] = ev.applicable;
        j["rescaled"] = ev.rescaled;
        j["reason"] = ev.reason;
        rep.records.push_back(j);
        if (violates(ev, rec.t_abs)) ++rep.violations;
    }
    return rep;
}

inline Report run_example1(const RunConfig& cfg) {
    const std::vector<double> eps = cfg.epsilons.empty() ? std::vector<double>{0.25, 0.1, 0.05, 0.01} : cfg.epsilons;
    Report rep;
    for (RampKind kind : {RampKind::AffineExtension, RampKind::ClampedRamp}) {
        for (double e : eps) {
            const auto r = example1(e, kind, cfg.tol);
            Json j;
            j["variant"] = cheby::to_string(kind);
            j["epsilon"] = e;
            j["t_value"] = r.t_value;
            j["t_parts"] = r.t_parts;
            j["f1"] = r.norms.at("f'_1");
            j["finf"] = r.norms.at("f'_inf");
            j["g1"] = r.norms.at("g'_1");
            j["ginf"] = r.norms.at("g'_inf");
            j["ratio_inf_1"] = r.ratio_inf_1;
            j["ratio_1_inf"] = r.ratio_1_inf;
            rep.records.push_back(j);
            // Both ratios are bounded by 1/4 (BMV at the endpoint exponents).
            if (r.ratio_inf_1 > 0.25 + kSlackTolerance || r.ratio_1_inf > 0.25 + kSlackTolerance) ++rep.violations;
        }
    }
    return rep;
}

inline Report run_search(const RunConfig& cfg) {
    const std::vector<Exponent> ps = cfg.exponents.empty() ? std::vector<Exponent>{Exponent(2.0)} : cfg.exponents;
    SearchConfig sc;
    sc.seed = cfg.seed;
    sc.iterations = cfg.iterations;
    sc.tol = cfg.tol;
    sc.workers = cfg.workers;

    Report rep;
    for (const auto& p : ps) {
        const auto study = search_best_constant(ConjugatePair::from_p(p), sc);
        Json j;
        j["bound"] = cheby::to_string(study.bound_id);
        j["p"] = exponent_json(study.exponents.p());
        j["q"] = exponent_json(study.exponents.q());
        j["seed"] = cfg.seed;
        j["iterations"] = cfg.iterations;
        j["samples"] = study.samples.size();
        j["best_ratio"] = study.best_ratio;
        j["ceiling"] = study.ceiling;
        j["best_family"] = cheby::to_string(study.best_family);
        j["best_params"] = study.best_params;
        j["best_f"] = study.best_f;
        j["best_g"] = study.best_g;
        const bool within = study.best_ratio <= study.ceiling + 1e-6;
        j["within_ceiling"] = within;
        rep.records.push_back(j);
        if (!within) ++rep.violations;
    }
    return rep;
}

inline Report run_witnesses(const RunConfig& cfg) {
    Report rep;
    for (const auto& w : equality_witnesses(cfg.tol)) {
        Json j;
        j["bound"] = cheby::to_string(w.id);
        j["f"] = w.f.label;
        j["g"] = w.g.label;
        j["t_abs"] = w.t_abs;
        j["bound_value"] = w.bound_value;
        j["ratio"] = w.ratio;
        j["note"] = w.note;
        rep.records.push_back(j);
        if (w.ratio > 1.0 + kSlackTolerance) ++rep.violations;
    }
    return rep;
}

}  // namespace detail

/// Runs one command and writes its report. Returns kExitOk, kExitViolation
/// when some applicable inequality failed, or kExitError after writing an
/// error record (to the output and to `err`).
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    detail::Report rep;
    try {
        cfg.validate();
        switch (cfg.command) {
            case Command::Verify: rep = detail::run_verify(cfg); break;
            case Command::Table: rep = detail::run_table(cfg); break;
            case Command::Example1: rep = detail::run_example1(cfg); break;
            case Command::Search: rep = detail::run_search(cfg); break;
            case Command::Witnesses: rep = detail::run_witnesses(cfg); break;
        }
    } catch (const Error& e) {
        write_error(out, e.kind(), e.what());
        if (&err != &out) write_error(err, e.kind(), e.what());
        return kExitError;
    }

    if (cfg.format == Format::Json) write_json(out, cfg.command, rep.records);
    else write_csv(out, rep.records);
    return rep.violations == 0 ? kExitOk : kExitViolation;
}

/// As above, writing to cfg.output_path (stdout when empty).
inline int run(const RunConfig& cfg) {
    if (cfg.output_path.empty()) return run(cfg, std::cout, std::cerr);
    std::ostringstream buffer;
    const int status = run(cfg, buffer, std::cerr);
    std::ofstream file(cfg.output_path, std::ios::binary | std::ios::trunc);
    if (!file) {
        write_error(std::cerr, "ConfigError", "cannot open output file '" + cfg.output_path + "'");
        return kExitError;
    }
    file << buffer.str();
    file.close();
    if (!file) {
        write_error(std::cerr, "IOError", "failed writing '" + cfg.output_path + "'");
        return kExitError;
    }
    return status;
}

}  // namespace cheby::cli
