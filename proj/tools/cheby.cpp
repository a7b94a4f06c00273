// cheby: verification sweeps, bound tables, the ramp counterexample, the
// best-constant search and the equality witnesses, as JSON or CSV reports.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cheby/cli.hpp"

namespace {

using cheby::cli::Command;
using cheby::cli::RunConfig;

struct Flags {
    std::vector<double> interval{0.0, 1.0};
    std::vector<std::string> p;
    std::vector<std::string> pair;
    std::string format = "json";
};

void add_common(CLI::App* sub, RunConfig& cfg, Flags& fl) {
    sub->add_option("--interval", fl.interval, "integration interval A B")->expected(2);
    sub->add_option("--out", cfg.output_path, "report file (default: stdout)");
    sub->add_option("--format", fl.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--workers", cfg.workers, "worker threads (0: hardware concurrency)");
}

void apply_env(RunConfig& cfg) {
    const char* env = std::getenv("CHEBY_MAX_SUBDIV");
    if (!env || !*env) return;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 100000000)
        throw cheby::cli::ConfigError(std::string("CHEBY_MAX_SUBDIV must be a positive integer, got '") + env + "'");
    cfg.tol.max_subdivisions = static_cast<int>(v);
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    Flags fl;

    CLI::App app{"Cebysev functional: bounds, verification and sharpness studies"};
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify", "check every bound on sampled corpus pairs");
    add_common(verify, cfg, fl);
    verify->add_option("--seed", cfg.seed, "corpus seed");
    verify->add_option("--corpus", cfg.corpus_size, "corpus size");
    verify->add_option("--max-pairs", cfg.max_pairs, "number of sampled ordered pairs");
    verify->add_option("--p", fl.p, "exponents (reals >= 1 or inf)");

    auto* table = app.add_subcommand("table", "all bounds for one named pair");
    add_common(table, cfg, fl);
    table->add_option("--pair", fl.pair, "function names f g")->expected(2);
    table->add_option("--p", fl.p, "exponents (reals >= 1 or inf)");

    auto* ex1 = app.add_subcommand("example1", "ramp counterexample over an eps grid");
    add_common(ex1, cfg, fl);
    ex1->add_option("--eps", cfg.epsilons, "ramp half-widths in (0, 1/2)");

    auto* search = app.add_subcommand("search", "lower bounds on the best constant C(p,q)");
    add_common(search, cfg, fl);
    search->add_option("--seed", cfg.seed, "search seed");
    search->add_option("--iterations", cfg.iterations, "random samples before refinement");
    search->add_option("--p", fl.p, "exponents (reals >= 1 or inf)");

    auto* wit = app.add_subcommand("witnesses", "ratios of the known extremal pairs");
    add_common(wit, cfg, fl);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        cheby::cli::write_error(std::cerr, "ConfigError", e.what());
        return cheby::cli::kExitError;
    }

    try {
        if (verify->parsed()) cfg.command = Command::Verify;
        else if (table->parsed()) cfg.command = Command::Table;
        else if (ex1->parsed()) cfg.command = Command::Example1;
        else if (search->parsed()) cfg.command = Command::Search;
        else cfg.command = Command::Witnesses;

        cfg.interval = cheby::Interval(fl.interval[0], fl.interval[1]);
        cfg.format = fl.format == "csv" ? cheby::cli::Format::Csv : cheby::cli::Format::Json;
        for (const auto& s : fl.p) cfg.exponents.push_back(cheby::cli::parse_exponent(s));
        if (!fl.pair.empty()) {
            cfg.f_name = fl.pair[0];
            cfg.g_name = fl.pair[1];
        }
        apply_env(cfg);
    } catch (const cheby::Error& e) {
        const std::string kind = dynamic_cast<const cheby::DomainError*>(&e) ? "ConfigError" : e.kind();
        cheby::cli::write_error(std::cerr, kind, e.what());
        return cheby::cli::kExitError;
    }

    return cheby::cli::run(cfg);
}
