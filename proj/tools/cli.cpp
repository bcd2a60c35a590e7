#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>

#include "sigshift/config.hpp"
#include "sigshift/errors.hpp"
#include "sigshift/eviction.hpp"
#include "sigshift/format.hpp"
#include "sigshift/harness.hpp"
#include "sigshift/holder.hpp"
#include "sigshift/phase_transition.hpp"
#include "sigshift/rates.hpp"
#include "sigshift/serialize.hpp"
#include "sigshift/shifts.hpp"

namespace sigshift::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config;
    std::string env;
    std::string mode = "dyadic";
    std::string out;
    std::uint64_t seed = 0;
    bool seed_given = false;
    unsigned workers = 0;
    bool events = false;
    double beta = 1.0;
    double lambda = 1.0;
    double tol = 1.0;
    double c2 = 1.0;
    std::size_t arms = 2;
    double horizon = 0.0;
    std::size_t pairs = 10000;
    std::size_t grid = 10000;
};

ScanMode parse_mode(const std::string& mode) { return mode == "exact" ? ScanMode::Exact : ScanMode::Dyadic; }

unsigned resolve_workers(unsigned flag) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("SIGSHIFT_WORKERS"); env && *env) {
        unsigned n = 0;
        if (!parse_number(std::string_view(env), n) || n == 0)
            throw ConfigError(std::string("SIGSHIFT_WORKERS must be a positive integer, got '") + env + "'");
        return n;
    }
    return 1;
}

// Results go to --out when given, stdout otherwise.
void emit(const Json& doc, const Options& o, std::ostream& out) {
    if (o.out.empty()) {
        out << dump(doc);
    } else {
        write_json(doc, o.out);
    }
}

void echo(const char* command, Json resolved, std::ostream& err) {
    resolved["command"] = command;
    err << "config: " << resolved.dump() << '\n';
}

EnvironmentModel load_env(const Options& o, Json& resolved) {
    resolved = resolve_environment_document(load_json_file(o.env));
    return build_environment(resolved);
}

void cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
    auto cfg = parse_experiment(load_json_file(o.config));
    if (o.seed_given) cfg.settings.master_seed = o.seed;
    if (o.events) cfg.settings.keep_events = true;
    cfg.settings.workers = resolve_workers(o.workers);
    const Json echoed = to_json(cfg);
    echo("simulate", Json{{"config", echoed}, {"out", o.out}, {"workers", cfg.settings.workers}}, err);

    const auto env = build_environment(cfg.env);
    const fs::path dir = o.out.empty() ? fs::path("run") : fs::path(o.out);
    fs::create_directories(dir);
    write_json(echoed, dir / "config.echo.json");
    const auto result = run_many(env, cfg.settings);
    export_csv(result.aggregate, dir / "aggregate.csv");
    if (cfg.settings.keep_events) write_events_jsonl(result.events, dir / "events.jsonl");
    out << dump(Json{{"run_dir", dir.string()},
                     {"R", result.aggregate.replications},
                     {"final_mean", result.aggregate.mean.back()},
                     {"final_std", result.aggregate.std.back()}});
}

void cmd_shifts(const Options& o, std::ostream& out, std::ostream& err) {
    Json resolved;
    const auto env = load_env(o, resolved);
    echo("shifts", Json{{"env", resolved}, {"mode", o.mode}}, err);
    emit(to_json(significant_shifts(env, parse_mode(o.mode))), o, out);
}

void cmd_rates(const Options& o, std::ostream& out, std::ostream& err) {
    Json doc;
    std::optional<EnvironmentModel> env;
    Json resolved;
    if (!o.env.empty()) env = load_env(o, resolved);
    RateParams p{o.beta, o.lambda, env ? env->arms() : o.arms,
                 env ? static_cast<double>(env->horizon()) : o.horizon};
    p.validate();
    echo("rates", Json{{"beta", p.beta}, {"lambda", p.lambda}, {"K", p.arms}, {"T", p.horizon},
                       {"env", resolved}, {"mode", o.mode}},
         err);
    doc["minimax_rate"] = minimax_rate(p);
    doc["smooth_term"] = smooth_rate_term(p);
    doc["sqrt_KT"] = std::sqrt(static_cast<double>(p.arms) * p.horizon);
    if (env) {
        const auto profile = significant_shifts(*env, parse_mode(o.mode));
        doc["shift_count"] = profile.shift_count();
        doc["phase_rate"] = phase_rate(profile);
        doc["upper_bound_ratio"] = upper_bound_ratio(profile, p);
    }
    emit(doc, o, out);
}

void cmd_gen_env(const Options& o, std::ostream& out, std::ostream& err) {
    const Json resolved = resolve_environment_document(load_json_file(o.config));
    echo("gen-env", Json{{"env", resolved}, {"out", o.out}}, err);
    const auto env = build_environment(resolved);
    export_csv(env, o.out);
    out << dump(Json{{"path", o.out}, {"K", env.arms()}, {"T", env.horizon()}});
}

void cmd_verify_holder(const Options& o, std::ostream& out, std::ostream& err) {
    Json resolved;
    const auto env = load_env(o, resolved);
    if (!(o.beta > 0.0) || !(o.lambda > 0.0) || !(o.tol >= 0.0))
        throw ConfigError("verify-holder: need beta > 0, lambda > 0, tol >= 0");
    echo("verify-holder", Json{{"env", resolved}, {"beta", o.beta}, {"lambda", o.lambda}, {"tol", o.tol},
                               {"pairs", o.pairs}, {"grid", o.grid}, {"seed", o.seed}},
         err);
    emit(to_json(verify_holder(env, o.beta, o.lambda, o.pairs, o.tol, o.grid, o.seed)), o, out);
}

void cmd_classify(const Options& o, std::ostream& out, std::ostream& err) {
    Json resolved;
    const auto env = load_env(o, resolved);
    if (!(o.beta > 0.0)) throw ConfigError("classify: beta must be > 0");
    echo("classify", Json{{"env", resolved}, {"beta", o.beta}, {"grid", o.grid}}, err);
    emit(to_json(phase_transition_classify(env, o.beta, o.grid)), o, out);
}

void cmd_evict(const Options& o, std::ostream& out, std::ostream& err) {
    Json resolved;
    const auto env = load_env(o, resolved);
    if (!(o.c2 > 0.0)) throw ConfigError("evict: C2 must be > 0");
    echo("evict", Json{{"env", resolved}, {"C2", o.c2}, {"mode", o.mode}}, err);
    emit(to_json(eviction_times(GapTable(env), o.c2, parse_mode(o.mode))), o, out);
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"sigshift: smooth non-stationary bandit simulation and analysis"};
    app.require_subcommand(1);
    Options o;
    std::function<void(const Options&, std::ostream&, std::ostream&)> action;
    const std::vector<std::string> modes{"exact", "dyadic"};

    auto add_env = [&](CLI::App* sub) {
        sub->add_option("--env", o.env, "environment config (JSON)")->required()->check(CLI::ExistingFile);
    };
    auto add_mode = [&](CLI::App* sub) {
        sub->add_option("--mode", o.mode, "interval scan: exact or dyadic")->check(CLI::IsMember(modes));
    };
    auto add_out = [&](CLI::App* sub, const char* what) { return sub->add_option("--out", o.out, what); };

    auto* sim = app.add_subcommand("simulate", "replicated policy runs; writes a run directory");
    sim->add_option("--config", o.config, "run config (JSON)")->required()->check(CLI::ExistingFile);
    add_out(sim, "run directory (default ./run)");
    sim->add_option("--seed", o.seed, "override masterSeed")->each([&](const std::string&) { o.seed_given = true; });
    sim->add_option("--workers", o.workers, "worker threads (default $SIGSHIFT_WORKERS or 1)")
        ->check(CLI::PositiveNumber);
    sim->add_flag("--events", o.events, "also write events.jsonl");
    sim->callback([&] { action = cmd_simulate; });

    auto* shifts = app.add_subcommand("shifts", "significant shifts of an environment");
    add_env(shifts);
    add_mode(shifts);
    add_out(shifts, "write the profile JSON here instead of stdout");
    shifts->callback([&] { action = cmd_shifts; });

    auto* rates = app.add_subcommand("rates", "minimax rate; with --env also the phase rate and its ratio");
    rates->add_option("--beta", o.beta, "Holder exponent")->required();
    rates->add_option("--lambda", o.lambda, "Holder coefficient")->required();
    rates->add_option("--K", o.arms, "arms");
    rates->add_option("--T", o.horizon, "horizon");
    rates->add_option("--env", o.env, "environment config (JSON)")->check(CLI::ExistingFile);
    add_mode(rates);
    add_out(rates, "write JSON here instead of stdout");
    rates->callback([&] { action = cmd_rates; });

    auto* gen = app.add_subcommand("gen-env", "materialize an environment to t,arm,mean CSV");
    gen->add_option("--config", o.config, "environment config (JSON)")->required()->check(CLI::ExistingFile);
    add_out(gen, "CSV path")->required();
    gen->callback([&] { action = cmd_gen_env; });

    auto* holder = app.add_subcommand("verify-holder", "finite-difference Holder check of the gap functions");
    add_env(holder);
    holder->add_option("--beta", o.beta, "Holder exponent")->required();
    holder->add_option("--lambda", o.lambda, "Holder coefficient")->required();
    holder->add_option("--tol", o.tol, "multiplicative slack (1 = factor 2)");
    holder->add_option("--pairs", o.pairs, "random pairs");
    holder->add_option("--grid", o.grid, "grid size");
    holder->add_option("--seed", o.seed, "pair sampling seed");
    add_out(holder, "write JSON here instead of stdout");
    holder->callback([&] { action = cmd_verify_holder; });

    auto* classify = app.add_subcommand("classify", "phase-transition safety certificate");
    add_env(classify);
    classify->add_option("--beta", o.beta, "Holder exponent")->required();
    classify->add_option("--grid", o.grid, "grid size");
    add_out(classify, "write JSON here instead of stdout");
    classify->callback([&] { action = cmd_classify; });

    auto* evict = app.add_subcommand("evict", "eviction times and safe armsets");
    add_env(evict);
    evict->add_option("--C2", o.c2, "threshold constant");
    add_mode(evict);
    add_out(evict, "write JSON here instead of stdout");
    evict->callback([&] { action = cmd_evict; });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        err << app.help();
        return 2;
    }

    try {
        action(o, out, err);
        return 0;
    } catch (const GeneratorError& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace sigshift::cli
