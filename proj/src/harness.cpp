#include "sigshift/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <thread>

#include "sigshift/errors.hpp"
#include "sigshift/format.hpp"
#include "sigshift/rng.hpp"

namespace sigshift {

std::vector<double> dynamic_regret(const PolicyTrace& trace, const EnvironmentModel& env) {
    if (trace.length() != env.horizon())
        throw std::invalid_argument("trace has " + std::to_string(trace.length()) + " rounds, environment " +
                                    std::to_string(env.horizon()));
    std::vector<double> curve(trace.pulls.size());
    double total = 0.0;
    for (Round t = 1; t <= env.horizon(); ++t) {
        total += gap_at(env, t, trace.pulls[static_cast<std::size_t>(t - 1)]);
        curve[static_cast<std::size_t>(t - 1)] = total;
    }
    return curve;
}

std::vector<double> dynamic_regret(const PolicyTrace& trace, const EnvironmentModel& env,
                                   const std::vector<Round>& checkpoints) {
    validate_checkpoints(checkpoints, env.horizon());
    if (trace.length() != env.horizon())
        throw std::invalid_argument("trace has " + std::to_string(trace.length()) + " rounds, environment " +
                                    std::to_string(env.horizon()));
    std::vector<double> out;
    out.reserve(checkpoints.size());
    double total = 0.0;
    std::size_t next = 0;
    for (Round t = 1; t <= env.horizon(); ++t) {
        total += gap_at(env, t, trace.pulls[static_cast<std::size_t>(t - 1)]);
        if (t == checkpoints[next]) {
            out.push_back(total);
            ++next;
        }
    }
    return out;
}

std::vector<Round> default_checkpoints(Round horizon, std::size_t count) {
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
    std::vector<Round> out;
    const double top = std::log(static_cast<double>(horizon));
    for (std::size_t i = 0; i < count; ++i) {
        const double frac = count > 1 ? static_cast<double>(i) / static_cast<double>(count - 1) : 1.0;
        const auto t = std::clamp<Round>(std::llround(std::exp(frac * top)), 1, horizon);
        if (out.empty() || t > out.back()) out.push_back(t);
    }
    if (out.empty() || out.back() != horizon) out.push_back(horizon);
    return out;
}

void validate_checkpoints(const std::vector<Round>& checkpoints, Round horizon) {
    if (checkpoints.empty()) throw ConfigError("checkpoint list is empty");
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] < 1 || checkpoints[i] > horizon)
            throw ConfigError("checkpoint " + std::to_string(checkpoints[i]) + " outside [1, T]");
        if (i > 0 && checkpoints[i] <= checkpoints[i - 1])
            throw ConfigError("checkpoints must be strictly increasing");
    }
    if (checkpoints.back() != horizon) throw ConfigError("last checkpoint must equal T");
}

RegretAggregate aggregate(const std::vector<std::vector<double>>& curves, const std::vector<Round>& checkpoints) {
    if (curves.empty()) throw std::invalid_argument("aggregate: no replications");
    RegretAggregate agg;
    agg.checkpoints = checkpoints;
    agg.replications = curves.size();
    const std::size_t n = checkpoints.size();
    agg.mean.assign(n, 0.0);
    agg.std.assign(n, 0.0);
    const double R = static_cast<double>(curves.size());
    for (const auto& c : curves) {
        if (c.size() != n) throw std::invalid_argument("aggregate: curve length mismatch");
        for (std::size_t i = 0; i < n; ++i) agg.mean[i] += c[i];
    }
    for (auto& m : agg.mean) m /= R;
    if (curves.size() > 1) {
        for (const auto& c : curves)
            for (std::size_t i = 0; i < n; ++i) agg.std[i] += (c[i] - agg.mean[i]) * (c[i] - agg.mean[i]);
        for (auto& s : agg.std) s = std::sqrt(s / (R - 1.0));
    }
    return agg;
}

namespace {

struct Replication {
    std::vector<double> curve;
    std::vector<PolicyEvent> events;
};

[[noreturn]] void rethrow_with_index(std::exception_ptr error, std::size_t r) {
    const std::string prefix = "replication " + std::to_string(r) + ": ";
    try {
        std::rethrow_exception(error);
    } catch (const GeneratorError& e) {
        throw GeneratorError(prefix + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(prefix + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error(prefix + e.what());
    }
}

}  // namespace

RunResult run_many(const EnvironmentModel& env, const RunSettings& settings) {
    if (settings.replications < 1) throw ConfigError("replications must be >= 1");
    const auto checkpoints =
        settings.checkpoints.empty() ? default_checkpoints(env.horizon()) : settings.checkpoints;
    validate_checkpoints(checkpoints, env.horizon());
    const PolicyRunner runner = prepare_policy(settings.policy, env);

    const std::size_t R = settings.replications;
    std::vector<std::optional<Replication>> results(R);
    std::vector<std::exception_ptr> errors(R);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t r = next++; r < R; r = next++) {
            try {
                PolicyTrace trace = runner(replication_seed(settings.master_seed, r));
                Replication rep{dynamic_regret(trace, env, checkpoints), {}};
                if (settings.keep_events) rep.events = std::move(trace.events);
                results[r] = std::move(rep);
            } catch (...) {
                errors[r] = std::current_exception();
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(settings.workers, static_cast<unsigned>(R)));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
    }
    for (std::size_t r = 0; r < R; ++r)
        if (errors[r]) rethrow_with_index(errors[r], r);

    RunResult out;
    std::vector<std::vector<double>> curves;
    curves.reserve(R);
    for (auto& rep : results) {
        out.final_regret.push_back(rep->curve.back());
        curves.push_back(std::move(rep->curve));
        if (settings.keep_events) out.events.push_back(std::move(rep->events));
    }
    out.aggregate = aggregate(curves, checkpoints);
    return out;
}

ReferenceCurves reference_curves(std::size_t arms, std::size_t shift_count,
                                 const std::vector<std::pair<double, double>>& beta_lambda,
                                 const std::vector<Round>& checkpoints) {
    ReferenceCurves out;
    out.checkpoints = checkpoints;
    const double K = static_cast<double>(arms);
    out.names.push_back("parametric");
    std::vector<double> parametric;
    for (Round t : checkpoints)
        parametric.push_back(std::sqrt(static_cast<double>(shift_count + 1) * K * static_cast<double>(t)));
    out.values.push_back(std::move(parametric));
    for (auto [beta, lambda] : beta_lambda) {
        out.names.push_back("minimax_beta=" + format_double(beta) + "_lambda=" + format_double(lambda));
        std::vector<double> curve;
        for (Round t : checkpoints)
            curve.push_back(t <= 0 ? 0.0 : minimax_rate({beta, lambda, arms, static_cast<double>(t)}));
        out.values.push_back(std::move(curve));
    }
    return out;
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

}  // namespace

void export_csv(const RegretAggregate& agg, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    out << "checkpoint,mean,std\n";
    for (std::size_t i = 0; i < agg.checkpoints.size(); ++i)
        out << agg.checkpoints[i] << ',' << format_double(agg.mean[i]) << ',' << format_double(agg.std[i]) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

RegretAggregate load_aggregate_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::string line;
    long lineno = 1;
    if (!std::getline(in, line) || line != "checkpoint,mean,std")
        throw ParseError("expected header `checkpoint,mean,std`", lineno);
    RegretAggregate agg;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string::npos) throw ParseError("expected 3 cells", lineno);
        Round t = 0;
        double m = 0.0, s = 0.0;
        const std::string_view view(line);
        if (!parse_number(view.substr(0, c1), t) || !parse_number(view.substr(c1 + 1, c2 - c1 - 1), m) ||
            !parse_number(view.substr(c2 + 1), s))
            throw ParseError("malformed number", lineno);
        agg.checkpoints.push_back(t);
        agg.mean.push_back(m);
        agg.std.push_back(s);
    }
    return agg;
}

void export_csv(const ReferenceCurves& curves, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    out << "checkpoint";
    for (const auto& name : curves.names) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < curves.checkpoints.size(); ++i) {
        out << curves.checkpoints[i];
        for (const auto& col : curves.values) out << ',' << format_double(col[i]);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace sigshift
