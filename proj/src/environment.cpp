#include "sigshift/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "sigshift/bump.hpp"
#include "sigshift/errors.hpp"

namespace sigshift {

EnvironmentModel::EnvironmentModel(std::size_t arms, Round horizon, MeanFunction means,
                                   NoiseModel noise, std::string label)
    : arms_(arms), horizon_(horizon), fn_(std::move(means)), noise_(noise), label_(std::move(label)) {
    if (arms_ < 1) throw std::invalid_argument("environment needs at least one arm");
    if (horizon_ < 1) throw std::invalid_argument("environment horizon must be >= 1");
    if (noise_.kind == NoiseKind::Gaussian && !(noise_.variance >= 0.0))
        throw std::invalid_argument("Gaussian noise variance must be >= 0");
}

EnvironmentModel EnvironmentModel::dense(std::size_t arms, Round horizon, std::vector<double> means,
                                         NoiseModel noise, std::string label) {
    if (means.size() != arms * static_cast<std::size_t>(horizon))
        throw std::invalid_argument("dense mean table has wrong size");
    auto table = std::make_shared<const std::vector<double>>(std::move(means));
    const auto fn = [table, arms, horizon](double t, Arm a) {
        const auto r = std::clamp<Round>(std::llround(t), 1, horizon);
        return (*table)[static_cast<std::size_t>(r - 1) * arms + a];
    };
    EnvironmentModel env(arms, horizon, fn, noise, std::move(label));
    env.dense_ = std::move(table);
    return env;
}

double EnvironmentModel::mean(Round t, Arm a) const {
    if (dense_) return (*dense_)[static_cast<std::size_t>(t - 1) * arms_ + a];
    return fn_(static_cast<double>(t), a);
}

double EnvironmentModel::mean_at(double t, Arm a) const { return fn_(t, a); }

void EnvironmentModel::means(Round t, std::span<double> out) const {
    for (Arm a = 0; a < arms_; ++a) out[a] = mean(t, a);
}

EnvironmentModel EnvironmentModel::materialize() const {
    if (dense_) return *this;
    std::vector<double> table(arms_ * static_cast<std::size_t>(horizon_));
    for (Round t = 1; t <= horizon_; ++t)
        for (Arm a = 0; a < arms_; ++a)
            table[static_cast<std::size_t>(t - 1) * arms_ + a] = fn_(static_cast<double>(t), a);
    return dense(arms_, horizon_, std::move(table), noise_, label_);
}

EnvironmentModel EnvironmentModel::with_noise(NoiseModel noise) const {
    EnvironmentModel copy = *this;
    copy.noise_ = noise;
    return copy;
}

namespace {

void check_index(const EnvironmentModel& env, Round t, Arm a) {
    if (t < 1 || t > env.horizon())
        throw std::out_of_range("round " + std::to_string(t) + " outside [1, " +
                                std::to_string(env.horizon()) + "]");
    if (a >= env.arms())
        throw std::out_of_range("arm index " + std::to_string(a) + " outside [0, " +
                                std::to_string(env.arms()) + ")");
}

}  // namespace

double gap_at(const EnvironmentModel& env, Round t, Arm a) {
    check_index(env, t, a);
    double best = env.mean(t, 0);
    for (Arm b = 1; b < env.arms(); ++b) best = std::max(best, env.mean(t, b));
    return best - env.mean(t, a);
}

double gap_at_time(const EnvironmentModel& env, double t, Arm a) {
    double best = env.mean_at(t, 0);
    for (Arm b = 1; b < env.arms(); ++b) best = std::max(best, env.mean_at(t, b));
    return best - env.mean_at(t, a);
}

double sample_reward(const EnvironmentModel& env, Round t, Arm a, Rng& rng) {
    const double mu = env.mean(t, a);
    const auto& noise = env.noise();
    switch (noise.kind) {
        case NoiseKind::Deterministic:
            return mu;
        case NoiseKind::Bernoulli: {
            if (!(mu >= 0.0 && mu <= 1.0))
                throw std::domain_error("Bernoulli reward needs a mean in [0,1]");
            std::bernoulli_distribution draw(mu);
            return draw(rng) ? 1.0 : 0.0;
        }
        case NoiseKind::Gaussian: {
            std::normal_distribution<double> draw(mu, std::sqrt(noise.variance));
            const double y = draw(rng);
            return noise.clip ? std::clamp(y, 0.0, 1.0) : y;
        }
    }
    return mu;
}

// ---- trig -----------------------------------------------------------------

double TrigParams::effective_amplitude() const {
    if (!reference_horizon) return amplitude;
    return amplitude * std::sqrt(*reference_horizon / static_cast<double>(horizon));
}

EnvironmentModel make_trig(const TrigParams& params, NoiseModel noise) {
    if (params.horizon < 1) throw ConfigError("trig: horizon must be >= 1");
    if (params.reference_horizon && !(*params.reference_horizon > 0.0))
        throw ConfigError("trig: reference horizon must be positive");
    const double amp = params.effective_amplitude();
    const double omega = 2.0 * std::numbers::pi * params.frequency / static_cast<double>(params.horizon);
    const double phase = params.phase;
    if (noise.kind == NoiseKind::Bernoulli) {
        // mu_2 ranges over [A - |A|, A + |A|].
        if (amp - std::abs(amp) < 0.0 || amp + std::abs(amp) > 1.0 || amp > 1.0)
            throw GeneratorError("trig: means leave [0,1] under Bernoulli noise (A=" +
                                 std::to_string(amp) + ")");
    }
    auto fn = [amp, omega, phase](double t, Arm a) {
        if (a == 0) return amp;
        return amp - amp * std::sin(omega * t + phase);
    };
    std::ostringstream label;
    label.precision(17);
    label << "trig(A=" << amp << ",nu=" << params.frequency << ",phi=" << phase
          << ",T=" << params.horizon << ")";
    return EnvironmentModel(2, params.horizon, fn, noise, label.str());
}

// ---- bump -----------------------------------------------------------------

BumpGeometry bump_geometry(const BumpParams& p) {
    if (!(p.beta > 0.0) || !(p.lambda > 0.0)) throw ConfigError("bump: beta and lambda must be > 0");
    if (p.arms < 2) throw ConfigError("bump: need K >= 2");
    if (p.horizon < 1) throw ConfigError("bump: horizon must be >= 1");

    const double T = static_cast<double>(p.horizon);
    const double K = static_cast<double>(p.arms);
    const double e = 2.0 * p.beta + 1.0;

    BumpGeometry g;
    g.lambda_tilde = std::min(std::pow(2.0, -e) * std::pow(T / K, p.beta), p.lambda);
    const double raw = std::pow(T, 1.0 / e) * std::pow(K, -1.0 / e) * std::pow(g.lambda_tilde, 2.0 / e);
    g.segments = static_cast<std::int64_t>(std::ceil(raw));
    if (g.segments < 1) g.segments = 1;
    if (g.segments > p.horizon)
        throw GeneratorError("bump: M=" + std::to_string(g.segments) + " exceeds T=" +
                             std::to_string(p.horizon));
    const auto quarter = static_cast<std::int64_t>(std::ceil(T / 4.0));
    if (g.segments > quarter)
        throw GeneratorError("bump: M=" + std::to_string(g.segments) + " exceeds ceil(T/4)=" +
                             std::to_string(quarter) + "; parameters are in the trivial regime");
    g.bandwidth = 1.0 / static_cast<double>(g.segments);
    g.effective_horizon = g.segments * (p.horizon / g.segments);

    if (p.width == BumpWidth::Disjoint) {
        const double holder = std::pow(2.0, p.beta) * bump::kernel_holder_constant(p.beta);
        g.kernel_scale = holder > 1.0 ? 1.0 / holder : 1.0;
        g.middle_constant = g.kernel_scale * bump::kernel(0.5);
    } else {
        g.kernel_scale = 1.0;
        g.middle_constant = bump::kernel(0.25);
    }
    g.amplitude = g.lambda_tilde * std::pow(g.bandwidth, p.beta) / 2.0 * g.kernel_scale;
    if (g.amplitude > 0.5) throw GeneratorError("bump: amplitude exceeds 1/2");
    return g;
}

BumpInstance make_bump_instance(const BumpParams& p, NoiseModel noise) {
    const BumpGeometry g = bump_geometry(p);
    const auto M = static_cast<std::size_t>(g.segments);

    std::vector<Arm> assignment = p.assignment;
    if (assignment.empty()) {
        assignment.resize(M);
        if (p.assignment_mode == AssignmentMode::RoundRobin) {
            for (std::size_t i = 0; i < M; ++i) assignment[i] = i % p.arms;
        } else {
            Rng rng(p.seed);
            std::uniform_int_distribution<Arm> pick(0, p.arms - 1);
            for (auto& a : assignment) a = pick(rng);
        }
    }
    if (assignment.size() != M)
        throw ConfigError("bump: assignment length " + std::to_string(assignment.size()) +
                          " differs from M=" + std::to_string(M));
    for (Arm a : assignment)
        if (a >= p.arms) throw ConfigError("bump: assignment names an arm outside [1,K]");

    auto shared = std::make_shared<const std::vector<Arm>>(assignment);
    const double T0 = static_cast<double>(g.effective_horizon);
    const double h = g.bandwidth;
    const double amp = g.amplitude;
    const bool disjoint = p.width == BumpWidth::Disjoint;
    auto fn = [shared, T0, h, amp, disjoint, M](double t, Arm a) {
        const double x = t / T0;
        auto seg = static_cast<std::int64_t>(std::floor(x / h));
        seg = std::clamp<std::int64_t>(seg, 0, static_cast<std::int64_t>(M) - 1);
        const double center = (static_cast<double>(seg) + 0.5) * h;
        double phi = 0.0;
        if (disjoint) {
            phi = amp * bump::kernel((x - center) / (h / 2.0));
        } else if (x >= seg * h && x <= (seg + 1) * h) {
            phi = amp * bump::kernel((x - center) / h);
        }
        return (*shared)[static_cast<std::size_t>(seg)] == a ? 0.5 + phi : 0.5 - phi;
    };
    std::ostringstream label;
    label << "bump(beta=" << p.beta << ",lambda=" << p.lambda << ",K=" << p.arms
          << ",T0=" << g.effective_horizon << ",M=" << g.segments << ")";
    EnvironmentModel env(p.arms, g.effective_horizon, fn, noise, label.str());
    return BumpInstance{std::move(env), g, std::move(assignment)};
}

// ---- piecewise ------------------------------------------------------------

Round PiecewiseSpec::horizon() const {
    Round total = 0;
    for (const auto& s : segments) total += s.length;
    return total;
}

std::size_t PiecewiseSpec::arms() const { return segments.empty() ? 0 : segments.front().gaps.size(); }

EnvironmentModel make_piecewise(const PiecewiseSpec& spec, NoiseModel noise) {
    if (spec.segments.empty()) throw ConfigError("piecewise: no segments");
    const std::size_t K = spec.arms();
    if (K < 1) throw ConfigError("piecewise: segments need at least one arm");
    if (spec.baseline > 1.0) throw GeneratorError("piecewise: baseline above 1");
    for (std::size_t i = 0; i < spec.segments.size(); ++i) {
        const auto& s = spec.segments[i];
        const std::string where = "piecewise segment " + std::to_string(i + 1) + ": ";
        if (s.length < 1) throw ConfigError(where + "length must be >= 1");
        if (s.gaps.size() != K) throw ConfigError(where + "gap count differs from K");
        double lo = s.gaps.front();
        double hi = s.gaps.front();
        for (double d : s.gaps) {
            if (!(d >= 0.0)) throw ConfigError(where + "gaps must be >= 0");
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        if (lo != 0.0) throw ConfigError(where + "needs an arm with gap 0");
        if (spec.baseline - hi < 0.0) throw GeneratorError(where + "means fall below 0");
    }
    const Round T = spec.horizon();
    std::vector<double> table;
    table.reserve(K * static_cast<std::size_t>(T));
    for (const auto& s : spec.segments)
        for (Round r = 0; r < s.length; ++r)
            for (double d : s.gaps) table.push_back(spec.baseline - d);
    return EnvironmentModel::dense(K, T, std::move(table), noise,
                                   "piecewise(L=" + std::to_string(spec.segments.size()) + ")");
}

// ---- gap table ------------------------------------------------------------

GapTable::GapTable(const EnvironmentModel& env)
    : arms_(env.arms()), horizon_(env.horizon()), stride_(static_cast<std::size_t>(env.horizon()) + 1) {
    gaps_.assign(arms_ * stride_, 0.0);
    prefix_.assign(arms_ * stride_, 0.0);
    std::vector<double> mu(arms_);
    for (Round t = 1; t <= horizon_; ++t) {
        env.means(t, mu);
        const double best = *std::max_element(mu.begin(), mu.end());
        for (Arm a = 0; a < arms_; ++a) {
            const std::size_t i = a * stride_ + static_cast<std::size_t>(t);
            gaps_[i] = best - mu[a];
            prefix_[i] = prefix_[i - 1] + gaps_[i];
        }
    }
}

}  // namespace sigshift
