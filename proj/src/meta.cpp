#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sigshift/policies.hpp"
#include "sigshift/rng.hpp"

namespace sigshift {

std::vector<std::int64_t> replay_lengths(Round horizon) {
    std::vector<std::int64_t> out;
    const auto top = static_cast<int>(std::ceil(std::log2(static_cast<double>(std::max<Round>(horizon, 2)))));
    for (int i = 1; i <= top; ++i) out.push_back(std::int64_t{1} << i);
    return out;
}

bool replay_fires(std::uint64_t seed, Round tau_hat, Round s, std::int64_t m) {
    const double p = std::min(1.0, 1.0 / std::sqrt(static_cast<double>(m) * static_cast<double>(s - tau_hat)));
    return keyed_uniform(seed, static_cast<std::uint64_t>(tau_hat), static_cast<std::uint64_t>(s),
                         static_cast<std::uint64_t>(m)) < p;
}

namespace {

struct Base {
    Round tstart;
    Round m0;
    std::vector<char> active;
    std::size_t count;
};

class MetaRun {
public:
    MetaRun(const EnvironmentModel& env, const MetaConfig& cfg)
        : env_(env), cfg_(cfg), K_(env.arms()), T_(env.horizon()), stride_(static_cast<std::size_t>(T_) + 1),
          rng_(cfg.seed), lengths_(replay_lengths(T_)), prefix_(K_ * stride_, 0.0), global_(K_, 1),
          sums_(K_) {}

    PolicyTrace run() {
        trace_.reserve(T_);
        if (K_ == 1) {
            for (Round t = 1; t <= T_; ++t) trace_.record(0, sample_reward(env_, t, 0, rng_));
            return std::move(trace_);
        }
        Round t = 1;
        while (t <= T_) {
            tau_ = t;
            if (tau_ > 1) trace_.events.push_back({t, EventKind::EpisodeRestart});
            std::fill(global_.begin(), global_.end(), 1);
            global_count_ = K_;
            std::vector<Base> stack;
            stack.push_back(fresh_base(tau_, T_ + 1 - tau_));

            bool restart = false;
            while (!stack.empty() && !restart) {
                play(stack.back(), t);
                ++t;
                if (t <= T_) {
                    if (auto m = max_firing(t); m > 0) {
                        trace_.events.push_back({t, EventKind::ReplayStart, m});
                        stack.push_back(fresh_base(t, m));
                        continue;
                    }
                }
                // Evict, then return from every base whose schedule has elapsed; a resumed
                // parent evicts from its own saved set before playing again.
                while (!stack.empty()) {
                    Base& b = stack.back();
                    evict(b, t);
                    if (global_count_ == 0 || b.count == 0) {
                        restart = true;
                        break;
                    }
                    if (t > b.tstart + b.m0 || t > T_) {
                        stack.pop_back();
                        continue;
                    }
                    break;
                }
            }
        }
        return std::move(trace_);
    }

private:
    Base fresh_base(Round tstart, Round m0) const { return {tstart, m0, std::vector<char>(K_, 1), K_}; }

    double& prefix(Arm a, Round s) { return prefix_[a * stride_ + static_cast<std::size_t>(s)]; }

    void play(const Base& b, Round t) {
        std::uniform_int_distribution<std::size_t> pick(0, b.count - 1);
        std::size_t k = pick(rng_);
        Arm arm = 0;
        for (Arm a = 0; a < K_; ++a) {
            if (!b.active[a]) continue;
            if (k-- == 0) {
                arm = a;
                break;
            }
        }
        const double y = sample_reward(env_, t, arm, rng_);
        trace_.record(arm, y);
        const double weighted = static_cast<double>(b.count) * y;
        for (Arm a = 0; a < K_; ++a) prefix(a, t) = prefix(a, t - 1) + (a == arm ? weighted : 0.0);
    }

    std::int64_t max_firing(Round s) const {
        for (auto it = lengths_.rbegin(); it != lengths_.rend(); ++it)
            if (replay_fires(cfg_.seed, tau_, s, *it)) return *it;
        return 0;
    }

    // Windows [t0, t-1]: the last observed round closes every window. Local windows start
    // at or after the base's start, global ones at or after the episode start.
    void evict(Base& b, Round t) {
        const Round e = t - 1;
        std::vector<char> hit_local(K_, 0), hit_global(K_, 0);
        auto check = [&](Round t0) {
            const Round n = e - t0 + 1;
            const double threshold = meta_threshold(n, cfg_.c2, K_, T_);
            for (Arm a = 0; a < K_; ++a) sums_[a] = prefix(a, e) - prefix(a, t0 - 1);
            Arm first = 0;
            for (Arm a = 1; a < K_; ++a)
                if (sums_[a] > sums_[first]) first = a;
            double second = -std::numeric_limits<double>::infinity();
            for (Arm a = 0; a < K_; ++a)
                if (a != first) second = std::max(second, sums_[a]);
            for (Arm a = 0; a < K_; ++a) {
                if (!b.active[a] && !global_[a]) continue;
                const double best = (a == first ? second : sums_[first]) - sums_[a];
                if (best > threshold) {
                    hit_global[a] = 1;
                    if (t0 >= b.tstart) hit_local[a] = 1;
                }
            }
        };
        if (cfg_.dyadic_eviction) {
            for (Round n = 1; e - n + 1 >= tau_; n *= 2) check(e - n + 1);
        } else {
            for (Round t0 = e; t0 >= tau_; --t0) check(t0);
        }
        for (Arm a = 0; a < K_; ++a) {
            if (hit_local[a] && b.active[a]) {
                b.active[a] = 0;
                --b.count;
                trace_.events.push_back({t, EventKind::Eviction, 0, a, EvictionScope::Local});
            }
            if (hit_global[a] && global_[a]) {
                global_[a] = 0;
                --global_count_;
                trace_.events.push_back({t, EventKind::Eviction, 0, a, EvictionScope::Global});
            }
        }
    }

    const EnvironmentModel& env_;
    MetaConfig cfg_;
    std::size_t K_;
    Round T_;
    std::size_t stride_;
    Rng rng_;
    std::vector<std::int64_t> lengths_;
    std::vector<double> prefix_;  // per arm: sum_{s<=t} |A_s| Y_s 1{pi_s = a}
    std::vector<char> global_;
    std::size_t global_count_ = 0;
    std::vector<double> sums_;
    Round tau_ = 1;
    PolicyTrace trace_;
};

}  // namespace

PolicyTrace run_meta(const EnvironmentModel& env, const MetaConfig& config) {
    if (!(config.c2 > 0.0)) throw std::invalid_argument("meta: C2 must be > 0");
    return MetaRun(env, config).run();
}

}  // namespace sigshift
