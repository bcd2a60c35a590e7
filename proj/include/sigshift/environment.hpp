#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace sigshift {

using Round = std::int64_t;  // rounds are 1-based: t in [1, T]
using Arm = std::size_t;     // arms are 0-based in the API, 1-based in files
using Rng = std::mt19937_64;

enum class NoiseKind { Bernoulli, Gaussian, Deterministic };

struct NoiseModel {
    NoiseKind kind = NoiseKind::Deterministic;
    double variance = 0.0;  // Gaussian only
    bool clip = false;      // Gaussian only: clamp samples to [0,1]

    static NoiseModel bernoulli() { return {NoiseKind::Bernoulli, 0.0, false}; }
    static NoiseModel gaussian(double variance, bool clip = false) {
        return {NoiseKind::Gaussian, variance, clip};
    }
    static NoiseModel deterministic() { return {NoiseKind::Deterministic, 0.0, false}; }
};

// Mean reward of an arm as a function of (possibly fractional) time t in [0, T].
using MeanFunction = std::function<double(double t, Arm arm)>;

// K-armed environment over rounds 1..T. Immutable once built; copies share state.
class EnvironmentModel {
public:
    EnvironmentModel(std::size_t arms, Round horizon, MeanFunction means, NoiseModel noise,
                     std::string label = {});

    // Round-major dense table: means[(t-1)*K + a].
    static EnvironmentModel dense(std::size_t arms, Round horizon, std::vector<double> means,
                                  NoiseModel noise, std::string label = {});

    std::size_t arms() const noexcept { return arms_; }
    Round horizon() const noexcept { return horizon_; }
    const NoiseModel& noise() const noexcept { return noise_; }
    const std::string& label() const noexcept { return label_; }
    bool materialized() const noexcept { return dense_ != nullptr; }

    // Unchecked mean at an integer round.
    double mean(Round t, Arm a) const;
    // Mean at fractional time; dense environments snap to the nearest round.
    double mean_at(double t, Arm a) const;
    void means(Round t, std::span<double> out) const;

    // Same environment backed by a dense K x T table.
    EnvironmentModel materialize() const;
    EnvironmentModel with_noise(NoiseModel noise) const;

private:
    std::size_t arms_;
    Round horizon_;
    MeanFunction fn_;
    std::shared_ptr<const std::vector<double>> dense_;
    NoiseModel noise_;
    std::string label_;
};

// max_b mu_t(b) - mu_t(a). Throws std::out_of_range on bad indices.
double gap_at(const EnvironmentModel& env, Round t, Arm a);
// Gap at fractional time, used for normalized-time analysis.
double gap_at_time(const EnvironmentModel& env, double t, Arm a);

double sample_reward(const EnvironmentModel& env, Round t, Arm a, Rng& rng);

// ---- generators -----------------------------------------------------------

struct TrigParams {
    double amplitude = 0.0;
    double frequency = 0.0;
    double phase = 0.0;
    Round horizon = 1;
    // When set, the amplitude is multiplied by sqrt(reference_horizon / horizon).
    // This keeps the significant-shift structure of a long run at a shorter horizon.
    std::optional<double> reference_horizon;

    double effective_amplitude() const;
};

// Two arms: mu_1 = A, mu_2(t) = A - A sin(2 pi nu t / T + phi).
EnvironmentModel make_trig(const TrigParams& params, NoiseModel noise);

// Disjoint: bump i is centred in segment i with half-width h/2, so it vanishes with all its
// derivatives at segment boundaries. Overlapping: Phi((x - h/2)/h) shifted to segment i, whose
// support [-h/2, 3h/2] spills over the neighbours; truncated to the segment.
enum class BumpWidth { Disjoint, Overlapping };
enum class AssignmentMode { Random, RoundRobin };

struct BumpParams {
    double beta = 1.0;
    double lambda = 1.0;
    std::size_t arms = 2;
    Round horizon = 1;
    std::vector<Arm> assignment;  // empty: generated from mode + seed
    AssignmentMode assignment_mode = AssignmentMode::Random;
    std::uint64_t seed = 0;
    BumpWidth width = BumpWidth::Disjoint;
};

struct BumpGeometry {
    double lambda_tilde = 0.0;
    std::int64_t segments = 0;  // M
    double bandwidth = 0.0;     // h = 1/M
    Round effective_horizon = 0;
    double amplitude = 0.0;     // peak of phi, lambda_tilde * h^beta / 2 * kernel_scale
    double kernel_scale = 1.0;  // Holder normalization of the bump kernel (1 in Overlapping mode)
    double middle_constant = 0.0;  // c with min middle-half gap >= c * lambda_tilde * h^beta
};

BumpGeometry bump_geometry(const BumpParams& params);

struct BumpInstance {
    EnvironmentModel env;
    BumpGeometry geometry;
    std::vector<Arm> assignment;
};

BumpInstance make_bump_instance(const BumpParams& params, NoiseModel noise);

struct PiecewiseSegment {
    Round length = 1;
    std::vector<double> gaps;  // one per arm, min must be 0
};

struct PiecewiseSpec {
    std::vector<PiecewiseSegment> segments;
    double baseline = 1.0;

    Round horizon() const;
    std::size_t arms() const;
};

EnvironmentModel make_piecewise(const PiecewiseSpec& spec, NoiseModel noise);

// CSV with header `t,arm,mean`, arms 1-based.
EnvironmentModel load_csv(const std::filesystem::path& path, NoiseModel noise);
void export_csv(const EnvironmentModel& env, const std::filesystem::path& path);

// ---- dense gap view ------------------------------------------------------

// Per-arm prefix sums of gaps: prefix(a, t) = sum_{s<=t} delta_s(a).
class GapTable {
public:
    explicit GapTable(const EnvironmentModel& env);

    std::size_t arms() const noexcept { return arms_; }
    Round horizon() const noexcept { return horizon_; }
    double prefix(Arm a, Round t) const { return prefix_[a * stride_ + static_cast<std::size_t>(t)]; }
    // sum_{t=s1}^{s2} delta_t(a)
    double sum(Arm a, Round s1, Round s2) const { return prefix(a, s2) - prefix(a, s1 - 1); }
    double gap(Arm a, Round t) const { return gaps_[a * stride_ + static_cast<std::size_t>(t)]; }

private:
    std::size_t arms_;
    Round horizon_;
    std::size_t stride_;
    std::vector<double> gaps_;    // index 0 unused
    std::vector<double> prefix_;  // prefix(a, 0) = 0
};

}  // namespace sigshift
