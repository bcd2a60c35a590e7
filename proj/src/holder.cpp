#include "sigshift/holder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sigshift {

namespace {

constexpr std::size_t kLocalWindow = 64;

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

DerivativeSamples gap_derivative(const EnvironmentModel& env, Arm a, int order, std::size_t grid_size) {
    if (order < 0) throw std::invalid_argument("derivative order must be >= 0");
    if (grid_size < static_cast<std::size_t>(order) + 2)
        throw std::invalid_argument("grid size " + std::to_string(grid_size) +
                                    " too small for an order-" + std::to_string(order) + " stencil");
    const double T = static_cast<double>(env.horizon());
    const double spacing = std::max(1.0 / T, 1.0 / static_cast<double>(grid_size));
    const auto points = static_cast<std::size_t>(std::floor(1.0 / spacing + 1e-9)) + 1;
    if (points < static_cast<std::size_t>(order) + 2)
        throw std::invalid_argument("horizon too short for an order-" + std::to_string(order) + " stencil");

    std::vector<double> f(points);
    for (std::size_t i = 0; i < points; ++i) f[i] = gap_at_time(env, static_cast<double>(i) * spacing * T, a);

    std::vector<double> coef(static_cast<std::size_t>(order) + 1);
    for (int k = 0; k <= order; ++k)
        coef[k] = ((order - k) % 2 == 0 ? 1.0 : -1.0) * binomial(order, k) / std::pow(spacing, order);

    DerivativeSamples out;
    const std::size_t count = points - static_cast<std::size_t>(order);
    out.position.resize(count);
    out.value.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        double acc = 0.0;
        for (int k = 0; k <= order; ++k) acc += coef[k] * f[i + k];
        out.value[i] = acc;
        out.position[i] = (static_cast<double>(i) + order / 2.0) * spacing;
    }
    return out;
}

double holder_coefficient(const EnvironmentModel& env, Arm a, int order, std::size_t grid_size) {
    const auto d = gap_derivative(env, a, order, grid_size);
    double best = 0.0;
    for (double v : d.value) best = std::max(best, std::abs(v));
    return best;
}

double max_holder_coefficient(const EnvironmentModel& env, int order, std::size_t grid_size) {
    double best = 0.0;
    for (Arm a = 0; a < env.arms(); ++a) best = std::max(best, holder_coefficient(env, a, order, grid_size));
    return best;
}

HolderReport verify_holder(const EnvironmentModel& env, double beta, double lambda,
                           std::size_t sample_pairs, double tol, std::size_t grid_size, std::uint64_t seed) {
    if (!(beta > 0.0) || !(lambda > 0.0)) throw std::invalid_argument("verify_holder: beta, lambda must be > 0");
    if (!(tol >= 0.0)) throw std::invalid_argument("verify_holder: tol must be >= 0");
    const int m = static_cast<int>(std::floor(beta));
    const double exponent = beta - m;

    HolderReport report;
    Rng rng(seed);
    for (Arm a = 0; a < env.arms(); ++a) {
        const auto d = gap_derivative(env, a, m, grid_size);
        const std::size_t n = d.value.size();
        auto consider = [&](std::size_t i, std::size_t j) {
            if (i == j) return;
            const double dist = std::abs(d.position[j] - d.position[i]);
            const double ratio = std::abs(d.value[j] - d.value[i]) / std::pow(dist, exponent);
            if (ratio > report.worst_ratio) {
                report.worst_ratio = ratio;
                report.x = std::min(d.position[i], d.position[j]);
                report.x_prime = std::max(d.position[i], d.position[j]);
                report.arm = a;
            }
        };

        const auto [lo, hi] = std::minmax_element(d.value.begin(), d.value.end());
        const auto i_lo = static_cast<std::size_t>(lo - d.value.begin());
        const auto i_hi = static_cast<std::size_t>(hi - d.value.begin());
        if (exponent == 0.0) {
            consider(i_lo, i_hi);
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < std::min(n, i + kLocalWindow + 1); ++j) consider(i, j);
            consider(i_lo, i);
            consider(i_hi, i);
        }
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (std::size_t k = 0; k < sample_pairs; ++k) consider(pick(rng), pick(rng));
    }
    report.pass = report.worst_ratio <= lambda * (1.0 + tol);
    return report;
}

}  // namespace sigshift
