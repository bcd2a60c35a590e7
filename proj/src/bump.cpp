#include "sigshift/bump.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

namespace sigshift::bump {

namespace {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

double binomial(int n, int k) {
    return factorial(n) / (factorial(k) * factorial(n - k));
}

// k-th derivative of g(u) = -1/(1-u^2) = -(1/(1-u) + 1/(1+u)) / 2.
double g_derivative(double u, int k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return -0.5 * factorial(k) *
           (1.0 / std::pow(1.0 - u, k + 1) + sign / std::pow(1.0 + u, k + 1));
}

}  // namespace

double kernel(double u) {
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - u * u));
}

double kernel_derivative(double u, int n) {
    if (std::abs(u) >= 1.0) return 0.0;
    const double y0 = kernel(u);
    if (y0 == 0.0) return 0.0;
    std::vector<double> y(static_cast<std::size_t>(n) + 1);
    y[0] = y0;
    for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int j = 0; j <= k; ++j) acc += binomial(k, j) * g_derivative(u, j + 1) * y[k - j];
        y[k + 1] = acc;
    }
    return y[n];
}

double kernel_holder_constant(double beta) {
    static std::mutex mutex;
    static std::map<double, double> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(beta); it != cache.end()) return it->second;
    }

    const int m = static_cast<int>(std::floor(beta));
    const double exponent = beta - m;
    // Two adjacent unit bumps on [-1, 3]; pairs inside one bump and across the seam.
    constexpr int kPoints = 2401;
    const double lo = -1.0;
    const double hi = 3.0;
    const double du = (hi - lo) / (kPoints - 1);
    std::vector<double> u(kPoints);
    std::vector<double> d(kPoints);
    for (int i = 0; i < kPoints; ++i) {
        u[i] = lo + i * du;
        d[i] = kernel_derivative(u[i], m) + kernel_derivative(u[i] - 2.0, m);
    }

    double best = 0.0;
    if (exponent == 0.0) {
        double mx = d[0];
        double mn = d[0];
        for (double v : d) {
            mx = std::max(mx, v);
            mn = std::min(mn, v);
        }
        best = mx - mn;
    } else {
        for (int i = 0; i < kPoints; ++i) {
            for (int j = i + 1; j < kPoints; ++j) {
                const double ratio = std::abs(d[j] - d[i]) / std::pow(u[j] - u[i], exponent);
                best = std::max(best, ratio);
            }
        }
    }

    std::lock_guard lock(mutex);
    cache.emplace(beta, best);
    return best;
}

}  // namespace sigshift::bump
