#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "sigshift/bump.hpp"
#include "sigshift/environment.hpp"
#include "sigshift/errors.hpp"
#include "sigshift/holder.hpp"
#include "sigshift/rates.hpp"

using namespace sigshift;
namespace fs = std::filesystem;

namespace {

constexpr double kRefA = 0.01444588223139156;
constexpr double kRefNu = 8.320088866618766;
constexpr double kRefPhi = 1.1478977247810018;

EnvironmentModel trig(double A, double nu, double phi, Round T, NoiseModel noise = NoiseModel::deterministic()) {
    TrigParams p;
    p.amplitude = A;
    p.frequency = nu;
    p.phase = phi;
    p.horizon = T;
    return make_trig(p, noise);
}

EnvironmentModel stationary(std::size_t K, Round T) {
    PiecewiseSpec spec;
    std::vector<double> gaps(K, 0.2);
    gaps[0] = 0.0;
    spec.segments.push_back({T, gaps});
    spec.baseline = 0.7;
    return make_piecewise(spec, NoiseModel::deterministic());
}

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / ("sigshift_test_" + name); }

}  // namespace

TEST_CASE("trig generator matches the closed form") {
    const auto env = trig(0.5, 1.0, 0.0, 4);
    CHECK(env.arms() == 2);
    for (Round t = 1; t <= 4; ++t) {
        const double expected = 0.5 - 0.5 * std::sin(2.0 * std::numbers::pi * 1.0 * t / 4.0 + 0.0);
        CHECK(env.mean(t, 0) == 0.5);
        CHECK(env.mean(t, 1) == doctest::Approx(expected).epsilon(1e-15));
    }
}

TEST_CASE("trig gap vanishes at a sine zero crossing and equals A at the peak") {
    const double A = 0.3;
    const Round T = 100;
    // sin(2 pi t/T + phi) = 0 at t = 25 when phi = -pi/2.
    const auto zero = trig(A, 1.0, -std::numbers::pi / 2.0, T);
    CHECK(gap_at(zero, 25, 1) == doctest::Approx(0.0).epsilon(1e-12));
    // sin = 1 at t = 25 when phi = 0: mu_2 = 0, gap of arm 2 is A.
    const auto peak = trig(A, 1.0, 0.0, T);
    CHECK(gap_at(peak, 25, 1) == doctest::Approx(A));
    CHECK(gap_at(peak, 25, 0) == 0.0);
}

TEST_CASE("reference trig parameters build a valid environment") {
    const auto env = trig(kRefA, kRefNu, kRefPhi, 10'000'000);
    CHECK(env.horizon() == 10'000'000);
    for (Round t : {Round{1}, Round{1234567}, Round{10'000'000}}) {
        double lo = 1.0;
        for (Arm a = 0; a < 2; ++a) {
            CHECK(gap_at(env, t, a) >= 0.0);
            lo = std::min(lo, gap_at(env, t, a));
            CHECK(env.mean(t, a) >= 0.0);
            CHECK(env.mean(t, a) <= 1.0);
        }
        CHECK(lo == 0.0);
    }
}

TEST_CASE("trig reference horizon scales the amplitude by sqrt(ref/T)") {
    TrigParams p;
    p.amplitude = kRefA;
    p.frequency = kRefNu;
    p.phase = kRefPhi;
    p.horizon = 100'000;
    p.reference_horizon = 10'000'000;
    CHECK(p.effective_amplitude() == doctest::Approx(kRefA * 10.0));
    CHECK(make_trig(p, NoiseModel::deterministic()).mean(1, 0) == doctest::Approx(kRefA * 10.0));
}

TEST_CASE("trig rejects means outside [0,1] under Bernoulli noise") {
    CHECK_THROWS_AS(trig(0.8, 1.0, 0.0, 10, NoiseModel::bernoulli()), GeneratorError);
    CHECK_THROWS_AS(trig(-0.1, 1.0, 0.0, 10, NoiseModel::bernoulli()), GeneratorError);
    CHECK_NOTHROW(trig(0.5, 1.0, 0.0, 10, NoiseModel::bernoulli()));
    CHECK_NOTHROW(trig(0.8, 1.0, 0.0, 10, NoiseModel::gaussian(0.001)));
}

TEST_CASE("bump kernel values") {
    CHECK(bump::kernel(0.0) == doctest::Approx(0.3678794).epsilon(1e-7));
    CHECK(bump::kernel(1.0) == 0.0);
    CHECK(bump::kernel(-1.0) == 0.0);
    CHECK(bump::kernel(2.0) == 0.0);
    // Derivatives against central differences.
    for (double u : {-0.7, -0.2, 0.3, 0.6}) {
        const double h = 1e-5;
        const double fd1 = (bump::kernel(u + h) - bump::kernel(u - h)) / (2 * h);
        CHECK(bump::kernel_derivative(u, 1) == doctest::Approx(fd1).epsilon(1e-6));
        const double fd2 = (bump::kernel_derivative(u + h, 1) - bump::kernel_derivative(u - h, 1)) / (2 * h);
        CHECK(bump::kernel_derivative(u, 2) == doctest::Approx(fd2).epsilon(1e-5));
        const double fd3 = (bump::kernel_derivative(u + h, 2) - bump::kernel_derivative(u - h, 2)) / (2 * h);
        CHECK(bump::kernel_derivative(u, 3) == doctest::Approx(fd3).epsilon(1e-4));
    }
}

TEST_CASE("bump geometry: lambda cap branch and M formula") {
    BumpParams p;
    p.beta = 1.0;
    p.lambda = 1e9;
    p.arms = 2;
    p.horizon = 1024;
    const auto capped = bump_geometry(p);
    CHECK(capped.lambda_tilde == doctest::Approx(64.0));

    p.lambda = 1.0;
    p.horizon = 1'000'000;
    const auto g = bump_geometry(p);
    CHECK(g.lambda_tilde == 1.0);
    CHECK(g.segments == 80);  // ceil(79.37)
    CHECK(g.bandwidth == doctest::Approx(1.0 / 80.0));
    CHECK(g.effective_horizon == 1'000'000);
    CHECK(g.amplitude <= 0.5);
}

TEST_CASE("bump geometry stays out of the trivial regime") {
    // The lambda cap bounds M by ceil(T / 4K), so huge lambda is clamped rather than rejected.
    BumpParams p;
    p.arms = 2;
    for (double beta : {0.5, 1.0, 3.0})
        for (Round T : {Round{16}, Round{1000}, Round{100'000}}) {
            p.beta = beta;
            p.lambda = 1e12;
            p.horizon = T;
            const auto g = bump_geometry(p);
            CHECK(g.segments <= (T + 3) / 4);
            CHECK(g.amplitude <= 0.5);
        }
    p.beta = -1.0;
    CHECK_THROWS_AS(bump_geometry(p), ConfigError);
    p.beta = 1.0;
    p.arms = 1;
    CHECK_THROWS_AS(bump_geometry(p), ConfigError);
}

TEST_CASE("bump instance structure") {
    BumpParams p;
    p.beta = 2.0;
    p.lambda = 5.0;
    p.arms = 3;
    p.horizon = 20'000;
    p.assignment_mode = AssignmentMode::RoundRobin;
    const auto inst = make_bump_instance(p, NoiseModel::bernoulli());
    const auto& g = inst.geometry;
    const auto& env = inst.env;
    REQUIRE(static_cast<std::int64_t>(inst.assignment.size()) == g.segments);
    CHECK(env.horizon() == g.effective_horizon);
    CHECK(2 * g.effective_horizon >= p.horizon);

    const Round seg_len = g.effective_horizon / g.segments;
    const double T0 = static_cast<double>(g.effective_horizon);
    const double lo = 0.5 - g.lambda_tilde * std::pow(g.bandwidth, p.beta) / 2.0;
    const double hi = 0.5 + g.lambda_tilde * std::pow(g.bandwidth, p.beta) / 2.0;
    for (Round t = 1; t <= env.horizon(); ++t) {
        const auto seg = static_cast<std::size_t>(std::min<Round>((t * g.segments) / g.effective_horizon, g.segments - 1));
        double min_gap = 1.0;
        for (Arm a = 0; a < 3; ++a) {
            const double mu = env.mean(t, a);
            REQUIRE(mu >= lo);
            REQUIRE(mu <= hi);
            min_gap = std::min(min_gap, gap_at(env, t, a));
        }
        REQUIRE(min_gap == 0.0);
        // Non-best arms have gap 2 phi_i(t/T0); the best arm none.
        const Arm best = inst.assignment[seg];
        const double x = static_cast<double>(t) / T0;
        const double center = (static_cast<double>(seg) + 0.5) * g.bandwidth;
        const double phi = g.amplitude * bump::kernel((x - center) / (g.bandwidth / 2.0));
        for (Arm a = 0; a < 3; ++a) REQUIRE(gap_at(env, t, a) == doctest::Approx(a == best ? 0.0 : 2.0 * phi));
    }
    // Middle half of each segment: gap >= c lambda_tilde h^beta.
    const double floor_gap = g.middle_constant * g.lambda_tilde * std::pow(g.bandwidth, p.beta);
    CHECK(g.middle_constant > 0.0);
    for (std::int64_t i = 0; i < g.segments; ++i) {
        const Round first = i * seg_len + seg_len / 4 + 1;
        const Round last = i * seg_len + (3 * seg_len) / 4 - 1;
        const Arm best = inst.assignment[static_cast<std::size_t>(i)];
        for (Round t = first; t <= last; ++t)
            for (Arm a = 0; a < 3; ++a)
                if (a != best) REQUIRE(gap_at(env, t, a) >= floor_gap * (1 - 1e-12));
    }
}

TEST_CASE("bump assignment validation") {
    BumpParams p;
    p.beta = 1.0;
    p.lambda = 1.0;
    p.arms = 2;
    p.horizon = 1000;
    p.assignment = {0, 1};
    CHECK_THROWS_AS(make_bump_instance(p, NoiseModel::deterministic()), ConfigError);
    const auto M = static_cast<std::size_t>(bump_geometry(p).segments);
    p.assignment.assign(M, 5);
    CHECK_THROWS_AS(make_bump_instance(p, NoiseModel::deterministic()), ConfigError);
    p.assignment.assign(M, 1);
    const auto inst = make_bump_instance(p, NoiseModel::deterministic());
    CHECK(gap_at(inst.env, 1, 1) == 0.0);
}

TEST_CASE("random bump assignment is reproducible from its seed") {
    BumpParams p;
    p.beta = 1.0;
    p.lambda = 4.0;
    p.arms = 4;
    p.horizon = 50'000;
    p.seed = 7;
    const auto a = make_bump_instance(p, NoiseModel::deterministic());
    const auto b = make_bump_instance(p, NoiseModel::deterministic());
    CHECK(a.assignment == b.assignment);
    p.seed = 8;
    CHECK(make_bump_instance(p, NoiseModel::deterministic()).assignment != a.assignment);
}

TEST_CASE("piecewise generator") {
    SUBCASE("all-zero gaps") {
        PiecewiseSpec spec{{{10, {0.0, 0.0, 0.0}}}, 0.5};
        const auto env = make_piecewise(spec, NoiseModel::deterministic());
        for (Round t = 1; t <= 10; ++t)
            for (Arm a = 0; a < 3; ++a) CHECK(gap_at(env, t, a) == 0.0);
    }
    SUBCASE("two segments swapping the best arm") {
        PiecewiseSpec spec{{{3, {0.0, 1.0}}, {2, {1.0, 0.0}}}, 1.0};
        const auto env = make_piecewise(spec, NoiseModel::deterministic());
        const double expected[5][2] = {{0, 1}, {0, 1}, {0, 1}, {1, 0}, {1, 0}};
        for (Round t = 1; t <= 5; ++t)
            for (Arm a = 0; a < 2; ++a) CHECK(gap_at(env, t, a) == expected[t - 1][a]);
        CHECK(env.mean(1, 0) == 1.0);
        CHECK(env.mean(4, 1) == 1.0);
    }
    SUBCASE("restarting oracle rate of L equal segments") {
        const std::size_t K = 4;
        const std::size_t L = 5;
        const double delta = 0.25;
        PiecewiseSpec spec;
        for (std::size_t l = 0; l < L; ++l) {
            std::vector<double> gaps(K, delta);
            gaps[l % K] = 0.0;
            spec.segments.push_back({200, gaps});
        }
        const double expected = L * (K - 1) * std::log(1000.0) / delta;
        CHECK(restarting_oracle_rate(spec, spec.horizon()) == doctest::Approx(expected));
    }
    SUBCASE("validation") {
        CHECK_THROWS_AS(make_piecewise({{{3, {0.1, 0.2}}}, 1.0}, NoiseModel::deterministic()), ConfigError);
        CHECK_THROWS_AS(make_piecewise({{{3, {0.0, -0.2}}}, 1.0}, NoiseModel::deterministic()), ConfigError);
        CHECK_THROWS_AS(make_piecewise({{{0, {0.0, 0.2}}}, 1.0}, NoiseModel::deterministic()), ConfigError);
        CHECK_THROWS_AS(make_piecewise({{{3, {0.0, 0.7}}}, 0.5}, NoiseModel::deterministic()), GeneratorError);
        CHECK_THROWS_AS(make_piecewise({{{3, {0.0, 0.2}}}, 1.5}, NoiseModel::deterministic()), GeneratorError);
        CHECK_THROWS_AS(make_piecewise({{}, 1.0}, NoiseModel::deterministic()), ConfigError);
    }
}

TEST_CASE("gap_at") {
    const auto env = EnvironmentModel::dense(3, 1, {0.9, 0.5, 0.9}, NoiseModel::deterministic());
    CHECK(gap_at(env, 1, 0) == 0.0);
    CHECK(gap_at(env, 1, 1) == doctest::Approx(0.4));
    CHECK(gap_at(env, 1, 2) == 0.0);
    CHECK_THROWS_AS(gap_at(env, 0, 0), std::out_of_range);
    CHECK_THROWS_AS(gap_at(env, 2, 0), std::out_of_range);
    CHECK_THROWS_AS(gap_at(env, 1, 3), std::out_of_range);
    const auto equal = EnvironmentModel::dense(2, 2, {0.3, 0.3, 0.6, 0.6}, NoiseModel::deterministic());
    for (Round t = 1; t <= 2; ++t)
        for (Arm a = 0; a < 2; ++a) CHECK(gap_at(equal, t, a) == 0.0);
}

TEST_CASE("sample_reward") {
    Rng rng(1);
    const auto det = EnvironmentModel::dense(2, 1, {0.25, 0.75}, NoiseModel::deterministic());
    CHECK(sample_reward(det, 1, 1, rng) == 0.75);

    const auto ones = EnvironmentModel::dense(1, 1, {1.0}, NoiseModel::bernoulli());
    for (int i = 0; i < 100; ++i) CHECK(sample_reward(ones, 1, 0, rng) == 1.0);

    const auto coin = EnvironmentModel::dense(1, 1, {0.3}, NoiseModel::bernoulli());
    double total = 0.0;
    for (int i = 0; i < 100'000; ++i) {
        const double y = sample_reward(coin, 1, 0, rng);
        REQUIRE((y == 0.0 || y == 1.0));
        total += y;
    }
    CHECK(std::abs(total / 100'000 - 0.3) < 0.005);

    const auto bad = EnvironmentModel::dense(1, 1, {1.5}, NoiseModel::bernoulli());
    CHECK_THROWS(sample_reward(bad, 1, 0, rng));

    const auto noisy = EnvironmentModel::dense(1, 1, {0.5}, NoiseModel::gaussian(0.001));
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < 50'000; ++i) {
        const double y = sample_reward(noisy, 1, 0, rng);
        sum += y;
        sq += y * y;
    }
    const double mean = sum / 50'000;
    CHECK(mean == doctest::Approx(0.5).epsilon(0.002));
    CHECK(sq / 50'000 - mean * mean == doctest::Approx(0.001).epsilon(0.05));

    const auto clipped = EnvironmentModel::dense(1, 1, {0.0}, NoiseModel::gaussian(1.0, true));
    for (int i = 0; i < 1000; ++i) CHECK(sample_reward(clipped, 1, 0, rng) >= 0.0);
}

TEST_CASE("materialize keeps the means") {
    const auto env = trig(0.2, 3.0, 0.4, 500);
    const auto dense = env.materialize();
    CHECK(dense.materialized());
    for (Round t = 1; t <= 500; ++t)
        for (Arm a = 0; a < 2; ++a) REQUIRE(dense.mean(t, a) == env.mean(t, a));
}

TEST_CASE("CSV round trip and errors") {
    const auto path = temp_file("env.csv");
    SUBCASE("small file") {
        std::ofstream(path) << "t,arm,mean\n1,1,0.5\n1,2,0.25\n2,1,0.1\n2,2,0.9\n3,1,1\n3,2,0\n";
        const auto env = load_csv(path, NoiseModel::deterministic());
        CHECK(env.arms() == 2);
        CHECK(env.horizon() == 3);
        CHECK(env.mean(1, 1) == 0.25);
        CHECK(env.mean(2, 1) == 0.9);
        CHECK(env.mean(3, 0) == 1.0);
    }
    SUBCASE("trig export round trip is bit-exact") {
        const auto env = trig(kRefA, kRefNu, kRefPhi, 100);
        export_csv(env, path);
        const auto back = load_csv(path, NoiseModel::deterministic());
        const GapTable a(env), b(back);
        for (Round t = 1; t <= 100; ++t)
            for (Arm k = 0; k < 2; ++k) REQUIRE(a.gap(k, t) == b.gap(k, t));
    }
    SUBCASE("missing cell") {
        std::ofstream(path) << "t,arm,mean\n1,1,0.5\n1,2,0.25\n2,2,0.9\n";
        try {
            load_csv(path, NoiseModel::deterministic());
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("missing cell (t=2, arm=1)") != std::string::npos);
        }
    }
    SUBCASE("non-contiguous rounds") {
        std::ofstream(path) << "t,arm,mean\n1,1,0.5\n3,1,0.25\n";
        CHECK_THROWS_WITH_AS(load_csv(path, NoiseModel::deterministic()), doctest::Contains("non-contiguous"),
                             ParseError);
    }
    SUBCASE("NaN mean names the line") {
        std::ofstream(path) << "t,arm,mean\n1,1,0.5\n2,1,nan\n";
        try {
            load_csv(path, NoiseModel::deterministic());
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
        }
    }
    SUBCASE("bad header") {
        std::ofstream(path) << "round,arm,mean\n1,1,0.5\n";
        CHECK_THROWS_AS(load_csv(path, NoiseModel::deterministic()), ParseError);
    }
    fs::remove(path);
}

TEST_CASE("holder_coefficient") {
    CHECK(holder_coefficient(stationary(3, 1000), 1, 1, 1000) == 0.0);

    // f(x) = c x for arm 2.
    const double c = 0.6;
    const EnvironmentModel linear(
        2, 10'000, [c](double t, Arm a) { return a == 0 ? 0.9 : 0.9 - c * t / 10'000.0; }, NoiseModel::deterministic());
    CHECK(holder_coefficient(linear, 1, 1, 10'000) == doctest::Approx(c).epsilon(1e-9));

    const double A = 0.05, nu = 3.0;
    const auto env = trig(A, nu, 0.3, 100'000);
    CHECK(holder_coefficient(env, 1, 1, 10'000) == doctest::Approx(2 * std::numbers::pi * nu * A).epsilon(1e-3));
    CHECK_THROWS(holder_coefficient(env, 1, 3, 4));
}

TEST_CASE("verify_holder") {
    SUBCASE("stationary passes with ratio 0") {
        const auto r = verify_holder(stationary(2, 5000), 1.5, 0.1, 1000, 0.0);
        CHECK(r.pass);
        CHECK(r.worst_ratio == 0.0);
    }
    SUBCASE("bump instance against (beta, 2 lambda)") {
        BumpParams p;
        p.beta = 1.0;
        p.lambda = 1.0;
        p.arms = 2;
        p.horizon = 100'000;
        p.assignment_mode = AssignmentMode::RoundRobin;
        const auto inst = make_bump_instance(p, NoiseModel::deterministic());
        CHECK(verify_holder(inst.env, 1.0, 2.0 * p.lambda, 2000, 0.0).pass);
    }
    SUBCASE("step gap fails with a witness at the jump") {
        PiecewiseSpec spec{{{500, {0.0, 0.0}}, {500, {0.0, 0.5}}}, 1.0};
        const auto env = make_piecewise(spec, NoiseModel::deterministic());
        const auto r = verify_holder(env, 1.0, 0.4 * 1000, 1000, 0.0);
        CHECK_FALSE(r.pass);
        CHECK(r.arm == 1);
        CHECK(r.x <= 0.5);
        CHECK(r.x_prime >= 0.5);
    }
}
