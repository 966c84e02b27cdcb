#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "persbar/analytic.hpp"
#include "persbar/error.hpp"
#include "persbar/stability.hpp"

using namespace persbar;

namespace {

ProcessSpec bm(std::size_t steps) {
    ProcessSpec s;
    s.n_steps = steps;
    return s;
}

ProcessSpec levy(std::size_t modes, std::size_t grid) {
    ProcessSpec s;
    s.family = Family::levy;
    s.n = modes;
    s.n_steps = grid;
    return s;
}

SampledPath shifted(const SampledPath& f, double c) {
    std::vector<double> v(f.values().begin(), f.values().end());
    for (double& y : v) y += c;
    return {std::vector<double>(f.times().begin(), f.times().end()), v};
}

}  // namespace

TEST_CASE("identical and shifted paths") {
    const SampledPath f = oracle::make_path({0, 2, 1, 3, 0});
    const StabilityReport same = stability_bound_check(f, f, 0.5);
    CHECK(same.delta == 0.0);
    CHECK(same.lhs == 0);
    CHECK(same.rhs == 0);
    CHECK(same.pass);
    const StabilityReport up = stability_bound_check(f, shifted(f, 0.1), 0.5);
    CHECK(up.delta == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(up.lhs == 0);
    CHECK(up.n_f == 2);
    CHECK(up.pass);
    CHECK(up.bracketed);
    CHECK_THROWS_AS(stability_bound_check(f, shifted(f, 0.1), 0.2), DomainError);
    CHECK_THROWS_AS(stability_bound_check(f, shifted(f, 0.3), 0.5), DomainError);
}

TEST_CASE("bound holds on coarsened brownian paths") {
    int failures = 0, total = 0;
    for (std::uint64_t trial = 0; trial < 300; ++trial) {
        const SampledPath f = sample(bm(10000), Seed{11}, trial);
        for (std::size_t stride : {10u, 100u}) {
            const SampledPath g = coarsen(f, stride);
            const double d = sup_distance(f, g);
            for (double mult : {2.05, 4.0, 9.0}) {
                const StabilityReport r = stability_bound_check(f, g, mult * d);
                ++total;
                failures += !(r.pass && r.bracketed);
                CHECK(r.lhs <= r.rhs);
                CHECK(r.n_f_lower <= r.n_f);
                CHECK(r.n_f <= r.n_f_upper);
            }
        }
    }
    CHECK(total == 1800);
    CHECK(failures == 0);
}

TEST_CASE("bound holds under arbitrary bounded perturbations") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t n = 5 + rng() % 200;
        const std::vector<double> v = rep % 2 ? oracle::gaussian_walk(rng, n) : oracle::rademacher_walk(rng, n);
        const double amp = 0.05 + 0.5 * std::abs(unit(rng));
        std::vector<double> w = v;
        for (double& y : w) y += amp * unit(rng);
        const SampledPath f = oracle::make_path(v), g = oracle::make_path(w);
        const double d = sup_distance(f, g);
        const double eps = 2 * d * (1.0 + 3 * std::abs(unit(rng))) + 1e-9;
        const StabilityReport r = stability_bound_check(f, g, eps);
        REQUIRE(r.pass);
        REQUIRE(r.bracketed);
    }
}

TEST_CASE("brownian modulus: exact and monte carlo") {
    double prev = -1;
    for (double delta : {0.02, 0.05, 0.1, 0.2}) {
        const OmegaResult w = modulus_omega(bm(2000), 1.0, delta, 400, Seed{6});
        REQUIRE(w.exact.has_value());
        CHECK(*w.exact == doctest::Approx(analytic::modulus_omega_bm(1.0, delta, 1.0)));
        // same paths at every delta, so the estimate is monotone exactly
        CHECK(w.mc.mean >= prev);
        prev = w.mc.mean;
    }
    const OmegaResult w = modulus_omega(bm(20000), 1.0, 0.1, 2000, Seed{6});
    CHECK(std::abs(w.mc.mean - *w.exact) < 4 * w.mc.std_error + 0.02);
    CHECK_FALSE(modulus_omega(levy(64, 1024), 0.5, 0.1, 50, Seed{1}).exact.has_value());
    CHECK_THROWS_AS(modulus_omega(bm(100), 0.5, 0.5, 10, Seed{1}), DomainError);
}

TEST_CASE("convergence experiment: identical coupling") {
    const ConvergenceReport r = convergence_experiment(bm(2000), bm(2000), 0.5, 100, Seed{4});
    CHECK(r.delta_hat == 0.0);
    CHECK(r.abs_diff.mean == 0.0);
    CHECK(r.pass);
    for (const ConvergenceTrial& t : r.trials) CHECK(t.abs_diff == 0.0);
}


TEST_CASE("convergence experiment: per-trial bound below the mean distance") {
    ProcessSpec fine = bm(20000), coarse = bm(2000);
    // eps = 8 delta_hat with delta_hat ~ sqrt(dt log n) of the coarse grid
    const double eps = 8 * std::sqrt(std::log(2000.0) / 2000.0);
    const ConvergenceReport r = convergence_experiment(coarse, fine, eps, 300, Seed{9});
    CHECK(r.pass);
    REQUIRE(r.trials.size() == 300);
    for (const ConvergenceTrial& t : r.trials)
        if (t.delta <= r.delta_hat) CHECK(t.abs_diff <= t.omega);
    REQUIRE(r.omega_bm.has_value());
    CHECK(r.tail_rows.size() == 9);
    for (const TailEnvelopeRow& row : r.tail_rows) CHECK(row.pass == (row.frequency <= row.bound));
}

TEST_CASE("convergence experiment: levy partial sums") {
    const ConvergenceReport r = convergence_experiment(levy(64, 4096), levy(4096, 4096), 0.5, 200, Seed{13});
    CHECK(r.delta_hat > 0);
    CHECK(r.pass);
    CHECK(r.omega_bm.has_value());
    CHECK(r.excess == doctest::Approx(r.abs_diff.mean - r.omega.mean).epsilon(1e-12));
    CHECK_THROWS_AS(convergence_experiment(bm(1000), levy(64, 1000), 0.5, 10, Seed{1}), DomainError);
    // 16 modes sit about 0.26 from the limit: 2 delta_hat > eps
    const ConvergenceReport v = convergence_experiment(levy(16, 4096), levy(4096, 4096), 0.5, 50, Seed{13});
    CHECK(v.vacuous);
    CHECK(v.pass);
    CHECK(std::isinf(v.omega.mean));
    CHECK(v.tail_rows.empty());
}

TEST_CASE("empirical process trend report") {
    const TrendReport r = empirical_bridge_trend(0.3, {100, 1000}, 4096, 300, 600, Seed{21});
    REQUIRE(r.rows.size() == 2);
    CHECK(r.bridge.trials == 600);
    for (const TrendRow& row : r.rows) {
        CHECK(row.estimate.trials == 300);
        CHECK(row.diff == doctest::Approx(row.estimate.mean - r.bridge.mean));
        CHECK(row.diff_se == doctest::Approx(std::hypot(row.estimate.std_error, r.bridge.std_error)));
    }
    // the bridge on [0, 1] has E N^0.3 near its small-eps value 1/(2 eps^2) scale
    CHECK(r.bridge.mean > 1.0);
}
