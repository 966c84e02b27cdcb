#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "persbar/error.hpp"
#include "persbar/io.hpp"
#include "persbar/path.hpp"

using namespace persbar;

TEST_CASE("construction invariants") {
    CHECK_THROWS_AS(SampledPath({0}, {0}), DomainError);
    CHECK_THROWS_AS(SampledPath({0, 1}, {0}), DomainError);
    CHECK_THROWS_AS(SampledPath({0, 0}, {0, 1}), DomainError);
    CHECK_THROWS_AS(SampledPath({1, 0}, {0, 1}), DomainError);
    CHECK_THROWS_AS(SampledPath({0, 1}, {0, NAN}), DomainError);
    CHECK_THROWS_AS(SampledPath({0, INFINITY}, {0, 1}), DomainError);
    CHECK_NOTHROW(SampledPath({-2, 5}, {1, 1}));
    const SampledPath u = SampledPath::uniform(3.0, {0, 1, 2, 3});
    CHECK(u.end() == 3.0);
    CHECK(u.times()[1] == 1.0);
}

TEST_CASE("evaluate") {
    CHECK(SampledPath({0, 1}, {0, 1}).evaluate(0.5) == 0.5);
    CHECK(SampledPath({0, 1}, {3, 3}).evaluate(0.25) == 3);
    const SampledPath f({0, 1, 2}, {0, 2, 1});
    CHECK(f.evaluate(1.5) == 1.5);
    CHECK(f.evaluate(1.0) == 2.0);
    CHECK(f.evaluate(0.0) == 0.0);
    CHECK(f.evaluate(2.0) == 1.0);
    CHECK_THROWS_AS(f.evaluate(-0.1), DomainError);
    CHECK_THROWS_AS(f.evaluate(2.1), DomainError);
}

TEST_CASE("sup_distance examples") {
    const SampledPath f({0, 1}, {0, 0}), g({0, 1}, {1, 1});
    CHECK(sup_distance(f, f) == 0);
    CHECK(sup_distance(f, g) == 1);
    CHECK(sup_distance(SampledPath({0, 2}, {0, 2}), SampledPath({0, 1, 2}, {0, 0, 2})) == 1);
    CHECK_THROWS_AS(sup_distance(f, SampledPath({0, 2}, {0, 0})), DomainError);
}

TEST_CASE("sup_distance is a metric on random triples") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> z;
    auto random_path = [&] {
        const std::size_t n = 2 + rng() % 30;
        std::vector<double> t(n), v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = z(rng);
        t[0] = 0;
        t[n - 1] = 1;
        std::vector<double> inner(n - 2);
        for (auto& x : inner) x = std::uniform_real_distribution<double>(0.001, 0.999)(rng);
        std::sort(inner.begin(), inner.end());
        inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
        t.resize(inner.size() + 2);
        v.resize(inner.size() + 2);
        std::copy(inner.begin(), inner.end(), t.begin() + 1);
        t.back() = 1;
        return SampledPath(t, v);
    };
    for (int trial = 0; trial < 500; ++trial) {
        const SampledPath a = random_path(), b = random_path(), c = random_path();
        const double ab = sup_distance(a, b), ba = sup_distance(b, a);
        CHECK(ab == doctest::Approx(ba).epsilon(1e-14));
        CHECK(sup_distance(a, c) <= ab + sup_distance(b, c) + 1e-12);
        CHECK(sup_distance(a, a) == 0);
        CHECK(ab > 0);
        // brute force on a dense grid never exceeds the exact value
        for (int k = 0; k <= 200; ++k) {
            const double t = k / 200.0;
            CHECK(std::abs(a.evaluate(t) - b.evaluate(t)) <= ab + 1e-12);
        }
    }
}

TEST_CASE("negate, reparametrize, coarsen") {
    const SampledPath f({0, 1, 2}, {0, 2, 1});
    CHECK(negate(negate(f)) == f);
    CHECK(negate(f).values()[1] == -2);
    CHECK(coarsen(f, 1) == f);
    const SampledPath r = reparametrize(f, {0, 10, 20});
    CHECK(r.evaluate(15) == f.evaluate(1.5));
    CHECK_THROWS_AS(reparametrize(f, {0, 10}), DomainError);
    CHECK_THROWS_AS(reparametrize(f, {0, 10, 10}), DomainError);
    CHECK_THROWS_AS(coarsen(f, 0), DomainError);

    std::mt19937_64 rng(5);
    const auto v = oracle::gaussian_walk(rng, 103);
    const SampledPath g = oracle::make_path(v);
    for (std::size_t s : {2u, 3u, 10u, 200u}) {
        const SampledPath c = coarsen(g, s);
        CHECK(c.start() == g.start());
        CHECK(c.end() == g.end());
        for (std::size_t i = 0; i < c.size(); ++i) {
            CHECK(g.evaluate(c.times()[i]) == c.values()[i]);
            CHECK(std::find(v.begin(), v.end(), c.values()[i]) != v.end());
        }
    }
    // evaluate(reparametrize(f, g), g(t)) = evaluate(f, t)
    std::vector<double> grid(103);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = std::pow(static_cast<double>(i), 1.5);
    const SampledPath h = reparametrize(g, grid);
    for (double t : {0.0, 0.5, 17.25, 101.9, 102.0}) {
        const std::size_t i = static_cast<std::size_t>(t);
        const double w = t - static_cast<double>(i);
        const double mapped = i + 1 < grid.size() ? grid[i] + w * (grid[i + 1] - grid[i]) : grid[i];
        CHECK(h.evaluate(mapped) == doctest::Approx(g.evaluate(t)).epsilon(1e-12));
    }
}

TEST_CASE("path csv round trip") {
    std::mt19937_64 rng(9);
    const SampledPath f({0, 0.1, 1.0 / 3.0, 2}, {1e-300, -2.5, 1.0 / 7.0, 123456.789});
    std::stringstream ss;
    write_path_csv(ss, f);
    CHECK(ss.str().rfind("t,value\n", 0) == 0);
    CHECK(read_path_csv(ss) == f);

    std::stringstream bad("t,value\n0,1\n0,2\n");
    CHECK_THROWS_AS(read_path_csv(bad), DomainError);
    std::stringstream header("time,value\n0,1\n1,2\n");
    CHECK_THROWS_AS(read_path_csv(header), DomainError);
    std::stringstream junk("t,value\n0,1\n1,abc\n");
    CHECK_THROWS_AS(read_path_csv(junk), DomainError);
}
