#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "persbar/error.hpp"
#include "persbar/persistence.hpp"

using namespace persbar;
using oracle::make_path;

namespace {

const SampledPath example = make_path({0, 2, 1, 3, 0});

std::vector<std::pair<double, double>> sorted_bars(const Barcode& bc) {
    std::vector<std::pair<double, double>> out;
    for (const Bar& b : bc.bars()) out.emplace_back(b.birth, b.death);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("barcode of the five point example") {
    const Barcode bc = barcode(example);
    REQUIRE(bc.size() == 2);
    CHECK(bc.bars()[0] == Bar{3, 0});
    CHECK(bc.bars()[1] == Bar{2, 1});
    CHECK(bc.range() == 3);
    CHECK(bc.total_count() == 2);
}

TEST_CASE("monotone and constant paths") {
    const Barcode up = barcode(make_path({0, 1}));
    REQUIRE(up.size() == 1);
    CHECK(up.bars()[0] == Bar{1, 0});
    const Barcode flat = barcode(make_path({3, 3, 3}));
    REQUIRE(flat.size() == 1);
    CHECK(flat.bars()[0].length() == 0);
}

TEST_CASE("extrema collapse plateaus and keep endpoints") {
    CHECK(extrema_indices(make_path({0, 1, 1, 1, 0})) == std::vector<std::size_t>{0, 1, 4});
    CHECK(extrema_indices(make_path({0, 1, 1, 2})) == std::vector<std::size_t>{0, 3});
    CHECK(extrema_indices(make_path({2, 2, 2})) == std::vector<std::size_t>{0});
    CHECK(extrema_indices(make_path({1, 0, 0, 1, 1})) == std::vector<std::size_t>{0, 1, 3});
}

TEST_CASE("count_eps on the example") {
    const Barcode bc = barcode(example);
    CHECK(count_eps(bc, 0.5) == 2);
    CHECK(count_eps(bc, 1.5) == 1);
    CHECK(count_eps(bc, 1.0) == 2);  // inclusive threshold
    CHECK(count_eps(bc, 3.0) == 1);
    CHECK(count_eps(bc, 3.0000001) == 0);
    CHECK_THROWS_AS(count_eps(bc, 0.0), DomainError);
    CHECK_THROWS_AS(count_eps(bc, -1.0), DomainError);
    CHECK(count_eps_many(bc, {0.0, 0.5, 1.5, 4.0}) == std::vector<std::size_t>{2, 2, 1, 0});
}

TEST_CASE("count_eps_crossings examples") {
    CHECK(count_eps_crossings(example, 0.5) == 2);
    CHECK(count_eps_crossings(make_path({0, 1, 2, 5}), 4.0) == 1);
    std::vector<double> saw = {0};
    for (int i = 0; i < 5; ++i) {
        saw.push_back(1);
        saw.push_back(0);
    }
    CHECK(count_eps_crossings(make_path(saw), 0.9) == 5);
    CHECK(count_eps(barcode(make_path(saw)), 0.9) == 5);
    CHECK(count_eps_crossings(make_path(saw), 1.0) == 5);
    CHECK(count_eps_crossings(make_path(saw), 1.1) == 0);
    CHECK_THROWS_AS(count_eps_crossings(example, 0.0), DomainError);
}

TEST_CASE("neveu times are solved on segments") {
    const CrossingRecord up = neveu_times(make_path({0, 1, 2}), 0.5);
    CHECK(up.times.empty());

    const CrossingRecord tent = neveu_times(make_path({0, 2, 0}), 1.0);
    REQUIRE(tent.times.size() == 1);
    CHECK(tent.times[0] == doctest::Approx(1.5).epsilon(1e-15));

    const CrossingRecord ex = neveu_times(example, 0.5);
    REQUIRE(ex.times.size() == 3);
    CHECK(ex.times[0] == doctest::Approx(1.5));       // 2 - (t-1) = 1.5
    CHECK(ex.times[1] == doctest::Approx(2.25));      // 1 + 2(t-2) = 1.5
    CHECK(ex.times[2] == doctest::Approx(3 + 1.0 / 6.0));
}

TEST_CASE("band crossings") {
    const CrossingCounts c = crossings(example, 1.2, 0.5);
    CHECK(c.up == 2);
    CHECK(c.down == 2);
    const CrossingCounts t = crossings(make_path({0, 1, 0}), 0.2, 0.5);
    CHECK(t.up == 1);
    CHECK(t.down == 1);
    const CrossingCounts below = crossings(make_path({0, 0.1, -3}), 1.0, 0.5);
    CHECK(below.up == 0);
    CHECK(below.down == 0);

    const CrossingRecord rec = band_crossings(example, 1.2, 0.5);
    CHECK(rec.up == 2);
    CHECK(rec.down == 2);
    REQUIRE(rec.times.size() == 4);
    CHECK(rec.up_times[0] == doctest::Approx(0.85));
    CHECK(rec.down_times[0] == doctest::Approx(1.8));
    CHECK(rec.up_times[1] == doctest::Approx(2.35));
    CHECK(rec.down_times[1] == doctest::Approx(3 + 1.8 / 3));
    for (std::size_t i = 1; i < rec.times.size(); ++i) CHECK(rec.times[i] > rec.times[i - 1]);
    CHECK_THROWS_AS(crossings(example, 0.0, 0.0), DomainError);
}

TEST_CASE("count_rect by both routes") {
    CHECK(count_rect(example, 1.2, 0.5) == 2);
    CHECK(count_rect(barcode(example), 1.2, 0.5) == 2);
    CHECK(count_rect(example, 3.0, 0.5) == 0);
    CHECK(count_rect(make_path({0, 1, 0}), 0.2, 0.5) == 1);
    CHECK_THROWS_AS(count_rect(example, 0.0, -1.0), DomainError);

    // First and last band visits both high: two bars contain [1, 2] while
    // U = D = 1.
    const SampledPath hh = make_path({3, 0, 3});
    CHECK(count_rect(hh, 1.0, 1.0) == 2);
    CHECK(count_rect(barcode(hh), 1.0, 1.0) == 2);
    const CrossingCounts c = crossings(hh, 1.0, 1.0);
    CHECK(std::max(c.up, c.down) == 1);
}

TEST_CASE("trimmed length") {
    const Barcode bc = barcode(example);
    CHECK(trimmed_length(bc, 0) == 4);
    CHECK(trimmed_length(bc, 1) == 2);
    CHECK(trimmed_length(bc, 3) == 0);
    CHECK(trimmed_length(bc, 7) == 0);
    CHECK_THROWS_AS(trimmed_length(bc, -0.1), DomainError);
}

TEST_CASE("diagram conventions") {
    const Barcode one = barcode(make_path({0, 1}));
    const auto sup = diagram(one, Convention::superlevel);
    REQUIRE(sup.size() == 1);
    CHECK(sup[0] == std::pair<double, double>{1, 0});
    const auto sub = diagram(one, Convention::sublevel);
    CHECK(sub[0] == std::pair<double, double>{0, -1});
    CHECK(!std::signbit(sub[0].first));
    const Barcode empty({}, 0, 0);
    CHECK(diagram(empty, Convention::superlevel).empty());
    CHECK(diagram(empty, Convention::sublevel).empty());
}

TEST_CASE("barcode matches the per-maximum oracle") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t n = 2 + rng() % 60;
        const auto v = trial % 2 ? oracle::lazy_walk(rng, n) : oracle::gaussian_walk(rng, n);
        const Barcode bc = barcode(make_path(v));
        REQUIRE(sorted_bars(bc) == oracle::superlevel_bars(v));
        CHECK(bc.range() == *std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end()));
        CHECK(bc.bars().front().length() == bc.range());
        for (std::size_t i = 1; i < bc.size(); ++i) CHECK(bc.bars()[i - 1].length() >= bc.bars()[i].length());
        std::size_t essential = 0;
        for (const Bar& b : bc.bars()) essential += b.death == bc.inf_value();
        CHECK(essential >= 1);
    }
}

TEST_CASE("crossing scan agrees with the barcode, ties included") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t n = 2 + rng() % 80;
        const auto v = trial % 2 ? oracle::lazy_walk(rng, n) : oracle::gaussian_walk(rng, n);
        const SampledPath f = make_path(v);
        const Barcode bc = barcode(f);
        for (double eps : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 7.0}) {
            const std::size_t a = count_eps(bc, eps);
            REQUIRE(a == count_eps_crossings(f, eps));
            const CrossingRecord rec = neveu_times(f, eps);
            CHECK((a == 0 ? 0 : 2 * a - 1) >= rec.times.size());
            for (std::size_t i = 1; i < rec.times.size(); ++i) CHECK(rec.times[i] > rec.times[i - 1]);
        }
    }
}

TEST_CASE("N^eps is monotone and bounded by the range") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const auto v = oracle::gaussian_walk(rng, 200);
        const Barcode bc = barcode(make_path(v));
        std::size_t prev = bc.total_count();
        for (double eps = 0.05; eps < 3 * bc.range(); eps *= 1.3) {
            const std::size_t c = count_eps(bc, eps);
            CHECK(c <= prev);
            prev = c;
            if (eps <= bc.range()) CHECK(c >= 1);
            if (eps > bc.range()) CHECK(c == 0);
        }
    }
}

TEST_CASE("rectangle counts agree across routes and with crossings") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng() % 50;
        const auto v = trial % 2 ? oracle::lazy_walk(rng, n) : oracle::gaussian_walk(rng, n);
        const SampledPath f = make_path(v);
        const Barcode bc = barcode(f);
        for (double x : {-3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
            for (double eps : {0.5, 1.0, 2.0}) {
                const std::size_t n_rect = count_rect(f, x, eps);
                REQUIRE(n_rect == count_rect(bc, x, eps));
                const CrossingCounts c = crossings(f, x, eps);
                CHECK((c.up > c.down ? c.up - c.down : c.down - c.up) <= 1);
                const CrossingRecord rec = band_crossings(f, x, eps);
                CHECK(rec.up == c.up);
                CHECK(rec.down == c.down);
                const bool hh = rec.first_visit_high && c.down == c.up && c.up + 1 == n_rect;
                if (!hh) CHECK(n_rect == std::max(c.up, c.down));
                if (v[0] == *std::min_element(v.begin(), v.end()) && x >= v[0]) CHECK(n_rect == c.up);
                if (x < *std::min_element(v.begin(), v.end())) CHECK(n_rect == 0);
            }
        }
    }
}

TEST_CASE("trimmed length equals both integrals") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 100; ++trial) {
        const auto v = oracle::gaussian_walk(rng, 2 + rng() % 120);
        const SampledPath f = make_path(v);
        const Barcode bc = barcode(f);
        for (double eps : {0.0, 0.3, 1.0, 2.5}) {
            const double lambda = trimmed_length(bc, eps);
            if (eps > 0) {
                std::vector<double> breaks;
                for (double y : v) {
                    breaks.push_back(y);
                    breaks.push_back(y - eps);
                }
                const double by_x =
                    oracle::breakpoint_integral(breaks, [&](double x) { return count_rect(f, x, eps); });
                CHECK(by_x == doctest::Approx(lambda).epsilon(1e-12));
            }
            std::vector<double> lengths = {eps};
            for (const Bar& b : bc.bars())
                if (b.length() > eps) lengths.push_back(b.length());
            const double by_a = oracle::breakpoint_integral(lengths, [&](double a) { return count_eps(bc, a); });
            CHECK(by_a == doctest::Approx(lambda).epsilon(1e-12));
        }
    }
}

TEST_CASE("reparametrization leaves the barcode unchanged") {
    const SampledPath f = make_path({0, 2, 1});
    CHECK(barcode(reparametrize(f, {0, 10, 20})) == barcode(f));
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const auto v = oracle::gaussian_walk(rng, 50);
        std::vector<double> t(50);
        double s = 0;
        for (auto& x : t) x = (s += 0.01 + static_cast<double>(rng() % 1000) / 100.0);
        CHECK(barcode(reparametrize(make_path(v), t)) == barcode(make_path(v)));
    }
}

TEST_CASE("sublevel diagram of f from the barcode of -f") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto v = trial % 2 ? oracle::lazy_walk(rng, 2 + rng() % 40) : oracle::gaussian_walk(rng, 40);
        std::vector<std::pair<double, double>> pts;
        for (auto [b, d] : diagram(barcode(negate(make_path(v))), Convention::sublevel)) {
            CHECK(b >= d);
            pts.emplace_back(d, b);
        }
        std::sort(pts.begin(), pts.end());
        REQUIRE(pts == oracle::sublevel_points(v));
        for (auto [b, d] : diagram(barcode(make_path(v)), Convention::superlevel)) CHECK(b >= d);
    }
}
