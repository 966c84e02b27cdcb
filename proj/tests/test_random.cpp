#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "persbar/kernels.hpp"
#include "persbar/random.hpp"

using namespace persbar;
using namespace persbar::kernels;

TEST_CASE("philox4x32-10 known answers") {
    struct Kat {
        std::uint32_t ctr[4], key[2], out[4];
    };
    const Kat kats[] = {
        {{0, 0, 0, 0}, {0, 0}, {0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}},
        {{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
         {0xffffffff, 0xffffffff},
         {0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}},
        {{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
         {0xa4093822, 0x299f31d0},
         {0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}},
    };
    for (const Kat& k : kats) {
        std::uint32_t out[4];
        philox4x32_10(k.ctr, k.key, out);
        for (int i = 0; i < 4; ++i) CHECK(out[i] == k.out[i]);
    }
}

TEST_CASE("stream counters encode block and trial") {
    const StreamId id{0x1234, 0x5678, 0x0000000900000007ull};
    std::uint32_t a[4], b[4];
    philox_blocks(id, 0x0000000300000005ull, 1, a);
    const std::uint32_t ctr[4] = {5, 3, 7, 9}, key[2] = {0x1234, 0x5678};
    philox4x32_10(ctr, key, b);
    CHECK(std::memcmp(a, b, sizeof a) == 0);
}

TEST_CASE("log and sincos polynomials") {
    double worst_log = 0, worst_trig = 0;
    for (int i = 1; i <= 200000; ++i) {
        const double u = i / 200000.0;
        const double l = log_poly(u), ref = std::log(u);
        worst_log = std::max(worst_log, std::abs(l - ref) / std::max(1e-300, std::abs(ref) + 1e-16));
        double s, c;
        const double w = (i - 1) / 200000.0;
        sincos_turns(w, s, c);
        worst_trig = std::max({worst_trig, std::abs(s - std::sin(2 * std::numbers::pi * w)),
                               std::abs(c - std::cos(2 * std::numbers::pi * w))});
    }
    CHECK(worst_log < 1e-15);
    CHECK(worst_trig < 2e-15);
    CHECK(log_poly(1.0) == 0.0);
    CHECK(std::abs(log_poly(0x1.0p-52) + 52 * std::numbers::ln2) < 1e-13);
    double s, c;
    sincos_turns(0.0, s, c);
    CHECK(s == 0.0);
    CHECK(c == 1.0);
    sincos_turns(0.25, s, c);
    CHECK(s == 1.0);
    CHECK(c == 0.0);
}

TEST_CASE("scalar and avx2 normals are bitwise identical") {
    if (!isa_supported(Isa::avx2)) {
        MESSAGE("avx2 not available on this machine; skipping equivalence");
        return;
    }
    const auto scalar = normals_kernel(Isa::scalar);
    const auto simd = normals_kernel(Isa::avx2);
    for (std::uint64_t trial : {0ull, 1ull, 12345ull, 0xFFFFFFFFFFFFFFFFull}) {
        const StreamId id{0xDEADBEEF, 0x01234567, trial};
        for (std::size_t count : {1u, 7u, 8u, 9u, 64u, 1001u}) {
            for (std::uint64_t first : {0ull, 3ull, 0xFFFFFFFCull}) {
                std::vector<double> a(2 * count), b(2 * count);
                scalar(id, first, count, a.data());
                simd(id, first, count, b.data());
                REQUIRE(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
            }
        }
    }
    // An extended run over many blocks, including the extreme uniforms.
    const StreamId id{7, 11, 3};
    std::vector<double> a(2 << 20), b(2 << 20);
    scalar(id, 0, 1 << 20, a.data());
    simd(id, 0, 1 << 20, b.data());
    CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

TEST_CASE("normal stream moments and prefix property") {
    TrialStream s(Seed{42}, 0);
    const auto z = s.normals(400000);
    double m = 0, v = 0, k4 = 0;
    for (double x : z) m += x;
    m /= z.size();
    for (double x : z) {
        v += (x - m) * (x - m);
        k4 += std::pow(x - m, 4);
    }
    v /= z.size();
    k4 /= z.size();
    CHECK(std::abs(m) < 5 / std::sqrt(400000.0));
    CHECK(std::abs(v - 1) < 5 * std::sqrt(2.0 / 400000));
    CHECK(std::abs(k4 - 3) < 5 * std::sqrt(96.0 / 400000));

    TrialStream a(Seed{42}, 0), b(Seed{42}, 0);
    const auto short_draw = a.normals(11);
    const auto long_draw = b.normals(1000);
    for (std::size_t i = 0; i < short_draw.size(); ++i) CHECK(short_draw[i] == long_draw[i]);
    CHECK(a.position() == 6);

    TrialStream c(Seed{42}, 1), d(Seed{43}, 0);
    CHECK(c.normals(4) != TrialStream(Seed{42}, 0).normals(4));
    CHECK(d.normals(4) != TrialStream(Seed{42}, 0).normals(4));
    CHECK(TrialStream(Seed{42}, 0, StreamPurpose::bootstrap).normals(4) != TrialStream(Seed{42}, 0).normals(4));
}

TEST_CASE("uniforms, signs and bounded integers") {
    TrialStream s(Seed{1}, 5);
    std::vector<double> u(100001);
    s.uniforms(u.data(), u.size());
    double m = 0;
    for (double x : u) {
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
        m += x;
    }
    CHECK(std::abs(m / u.size() - 0.5) < 5 * std::sqrt(1.0 / 12 / u.size()));

    std::vector<double> sg(100000);
    s.signs(sg.data(), sg.size(), 0.5);
    double total = 0;
    for (double x : sg) {
        CHECK(std::abs(x) == 0.5);
        total += x;
    }
    CHECK(std::abs(total / 0.5) < 5 * std::sqrt(100000.0));

    std::vector<int> hist(7, 0);
    for (int i = 0; i < 70000; ++i) ++hist[s.below(7)];
    for (int h : hist) CHECK(std::abs(h - 10000) < 500);
    CHECK(s.below(1) == 0);
}

TEST_CASE("splitmix64 reference values") {
    // First three outputs of the reference generator seeded with 0.
    std::uint64_t state = 0;
    auto next = [&] {
        const std::uint64_t r = splitmix64(state);
        state += 0x9E3779B97F4A7C15ull;
        return r;
    };
    CHECK(next() == 0xE220A8397B1DCDAFull);
    CHECK(next() == 0x6E789E6AA1B965F4ull);
    CHECK(next() == 0x06C45D188009454Full);
}
