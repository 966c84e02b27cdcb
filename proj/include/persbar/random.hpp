#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "persbar/kernels.hpp"

namespace persbar {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

struct Seed {
    std::uint64_t master = 0;
    friend bool operator==(const Seed&, const Seed&) = default;
};

/// Independent purposes drawing from the same master seed.
enum class StreamPurpose : std::uint64_t { paths = 0, bootstrap = 1 };

/// Counter-based stream for one trial: Philox4x32-10 keyed by
/// splitmix64(master + purpose * golden), counter (block, trial). Nothing is
/// shared between streams, so trials can run on any thread in any order.
class TrialStream {
public:
    TrialStream(Seed seed, std::uint64_t trial, StreamPurpose purpose = StreamPurpose::paths);

    /// n standard normals. The stream is block aligned: normal i of a fresh
    /// stream comes from block i/2, so a shorter draw is a prefix of a longer
    /// one. An odd n discards the unused normal of the last block.
    void normals(double* out, std::size_t n);
    std::vector<double> normals(std::size_t n);

    /// Uniforms on [0, 1) with 53 random bits, two per block.
    void uniforms(double* out, std::size_t n);

    /// Fair signs, 32 per word.
    void signs(double* out, std::size_t n, double magnitude);

    /// Uniform integer in [0, bound), bound >= 1 (Lemire's method).
    std::uint64_t below(std::uint64_t bound);

    std::uint64_t position() const noexcept { return block_; }
    const kernels::StreamId& id() const noexcept { return id_; }

private:
    kernels::StreamId id_;
    std::uint64_t block_ = 0;
};

}  // namespace persbar
