#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "persbar/path.hpp"

namespace persbar {

/// One interval of the superlevel barcode: born at a local max, dies at the
/// merge level (or at inf f for the essential bar).
struct Bar {
    double birth;
    double death;
    double length() const noexcept { return birth - death; }
    friend bool operator==(const Bar&, const Bar&) = default;
};

/// Degree-0 superlevel barcode of a PL path. The essential bar is capped at
/// inf f, so every bar is finite; bars are sorted by decreasing length
/// (ties: higher birth first).
class Barcode {
public:
    Barcode(std::vector<Bar> bars, double inf_value, double sup_value);

    const std::vector<Bar>& bars() const noexcept { return bars_; }
    std::size_t size() const noexcept { return bars_.size(); }
    double inf_value() const noexcept { return inf_; }
    double sup_value() const noexcept { return sup_; }
    double range() const noexcept { return sup_ - inf_; }

    /// N^0: number of local maxima of the path.
    std::size_t total_count() const noexcept { return bars_.size(); }

    friend bool operator==(const Barcode&, const Barcode&) = default;

private:
    std::vector<Bar> bars_;
    double inf_;
    double sup_;
};

/// Alternating strict local extrema of the PL path after collapsing runs of
/// equal samples. Endpoints are always included. Each entry is the sample
/// index of the first sample of its plateau.
std::vector<std::size_t> extrema_indices(const SampledPath& f);

Barcode barcode(const SampledPath& f);

/// Bars with length >= eps. Throws DomainError for eps <= 0.
std::size_t count_eps(const Barcode& bc, double eps);

/// Counts for an increasing list of thresholds in one pass over the sorted
/// lengths. Thresholds <= 0 give total_count().
std::vector<std::size_t> count_eps_many(const Barcode& bc, const std::vector<double>& eps);

/// Realized stopping times of a path.
struct CrossingRecord {
    enum class Kind { neveu, band };
    Kind kind = Kind::neveu;
    double eps = 0.0;
    double level = 0.0;  // x for the band kind
    /// neveu: T_1, S_1, T_2, S_2, ... ; band: merged up/down completion times.
    std::vector<double> times;
    std::vector<double> up_times;    // band only: US_i
    std::vector<double> down_times;  // band only: DT_i
    std::size_t up = 0;              // U
    std::size_t down = 0;            // D
    /// band only: the first time the path is <= x or >= x+eps was at the top.
    bool first_visit_high = false;
};

/// Drawdown/drawup stopping times with inclusive thresholds:
/// T_{i+1} = inf{s >= S_i : sup_[S_i,s] f - f(s) >= eps},
/// S_{i+1} = inf{s >= T_{i+1} : f(s) - inf_[T_{i+1},s] f >= eps}.
/// Crossing times are solved on the linear segments, not snapped to samples.
CrossingRecord neveu_times(const SampledPath& f, double eps);

/// N^eps from the stopping-time scan alone (no barcode). Must agree with
/// count_eps(barcode(f), eps) for every input.
std::size_t count_eps_crossings(const SampledPath& f, double eps);

/// Completed upcrossings/downcrossings of the band [x, x+eps].
CrossingRecord band_crossings(const SampledPath& f, double x, double eps);

struct CrossingCounts {
    std::size_t up;
    std::size_t down;
};
CrossingCounts crossings(const SampledPath& f, double x, double eps);

/// Number of bars containing [x, x+eps], from band crossings:
/// U + [first band visit is high], or 0 if the path never reaches x. Equals
/// max(U, D) unless the path's first and last band visits are both high,
/// where it is max(U, D) + 1.
std::size_t count_rect(const SampledPath& f, double x, double eps);

/// Same quantity read off the barcode: death <= x and birth >= x + eps.
std::size_t count_rect(const Barcode& bc, double x, double eps);

/// Total length of the eps-trimmed tree: sum of max(length - eps, 0).
double trimmed_length(const Barcode& bc, double eps);

enum class Convention { superlevel, sublevel };

/// Points (b, d). superlevel: (birth, death), below the diagonal. sublevel:
/// the reflection (b, d) -> (-d, -b). Applied to the barcode of -f it gives
/// the sublevel diagram of f mirrored below the diagonal: each point is
/// (death, birth) of a sublevel bar of f, the essential one capped at sup f.
std::vector<std::pair<double, double>> diagram(const Barcode& bc, Convention convention);

}  // namespace persbar
