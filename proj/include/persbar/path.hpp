#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace persbar {

/// Piecewise-linear path through (times[i], values[i]).
///
/// Construction enforces n >= 2, strictly increasing finite times and finite
/// values; a SampledPath is immutable afterwards. Every count in the
/// persistence module refers to the PL interpolant, never to the samples
/// alone.
class SampledPath {
public:
    SampledPath(std::vector<double> times, std::vector<double> values);

    /// Uniform grid 0, dt, ..., horizon with the given values.
    static SampledPath uniform(double horizon, std::vector<double> values);

    std::size_t size() const noexcept { return times_.size(); }
    std::span<const double> times() const noexcept { return times_; }
    std::span<const double> values() const noexcept { return values_; }
    double start() const noexcept { return times_.front(); }
    double end() const noexcept { return times_.back(); }

    /// Linear interpolation; exact on grid points. Throws DomainError
    /// outside [start, end].
    double evaluate(double t) const;

    double min_value() const;
    double max_value() const;
    double range() const { return max_value() - min_value(); }

    friend bool operator==(const SampledPath&, const SampledPath&) = default;

private:
    std::vector<double> times_;
    std::vector<double> values_;
};

/// Exact L-infinity distance of two PL paths on the same interval. The
/// difference is PL on the union grid, so its sup sits on a breakpoint.
double sup_distance(const SampledPath& f, const SampledPath& g);

SampledPath negate(const SampledPath& f);

/// Same values on a new strictly increasing grid of the same length.
SampledPath reparametrize(const SampledPath& f, std::vector<double> new_times);

/// Every stride-th sample; the last sample is always kept.
SampledPath coarsen(const SampledPath& f, std::size_t stride);

}  // namespace persbar
