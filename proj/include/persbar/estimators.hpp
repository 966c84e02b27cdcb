#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "persbar/persistence.hpp"
#include "persbar/process.hpp"
#include "persbar/random.hpp"

namespace persbar {

enum class StatKind {
    neps,              // N^eps
    nrect,             // N^{x, x+eps}, all bars
    nrect_finite,      // N^{x, x+eps} without the capped essential bar
    range_indicator,   // 1{R >= eps}
    trimmed,           // trimmed-tree length
    qv_proxy,          // 2 eps^2 N^eps
    local_time_proxy,  // 2 eps D(x, eps)
};

struct Statistic {
    StatKind kind = StatKind::neps;
    double eps = 0.0;
    double x = 0.0;

    std::string name() const;
    /// Throws DomainError for eps out of range for the kind.
    void validate() const;
};

StatKind parse_stat_kind(const std::string& name);

/// Value of one statistic on one path. `bc` may be null when the statistic
/// can be read from a crossing scan.
double evaluate(const Statistic& stat, const SampledPath& path, const Barcode* bc = nullptr);

struct MCResult {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t trials = 0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    Seed seed;
    std::string spec;
};

/// Mean, sample-std / sqrt(n) and the 1.96 interval, in index order.
MCResult summarize(const std::vector<double>& samples, Seed seed, std::string spec);

/// Per-trial values: result[s][trial] for statistic s. One path per trial
/// feeds every statistic. Bitwise independent of `workers`.
std::vector<std::vector<double>> mc_samples(const ProcessSpec& spec, const std::vector<Statistic>& stats,
                                            std::size_t trials, unsigned workers, Seed seed);

MCResult mc_expectation(const ProcessSpec& spec, const Statistic& stat, std::size_t trials, unsigned workers,
                        Seed seed);
std::vector<MCResult> mc_expectations(const ProcessSpec& spec, const std::vector<Statistic>& stats,
                                      std::size_t trials, unsigned workers, Seed seed);

/// 2 eps D: local time at x from downcrossings of [x, x+eps].
double local_time_estimate(const SampledPath& path, double x, double eps);
/// 2 eps^2 N^eps.
double qv_estimate_from_bars(const SampledPath& path, double eps);

/// Expected sup-error of the PL interpolant of a BM-class path on n steps of
/// size dt: sqrt(dt log n).
double discretization_delta(const ProcessSpec& spec);

struct SlopeResult {
    double slope = 0.0;
    double std_error = 0.0;  // bootstrap, 200 resamples
    double intercept = 0.0;
    std::vector<double> eps;
    std::vector<double> means;
    std::vector<MCResult> points;  // E N^eps per grid value
};

/// Least-squares slope of log E N^eps against log(1/eps) on a geometric grid
/// of at least 4 points.
SlopeResult variation_slope(const ProcessSpec& spec, const std::vector<double>& eps_grid, std::size_t trials,
                            Seed seed, unsigned workers = 1);

struct TailRatioResult {
    MCResult ratio;        // E N^eps / P(R >= eps), delta-method stderr
    double p_hat = 0.0;    // P(R >= eps)
    std::size_t hits = 0;  // trials with R >= eps
    double mean_count = 0.0;
};

/// Upper envelope 1 + p/(1-p^2) of the ratio for a Markov process with
/// P(R >= eps) = p.
double tail_envelope(double p);

/// Throws InsufficientDataError with fewer than 100 range exceedances.
TailRatioResult tail_ratio(const ProcessSpec& spec, double eps, std::size_t trials, Seed seed,
                           unsigned workers = 1);

struct MomentRow {
    int k = 0;
    std::size_t hits = 0;  // trials with N^eps >= k
    double survival = 0.0;
    double envelope = 0.0;  // p_hat^{2k-2}
    double bound = 0.0;     // envelope + 3 binomial stderr
    double tightness = 0.0; // survival / envelope
    bool pass = false;
};

struct MomentBoundReport {
    double eps = 0.0;
    double p_hat = 0.0;
    std::size_t trials = 0;
    std::vector<MomentRow> rows;  // k >= 2 with at least 30 hits
    bool pass = true;
};

MomentBoundReport moment_bound_check(const ProcessSpec& spec, double eps, std::size_t trials, Seed seed,
                                     unsigned workers = 1);

}  // namespace persbar
