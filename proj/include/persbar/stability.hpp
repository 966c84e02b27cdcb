#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "persbar/estimators.hpp"

namespace persbar {

struct StabilityReport {
    double delta = 0.0;
    double eps = 0.0;
    std::size_t n_f = 0;
    std::size_t n_g = 0;
    std::size_t n_f_upper = 0;  // N_f^{eps - 2 delta}
    std::size_t n_f_lower = 0;  // N_f^{eps + 2 delta}
    std::size_t lhs = 0;        // |N_g - N_f|
    std::size_t rhs = 0;        // N_f^{eps-2delta} - N_f^{eps+2delta}
    bool pass = false;          // lhs <= rhs
    bool bracketed = false;     // N_f^{eps+2delta} <= N_g <= N_f^{eps-2delta}
};

/// Exact counts for one pair. Throws DomainError unless eps > 2 sup|f - g|.
StabilityReport stability_bound_check(const SampledPath& f, const SampledPath& g, double eps);

struct OmegaResult {
    MCResult mc;                 // E[N^{eps-delta} - N^{eps+delta}]
    std::optional<double> exact; // Brownian motion only
};

OmegaResult modulus_omega(const ProcessSpec& spec, double eps, double delta, std::size_t trials, Seed seed,
                          unsigned workers = 1);

struct ConvergenceTrial {
    std::size_t trial = 0;
    double n_approx = 0;  // N^eps of the first path of the pair
    double n_ref = 0;     // N^eps of the second path
    double delta = 0;     // sup distance of the pair
    double abs_diff = 0;
    double omega = 0;     // N_ref^{eps - 2 delta_hat} - N_ref^{eps + 2 delta_hat}
};

struct TailEnvelopeRow {
    double a = 0;
    int k = 0;
    double frequency = 0;  // P(|dN| >= k)
    double bound = 0;      // omega(2 a delta_hat) / k + a^{-p}
    bool pass = false;
};

struct ConvergenceReport {
    double eps = 0.0;
    double delta_hat = 0.0;          // mean sup distance
    MCResult abs_diff;               // E|dN|
    MCResult omega;                  // omega_eps(2 delta_hat) of the reference process
    std::optional<double> omega_bm;  // same from the Brownian series
    double excess = 0.0;             // mean(|dN| - omega)
    double excess_stderr = 0.0;
    bool pass = false;               // excess <= 3 stderr
    bool vacuous = false;            // eps <= 2 delta_hat: omega is infinite
    std::vector<TailEnvelopeRow> tail_rows;
    std::vector<ConvergenceTrial> trials;
};

/// E|N^eps_{X_n} - N^eps_X| over coupled pairs against omega_eps(2 delta_hat).
/// The reference modulus is estimated on the same reference paths (paired),
/// in a second deterministic pass once delta_hat is known. Tail envelopes
/// use the Brownian omega when the reference is Brownian on [0, 1]. When
/// eps <= 2 delta_hat the bound is vacuous: omega is infinite, pass is true
/// and no tail rows are produced.
ConvergenceReport convergence_experiment(const ProcessSpec& approx, const ProcessSpec& reference, double eps,
                                         std::size_t trials, Seed seed, unsigned workers = 1, double p = 2.0,
                                         const std::vector<double>& a_grid = {1.0, 2.0, 4.0},
                                         const std::vector<int>& k_grid = {1, 2, 3});

struct TrendRow {
    std::size_t n = 0;
    MCResult estimate;
    double diff = 0.0;     // estimate - bridge
    double diff_se = 0.0;
};

struct TrendReport {
    double eps = 0.0;
    MCResult bridge;
    std::vector<TrendRow> rows;
    bool monotone = false;  // |diff| nonincreasing within 1.96 combined se
    bool closer = false;    // |diff| at the largest n below that at the smallest
};

/// Distributional approach of E N^eps for empirical processes of size n to
/// the Brownian bridge (no coupling). Each process runs on `grid` steps.
TrendReport empirical_bridge_trend(double eps, const std::vector<std::size_t>& ns, std::size_t grid,
                                   std::size_t trials, std::size_t bridge_trials, Seed seed, unsigned workers = 1);

}  // namespace persbar
