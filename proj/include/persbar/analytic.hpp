#pragma once

#include <functional>
#include <optional>

#include "persbar/path.hpp"

namespace persbar::analytic {

struct SeriesResult {
    double value;
    long terms_used;
    double truncation_bound;  // magnitude of the first omitted term
};

inline constexpr double default_tol = 1e-17;
inline constexpr long term_cap = 100000;

double erfc(double x);

/// Gaussian density phi(x, t) = exp(-x^2 / 2t) / sqrt(2 pi t).
double gauss_density(double x, double t);

/// E[N^eps] for Brownian motion on [0, t], large-eps series:
/// 4 sum_k (2k-1) erfc((2k-1)a) - k erfc(2ka), a = eps / sqrt(2t).
SeriesResult expected_neps_bm_large(double eps, double t, double tol = default_tol);

/// Small-eps series: t/2eps^2 + 2/3 + 2 sum_k (2(-1)^k - 1) e^{-pi^2 k^2 t / 2eps^2}
/// (t/eps^2) (1 + eps^2/(pi^2 k^2 t)).
SeriesResult expected_neps_bm_small(double eps, double t, double tol = default_tol);

/// Picks the series by eps / sqrt(t) (small below 1). A continuous local
/// martingale with quadratic variation qv has the same law of N^eps with t
/// replaced by qv.
double expected_neps_bm(double eps, double t, std::optional<double> qv = std::nullopt);

/// E[N^{x, x+eps}] for Brownian motion from 0: sum_k erfc((x + (2k-1)eps) / sqrt(2t)).
SeriesResult expected_nrect_bm(double x, double eps, double t, double tol = default_tol);

/// zeta(2n) for 1 <= n <= 7 from Bernoulli numbers.
double zeta_even(int two_n);

/// Coefficient c_k of eps^{2k+1} d_t^k phi in the small-eps expansion of
/// expected_nrect_bm: (-1)^{k+1} (2^{2k+1} - 1) zeta(2k+2) / (2^k pi^{2k+2}).
double nrect_asymptotic_coef(int k);

/// d^k/dt^k phi(x, t) = 2^{-k} t^{-k} He_{2k}(x / sqrt t) phi(x, t), k <= 6.
double gauss_density_dt(double x, double t, int k);

/// (1/2eps) int_0^t phi(x, s) ds + sum_{k<K} c_k d_t^k phi(x, t) eps^{2k+1}.
/// Throws DomainError for K > 6.
double expected_nrect_bm_asymptotic(double x, double eps, double t, int K);

/// E[N^{x,x+eps}] over the ray for drift mu > 0: 1 / (e^{2 mu eps} - 1).
double baryshnikov(double mu, double eps);
/// 1/(2 mu eps) - 1/2 + mu eps / 6.
double baryshnikov_expansion(double mu, double eps);

/// P(R_t >= eps) for the range of Brownian motion on [0, t]:
/// 4 sum_k (-1)^{k-1} k erfc(k eps / sqrt(2t)), summed in pairs.
SeriesResult range_tail_bm(double eps, double t, double tol = default_tol);

/// E L^x(t) = int phi_X(x, s) d[X]_s for a PL quadratic variation, by
/// tanh-sinh quadrature on each linear piece (abs tol 1e-10).
double expected_local_time_ito(double x, const SampledPath& qv,
                               const std::function<double(double x, double s)>& density);

/// omega_eps(delta) = E N^{eps-delta} - E N^{eps+delta} for Brownian motion.
double modulus_omega_bm(double eps, double delta, double t);

}  // namespace persbar::analytic
