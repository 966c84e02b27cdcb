#include "persbar/analytic.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "persbar/error.hpp"

namespace persbar::analytic {

namespace {

using std::numbers::pi;

void require(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}

// Sums term(1), term(2), ... until the next term is below tol relative to
// max(1, |partial|). `warm` is the first index past which terms are known to
// decay, so an early small term does not stop the sum.
template <class Real = double, class Term>
SeriesResult sum_series(const char* name, Term term, double tol, long warm, Real base = 0) {
    Real partial = base;
    Real next = term(1);
    for (long k = 1; k <= term_cap; ++k) {
        if (k > warm && std::abs(next) < tol * std::max(Real(1), std::abs(partial)))
            return {static_cast<double>(partial), k - 1, static_cast<double>(std::abs(next))};
        partial += next;
        next = term(k + 1);
    }
    throw TruncationError(std::string(name) + ": tolerance not reached", static_cast<double>(partial), term_cap);
}

long decay_index(double a) {
    // terms in erfc(k a) decay once k a exceeds ~1
    return static_cast<long>(std::ceil(1.0 / a));
}

}  // namespace

double erfc(double x) { return std::erfc(x); }

double gauss_density(double x, double t) { return std::exp(-x * x / (2.0 * t)) / std::sqrt(2.0 * pi * t); }

SeriesResult expected_neps_bm_large(double eps, double t, double tol) {
    require(eps > 0 && t > 0, "expected_neps_bm_large: eps and t must be > 0");
    const double a = eps / std::sqrt(2.0 * t);
    auto term = [a](long k) {
        const double odd = static_cast<double>(2 * k - 1), kk = static_cast<double>(k);
        return 4.0 * (odd * std::erfc(odd * a) - kk * std::erfc(2.0 * kk * a));
    };
    return sum_series("expected_neps_bm_large", term, tol, decay_index(a));
}

SeriesResult expected_neps_bm_small(double eps, double t, double tol) {
    require(eps > 0 && t > 0, "expected_neps_bm_small: eps and t must be > 0");
    // Near eps/sqrt(t) = 5 the sum cancels down to ~1e-6, so it runs in
    // extended precision.
    using ld = long double;
    const ld e = eps;
    const ld r = ld(t) / (e * e);
    auto term = [r](long k) {
        const ld kk = static_cast<ld>(k);
        const ld sign = (k % 2 == 0) ? 1.0L : -3.0L;  // 2(-1)^k - 1
        const ld pk = std::numbers::pi_v<ld> * std::numbers::pi_v<ld> * kk * kk;
        return 2.0L * sign * std::exp(-pk * r / 2.0L) * r * (1.0L + 1.0L / (pk * r));
    };
    return sum_series<ld>("expected_neps_bm_small", term, tol, 0, r / 2.0L + 2.0L / 3.0L);
}

double expected_neps_bm(double eps, double t, std::optional<double> qv) {
    const double clock = qv ? *qv : t;
    require(eps > 0 && clock > 0, "expected_neps_bm: eps and t must be > 0");
    if (eps / std::sqrt(clock) < 1.0) return expected_neps_bm_small(eps, clock).value;
    return expected_neps_bm_large(eps, clock).value;
}

SeriesResult expected_nrect_bm(double x, double eps, double t, double tol) {
    require(x > 0 && eps > 0 && t > 0, "expected_nrect_bm: x, eps and t must be > 0");
    const double s = std::sqrt(2.0 * t);
    auto term = [=](long k) { return std::erfc((x + static_cast<double>(2 * k - 1) * eps) / s); };
    return sum_series("expected_nrect_bm", term, tol, 0);
}

double zeta_even(int two_n) {
    // B_2 .. B_14
    static const double bernoulli[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6};
    require(two_n >= 2 && two_n <= 14 && two_n % 2 == 0, "zeta_even: argument must be even in [2, 14]");
    const int n = two_n / 2;
    double fact = 1.0;
    for (int i = 2; i <= two_n; ++i) fact *= i;
    const double sign = (n % 2 == 1) ? 1.0 : -1.0;
    return sign * bernoulli[n - 1] * std::pow(2.0 * pi, two_n) / (2.0 * fact);
}

double nrect_asymptotic_coef(int k) {
    require(k >= 0 && k <= 5, "nrect_asymptotic_coef: k must lie in [0, 5]");
    const double sign = (k % 2 == 0) ? -1.0 : 1.0;
    return sign * (std::ldexp(1.0, 2 * k + 1) - 1.0) * zeta_even(2 * k + 2) /
           (std::ldexp(1.0, k) * std::pow(pi, 2 * k + 2));
}

double gauss_density_dt(double x, double t, int k) {
    require(k >= 0 && k <= 6, "gauss_density_dt: k must lie in [0, 6]");
    require(t > 0, "gauss_density_dt: t must be > 0");
    const double z = x / std::sqrt(t);
    double he_prev = 1.0, he = z;  // He_0, He_1
    if (k == 0) return gauss_density(x, t);
    for (int n = 1; n < 2 * k; ++n) {
        const double he_next = z * he - n * he_prev;
        he_prev = he;
        he = he_next;
    }
    return std::pow(2.0 * t, -k) * he * gauss_density(x, t);
}

double expected_nrect_bm_asymptotic(double x, double eps, double t, int K) {
    require(K >= 0 && K <= 6, "expected_nrect_bm_asymptotic: K must lie in [0, 6]");
    require(eps > 0 && t > 0, "expected_nrect_bm_asymptotic: eps and t must be > 0");
    const double ax = std::abs(x);
    const double occupation =
        std::sqrt(2.0 * t / pi) * std::exp(-x * x / (2.0 * t)) - ax * std::erfc(ax / std::sqrt(2.0 * t));
    double value = occupation / (2.0 * eps);
    for (int k = 0; k < K; ++k)
        value += nrect_asymptotic_coef(k) * gauss_density_dt(x, t, k) * std::pow(eps, 2 * k + 1);
    return value;
}

double baryshnikov(double mu, double eps) {
    require(mu > 0 && eps > 0, "baryshnikov: mu and eps must be > 0");
    return 1.0 / std::expm1(2.0 * mu * eps);
}

double baryshnikov_expansion(double mu, double eps) {
    require(mu > 0 && eps > 0, "baryshnikov_expansion: mu and eps must be > 0");
    const double u = mu * eps;
    return 1.0 / (2.0 * u) - 0.5 + u / 6.0;
}

SeriesResult range_tail_bm(double eps, double t, double tol) {
    require(eps > 0 && t > 0, "range_tail_bm: eps and t must be > 0");
    const double a = eps / std::sqrt(2.0 * t);
    auto term = [a](long j) {
        const double odd = static_cast<double>(2 * j - 1), even = static_cast<double>(2 * j);
        return 4.0 * (odd * std::erfc(odd * a) - even * std::erfc(even * a));
    };
    return sum_series("range_tail_bm", term, tol, decay_index(a));
}

double expected_local_time_ito(double x, const SampledPath& qv,
                               const std::function<double(double, double)>& density) {
    auto s = qv.times();
    auto q = qv.values();
    for (std::size_t i = 1; i < q.size(); ++i)
        require(q[i] >= q[i - 1], "expected_local_time_ito: qv must be nondecreasing");
    boost::math::quadrature::tanh_sinh<double> integrator;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const double slope = (q[i + 1] - q[i]) / (s[i + 1] - s[i]);
        if (slope == 0.0) continue;
        auto f = [&](double u) { return density(x, u); };
        total += slope * integrator.integrate(f, s[i], s[i + 1], 1e-12);
    }
    return total;
}

double modulus_omega_bm(double eps, double delta, double t) {
    require(eps > delta && delta >= 0, "modulus_omega_bm: need eps > delta >= 0");
    if (delta == 0) return 0.0;
    return expected_neps_bm(eps - delta, t) - expected_neps_bm(eps + delta, t);
}

}  // namespace persbar::analytic
