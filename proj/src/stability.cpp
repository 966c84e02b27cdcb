#include "persbar/stability.hpp"

#include <cmath>

#include "persbar/analytic.hpp"
#include "persbar/error.hpp"
#include "persbar/parallel.hpp"

namespace persbar {

namespace {

bool brownian_reference(const ProcessSpec& s) {
    if (s.family == Family::levy) return true;
    return s.family == Family::bm && s.t == 1.0;
}

std::size_t count_at(const Barcode& bc, double eps) { return eps > 0 ? count_eps(bc, eps) : bc.total_count(); }

}  // namespace

StabilityReport stability_bound_check(const SampledPath& f, const SampledPath& g, double eps) {
    StabilityReport r;
    r.delta = sup_distance(f, g);
    r.eps = eps;
    if (!(eps > 2.0 * r.delta))
        throw DomainError("stability_bound_check: eps must exceed 2 * sup distance");
    const Barcode bf = barcode(f);
    r.n_f = count_eps(bf, eps);
    r.n_g = count_eps_crossings(g, eps);
    r.n_f_upper = count_eps(bf, eps - 2.0 * r.delta);
    r.n_f_lower = count_eps(bf, eps + 2.0 * r.delta);
    r.lhs = r.n_g > r.n_f ? r.n_g - r.n_f : r.n_f - r.n_g;
    r.rhs = r.n_f_upper - r.n_f_lower;
    r.pass = r.lhs <= r.rhs;
    r.bracketed = r.n_f_lower <= r.n_g && r.n_g <= r.n_f_upper;
    return r;
}

OmegaResult modulus_omega(const ProcessSpec& spec, double eps, double delta, std::size_t trials, Seed seed,
                          unsigned workers) {
    if (!(eps > delta && delta > 0)) throw DomainError("modulus_omega: need eps > delta > 0");
    const std::vector<Statistic> stats = {{StatKind::neps, eps - delta, 0.0}, {StatKind::neps, eps + delta, 0.0}};
    const auto samples = mc_samples(spec, stats, trials, workers, seed);
    std::vector<double> diff(trials);
    for (std::size_t i = 0; i < trials; ++i) diff[i] = samples[0][i] - samples[1][i];
    OmegaResult res{summarize(diff, seed, spec.fingerprint()), std::nullopt};
    if (spec.family == Family::bm) res.exact = analytic::modulus_omega_bm(eps, delta, spec.t);
    return res;
}

ConvergenceReport convergence_experiment(const ProcessSpec& approx, const ProcessSpec& reference, double eps,
                                         std::size_t trials, Seed seed, unsigned workers, double p,
                                         const std::vector<double>& a_grid, const std::vector<int>& k_grid) {
    if (!(eps > 0)) throw DomainError("convergence_experiment: eps must be > 0");
    if (trials < 2) throw DomainError("convergence_experiment: trials must be >= 2");
    ConvergenceReport rep;
    rep.eps = eps;
    rep.trials.resize(trials);
    parallel_for(trials, workers, [&](std::size_t i) {
        auto [xn, x] = coupled_pair(approx, reference, seed, i);
        auto& row = rep.trials[i];
        row.trial = i;
        row.n_approx = static_cast<double>(count_eps_crossings(xn, eps));
        row.n_ref = static_cast<double>(count_eps_crossings(x, eps));
        row.delta = sup_distance(xn, x);
        row.abs_diff = std::abs(row.n_approx - row.n_ref);
    });
    double dsum = 0.0;
    for (const auto& row : rep.trials) dsum += row.delta;
    rep.delta_hat = dsum / static_cast<double>(trials);
    const double lo = eps - 2.0 * rep.delta_hat, hi = eps + 2.0 * rep.delta_hat;
    const std::string fp = approx.fingerprint() + "|" + reference.fingerprint();
    if (!(lo > 0)) {
        // N^{eps'} of the limit is infinite for eps' <= 0, so is omega.
        std::vector<double> diffs(trials);
        for (std::size_t i = 0; i < trials; ++i) {
            diffs[i] = rep.trials[i].abs_diff;
            rep.trials[i].omega = INFINITY;
        }
        rep.abs_diff = summarize(diffs, seed, fp);
        rep.omega = rep.abs_diff;
        rep.omega.mean = rep.omega.ci_lo = rep.omega.ci_hi = INFINITY;
        rep.omega.std_error = 0.0;
        rep.excess = -INFINITY;
        rep.vacuous = true;
        rep.pass = true;
        return rep;
    }

    parallel_for(trials, workers, [&](std::size_t i) {
        auto pair = coupled_pair(approx, reference, seed, i);
        const Barcode bc = barcode(pair.second);
        rep.trials[i].omega = static_cast<double>(count_at(bc, lo)) - static_cast<double>(count_at(bc, hi));
    });

    std::vector<double> diffs(trials), omegas(trials), excess(trials);
    for (std::size_t i = 0; i < trials; ++i) {
        diffs[i] = rep.trials[i].abs_diff;
        omegas[i] = rep.trials[i].omega;
        excess[i] = diffs[i] - omegas[i];
    }
    rep.abs_diff = summarize(diffs, seed, fp);
    rep.omega = summarize(omegas, seed, fp);
    const MCResult ex = summarize(excess, seed, fp);
    rep.excess = ex.mean;
    rep.excess_stderr = ex.std_error;
    rep.pass = ex.mean <= 3.0 * ex.std_error;

    if (brownian_reference(reference)) {
        const double t = reference.family == Family::levy ? 1.0 : reference.t;
        rep.omega_bm = analytic::modulus_omega_bm(eps, 2.0 * rep.delta_hat, t);
        for (double a : a_grid) {
            const double d = 2.0 * a * rep.delta_hat;
            if (!(eps > d)) continue;
            const double w = analytic::modulus_omega_bm(eps, d, t);
            for (int k : k_grid) {
                TailEnvelopeRow row;
                row.a = a;
                row.k = k;
                std::size_t hits = 0;
                for (double v : diffs) hits += v >= k;
                row.frequency = static_cast<double>(hits) / static_cast<double>(trials);
                row.bound = w / k + std::pow(a, -p);
                row.pass = row.frequency <= row.bound;
                rep.tail_rows.push_back(row);
            }
        }
    }
    return rep;
}

TrendReport empirical_bridge_trend(double eps, const std::vector<std::size_t>& ns, std::size_t grid,
                                   std::size_t trials, std::size_t bridge_trials, Seed seed, unsigned workers) {
    if (ns.size() < 2) throw DomainError("empirical_bridge_trend: need at least two sample sizes");
    TrendReport rep;
    rep.eps = eps;
    ProcessSpec bridge;
    bridge.family = Family::bridge;
    bridge.n_steps = grid;
    const Statistic stat{StatKind::neps, eps, 0.0};
    // The bridge reads normals and the empirical processes read uniforms from
    // the same Philox words under one key; a derived master keeps them apart.
    rep.bridge = mc_expectation(bridge, stat, bridge_trials, workers, Seed{splitmix64(seed.master)});
    for (std::size_t n : ns) {
        ProcessSpec emp;
        emp.family = Family::empirical;
        emp.n = n;
        emp.n_steps = grid;
        TrendRow row;
        row.n = n;
        row.estimate = mc_expectation(emp, stat, trials, workers, seed);
        row.diff = row.estimate.mean - rep.bridge.mean;
        row.diff_se = std::hypot(row.estimate.std_error, rep.bridge.std_error);
        rep.rows.push_back(row);
    }
    rep.monotone = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        const auto& a = rep.rows[i - 1];
        const auto& b = rep.rows[i];
        const double slack = 1.96 * std::hypot(a.estimate.std_error, b.estimate.std_error);
        rep.monotone = rep.monotone && std::abs(b.diff) <= std::abs(a.diff) + slack;
    }
    rep.closer = std::abs(rep.rows.back().diff) < std::abs(rep.rows.front().diff);
    return rep;
}

}  // namespace persbar
