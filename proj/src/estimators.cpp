#include "persbar/estimators.hpp"

#include <cmath>
#include <memory>
#include <numeric>

#include "persbar/error.hpp"
#include "persbar/io.hpp"
#include "persbar/parallel.hpp"

namespace persbar {

namespace {

const std::pair<StatKind, const char*> stat_names[] = {
    {StatKind::neps, "neps"},
    {StatKind::nrect, "nrect"},
    {StatKind::nrect_finite, "nrect_finite"},
    {StatKind::range_indicator, "range_indicator"},
    {StatKind::trimmed, "trimmed"},
    {StatKind::qv_proxy, "qv_proxy"},
    {StatKind::local_time_proxy, "local_time_proxy"},
};

bool needs_barcode(StatKind k) { return k == StatKind::trimmed; }

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return s / static_cast<double>(v.size() - 1);
}

struct Fit {
    double slope, intercept;
};

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double mx = mean_of(x), my = mean_of(y);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

}  // namespace

std::string Statistic::name() const {
    for (auto& [k, n] : stat_names)
        if (k == kind) return n;
    throw InternalError("Statistic::name: unknown kind");
}

StatKind parse_stat_kind(const std::string& name) {
    for (auto& [k, n] : stat_names)
        if (name == n) return k;
    throw DomainError("unknown statistic '" + name + "'");
}

void Statistic::validate() const {
    if (!std::isfinite(x)) throw DomainError(name() + ": x must be finite");
    if (kind == StatKind::trimmed) {
        if (!(eps >= 0)) throw DomainError("trimmed: eps must be >= 0");
    } else if (!(eps > 0) || !std::isfinite(eps)) {
        throw DomainError(name() + ": eps must be > 0");
    }
}

double evaluate(const Statistic& stat, const SampledPath& path, const Barcode* bc) {
    switch (stat.kind) {
        case StatKind::neps:
            return static_cast<double>(bc ? count_eps(*bc, stat.eps) : count_eps_crossings(path, stat.eps));
        case StatKind::nrect:
            return static_cast<double>(count_rect(path, stat.x, stat.eps));
        case StatKind::nrect_finite: {
            const double n = static_cast<double>(count_rect(path, stat.x, stat.eps));
            const bool essential = path.min_value() <= stat.x && path.max_value() >= stat.x + stat.eps;
            return n - (essential ? 1.0 : 0.0);
        }
        case StatKind::range_indicator:
            return path.max_value() - path.min_value() >= stat.eps ? 1.0 : 0.0;
        case StatKind::trimmed: {
            if (bc) return trimmed_length(*bc, stat.eps);
            return trimmed_length(barcode(path), stat.eps);
        }
        case StatKind::qv_proxy:
            return qv_estimate_from_bars(path, stat.eps);
        case StatKind::local_time_proxy:
            return local_time_estimate(path, stat.x, stat.eps);
    }
    throw InternalError("evaluate: unhandled statistic");
}

MCResult summarize(const std::vector<double>& samples, Seed seed, std::string spec) {
    MCResult r;
    r.trials = samples.size();
    r.mean = mean_of(samples);
    r.std_error = std::sqrt(variance_of(samples, r.mean) / static_cast<double>(samples.size()));
    r.ci_lo = r.mean - 1.96 * r.std_error;
    r.ci_hi = r.mean + 1.96 * r.std_error;
    r.seed = seed;
    r.spec = std::move(spec);
    return r;
}

std::vector<std::vector<double>> mc_samples(const ProcessSpec& spec, const std::vector<Statistic>& stats,
                                            std::size_t trials, unsigned workers, Seed seed) {
    if (trials < 2) throw DomainError("mc: trials must be >= 2");
    spec.validate();
    for (const auto& s : stats) s.validate();
    std::size_t scan_stats = 0;
    bool barcode_needed = false;
    for (const auto& s : stats) {
        barcode_needed |= needs_barcode(s.kind);
        scan_stats += s.kind == StatKind::neps;
    }
    // Several N^eps thresholds are cheaper off one barcode than one scan each.
    barcode_needed |= scan_stats >= 3;

    std::vector<std::vector<double>> out(stats.size(), std::vector<double>(trials));
    parallel_for(trials, workers, [&](std::size_t trial) {
        const SampledPath path = sample(spec, seed, trial);
        std::unique_ptr<Barcode> bc;
        if (barcode_needed) bc = std::make_unique<Barcode>(barcode(path));
        for (std::size_t s = 0; s < stats.size(); ++s) out[s][trial] = evaluate(stats[s], path, bc.get());
    });
    return out;
}

std::vector<MCResult> mc_expectations(const ProcessSpec& spec, const std::vector<Statistic>& stats,
                                      std::size_t trials, unsigned workers, Seed seed) {
    auto samples = mc_samples(spec, stats, trials, workers, seed);
    std::vector<MCResult> out;
    out.reserve(stats.size());
    for (auto& s : samples) out.push_back(summarize(s, seed, spec.fingerprint()));
    return out;
}

MCResult mc_expectation(const ProcessSpec& spec, const Statistic& stat, std::size_t trials, unsigned workers,
                        Seed seed) {
    return mc_expectations(spec, {stat}, trials, workers, seed).front();
}

double local_time_estimate(const SampledPath& path, double x, double eps) {
    return 2.0 * eps * static_cast<double>(crossings(path, x, eps).down);
}

double qv_estimate_from_bars(const SampledPath& path, double eps) {
    return 2.0 * eps * eps * static_cast<double>(count_eps_crossings(path, eps));
}

double discretization_delta(const ProcessSpec& spec) {
    double horizon = spec.t;
    std::size_t steps = spec.n_steps;
    if (spec.family == Family::bridge || spec.family == Family::levy || spec.family == Family::empirical)
        horizon = 1.0;
    if (spec.family == Family::rademacher && spec.n) steps = spec.n;
    if (spec.family == Family::time_changed_bm && spec.qv) horizon = spec.qv->values().back();
    double scale = horizon / static_cast<double>(steps);
    if (spec.family == Family::ito_constant || spec.family == Family::ou) scale *= spec.sigma * spec.sigma;
    return std::sqrt(scale * std::log(static_cast<double>(steps)));
}

SlopeResult variation_slope(const ProcessSpec& spec, const std::vector<double>& eps_grid, std::size_t trials,
                            Seed seed, unsigned workers) {
    if (eps_grid.size() < 4) throw DomainError("variation_slope: need at least 4 eps values");
    for (double e : eps_grid)
        if (!(e > 0)) throw DomainError("variation_slope: eps values must be > 0");
    const double ratio = eps_grid[1] / eps_grid[0];
    if (ratio == 1.0) throw DomainError("variation_slope: eps grid is degenerate");
    for (std::size_t i = 1; i < eps_grid.size(); ++i)
        if (std::abs(eps_grid[i] / eps_grid[i - 1] - ratio) > 1e-9 * ratio)
            throw DomainError("variation_slope: eps grid must be geometric");

    std::vector<Statistic> stats;
    for (double e : eps_grid) stats.push_back({StatKind::neps, e, 0.0});
    const auto samples = mc_samples(spec, stats, trials, workers, seed);

    std::vector<double> lx(eps_grid.size()), ly(eps_grid.size());
    SlopeResult res;
    res.eps = eps_grid;
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        lx[i] = std::log(1.0 / eps_grid[i]);
        res.points.push_back(summarize(samples[i], seed, spec.fingerprint()));
        res.means.push_back(res.points[i].mean);
        if (!(res.means[i] > 0)) throw DomainError("variation_slope: E N^eps is 0 at some eps");
        ly[i] = std::log(res.means[i]);
    }
    const Fit fit = least_squares(lx, ly);
    res.slope = fit.slope;
    res.intercept = fit.intercept;

    TrialStream boot(seed, 0, StreamPurpose::bootstrap);
    constexpr int resamples = 200;
    std::vector<double> slopes;
    slopes.reserve(resamples);
    std::vector<std::size_t> pick(trials);
    for (int b = 0; b < resamples; ++b) {
        for (auto& p : pick) p = boot.below(trials);
        std::vector<double> by(eps_grid.size());
        for (std::size_t i = 0; i < eps_grid.size(); ++i) {
            double s = 0.0;
            for (std::size_t p : pick) s += samples[i][p];
            by[i] = std::log(s / static_cast<double>(trials));
        }
        slopes.push_back(least_squares(lx, by).slope);
    }
    res.std_error = std::sqrt(variance_of(slopes, mean_of(slopes)));
    return res;
}

double tail_envelope(double p) { return 1.0 + p / (1.0 - p * p); }

TailRatioResult tail_ratio(const ProcessSpec& spec, double eps, std::size_t trials, Seed seed, unsigned workers) {
    const std::vector<Statistic> stats = {{StatKind::neps, eps, 0.0}, {StatKind::range_indicator, eps, 0.0}};
    const auto samples = mc_samples(spec, stats, trials, workers, seed);
    const auto& n = samples[0];
    const auto& hit = samples[1];
    TailRatioResult res;
    res.hits = static_cast<std::size_t>(std::accumulate(hit.begin(), hit.end(), 0.0));
    if (res.hits < 100)
        throw InsufficientDataError("tail_ratio: only " + std::to_string(res.hits) +
                                    " range exceedances, need 100");
    const double mn = mean_of(n), mi = mean_of(hit);
    const double r = mn / mi;
    double vn = 0.0, vi = 0.0, cov = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
        vn += (n[i] - mn) * (n[i] - mn);
        vi += (hit[i] - mi) * (hit[i] - mi);
        cov += (n[i] - mn) * (hit[i] - mi);
    }
    const double denom = static_cast<double>(trials - 1);
    vn /= denom;
    vi /= denom;
    cov /= denom;
    const double var_r = (vn - 2.0 * r * cov + r * r * vi) / (mi * mi * static_cast<double>(trials));
    res.p_hat = mi;
    res.mean_count = mn;
    res.ratio.mean = r;
    res.ratio.std_error = std::sqrt(std::max(var_r, 0.0));
    res.ratio.trials = trials;
    res.ratio.ci_lo = r - 1.96 * res.ratio.std_error;
    res.ratio.ci_hi = r + 1.96 * res.ratio.std_error;
    res.ratio.seed = seed;
    res.ratio.spec = spec.fingerprint();
    return res;
}

MomentBoundReport moment_bound_check(const ProcessSpec& spec, double eps, std::size_t trials, Seed seed,
                                     unsigned workers) {
    const std::vector<Statistic> stats = {{StatKind::neps, eps, 0.0}, {StatKind::range_indicator, eps, 0.0}};
    const auto samples = mc_samples(spec, stats, trials, workers, seed);
    MomentBoundReport rep;
    rep.eps = eps;
    rep.trials = trials;
    rep.p_hat = mean_of(samples[1]);
    const double nt = static_cast<double>(trials);
    for (int k = 2;; ++k) {
        std::size_t hits = 0;
        for (double v : samples[0]) hits += v >= k;
        if (hits < 30) break;
        MomentRow row;
        row.k = k;
        row.hits = hits;
        row.survival = static_cast<double>(hits) / nt;
        row.envelope = std::pow(rep.p_hat, 2 * k - 2);
        row.bound = row.envelope + 3.0 * std::sqrt(row.survival * (1.0 - row.survival) / nt);
        row.tightness = row.envelope > 0 ? row.survival / row.envelope : 0.0;
        row.pass = row.survival <= row.bound;
        rep.pass = rep.pass && row.pass;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace persbar
