#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "persbar/analytic.hpp"
#include "persbar/error.hpp"
#include "persbar/harness.hpp"
#include "persbar/io.hpp"
#include "persbar/stability.hpp"
#include "persbar/svg.hpp"

namespace persbar {

namespace {

// Clock [X]_t when X is a time change of a driftless Brownian motion.
std::optional<double> bm_clock(const ProcessSpec& s) {
    switch (s.family) {
        case Family::bm:
            return s.t;
        case Family::drift_bm:
            return s.mu == 0.0 ? std::optional<double>(s.t) : std::nullopt;
        case Family::ito_constant:
            return s.mu == 0.0 && s.sigma > 0 ? std::optional<double>(s.sigma * s.sigma * s.t) : std::nullopt;
        case Family::time_changed_bm:
            return s.qv->values().back() > 0 ? std::optional<double>(s.qv->values().back()) : std::nullopt;
        default:
            return std::nullopt;
    }
}

bool bm_class(const ProcessSpec& s) {
    switch (s.family) {
        case Family::bm:
        case Family::drift_bm:
        case Family::bridge:
        case Family::ito_constant:
        case Family::ou:
        case Family::time_changed_bm:
            return true;
        default:
            return false;
    }
}

bool strong_markov(const ProcessSpec& s) {
    switch (s.family) {
        case Family::bm:
        case Family::drift_bm:
        case Family::ito_constant:
        case Family::ou:
        case Family::rademacher:
            return true;
        default:
            return false;
    }
}

MCResult fixed(double v, const ExperimentConfig& c) {
    MCResult r;
    r.mean = r.ci_lo = r.ci_hi = v;
    r.trials = 0;
    r.seed = Seed{c.seed};
    r.spec = c.process.fingerprint();
    return r;
}

MCResult proportion(double p, std::size_t n, const ExperimentConfig& c) {
    MCResult r = fixed(p, c);
    r.trials = n;
    r.std_error = std::sqrt(p * (1 - p) / static_cast<double>(n));
    r.ci_lo = p - 1.96 * r.std_error;
    r.ci_hi = p + 1.96 * r.std_error;
    return r;
}

double expected_local_time(const ProcessSpec& s, double x) {
    auto density = [&s](double y, double u) {
        if (s.family == Family::time_changed_bm) return analytic::gauss_density(y, s.qv->evaluate(u));
        const double scale = s.family == Family::ito_constant ? s.sigma * s.sigma : 1.0;
        return analytic::gauss_density(y, scale * u);
    };
    if (s.family == Family::time_changed_bm) return analytic::expected_local_time_ito(x, *s.qv, density);
    const double scale = s.family == Family::ito_constant ? s.sigma * s.sigma : 1.0;
    return analytic::expected_local_time_ito(x, SampledPath({0.0, s.t}, {0.0, scale * s.t}), density);
}

struct Runner {
    const ExperimentConfig& c;
    unsigned workers;
    RunOutcome out;
    Plot plot;
    std::vector<std::string> trial_csv;  // stability per-trial rows
    Seed seed{c.seed};

    void add(std::string stat, double p1, double p2, MCResult r) {
        r.spec = c.process.fingerprint();
        out.rows.push_back({std::move(stat), p1, p2, std::move(r)});
    }

    void check(bool ok, const std::string& note) {
        out.is_check = true;
        out.passed = out.passed && ok;
        out.notes.push_back(std::string(ok ? "PASS " : "FAIL ") + note);
    }

    void points(const std::string& label, const std::vector<double>& x, const std::vector<MCResult>& r) {
        PlotSeries s;
        s.label = label;
        s.x = x;
        for (const MCResult& m : r) {
            s.y.push_back(m.mean);
            s.err.push_back(1.96 * m.std_error);
        }
        plot.series.push_back(std::move(s));
    }

    template <class F>
    void curve(const std::string& label, double lo, double hi, F f) {
        PlotSeries s;
        s.label = label;
        s.line = true;
        const int m = 80;
        for (int i = 0; i <= m; ++i) {
            const double x = lo * std::pow(hi / lo, static_cast<double>(i) / m);
            s.x.push_back(x);
            s.y.push_back(f(x));
        }
        plot.series.push_back(std::move(s));
    }

    double eps_lo() const { return *std::min_element(c.eps.begin(), c.eps.end()); }
    double eps_hi() const { return *std::max_element(c.eps.begin(), c.eps.end()); }

    void expect_neps() {
        const double d = bm_class(c.process) ? discretization_delta(c.process) : 0.0;
        std::vector<Statistic> stats;
        for (double e : c.eps) {
            stats.push_back({StatKind::neps, e, 0});
            if (d > 0) {
                stats.push_back({StatKind::neps, e + 2 * d, 0});
                if (e > 2 * d) stats.push_back({StatKind::neps, e - 2 * d, 0});
            }
        }
        const auto res = mc_expectations(c.process, stats, c.trials, workers, seed);
        std::vector<MCResult> main;
        std::size_t j = 0;
        const auto clock = bm_clock(c.process);
        for (double e : c.eps) {
            add("neps", e, d, res[j]);
            main.push_back(res[j++]);
            if (d > 0) {
                add("neps_env_lo", e + 2 * d, d, res[j++]);
                if (e > 2 * d) add("neps_env_hi", e - 2 * d, d, res[j++]);
            }
            if (clock) add("exact:neps", e, *clock, fixed(analytic::expected_neps_bm(e, *clock), c));
        }
        plot = {"E N^eps: " + family_name(c.process.family), "eps", "E N^eps", {}};
        points("Monte Carlo", c.eps, main);
        if (clock)
            curve("closed form", eps_lo(), eps_hi(), [&](double e) { return analytic::expected_neps_bm(e, *clock); });
    }

    void expect_nrect() {
        const double d = bm_class(c.process) ? discretization_delta(c.process) : 0.0;
        std::vector<Statistic> stats;
        for (double x : c.x)
            for (double e : c.eps) stats.push_back({StatKind::nrect, e, x});
        const auto res = mc_expectations(c.process, stats, c.trials, workers, seed);
        const auto clock = bm_clock(c.process);
        plot = {"E N^{x,x+eps}: " + family_name(c.process.family), "eps", "E N^{x,x+eps}", {}};
        std::size_t j = 0;
        for (double x : c.x) {
            std::vector<MCResult> row;
            for (double e : c.eps) {
                add("nrect", x, e, res[j]);
                row.push_back(res[j++]);
                if (clock && x > 0) {
                    add("exact:nrect", x, e, fixed(analytic::expected_nrect_bm(x, e, *clock).value, c));
                    // bars containing [x - d, x + eps + d] on the path are
                    // bars containing [x, x + eps] on its interpolant
                    if (d > 0 && x > d) {
                        add("exact:nrect_env_lo", x, e,
                            fixed(analytic::expected_nrect_bm(x - d, e + 2 * d, *clock).value, c));
                        if (e > 2 * d)
                            add("exact:nrect_env_hi", x, e,
                                fixed(analytic::expected_nrect_bm(x + d, e - 2 * d, *clock).value, c));
                    }
                }
            }
            points("x = " + format_double(x), c.eps, row);
            if (clock && x > 0)
                curve("closed form, x = " + format_double(x), eps_lo(), eps_hi(),
                      [&](double e) { return analytic::expected_nrect_bm(x, e, *clock).value; });
        }
    }

    void tail() {
        const auto clock = bm_clock(c.process);
        std::vector<MCResult> ratios;
        for (double e : c.eps) {
            const TailRatioResult r = tail_ratio(c.process, e, c.trials, seed, workers);
            add("tail_ratio", e, 0, r.ratio);
            add("range_tail", e, 0, proportion(r.p_hat, c.trials, c));
            ratios.push_back(r.ratio);
            const double p = clock ? analytic::range_tail_bm(e, *clock).value : r.p_hat;
            if (clock) add("exact:range_tail", e, *clock, fixed(p, c));
            const double env = tail_envelope(p);
            add("tail_envelope", e, p, fixed(env, c));
            if (strong_markov(c.process)) {
                const double lo = 1 - 3 * r.ratio.std_error, hi = env + 3 * r.ratio.std_error;
                std::ostringstream note;
                note << "tail ratio eps=" << format_double(e) << ": " << format_double(r.ratio.mean) << " in ["
                     << format_double(lo) << ", " << format_double(hi) << "]";
                check(r.ratio.mean >= lo && r.ratio.mean <= hi, note.str());
            }
        }
        plot = {"E N^eps / P(R >= eps)", "eps", "ratio", {}};
        points("Monte Carlo", c.eps, ratios);
        if (clock)
            curve("upper envelope", eps_lo(), eps_hi(),
                  [&](double e) { return tail_envelope(analytic::range_tail_bm(e, *clock).value); });
    }

    void slope() {
        const SlopeResult s = variation_slope(c.process, c.eps, c.trials, seed, workers);
        std::vector<MCResult> pts;
        for (std::size_t i = 0; i < c.eps.size(); ++i) {
            pts.push_back(s.points[i]);
            add("neps", c.eps[i], 0, s.points[i]);
        }
        MCResult sl = fixed(s.slope, c);
        sl.std_error = s.std_error;
        sl.ci_lo = s.slope - 1.96 * s.std_error;
        sl.ci_hi = s.slope + 1.96 * s.std_error;
        sl.trials = c.trials;
        add("slope", eps_lo(), eps_hi(), sl);
        add("intercept", eps_lo(), eps_hi(), fixed(s.intercept, c));
        out.notes.push_back("slope " + format_double(s.slope) + " +- " + format_double(s.std_error));
        plot = {"log E N^eps against log 1/eps", "eps", "E N^eps", {}};
        points("Monte Carlo", c.eps, pts);
        curve("fit, slope " + format_double(std::round(s.slope * 1000) / 1000), eps_lo(), eps_hi(),
              [&](double e) { return std::exp(s.intercept) * std::pow(1 / e, s.slope); });
    }

    void localtime() {
        std::vector<Statistic> stats;
        for (double x : c.x)
            for (double e : c.eps) stats.push_back({StatKind::local_time_proxy, e, x});
        const auto res = mc_expectations(c.process, stats, c.trials, workers, seed);
        const bool exact = bm_clock(c.process).has_value();
        plot = {"2 eps D(x, eps)", "eps", "local time", {}};
        std::size_t j = 0;
        for (double x : c.x) {
            std::vector<MCResult> row;
            const double el = exact ? expected_local_time(c.process, x) : 0.0;
            for (double e : c.eps) {
                add("local_time", x, e, res[j]);
                row.push_back(res[j++]);
            }
            if (exact) add("exact:local_time", x, 0, fixed(el, c));
            points("x = " + format_double(x), c.eps, row);
            if (exact) curve("E L^x, x = " + format_double(x), eps_lo(), eps_hi(), [&](double) { return el; });
        }
    }

    void qv() {
        std::vector<Statistic> stats;
        for (double e : c.eps) stats.push_back({StatKind::qv_proxy, e, 0});
        const auto res = mc_expectations(c.process, stats, c.trials, workers, seed);
        const auto clock = bm_clock(c.process);
        for (std::size_t i = 0; i < c.eps.size(); ++i) {
            add("qv_proxy", c.eps[i], 0, res[i]);
            if (clock) {
                const double e = c.eps[i];
                add("exact:qv_proxy", e, *clock, fixed(2 * e * e * analytic::expected_neps_bm(e, *clock), c));
            }
        }
        plot = {"2 eps^2 N^eps", "eps", "quadratic variation", {}};
        points("Monte Carlo", c.eps, res);
        if (clock)
            curve("closed form", eps_lo(), eps_hi(),
                  [&](double e) { return 2 * e * e * analytic::expected_neps_bm(e, *clock); });
    }

    void stability() {
        std::vector<MCResult> diffs, omegas;
        trial_csv.push_back("eps,trial,n_approx,n_ref,delta,abs_diff,omega");
        for (double e : c.eps) {
            const ConvergenceReport r =
                convergence_experiment(c.process, *c.reference, e, c.trials, seed, workers, c.p, c.a_grid, c.k_grid);
            add("abs_dn", e, r.delta_hat, r.abs_diff);
            add("omega", e, 2 * r.delta_hat, r.omega);
            MCResult ex = fixed(r.excess, c);
            ex.std_error = r.excess_stderr;
            ex.ci_lo = r.excess - 1.96 * r.excess_stderr;
            ex.ci_hi = r.excess + 1.96 * r.excess_stderr;
            ex.trials = c.trials;
            add("excess", e, r.delta_hat, ex);
            if (r.omega_bm) add("exact:omega_bm", e, 2 * r.delta_hat, fixed(*r.omega_bm, c));
            std::ostringstream note;
            note << "E|dN| eps=" << format_double(e) << ": excess " << format_double(r.excess) << " <= 3 se "
                 << format_double(3 * r.excess_stderr) << (r.vacuous ? " (vacuous, eps <= 2 delta)" : "");
            check(r.pass, note.str());
            for (const TailEnvelopeRow& t : r.tail_rows) {
                add("tail_frequency", t.a, t.k, proportion(t.frequency, c.trials, c));
                add("tail_bound", t.a, t.k, fixed(t.bound, c));
                std::ostringstream tn;
                tn << "P(|dN| >= " << t.k << ") eps=" << format_double(e) << " a=" << format_double(t.a) << ": "
                   << format_double(t.frequency) << " <= " << format_double(t.bound);
                check(t.pass, tn.str());
            }
            for (const ConvergenceTrial& t : r.trials) {
                std::ostringstream row;
                row << format_double(e) << "," << t.trial << "," << format_double(t.n_approx) << ","
                    << format_double(t.n_ref) << "," << format_double(t.delta) << "," << format_double(t.abs_diff)
                    << "," << format_double(t.omega);
                trial_csv.push_back(row.str());
            }
            std::ostringstream sum;
            sum << format_double(e) << ",summary," << format_double(r.abs_diff.mean) << ","
                << format_double(r.omega.mean) << "," << format_double(r.delta_hat) << ","
                << format_double(r.excess) << "," << format_double(r.excess_stderr);
            trial_csv.push_back(sum.str());
            diffs.push_back(r.abs_diff);
            omegas.push_back(r.omega);
        }
        plot = {"E|N^eps_approx - N^eps_ref| against omega(2 delta)", "eps", "count difference", {}};
        points("E|dN|", c.eps, diffs);
        points("omega(2 delta)", c.eps, omegas);
    }

    void moment_bound() {
        plot = {"P(N^eps >= k) against p^(2k-2)", "k", "probability", {}};
        for (double e : c.eps) {
            const MomentBoundReport r = moment_bound_check(c.process, e, c.trials, seed, workers);
            add("range_tail", e, 0, proportion(r.p_hat, c.trials, c));
            std::vector<double> ks;
            std::vector<MCResult> surv;
            PlotSeries env;
            env.label = "p^(2k-2), eps = " + format_double(e);
            env.line = true;
            for (const MomentRow& row : r.rows) {
                add("survival", e, row.k, proportion(row.survival, c.trials, c));
                add("envelope", e, row.k, fixed(row.envelope, c));
                ks.push_back(row.k);
                surv.push_back(proportion(row.survival, c.trials, c));
                env.x.push_back(row.k);
                env.y.push_back(row.envelope);
                std::ostringstream note;
                note << "P(N >= " << row.k << ") eps=" << format_double(e) << ": " << format_double(row.survival)
                     << " <= " << format_double(row.bound);
                check(row.pass, note.str());
            }
            if (r.rows.empty()) check(true, "eps=" + format_double(e) + ": no k with 30 hits, vacuous");
            points("survival, eps = " + format_double(e), ks, surv);
            plot.series.push_back(std::move(env));
        }
    }

    void baryshnikov() {
        std::vector<Statistic> stats;
        for (double x : c.x)
            for (double e : c.eps) stats.push_back({StatKind::nrect_finite, e, x});
        const auto res = mc_expectations(c.process, stats, c.trials, workers, seed);
        const double mu = c.process.mu;
        plot = {"finite bars over a band, drift " + format_double(mu), "eps", "E N^{x,x+eps}", {}};
        std::size_t j = 0;
        for (double x : c.x) {
            std::vector<MCResult> row;
            for (double e : c.eps) {
                const MCResult& m = res[j++];
                const double exact = analytic::baryshnikov(mu, e);
                add("nrect_finite", x, e, m);
                add("exact:baryshnikov", mu, e, fixed(exact, c));
                row.push_back(m);
                std::ostringstream note;
                note << "x=" << format_double(x) << " eps=" << format_double(e) << ": " << format_double(m.mean)
                     << " vs " << format_double(exact) << " rel " << format_double(std::abs(m.mean / exact - 1));
                check(std::abs(m.mean - exact) <= c.rel_tol * exact, note.str());
            }
            points("x = " + format_double(x), c.eps, row);
        }
        curve("1/(exp(2 mu eps) - 1)", eps_lo(), eps_hi(), [&](double e) { return analytic::baryshnikov(mu, e); });
    }
};

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw ConfigError("output.dir", "cannot write '" + p.string() + "'");
    os << text;
}

}  // namespace

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    os << "statistic,param1,param2,mean,stderr,ci_lo,ci_hi,trials,seed\n";
    for (const ResultRow& r : rows)
        os << r.statistic << "," << format_double(r.param1) << "," << format_double(r.param2) << ","
           << format_double(r.result.mean) << "," << format_double(r.result.std_error) << ","
           << format_double(r.result.ci_lo) << "," << format_double(r.result.ci_hi) << "," << r.result.trials
           << "," << r.result.seed.master << "\n";
}

RunOutcome run_experiment(const ExperimentConfig& c, unsigned workers) {
    c.validate();
    Runner run{c, workers, {}, {}, {}};
    switch (c.kind) {
        case ExperimentKind::expect_neps: run.expect_neps(); break;
        case ExperimentKind::expect_nrect: run.expect_nrect(); break;
        case ExperimentKind::tail: run.tail(); break;
        case ExperimentKind::slope: run.slope(); break;
        case ExperimentKind::localtime: run.localtime(); break;
        case ExperimentKind::qv: run.qv(); break;
        case ExperimentKind::stability: run.stability(); break;
        case ExperimentKind::moment_bound: run.moment_bound(); break;
        case ExperimentKind::baryshnikov: run.baryshnikov(); break;
    }

    std::filesystem::path dir(c.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("output.dir", "cannot create '" + c.out_dir + "': " + ec.message());
    if (c.format != OutputFormat::svg) {
        std::ostringstream os;
        write_results_csv(os, run.out.rows);
        write_file(dir / (c.name + ".csv"), os.str());
        run.out.files.push_back((dir / (c.name + ".csv")).string());
        if (!run.trial_csv.empty()) {
            std::string text;
            for (const std::string& line : run.trial_csv) text += line + "\n";
            write_file(dir / (c.name + "_trials.csv"), text);
            run.out.files.push_back((dir / (c.name + "_trials.csv")).string());
        }
    }
    if (c.format != OutputFormat::csv) {
        write_file(dir / (c.name + ".svg"), render_loglog_svg(run.plot));
        run.out.files.push_back((dir / (c.name + ".svg")).string());
    }
    return run.out;
}

}  // namespace persbar
