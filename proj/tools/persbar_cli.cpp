#include <malloc.h>

#include <CLI11.hpp>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "persbar/analytic.hpp"
#include "persbar/error.hpp"
#include "persbar/harness.hpp"
#include "persbar/io.hpp"
#include "persbar/parallel.hpp"
#include "persbar/stability.hpp"

using namespace persbar;

namespace {

constexpr int exit_ok = 0, exit_bad_input = 2, exit_check_failed = 3;

const char* csv_help = R"(CSV files (all with a header row):
  path       t,value
  barcode    birth,death,length          (decreasing length)
  diagram    b,d,convention              (superlevel or sublevel)
  results    statistic,param1,param2,mean,stderr,ci_lo,ci_hi,trials,seed
  trials     eps,trial,n_approx,n_ref,delta,abs_diff,omega   (stability experiments;
             one summary row per eps with trial = summary)
  pairs      trial,delta,eps,n_f,n_g,n_f_upper,n_f_lower,lhs,rhs,pass,bracketed
Analytic output: value[,terms_used,truncation_bound]
Worker count: --workers, else PERSBAR_WORKERS, else [experiment] workers, else all cores.
Exit codes: 0 success, 1 series did not converge, 2 bad input or configuration,
            3 statistical check failed or too little data.)";

struct ProcessFlags {
    std::string family = "bm";
    ProcessSpec spec;

    void attach(CLI::App* app) {
        app->add_option("--family", family, "process family")->capture_default_str();
        app->add_option("--t", spec.t, "horizon")->capture_default_str();
        app->add_option("--mu", spec.mu, "drift")->capture_default_str();
        app->add_option("--sigma", spec.sigma, "diffusion coefficient")->capture_default_str();
        app->add_option("--theta", spec.theta, "OU mean reversion")->capture_default_str();
        app->add_option("--hurst", spec.hurst, "FBM index")->capture_default_str();
        app->add_option("--n", spec.n, "walk steps, empirical samples or Levy modes")->capture_default_str();
        app->add_option("--n-steps", spec.n_steps, "grid steps")->capture_default_str();
    }

    ProcessSpec get() {
        spec.family = parse_family(family);
        spec.validate();
        return spec;
    }
};

std::string value_row(double v) { return "value\n" + format_double(v) + "\n"; }

std::string series_row(const analytic::SeriesResult& r) {
    return "value,terms_used,truncation_bound\n" + format_double(r.value) + "," + std::to_string(r.terms_used) + "," +
           format_double(r.truncation_bound) + "\n";
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(out, std::ios::binary);
    if (!os) throw DomainError("cannot write '" + out + "'");
    os << text;
}

SampledPath read_input(const std::string& file) {
    if (!std::filesystem::is_regular_file(file)) throw DomainError("no such file '" + file + "'");
    return read_path_csv_file(file);
}

}  // namespace

int main(int argc, char** argv) {
    // Per-trial path buffers are a few MB; keep them on the heap instead of
    // a fresh mmap per trial.
    mallopt(M_MMAP_THRESHOLD, 32 << 20);
    mallopt(M_TRIM_THRESHOLD, 256 << 20);

    CLI::App app{"Barcodes of sampled paths, their bar counts and Monte Carlo experiments."};
    app.footer(csv_help);
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "sample one path and write it as CSV");
    ProcessFlags sim_proc;
    sim_proc.attach(sim);
    std::uint64_t sim_seed = 1, sim_trial = 0;
    std::string sim_out, sim_config, sim_dir;
    sim->add_option("--seed", sim_seed, "master seed")->capture_default_str();
    sim->add_option("--trial", sim_trial, "trial index (stream)")->capture_default_str();
    sim->add_option("--config", sim_config, "take the process from this experiment config");
    sim->add_option("--out", sim_out, "output file (default stdout)");
    sim->add_option("--out-dir", sim_dir, "write <dir>/path.csv instead");

    // barcode
    auto* bcmd = app.add_subcommand("barcode", "barcode (or diagram) of a path CSV");
    std::string bc_in, bc_out, bc_diagram;
    bcmd->add_option("--in", bc_in, "path CSV")->required();
    bcmd->add_option("--out", bc_out, "output file (default stdout)");
    bcmd->add_option("--diagram", bc_diagram, "write a diagram instead")
        ->check(CLI::IsMember({"superlevel", "sublevel"}));

    // count
    auto* cnt = app.add_subcommand("count", "print N^eps, or N^{x,x+eps} with --x");
    std::string cnt_in;
    double cnt_eps = 0;
    std::optional<double> cnt_x;
    bool cnt_finite = false;
    cnt->add_option("--in", cnt_in, "path CSV")->required();
    cnt->add_option("--eps", cnt_eps, "bar length threshold")->required();
    cnt->add_option("--x", cnt_x, "band bottom");
    cnt->add_flag("--finite", cnt_finite, "with --x, leave out the essential bar");

    // analytic
    auto* ana = app.add_subcommand("analytic", "closed forms for Brownian motion");
    ana->require_subcommand(1);
    double a_eps = 1, a_t = 1, a_x = 1, a_mu = 1, a_sigma = 1, a_delta = 0.1, a_tol = analytic::default_tol;
    int a_k = 2;
    auto* neps = ana->add_subcommand("neps-bm", "E N^eps on [0, t]");
    auto* neps_l = ana->add_subcommand("neps-bm-large", "E N^eps, erfc series");
    auto* neps_s = ana->add_subcommand("neps-bm-small", "E N^eps, theta series");
    auto* nrect = ana->add_subcommand("nrect-bm", "E N^{x,x+eps} on [0, t]");
    auto* nasym = ana->add_subcommand("nrect-asym", "small-eps expansion of E N^{x,x+eps}");
    auto* bary = ana->add_subcommand("baryshnikov", "1/(exp(2 mu eps) - 1)");
    auto* rtail = ana->add_subcommand("range-tail", "P(R_t >= eps)");
    auto* aerfc = ana->add_subcommand("erfc", "complementary error function");
    auto* ltime = ana->add_subcommand("local-time-bm", "E L^x_t of sigma B");
    auto* omega = ana->add_subcommand("omega-bm", "E N^{eps-delta} - E N^{eps+delta}");
    for (auto* s : {neps, neps_l, neps_s, nrect, nasym, rtail, bary, omega})
        s->add_option("--eps", a_eps, "eps")->required();
    for (auto* s : {neps, neps_l, neps_s, nrect, nasym, rtail, ltime, omega})
        s->add_option("--t", a_t, "horizon")->capture_default_str();
    for (auto* s : {neps_l, neps_s, nrect, rtail}) s->add_option("--tol", a_tol, "series tolerance")->capture_default_str();
    for (auto* s : {nrect, nasym, aerfc, ltime}) s->add_option("--x", a_x, "level")->required();
    bary->add_option("--mu", a_mu, "drift")->required();
    ltime->add_option("--sigma", a_sigma, "diffusion coefficient")->capture_default_str();
    nasym->add_option("--K", a_k, "number of correction terms")->capture_default_str();
    omega->add_option("--delta", a_delta, "half width")->required();

    // experiment
    auto* exp = app.add_subcommand("experiment", "run an experiment config");
    std::string ex_config, ex_dir, ex_format;
    std::optional<std::uint64_t> ex_seed;
    std::optional<unsigned> ex_workers;
    exp->add_option("--config", ex_config, "INI experiment file")->required();
    exp->add_option("--seed", ex_seed, "override the master seed");
    exp->add_option("--workers", ex_workers, "worker threads");
    exp->add_option("--out-dir", ex_dir, "override the output directory");
    exp->add_option("--format", ex_format, "csv, svg or both")->check(CLI::IsMember({"csv", "svg", "both"}));

    // stability
    auto* stab = app.add_subcommand("stability", "check N^{eps+2d}_f <= N^eps_g <= N^{eps-2d}_f");
    std::string st_f, st_g, st_dir = ".", st_out;
    double st_eps = 0, st_mult = 4;
    std::size_t st_steps = 100000, st_stride = 100, st_trials = 1000;
    std::uint64_t st_seed = 1;
    std::optional<unsigned> st_workers;
    stab->add_option("--f", st_f, "first path CSV");
    stab->add_option("--g", st_g, "second path CSV");
    stab->add_option("--eps", st_eps, "eps for a pair of files");
    stab->add_option("--n-steps", st_steps, "BM steps of the fine path")->capture_default_str();
    stab->add_option("--stride", st_stride, "coarsening stride")->capture_default_str();
    stab->add_option("--trials", st_trials, "random pairs")->capture_default_str();
    stab->add_option("--eps-mult", st_mult, "eps as a multiple of each pair's sup distance")->capture_default_str();
    stab->add_option("--seed", st_seed, "master seed")->capture_default_str();
    stab->add_option("--workers", st_workers, "worker threads");
    stab->add_option("--out-dir", st_dir, "directory for pairs.csv")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_bad_input;
    }

    try {
        if (*sim) {
            ProcessSpec spec;
            Seed seed{sim_seed};
            if (!sim_config.empty()) {
                const ExperimentConfig c = load_config(sim_config);
                spec = c.process;
                if (sim->count("--seed") == 0) seed = Seed{c.seed};
            } else {
                spec = sim_proc.get();
            }
            std::ostringstream os;
            write_path_csv(os, sample(spec, seed, sim_trial));
            if (!sim_dir.empty()) {
                std::filesystem::create_directories(sim_dir);
                sim_out = (std::filesystem::path(sim_dir) / "path.csv").string();
            }
            emit(sim_out, os.str());
        } else if (*bcmd) {
            const Barcode bc = barcode(read_input(bc_in));
            std::ostringstream os;
            if (bc_diagram.empty())
                write_barcode_csv(os, bc);
            else if (bc_diagram == "superlevel")
                write_diagram_csv(os, bc, Convention::superlevel);
            else
                write_diagram_csv(os, barcode(negate(read_input(bc_in))), Convention::sublevel);
            emit(bc_out, os.str());
        } else if (*cnt) {
            const SampledPath f = read_input(cnt_in);
            if (!(cnt_eps > 0)) throw DomainError("--eps must be > 0");
            if (cnt_x) {
                std::size_t n = count_rect(f, *cnt_x, cnt_eps);
                if (cnt_finite && f.min_value() <= *cnt_x && f.max_value() >= *cnt_x + cnt_eps) --n;
                std::cout << n << "\n";
            } else {
                std::cout << count_eps_crossings(f, cnt_eps) << "\n";
            }
        } else if (*ana) {
            std::string text;
            if (*neps) {
                if (!(a_eps > 0 && a_t > 0)) throw DomainError("eps and t must be > 0");
                text = series_row(a_eps / std::sqrt(a_t) < 1.0 ? analytic::expected_neps_bm_small(a_eps, a_t)
                                                               : analytic::expected_neps_bm_large(a_eps, a_t));
            } else if (*neps_l) {
                text = series_row(analytic::expected_neps_bm_large(a_eps, a_t, a_tol));
            } else if (*neps_s) {
                text = series_row(analytic::expected_neps_bm_small(a_eps, a_t, a_tol));
            } else if (*nrect) {
                text = series_row(analytic::expected_nrect_bm(a_x, a_eps, a_t, a_tol));
            } else if (*nasym) {
                text = value_row(analytic::expected_nrect_bm_asymptotic(a_x, a_eps, a_t, a_k));
            } else if (*bary) {
                text = value_row(analytic::baryshnikov(a_mu, a_eps));
            } else if (*rtail) {
                text = series_row(analytic::range_tail_bm(a_eps, a_t, a_tol));
            } else if (*aerfc) {
                text = value_row(analytic::erfc(a_x));
            } else if (*ltime) {
                if (!(a_t > 0) || !(a_sigma > 0)) throw DomainError("t and sigma must be > 0");
                const double s2 = a_sigma * a_sigma;
                text = value_row(analytic::expected_local_time_ito(
                    a_x, SampledPath({0.0, a_t}, {0.0, s2 * a_t}),
                    [s2](double y, double u) { return analytic::gauss_density(y, s2 * u); }));
            } else if (*omega) {
                text = value_row(analytic::modulus_omega_bm(a_eps, a_delta, a_t));
            }
            std::cout << text;
        } else if (*exp) {
            ExperimentConfig c = load_config(ex_config);
            if (ex_seed) c.seed = *ex_seed;
            if (!ex_dir.empty()) c.out_dir = ex_dir;
            if (ex_format == "csv") c.format = OutputFormat::csv;
            if (ex_format == "svg") c.format = OutputFormat::svg;
            if (ex_format == "both") c.format = OutputFormat::both;
            if (ex_workers && *ex_workers == 0) throw ConfigError("--workers", "must be >= 1");
            const RunOutcome out = run_experiment(c, experiment_workers(ex_workers, c));
            for (const std::string& n : out.notes) std::cout << n << "\n";
            for (const std::string& f : out.files) std::cout << "wrote " << f << "\n";
            if (out.is_check && !out.passed) return exit_check_failed;
        } else if (*stab) {
            if (!st_f.empty() || !st_g.empty()) {
                if (st_f.empty() || st_g.empty()) throw DomainError("--f and --g go together");
                const StabilityReport r = stability_bound_check(read_input(st_f), read_input(st_g), st_eps);
                std::cout << "delta,eps,n_f,n_g,n_f_upper,n_f_lower,lhs,rhs,pass,bracketed\n"
                          << format_double(r.delta) << "," << format_double(r.eps) << "," << r.n_f << "," << r.n_g
                          << "," << r.n_f_upper << "," << r.n_f_lower << "," << r.lhs << "," << r.rhs << ","
                          << r.pass << "," << r.bracketed << "\n";
                return r.pass ? exit_ok : exit_check_failed;
            }
            if (st_stride < 1 || st_steps % st_stride != 0) throw DomainError("--stride must divide --n-steps");
            if (!(st_mult > 2)) throw DomainError("--eps-mult must be > 2");
            ProcessSpec fine;
            fine.n_steps = st_steps;
            fine.validate();
            std::vector<StabilityReport> reports(st_trials);
            const unsigned workers = st_workers && *st_workers ? *st_workers : resolve_workers(0);
            parallel_for(st_trials, workers, [&](std::size_t i) {
                const SampledPath f = sample(fine, Seed{st_seed}, i);
                const SampledPath g = coarsen(f, st_stride);
                reports[i] = stability_bound_check(f, g, st_mult * sup_distance(f, g));
            });
            std::ostringstream os;
            os << "trial,delta,eps,n_f,n_g,n_f_upper,n_f_lower,lhs,rhs,pass,bracketed\n";
            std::size_t passed = 0;
            for (std::size_t i = 0; i < st_trials; ++i) {
                const StabilityReport& r = reports[i];
                passed += r.pass;
                os << i << "," << format_double(r.delta) << "," << format_double(r.eps) << "," << r.n_f << ","
                   << r.n_g << "," << r.n_f_upper << "," << r.n_f_lower << "," << r.lhs << "," << r.rhs << ","
                   << r.pass << "," << r.bracketed << "\n";
            }
            os << "summary,,,,,,,,," << passed << "," << st_trials << "\n";
            std::filesystem::create_directories(st_dir);
            const std::string file = (std::filesystem::path(st_dir) / "pairs.csv").string();
            emit(file, os.str());
            std::cout << passed << "/" << st_trials << " pairs pass\nwrote " << file << "\n";
            if (passed != st_trials) return exit_check_failed;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_bad_input;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_bad_input;
    } catch (const InsufficientDataError& e) {
        std::cerr << "insufficient data: " << e.what() << "\n";
        return exit_check_failed;
    } catch (const TruncationError& e) {
        std::cerr << "truncation: " << e.what() << " (partial " << format_double(e.partial()) << " after "
                  << e.terms() << " terms)\n";
        return 1;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_bad_input;
    }
    return exit_ok;
}
