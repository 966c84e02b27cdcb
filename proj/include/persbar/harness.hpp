#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "persbar/estimators.hpp"
#include "persbar/process.hpp"

namespace persbar {

enum class ExperimentKind {
    expect_neps,
    expect_nrect,
    tail,
    slope,
    localtime,
    qv,
    stability,
    moment_bound,
    baryshnikov,
};

std::string kind_name(ExperimentKind k);
/// Throws ConfigError keyed `experiment.kind` on an unknown name.
ExperimentKind parse_kind(const std::string& name);

enum class OutputFormat { csv, svg, both };

/// One experiment. The text form is an INI file:
///
///     [experiment]  kind, name, trials, seed, workers (optional)
///     [process]     family, t, mu, sigma, theta, hurst, n, n_steps,
///                   qv_times, qv_values (lists, time-changed-bm only)
///     [reference]   same keys; the limit process of a stability run
///     [grid]        eps, x (comma-separated lists), a, k (stability)
///     [check]       p (stability), rel_tol (baryshnikov)
///     [output]      dir, format = csv | svg | both
///
/// Blank lines and lines starting with '#' or ';' are ignored. Numbers are
/// written with 17 significant digits, so text -> config -> text is exact.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::expect_neps;
    std::string name = "results";
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    std::optional<unsigned> workers;
    ProcessSpec process;
    std::optional<ProcessSpec> reference;
    std::vector<double> eps;
    std::vector<double> x;
    std::vector<double> a_grid = {1.0, 2.0, 4.0};
    std::vector<int> k_grid = {1, 2, 3};
    double p = 2.0;
    double rel_tol = 0.05;
    std::string out_dir = ".";
    OutputFormat format = OutputFormat::csv;

    /// Checks every parameter the kind uses. Throws ConfigError.
    void validate() const;
};

ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::string& filename);
std::string config_text(const ExperimentConfig& c);

/// Worker count: `flag` if given, else PERSBAR_WORKERS, else the config,
/// else the hardware concurrency.
unsigned experiment_workers(std::optional<unsigned> flag, const ExperimentConfig& c);

struct ResultRow {
    std::string statistic;
    double param1 = 0.0;
    double param2 = 0.0;
    MCResult result;
};

/// Header `statistic,param1,param2,mean,stderr,ci_lo,ci_hi,trials,seed`.
void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows);

struct RunOutcome {
    std::vector<ResultRow> rows;
    bool is_check = false;
    bool passed = true;
    std::vector<std::string> files;
    std::vector<std::string> notes;  // one line per check, for the console
};

/// Runs the experiment and writes `<dir>/<name>.csv` (and `.svg`; stability
/// also writes `<name>_trials.csv`). Output bytes depend only on the config.
RunOutcome run_experiment(const ExperimentConfig& c, unsigned workers);

}  // namespace persbar
