#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <type_traits>

#include "persbar/error.hpp"
#include "persbar/harness.hpp"
#include "persbar/io.hpp"
#include "persbar/parallel.hpp"

namespace persbar {

namespace {

const std::pair<ExperimentKind, const char*> kind_names[] = {
    {ExperimentKind::expect_neps, "expect-neps"},   {ExperimentKind::expect_nrect, "expect-nrect"},
    {ExperimentKind::tail, "tail"},                 {ExperimentKind::slope, "slope"},
    {ExperimentKind::localtime, "localtime"},       {ExperimentKind::qv, "qv"},
    {ExperimentKind::stability, "stability"},       {ExperimentKind::moment_bound, "moment-bound"},
    {ExperimentKind::baryshnikov, "baryshnikov"},
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
    const std::string s = trim(text);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(v))
        throw ConfigError(key, "not a finite number: '" + s + "'");
    return v;
}

std::uint64_t to_uint(const std::string& key, const std::string& text) {
    const std::string s = trim(text);
    char* end = nullptr;
    errno = 0;
    if (s.empty() || s[0] == '-' || s[0] == '+') throw ConfigError(key, "not a nonnegative integer: '" + s + "'");
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (*end != '\0' || errno == ERANGE) throw ConfigError(key, "not a nonnegative integer: '" + s + "'");
    return v;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    if (out.size() == 1 && out[0].empty()) out.clear();
    return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& text) {
    std::vector<double> out;
    for (const std::string& s : split_list(text)) out.push_back(to_double(key, s));
    return out;
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        if constexpr (std::is_floating_point_v<T>)
            out += format_double(v[i]);
        else
            out += std::to_string(v[i]);
    }
    return out;
}

using Section = std::map<std::string, std::string>;

ProcessSpec parse_process(const std::string& sec, const Section& kv) {
    ProcessSpec p;
    std::vector<double> qt, qv;
    bool has_family = false;
    for (const auto& [k, v] : kv) {
        const std::string key = sec + "." + k;
        if (k == "family") {
            try {
                p.family = parse_family(trim(v));
            } catch (const DomainError&) {
                throw ConfigError(key, "unknown family '" + trim(v) + "'");
            }
            has_family = true;
        } else if (k == "t") {
            p.t = to_double(key, v);
        } else if (k == "mu") {
            p.mu = to_double(key, v);
        } else if (k == "sigma") {
            p.sigma = to_double(key, v);
        } else if (k == "theta") {
            p.theta = to_double(key, v);
        } else if (k == "hurst") {
            p.hurst = to_double(key, v);
        } else if (k == "n") {
            p.n = to_uint(key, v);
        } else if (k == "n_steps") {
            p.n_steps = to_uint(key, v);
        } else if (k == "qv_times") {
            qt = to_doubles(key, v);
        } else if (k == "qv_values") {
            qv = to_doubles(key, v);
        } else {
            throw ConfigError(key, "unknown key");
        }
    }
    if (!has_family) throw ConfigError(sec + ".family", "missing");
    if (!qt.empty() || !qv.empty()) {
        try {
            p.qv = SampledPath(qt, qv);
        } catch (const DomainError& e) {
            throw ConfigError(sec + ".qv_times", e.what());
        }
    }
    return p;
}

void write_process(std::ostream& os, const std::string& sec, const ProcessSpec& p) {
    os << "[" << sec << "]\n";
    os << "family = " << family_name(p.family) << "\n";
    os << "t = " << format_double(p.t) << "\n";
    os << "mu = " << format_double(p.mu) << "\n";
    os << "sigma = " << format_double(p.sigma) << "\n";
    os << "theta = " << format_double(p.theta) << "\n";
    os << "hurst = " << format_double(p.hurst) << "\n";
    os << "n = " << p.n << "\n";
    os << "n_steps = " << p.n_steps << "\n";
    if (p.qv) {
        const auto t = p.qv->times(), v = p.qv->values();
        os << "qv_times = " << join(std::vector<double>(t.begin(), t.end())) << "\n";
        os << "qv_values = " << join(std::vector<double>(v.begin(), v.end())) << "\n";
    }
    os << "\n";
}

bool geometric(const std::vector<double>& g) {
    if (g.size() < 2) return false;
    const double r = g[1] / g[0];
    if (!(r > 0) || r == 1.0) return false;
    for (std::size_t i = 2; i < g.size(); ++i)
        if (std::abs(std::log(g[i] / g[i - 1]) - std::log(r)) > 1e-6 * std::abs(std::log(r))) return false;
    return true;
}

}  // namespace

std::string kind_name(ExperimentKind k) {
    for (const auto& [kind, name] : kind_names)
        if (kind == k) return name;
    throw InternalError("kind_name: unhandled kind");
}

ExperimentKind parse_kind(const std::string& name) {
    for (const auto& [kind, n] : kind_names)
        if (name == n) return kind;
    throw ConfigError("experiment.kind", "unknown kind '" + name + "'");
}

ExperimentConfig parse_config(std::istream& is) {
    std::map<std::string, Section> sections;
    std::string line, current;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError("line " + std::to_string(lineno), "malformed section header");
            current = trim(s.substr(1, s.size() - 2));
            static const char* known[] = {"experiment", "process", "reference", "grid", "check", "output"};
            bool ok = false;
            for (const char* k : known) ok = ok || current == k;
            if (!ok) throw ConfigError(current, "unknown section");
            if (sections.count(current)) throw ConfigError(current, "duplicate section");
            sections[current];
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno), "expected key = value");
        const std::string key = trim(s.substr(0, eq));
        if (current.empty()) throw ConfigError(key, "key outside any section");
        if (key.empty()) throw ConfigError(current, "empty key on line " + std::to_string(lineno));
        if (!sections[current].emplace(key, trim(s.substr(eq + 1))).second)
            throw ConfigError(current + "." + key, "duplicate key");
    }

    ExperimentConfig c;
    if (!sections.count("experiment")) throw ConfigError("experiment", "missing section");
    bool has_kind = false;
    for (const auto& [k, v] : sections["experiment"]) {
        const std::string key = "experiment." + k;
        if (k == "kind") {
            c.kind = parse_kind(v);
            has_kind = true;
        } else if (k == "name") {
            c.name = v;
        } else if (k == "trials") {
            c.trials = to_uint(key, v);
        } else if (k == "seed") {
            c.seed = to_uint(key, v);
        } else if (k == "workers") {
            c.workers = static_cast<unsigned>(to_uint(key, v));
        } else {
            throw ConfigError(key, "unknown key");
        }
    }
    if (!has_kind) throw ConfigError("experiment.kind", "missing");
    if (!sections.count("process")) throw ConfigError("process", "missing section");
    c.process = parse_process("process", sections["process"]);
    if (sections.count("reference")) c.reference = parse_process("reference", sections["reference"]);
    for (const auto& [k, v] : sections["grid"]) {
        const std::string key = "grid." + k;
        if (k == "eps") {
            c.eps = to_doubles(key, v);
        } else if (k == "x") {
            c.x = to_doubles(key, v);
        } else if (k == "a") {
            c.a_grid = to_doubles(key, v);
        } else if (k == "k") {
            c.k_grid.clear();
            for (const std::string& s : split_list(v)) c.k_grid.push_back(static_cast<int>(to_uint(key, s)));
        } else {
            throw ConfigError(key, "unknown key");
        }
    }
    for (const auto& [k, v] : sections["check"]) {
        const std::string key = "check." + k;
        if (k == "p")
            c.p = to_double(key, v);
        else if (k == "rel_tol")
            c.rel_tol = to_double(key, v);
        else
            throw ConfigError(key, "unknown key");
    }
    for (const auto& [k, v] : sections["output"]) {
        const std::string key = "output." + k;
        if (k == "dir") {
            c.out_dir = v;
        } else if (k == "format") {
            if (v == "csv")
                c.format = OutputFormat::csv;
            else if (v == "svg")
                c.format = OutputFormat::svg;
            else if (v == "both")
                c.format = OutputFormat::both;
            else
                throw ConfigError(key, "expected csv, svg or both");
        } else {
            throw ConfigError(key, "unknown key");
        }
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw ConfigError("config", "cannot open '" + filename + "'");
    return parse_config(in);
}

std::string config_text(const ExperimentConfig& c) {
    std::ostringstream os;
    os << "[experiment]\n";
    os << "kind = " << kind_name(c.kind) << "\n";
    os << "name = " << c.name << "\n";
    os << "trials = " << c.trials << "\n";
    os << "seed = " << c.seed << "\n";
    if (c.workers) os << "workers = " << *c.workers << "\n";
    os << "\n";
    write_process(os, "process", c.process);
    if (c.reference) write_process(os, "reference", *c.reference);
    os << "[grid]\n";
    os << "eps = " << join(c.eps) << "\n";
    if (!c.x.empty()) os << "x = " << join(c.x) << "\n";
    os << "a = " << join(c.a_grid) << "\n";
    os << "k = " << join(c.k_grid) << "\n\n";
    os << "[check]\n";
    os << "p = " << format_double(c.p) << "\n";
    os << "rel_tol = " << format_double(c.rel_tol) << "\n\n";
    os << "[output]\n";
    os << "dir = " << c.out_dir << "\n";
    os << "format = " << (c.format == OutputFormat::csv ? "csv" : c.format == OutputFormat::svg ? "svg" : "both")
       << "\n";
    return os.str();
}

void ExperimentConfig::validate() const {
    if (name.empty() || name.find_first_of("/\\") != std::string::npos)
        throw ConfigError("experiment.name", "must be a plain file stem");
    if (trials < 2) throw ConfigError("experiment.trials", "must be >= 2");
    if (workers && *workers == 0) throw ConfigError("experiment.workers", "must be >= 1");
    try {
        process.validate();
    } catch (const DomainError& e) {
        throw ConfigError("process", e.what());
    }
    if (eps.empty()) throw ConfigError("grid.eps", "missing or empty");
    for (double e : eps)
        if (!(e > 0)) throw ConfigError("grid.eps", "values must be > 0");
    const bool needs_x = kind == ExperimentKind::expect_nrect || kind == ExperimentKind::localtime ||
                         kind == ExperimentKind::baryshnikov;
    if (needs_x && x.empty()) throw ConfigError("grid.x", "missing or empty");
    if (kind == ExperimentKind::slope) {
        if (eps.size() < 4) throw ConfigError("grid.eps", "slope needs at least 4 points");
        if (!geometric(eps)) throw ConfigError("grid.eps", "slope needs a geometric grid");
    }
    if (kind == ExperimentKind::stability) {
        if (!reference) throw ConfigError("reference", "stability needs a [reference] process");
        try {
            validate_coupling(process, *reference);
        } catch (const DomainError& e) {
            throw ConfigError("reference", e.what());
        }
        if (a_grid.empty()) throw ConfigError("grid.a", "missing or empty");
        for (double a : a_grid)
            if (!(a > 0)) throw ConfigError("grid.a", "values must be > 0");
        if (k_grid.empty()) throw ConfigError("grid.k", "missing or empty");
        for (int k : k_grid)
            if (k < 1) throw ConfigError("grid.k", "values must be >= 1");
        if (!(p > 0)) throw ConfigError("check.p", "must be > 0");
    } else if (reference) {
        throw ConfigError("reference", "only stability experiments take a reference process");
    }
    if (kind == ExperimentKind::baryshnikov) {
        if (process.family != Family::drift_bm && process.family != Family::bm)
            throw ConfigError("process.family", "baryshnikov needs drift-bm");
        if (!(process.mu > 0)) throw ConfigError("process.mu", "baryshnikov needs mu > 0");
        if (!(rel_tol > 0)) throw ConfigError("check.rel_tol", "must be > 0");
    }
    if (out_dir.empty()) throw ConfigError("output.dir", "must not be empty");
}

unsigned experiment_workers(std::optional<unsigned> flag, const ExperimentConfig& c) {
    if (flag && *flag > 0) return *flag;
    if (const char* env = std::getenv("PERSBAR_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*env != '\0' && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    if (c.workers) return *c.workers;
    return resolve_workers(0);
}

}  // namespace persbar
