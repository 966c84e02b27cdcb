#include "persbar/process.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "persbar/error.hpp"
#include "persbar/fft.hpp"
#include "persbar/io.hpp"

namespace persbar {

namespace {

const std::pair<Family, const char*> family_names[] = {
    {Family::bm, "bm"},
    {Family::drift_bm, "drift-bm"},
    {Family::bridge, "bridge"},
    {Family::ito_constant, "ito-constant"},
    {Family::ou, "ou"},
    {Family::rademacher, "rademacher"},
    {Family::empirical, "empirical"},
    {Family::levy, "levy"},
    {Family::fbm, "fbm"},
    {Family::time_changed_bm, "time-changed-bm"},
};

std::vector<double> uniform_times(double horizon, std::size_t steps) {
    std::vector<double> t(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i)
        t[i] = horizon * static_cast<double>(i) / static_cast<double>(steps);
    t[steps] = horizon;
    return t;
}

std::vector<double> cumulate(const std::vector<double>& inc) {
    std::vector<double> v(inc.size() + 1);
    v[0] = 0.0;
    for (std::size_t i = 0; i < inc.size(); ++i) v[i + 1] = v[i] + inc[i];
    return v;
}

std::vector<double> brownian_values(const ProcessSpec& s, TrialStream& rng, double dt) {
    std::vector<double> z = rng.normals(s.n_steps);
    const double sd = std::sqrt(dt);
    for (double& x : z) x *= sd;
    return cumulate(z);
}

SampledPath sample_levy(const ProcessSpec& s, TrialStream& rng) {
    const std::size_t modes = s.n;
    const std::vector<double> xi = rng.normals(modes);
    std::vector<double> a(modes > 1 ? modes - 1 : 0);
    for (std::size_t k = 1; k < modes; ++k) a[k - 1] = xi[k] / static_cast<double>(k);
    std::vector<double> v = sine_sum(a, s.n_steps);
    const double scale = std::numbers::sqrt2 / std::numbers::pi;
    auto t = uniform_times(1.0, s.n_steps);
    for (std::size_t j = 0; j <= s.n_steps; ++j) v[j] = xi[0] * t[j] + scale * v[j];
    return SampledPath(std::move(t), std::move(v));
}

SampledPath sample_empirical(const ProcessSpec& s, TrialStream& rng) {
    std::vector<double> u(s.n);
    rng.uniforms(u.data(), u.size());
    std::sort(u.begin(), u.end());
    auto t = uniform_times(1.0, s.n_steps);
    std::vector<double> v(t.size());
    const double n = static_cast<double>(s.n), root = std::sqrt(n);
    std::size_t below = 0;
    for (std::size_t j = 0; j < t.size(); ++j) {
        while (below < u.size() && u[below] <= t[j]) ++below;
        v[j] = root * (static_cast<double>(below) / n - t[j]);
    }
    // F_n(1) = 1 exactly, so the last value is 0 up to the tie u == 1, which
    // the 53-bit uniforms on [0, 1) never produce.
    return SampledPath(std::move(t), std::move(v));
}

// Davies-Harte: fractional Gaussian noise from a circulant embedding of its
// autocovariance, cumulated and scaled by dt^H.
SampledPath sample_fbm(const ProcessSpec& s, TrialStream& rng) {
    const std::size_t n = s.n_steps;
    std::size_t m = 1;
    while (m < 2 * n) m <<= 1;
    const double h2 = 2.0 * s.hurst;
    auto gamma = [h2](double k) {
        return 0.5 * (std::pow(std::abs(k + 1.0), h2) - 2.0 * std::pow(std::abs(k), h2) +
                      std::pow(std::abs(k - 1.0), h2));
    };
    std::vector<std::complex<double>> c(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t lag = k <= m / 2 ? k : m - k;
        c[k] = gamma(static_cast<double>(lag));
    }
    fft(c);
    std::vector<double> root(m);
    for (std::size_t k = 0; k < m; ++k) {
        double lam = c[k].real();
        if (lam < 0) {
            if (lam < -1e-8 * static_cast<double>(m))
                throw InternalError("fbm: circulant embedding not PSD, eigenvalue " +
                                    format_double(lam) + " at index " + std::to_string(k) +
                                    " (H=" + format_double(s.hurst) + ", m=" + std::to_string(m) + ")");
            lam = 0.0;
        }
        root[k] = std::sqrt(lam / static_cast<double>(m));
    }
    const std::vector<double> z = rng.normals(2 * m);
    std::vector<std::complex<double>> y(m);
    for (std::size_t k = 0; k < m; ++k) y[k] = {root[k] * z[2 * k], root[k] * z[2 * k + 1]};
    fft(y);
    const double scale = std::pow(s.t / static_cast<double>(n), s.hurst);
    std::vector<double> inc(n);
    for (std::size_t i = 0; i < n; ++i) inc[i] = scale * y[i].real();
    return SampledPath(uniform_times(s.t, n), cumulate(inc));
}

SampledPath sample_time_changed(const ProcessSpec& s, TrialStream& rng) {
    const SampledPath& qv = *s.qv;
    std::vector<double> t(s.n_steps + 1);
    for (std::size_t j = 0; j <= s.n_steps; ++j)
        t[j] = qv.start() + (qv.end() - qv.start()) * static_cast<double>(j) / static_cast<double>(s.n_steps);
    t[s.n_steps] = qv.end();
    std::vector<double> z = rng.normals(s.n_steps);
    double prev = qv.evaluate(t[0]);
    for (std::size_t j = 0; j < s.n_steps; ++j) {
        const double next = qv.evaluate(t[j + 1]);
        z[j] *= std::sqrt(std::max(next - prev, 0.0));
        prev = next;
    }
    return SampledPath(std::move(t), cumulate(z));
}

}  // namespace

std::string family_name(Family f) {
    for (auto& [fam, name] : family_names)
        if (fam == f) return name;
    throw InternalError("family_name: unknown family");
}

Family parse_family(const std::string& name) {
    for (auto& [fam, n] : family_names)
        if (name == n) return fam;
    throw DomainError("unknown process family '" + name + "'");
}

void ProcessSpec::validate() const {
    auto fail = [](const std::string& what) { throw DomainError("process: " + what); };
    if (!(t > 0) || !std::isfinite(t)) fail("t must be > 0");
    if (!(sigma >= 0) || !std::isfinite(sigma)) fail("sigma must be >= 0");
    if (!std::isfinite(mu)) fail("mu must be finite");
    if (n_steps < 2) fail("n_steps must be >= 2");
    switch (family) {
        case Family::ou:
            if (!(theta >= 0) || !std::isfinite(theta)) fail("theta must be >= 0");
            break;
        case Family::empirical:
        case Family::levy:
            if (n < 1) fail("n must be >= 1");
            break;
        case Family::fbm:
            if (!(hurst > 0 && hurst < 1)) fail("hurst must lie in (0, 1)");
            break;
        case Family::time_changed_bm: {
            if (!qv) fail("time-changed-bm needs a qv path");
            auto v = qv->values();
            if (v[0] != 0.0) fail("qv must start at 0");
            for (std::size_t i = 1; i < v.size(); ++i)
                if (v[i] < v[i - 1]) fail("qv must be nondecreasing");
            break;
        }
        default:
            break;
    }
}

std::string ProcessSpec::fingerprint() const {
    std::ostringstream os;
    os << family_name(family) << ";t=" << format_double(t) << ";mu=" << format_double(mu)
       << ";sigma=" << format_double(sigma) << ";theta=" << format_double(theta)
       << ";hurst=" << format_double(hurst) << ";n=" << n << ";n_steps=" << n_steps;
    if (qv) os << ";qv_points=" << qv->size() << ";qv_end=" << format_double(qv->values().back());
    return os.str();
}

SampledPath sample(const ProcessSpec& s, Seed seed, std::uint64_t trial) {
    s.validate();
    TrialStream rng(seed, trial);
    switch (s.family) {
        case Family::bm: {
            const double dt = s.t / static_cast<double>(s.n_steps);
            return SampledPath(uniform_times(s.t, s.n_steps), brownian_values(s, rng, dt));
        }
        case Family::drift_bm:
        case Family::ito_constant: {
            // Constant coefficients make Euler-Maruyama exact in law.
            const double dt = s.t / static_cast<double>(s.n_steps);
            const double sd = s.family == Family::drift_bm ? std::sqrt(dt) : s.sigma * std::sqrt(dt);
            std::vector<double> z = rng.normals(s.n_steps);
            for (double& x : z) x *= sd;
            auto t = uniform_times(s.t, s.n_steps);
            std::vector<double> v = cumulate(z);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] += s.mu * t[i];
            return SampledPath(std::move(t), std::move(v));
        }
        case Family::bridge: {
            const double dt = 1.0 / static_cast<double>(s.n_steps);
            auto t = uniform_times(1.0, s.n_steps);
            std::vector<double> b = brownian_values(s, rng, dt);
            const double end = b.back();
            for (std::size_t k = 0; k < b.size(); ++k) b[k] -= t[k] * end;
            b.front() = 0.0;
            b.back() = 0.0;
            return SampledPath(std::move(t), std::move(b));
        }
        case Family::ou: {
            const double dt = s.t / static_cast<double>(s.n_steps);
            const double sd = s.sigma * std::sqrt(dt);
            const std::vector<double> z = rng.normals(s.n_steps);
            std::vector<double> v(s.n_steps + 1);
            v[0] = 0.0;
            for (std::size_t i = 0; i < s.n_steps; ++i) v[i + 1] = v[i] - s.theta * v[i] * dt + sd * z[i];
            return SampledPath(uniform_times(s.t, s.n_steps), std::move(v));
        }
        case Family::rademacher: {
            const std::size_t steps = s.n ? s.n : s.n_steps;
            std::vector<double> inc(steps);
            rng.signs(inc.data(), steps, 1.0 / std::sqrt(static_cast<double>(steps)));
            return SampledPath(uniform_times(1.0, steps), cumulate(inc));
        }
        case Family::empirical:
            return sample_empirical(s, rng);
        case Family::levy:
            return sample_levy(s, rng);
        case Family::fbm:
            return sample_fbm(s, rng);
        case Family::time_changed_bm:
            return sample_time_changed(s, rng);
    }
    throw InternalError("sample: unhandled family");
}

namespace {

enum class Coupling { levy, brownian, identical };

Coupling coupling_of(const ProcessSpec& a, const ProcessSpec& b) {
    if (a.family == Family::levy && b.family == Family::levy) return Coupling::levy;
    const bool brownian = a.family == b.family && (a.family == Family::bm || a.family == Family::drift_bm);
    if (brownian && a.t == b.t && a.mu == b.mu && a.sigma == b.sigma && a.n_steps != b.n_steps) {
        const std::size_t fine = std::max(a.n_steps, b.n_steps), coarse = std::min(a.n_steps, b.n_steps);
        if (coarse == 0 || fine % coarse != 0)
            throw DomainError("coupled_pair: coarse n_steps must divide fine n_steps");
        return Coupling::brownian;
    }
    if (a.fingerprint() == b.fingerprint() && a.family != Family::time_changed_bm) return Coupling::identical;
    throw DomainError("coupled_pair: unsupported coupling " + family_name(a.family) + " / " +
                      family_name(b.family));
}

}  // namespace

void validate_coupling(const ProcessSpec& a, const ProcessSpec& b) {
    a.validate();
    b.validate();
    coupling_of(a, b);
}

std::pair<SampledPath, SampledPath> coupled_pair(const ProcessSpec& a, const ProcessSpec& b, Seed seed,
                                                 std::uint64_t trial) {
    switch (coupling_of(a, b)) {
        case Coupling::levy:
            return {sample(a, seed, trial), sample(b, seed, trial)};
        case Coupling::brownian: {
            const bool a_fine = a.n_steps > b.n_steps;
            const ProcessSpec& fine_spec = a_fine ? a : b;
            const std::size_t stride = fine_spec.n_steps / (a_fine ? b.n_steps : a.n_steps);
            SampledPath fine = sample(fine_spec, seed, trial);
            SampledPath coarse = coarsen(fine, stride);
            if (a_fine) return {std::move(fine), std::move(coarse)};
            return {std::move(coarse), std::move(fine)};
        }
        case Coupling::identical: {
            SampledPath p = sample(a, seed, trial);
            return {p, p};
        }
    }
    throw InternalError("coupled_pair: unhandled coupling");
}

}  // namespace persbar
