#include "persbar/path.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "persbar/error.hpp"

namespace persbar {

namespace {

void check_grid(std::span<const double> times) {
    if (times.size() < 2)
        throw DomainError("path needs at least 2 samples");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]))
            throw DomainError("non-finite time at index " + std::to_string(i));
        if (i > 0 && !(times[i] > times[i - 1]))
            throw DomainError("times not strictly increasing at index " + std::to_string(i));
    }
}

}  // namespace

SampledPath::SampledPath(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
    if (times_.size() != values_.size())
        throw DomainError("times and values differ in length");
    check_grid(times_);
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (!std::isfinite(values_[i]))
            throw DomainError("non-finite value at index " + std::to_string(i));
}

SampledPath SampledPath::uniform(double horizon, std::vector<double> values) {
    if (!(horizon > 0) || !std::isfinite(horizon))
        throw DomainError("horizon must be positive and finite");
    if (values.size() < 2)
        throw DomainError("path needs at least 2 samples");
    const std::size_t n = values.size() - 1;
    std::vector<double> times(values.size());
    for (std::size_t i = 0; i < n; ++i)
        times[i] = horizon * static_cast<double>(i) / static_cast<double>(n);
    times[n] = horizon;
    return SampledPath(std::move(times), std::move(values));
}

double SampledPath::evaluate(double t) const {
    if (!(t >= times_.front() && t <= times_.back()))
        throw DomainError("evaluate: t outside path interval");
    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    std::size_t j = static_cast<std::size_t>(it - times_.begin());
    if (times_[j] == t)
        return values_[j];
    const std::size_t i = j - 1;
    const double w = (t - times_[i]) / (times_[j] - times_[i]);
    return values_[i] + w * (values_[j] - values_[i]);
}

double SampledPath::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

double SampledPath::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

double sup_distance(const SampledPath& f, const SampledPath& g) {
    if (f.start() != g.start() || f.end() != g.end())
        throw DomainError("sup_distance: paths live on different intervals");
    auto ft = f.times(), fv = f.values(), gt = g.times(), gv = g.values();

    // Merge walk over the union grid; each path is interpolated in its
    // current segment.
    auto interp = [](std::span<const double> ts, std::span<const double> vs, std::size_t seg,
                     double t) {
        if (ts[seg] == t) return vs[seg];
        if (ts[seg + 1] == t) return vs[seg + 1];
        const double w = (t - ts[seg]) / (ts[seg + 1] - ts[seg]);
        return vs[seg] + w * (vs[seg + 1] - vs[seg]);
    };
    std::size_t i = 0, j = 0, fs = 0, gs = 0;
    double best = 0.0;
    while (i < ft.size() || j < gt.size()) {
        double t;
        if (j >= gt.size() || (i < ft.size() && ft[i] <= gt[j]))
            t = ft[i];
        else
            t = gt[j];
        if (i < ft.size() && ft[i] == t) ++i;
        if (j < gt.size() && gt[j] == t) ++j;
        while (fs + 2 < ft.size() && ft[fs + 1] < t) ++fs;
        while (gs + 2 < gt.size() && gt[gs + 1] < t) ++gs;
        best = std::max(best, std::abs(interp(ft, fv, fs, t) - interp(gt, gv, gs, t)));
    }
    return best;
}

SampledPath negate(const SampledPath& f) {
    std::vector<double> v(f.values().begin(), f.values().end());
    for (double& x : v) x = -x;
    return SampledPath(std::vector<double>(f.times().begin(), f.times().end()), std::move(v));
}

SampledPath reparametrize(const SampledPath& f, std::vector<double> new_times) {
    if (new_times.size() != f.size())
        throw DomainError("reparametrize: grid length mismatch");
    return SampledPath(std::move(new_times), std::vector<double>(f.values().begin(), f.values().end()));
}

SampledPath coarsen(const SampledPath& f, std::size_t stride) {
    if (stride < 1)
        throw DomainError("coarsen: stride must be >= 1");
    std::vector<double> t, v;
    const std::size_t n = f.size();
    t.reserve(n / stride + 2);
    v.reserve(n / stride + 2);
    for (std::size_t i = 0; i < n; i += stride) {
        t.push_back(f.times()[i]);
        v.push_back(f.values()[i]);
    }
    if (t.back() != f.end()) {
        t.push_back(f.end());
        v.push_back(f.values()[n - 1]);
    }
    return SampledPath(std::move(t), std::move(v));
}

}  // namespace persbar
