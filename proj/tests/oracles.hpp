#pragma once

// Independent reference implementations used only by the tests. They favour
// obviously-correct quadratic algorithms over speed.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "persbar/path.hpp"

namespace oracle {

inline std::vector<double> collapse(const std::vector<double>& v) {
    std::vector<double> out;
    for (double x : v)
        if (out.empty() || out.back() != x) out.push_back(x);
    return out;
}

/// Superlevel bars (birth, death) from the per-maximum definition: a maximum
/// dies at the highest level at which it connects to an elder maximum (a
/// higher one, or an equal one further left). Sorted for comparison.
inline std::vector<std::pair<double, double>> superlevel_bars(const std::vector<double>& raw) {
    const auto v = collapse(raw);
    const std::size_t n = v.size();
    const double lo = *std::min_element(v.begin(), v.end());
    std::vector<std::pair<double, double>> bars;
    for (std::size_t i = 0; i < n; ++i) {
        const bool left_ok = i == 0 || v[i - 1] < v[i];
        const bool right_ok = i + 1 == n || v[i + 1] < v[i];
        if (!left_ok || !right_ok) continue;
        if (n == 1) {
            bars.emplace_back(v[0], v[0]);
            continue;
        }
        bool found_left = false, found_right = false;
        double left_min = v[i], right_min = v[i];
        for (std::size_t j = i; j-- > 0;) {
            if (v[j] >= v[i]) {
                found_left = true;
                break;
            }
            left_min = std::min(left_min, v[j]);
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (v[j] > v[i]) {
                found_right = true;
                break;
            }
            right_min = std::min(right_min, v[j]);
        }
        double death = lo;
        if (found_left && found_right)
            death = std::max(left_min, right_min);
        else if (found_left)
            death = left_min;
        else if (found_right)
            death = right_min;
        bars.emplace_back(v[i], death);
    }
    std::sort(bars.begin(), bars.end());
    return bars;
}

/// Sublevel diagram of f by an upward sweep: components are born at minima,
/// the younger (higher birth; later index on ties) dies at the merge level,
/// the last one is capped at sup f. Points are (birth, death), sorted.
inline std::vector<std::pair<double, double>> sublevel_points(const std::vector<double>& raw) {
    const auto v = collapse(raw);
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return v[a] != v[b] ? v[a] < v[b] : a < b;
    });
    std::vector<long> comp(n, -1);  // component label per index
    std::vector<double> birth;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i : order) {
        const long l = i > 0 ? comp[i - 1] : -1;
        const long r = i + 1 < n ? comp[i + 1] : -1;
        if (l < 0 && r < 0) {
            comp[i] = static_cast<long>(birth.size());
            birth.push_back(v[i]);
        } else if (l >= 0 && r >= 0 && l != r) {
            const long keep = birth[l] <= birth[r] ? l : r;
            const long die = keep == l ? r : l;
            pts.emplace_back(birth[die], v[i]);
            for (auto& c : comp)
                if (c == die) c = keep;
            comp[i] = keep;
        } else {
            comp[i] = l >= 0 ? l : r;
        }
    }
    pts.emplace_back(*std::min_element(v.begin(), v.end()), *std::max_element(v.begin(), v.end()));
    std::sort(pts.begin(), pts.end());
    return pts;
}

inline std::vector<double> times_for(std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i);
    return t;
}

inline persbar::SampledPath make_path(const std::vector<double>& v) { return {times_for(v.size()), v}; }

/// Integer-valued lazy walk: steps in {-1, 0, +1}; plenty of plateaus and ties.
inline std::vector<double> lazy_walk(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> step(-1, 1);
    std::vector<double> v(n);
    v[0] = 0;
    for (std::size_t i = 1; i < n; ++i) v[i] = v[i - 1] + step(rng);
    return v;
}

inline std::vector<double> gaussian_walk(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> z;
    std::vector<double> v(n);
    v[0] = 0;
    for (std::size_t i = 1; i < n; ++i) v[i] = v[i - 1] + z(rng);
    return v;
}

/// +-1/sqrt(n) walk with n steps, built by running sums like the sampler.
inline std::vector<double> rademacher_walk(std::mt19937_64& rng, std::size_t n) {
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<double> v(n + 1);
    v[0] = 0;
    for (std::size_t i = 1; i <= n; ++i) v[i] = v[i - 1] + ((rng() & 1) ? s : -s);
    return v;
}

/// Exact integral over x of a piecewise-constant count whose breakpoints are
/// known: evaluate at midpoints between consecutive sorted breakpoints.
template <class Count>
double breakpoint_integral(std::vector<double> breaks, Count count) {
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double mid = 0.5 * (breaks[i] + breaks[i + 1]);
        total += static_cast<double>(count(mid)) * (breaks[i + 1] - breaks[i]);
    }
    return total;
}

}  // namespace oracle
