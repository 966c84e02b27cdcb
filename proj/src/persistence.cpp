#include "persbar/persistence.hpp"

#include <algorithm>
#include <numeric>

#include "persbar/error.hpp"

namespace persbar {

namespace {

void require_positive_eps(double eps, const char* who) {
    if (!(eps > 0))
        throw DomainError(std::string(who) + ": eps must be > 0");
}

void sort_bars(std::vector<Bar>& bars) {
    std::sort(bars.begin(), bars.end(), [](const Bar& a, const Bar& b) {
        const double la = a.length(), lb = b.length();
        if (la != lb) return la > lb;
        return a.birth > b.birth;
    });
}

// Elder-rule union-find over an alternating extremum sequence. `vals` must
// alternate strictly. Bars are appended to `out`; returns nothing else.
void pair_by_union_find(const std::vector<double>& vals, std::vector<Bar>& out) {
    const std::size_t k = vals.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (vals[a] != vals[b]) return vals[a] > vals[b];
        return a < b;
    });

    std::vector<std::size_t> parent(k);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::vector<char> active(k, 0);
    std::vector<std::size_t> born_at(k);  // sample index of the root's max
    auto find = [&](std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };

    double lowest = vals[order.back()];
    for (std::size_t i : order) {
        active[i] = 1;
        born_at[i] = i;
        const bool left = i > 0 && active[i - 1];
        const bool right = i + 1 < k && active[i + 1];
        if (left && right) {
            std::size_t a = find(i - 1), b = find(i + 1);
            const double ba = vals[born_at[a]], bb = vals[born_at[b]];
            // Elder survives; equal heights: leftmost birth survives.
            bool a_survives = ba > bb || (ba == bb && born_at[a] < born_at[b]);
            std::size_t keep = a_survives ? a : b, die = a_survives ? b : a;
            out.push_back(Bar{vals[born_at[die]], vals[i]});
            parent[die] = keep;
            parent[i] = keep;
        } else if (left) {
            parent[i] = find(i - 1);
        } else if (right) {
            parent[i] = find(i + 1);
        }
    }
    out.push_back(Bar{vals[born_at[find(order.front())]], lowest});
}

}  // namespace

Barcode::Barcode(std::vector<Bar> bars, double inf_value, double sup_value)
    : bars_(std::move(bars)), inf_(inf_value), sup_(sup_value) {
    sort_bars(bars_);
}

std::vector<std::size_t> extrema_indices(const SampledPath& f) {
    auto v = f.values();
    const std::size_t n = v.size();
    // First index of each run of equal values.
    std::vector<std::size_t> runs;
    runs.reserve(n);
    runs.push_back(0);
    for (std::size_t i = 1; i < n; ++i)
        if (v[i] != v[i - 1]) runs.push_back(i);

    std::vector<std::size_t> ext;
    ext.reserve(runs.size());
    ext.push_back(runs.front());
    for (std::size_t r = 1; r + 1 < runs.size(); ++r) {
        const double a = v[runs[r - 1]], b = v[runs[r]], c = v[runs[r + 1]];
        if ((b > a && b > c) || (b < a && b < c)) ext.push_back(runs[r]);
    }
    if (runs.size() > 1) ext.push_back(runs.back());
    return ext;
}

Barcode barcode(const SampledPath& f) {
    const auto idx = extrema_indices(f);
    auto v = f.values();
    std::vector<Bar> bars;
    if (idx.size() == 1) {
        bars.push_back(Bar{v[idx[0]], v[idx[0]]});
        return Barcode(std::move(bars), v[idx[0]], v[idx[0]]);
    }

    // Linear pre-pass: an inner pair (b, c) flanked by a and d whose span
    // covers it is a finished bar no matter what surrounds it. Cancelling it
    // leaves a shorter alternating sequence with the same remaining pairs.
    std::vector<double> stack;
    std::vector<char> is_max;
    stack.reserve(64);
    is_max.reserve(64);
    bars.reserve(idx.size() / 2 + 1);
    const bool first_is_max = v[idx[0]] > v[idx[1]];
    for (std::size_t k = 0; k < idx.size(); ++k) {
        stack.push_back(v[idx[k]]);
        is_max.push_back(static_cast<char>((k % 2 == 0) == first_is_max));
        while (stack.size() >= 4) {
            const std::size_t s = stack.size();
            const double a = stack[s - 4], b = stack[s - 3], c = stack[s - 2], d = stack[s - 1];
            bool cancel;
            if (is_max[s - 3])
                cancel = a <= c && d >= b;
            else
                cancel = a >= c && d <= b;
            if (!cancel) break;
            if (is_max[s - 3])
                bars.push_back(Bar{b, c});
            else
                bars.push_back(Bar{c, b});
            stack[s - 3] = d;
            is_max[s - 3] = is_max[s - 1];
            stack.resize(s - 2);
            is_max.resize(s - 2);
        }
    }
    pair_by_union_find(stack, bars);
    const double lo = *std::min_element(stack.begin(), stack.end());
    const double hi = *std::max_element(stack.begin(), stack.end());
    return Barcode(std::move(bars), lo, hi);
}

std::size_t count_eps(const Barcode& bc, double eps) {
    require_positive_eps(eps, "count_eps");
    const auto& bars = bc.bars();
    auto it = std::partition_point(bars.begin(), bars.end(),
                                   [eps](const Bar& b) { return b.length() >= eps; });
    return static_cast<std::size_t>(it - bars.begin());
}

std::vector<std::size_t> count_eps_many(const Barcode& bc, const std::vector<double>& eps) {
    std::vector<std::size_t> out;
    out.reserve(eps.size());
    for (double e : eps) out.push_back(e > 0 ? count_eps(bc, e) : bc.total_count());
    return out;
}

namespace {

// Time at which the segment (ta, va) -> (tb, vb) reaches `level`, with the
// level clamped into the segment's value span.
double segment_hit(double ta, double va, double tb, double vb, double level) {
    if (level == va) return ta;
    if (level == vb) return tb;
    const double w = (level - va) / (vb - va);
    if (!(w > 0)) return ta;
    if (!(w < 1)) return tb;
    return ta + w * (tb - ta);
}

// Drawdown/drawup scan. Decisions compare differences of sample values only,
// the same doubles the barcode subtracts, so both routes see identical
// threshold tests. `Times` toggles the exact crossing-time solve.
template <bool Times>
std::size_t scan_neveu(const SampledPath& f, double eps, std::vector<double>* out) {
    auto t = f.times();
    auto v = f.values();
    const std::size_t n = v.size();
    bool seek_drawdown = true;  // looking for T_{i+1}
    double ref = v[0];          // running sup (drawdown) or inf (drawup)
    std::size_t completed_s = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double vb = v[i + 1];
        if (seek_drawdown) {
            if (vb >= v[i]) {
                if (vb > ref) ref = vb;
                continue;
            }
            if (ref - vb >= eps) {
                if constexpr (Times) {
                    double level = std::clamp(ref - eps, vb, v[i]);
                    out->push_back(segment_hit(t[i], v[i], t[i + 1], vb, level));
                }
                seek_drawdown = false;
                ref = vb;
            }
        } else {
            if (vb <= v[i]) {
                if (vb < ref) ref = vb;
                continue;
            }
            if (vb - ref >= eps) {
                if constexpr (Times) {
                    double level = std::clamp(ref + eps, v[i], vb);
                    out->push_back(segment_hit(t[i], v[i], t[i + 1], vb, level));
                }
                ++completed_s;
                seek_drawdown = true;
                ref = vb;
            }
        }
    }
    return completed_s;
}

}  // namespace

CrossingRecord neveu_times(const SampledPath& f, double eps) {
    require_positive_eps(eps, "neveu_times");
    CrossingRecord rec;
    rec.kind = CrossingRecord::Kind::neveu;
    rec.eps = eps;
    scan_neveu<true>(f, eps, &rec.times);
    return rec;
}

std::size_t count_eps_crossings(const SampledPath& f, double eps) {
    require_positive_eps(eps, "count_eps_crossings");
    if (!(f.max_value() - f.min_value() >= eps)) return 0;
    return 1 + scan_neveu<false>(f, eps, nullptr);
}

CrossingRecord band_crossings(const SampledPath& f, double x, double eps) {
    require_positive_eps(eps, "crossings");
    auto t = f.times();
    auto v = f.values();
    const double hi = x + eps;
    CrossingRecord rec;
    rec.kind = CrossingRecord::Kind::band;
    rec.eps = eps;
    rec.level = x;

    bool up_armed = false;    // visited <= x since the last upcrossing
    bool down_armed = false;  // visited >= hi since the last downcrossing
    bool seen = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double y = v[i];
        const bool low = y <= x, high = y >= hi;
        if (!seen && (low || high)) {
            seen = true;
            rec.first_visit_high = high;
        }
        if (high) {
            if (up_armed) {
                ++rec.up;
                up_armed = false;
                rec.up_times.push_back(i == 0 ? t[0] : segment_hit(t[i - 1], v[i - 1], t[i], y, hi));
                rec.times.push_back(rec.up_times.back());
            }
            down_armed = true;
        } else if (low) {
            if (down_armed) {
                ++rec.down;
                down_armed = false;
                rec.down_times.push_back(i == 0 ? t[0] : segment_hit(t[i - 1], v[i - 1], t[i], y, x));
                rec.times.push_back(rec.down_times.back());
            }
            up_armed = true;
        }
    }
    return rec;
}

CrossingCounts crossings(const SampledPath& f, double x, double eps) {
    require_positive_eps(eps, "crossings");
    auto v = f.values();
    const double hi = x + eps;
    std::size_t up = 0, down = 0;
    bool up_armed = false, down_armed = false;
    for (double y : v) {
        if (y >= hi) {
            up += up_armed;
            up_armed = false;
            down_armed = true;
        } else if (y <= x) {
            down += down_armed;
            down_armed = false;
            up_armed = true;
        }
    }
    return {up, down};
}

std::size_t count_rect(const SampledPath& f, double x, double eps) {
    require_positive_eps(eps, "count_rect");
    auto v = f.values();
    const double hi = x + eps;
    std::size_t up = 0;
    bool up_armed = false, seen = false, first_high = false, any_low = false;
    for (double y : v) {
        if (y >= hi) {
            if (!seen) {
                seen = true;
                first_high = true;
            }
            up += up_armed;
            up_armed = false;
        } else if (y <= x) {
            seen = true;
            any_low = true;
            up_armed = true;
        }
    }
    // Without a visit to x the only bar reaching level x + eps is the
    // essential one, and its cap inf f lies above x.
    if (!any_low) return 0;
    return up + (first_high ? 1 : 0);
}

std::size_t count_rect(const Barcode& bc, double x, double eps) {
    require_positive_eps(eps, "count_rect");
    const double hi = x + eps;
    std::size_t n = 0;
    for (const Bar& b : bc.bars()) n += (b.death <= x && b.birth >= hi);
    return n;
}

double trimmed_length(const Barcode& bc, double eps) {
    if (!(eps >= 0))
        throw DomainError("trimmed_length: eps must be >= 0");
    double total = 0.0;
    for (const Bar& b : bc.bars()) {
        const double excess = b.length() - eps;
        if (excess <= 0) break;  // bars are sorted by decreasing length
        total += excess;
    }
    return total;
}

std::vector<std::pair<double, double>> diagram(const Barcode& bc, Convention convention) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(bc.size());
    for (const Bar& b : bc.bars()) {
        if (convention == Convention::superlevel)
            pts.emplace_back(b.birth, b.death);
        else
            pts.emplace_back(-b.death + 0.0, -b.birth + 0.0);
    }
    return pts;
}

}  // namespace persbar
