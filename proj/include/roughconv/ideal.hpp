#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "index_set.hpp"

namespace roughconv {

enum class Verdict { Small, NotSmall, Inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Small: return "small";
        case Verdict::NotSmall: return "not_small";
        default: return "inconclusive";
    }
}

// Estimator trace per window plus the three-valued call. Genuine ideal
// membership is a tail property, so a finite horizon can only ever certify
// one side or admit it cannot tell.
struct SmallnessVerdict {
    Verdict verdict = Verdict::Inconclusive;
    std::vector<double> trace;
    std::vector<std::size_t> windows;
    std::string note;
};

using WindowSchedule = std::vector<std::size_t>;

inline WindowSchedule dyadic_windows(std::size_t n) {
    WindowSchedule w{n / 2, 3 * n / 4, 7 * n / 8, n};
    WindowSchedule out;
    for (auto x : w)
        if (x >= 1 && (out.empty() || x > out.back())) out.push_back(x);
    return out;
}

// Geometric checkpoints for summability: chunk widths grow with n, so a
// divergent tail cannot hide behind shrinking chunks.
inline WindowSchedule octave_windows(std::size_t n) {
    WindowSchedule w{n / 16, n / 8, n / 4, n / 2, n};
    WindowSchedule out;
    for (auto x : w)
        if (x >= 1 && (out.empty() || x > out.back())) out.push_back(x);
    return out;
}

inline void validate_windows(const WindowSchedule& w, std::size_t horizon) {
    if (w.empty()) throw std::invalid_argument("no windows");
    std::size_t prev = 0;
    for (auto x : w) {
        if (x <= prev) throw std::invalid_argument("windows must be strictly increasing");
        if (x > horizon) throw std::invalid_argument("window beyond horizon");
        prev = x;
    }
}

struct IdealSpec {
    enum class Kind { Fin, Density, Summable, WeightFunctional };

    Kind kind = Kind::Fin;
    double delta_small = 0.01;          // Density / WeightFunctional
    WindowSchedule windows;             // empty -> dyadic default at evaluation
    double budget = 20.0;               // Summable
    double decay_ratio = 0.9;           // Summable
    std::vector<double> weights;        // WeightFunctional, size >= horizon

    static IdealSpec fin() { return IdealSpec{}; }

    static IdealSpec density(double delta = 0.01, WindowSchedule w = {}) {
        IdealSpec s;
        s.kind = Kind::Density;
        s.delta_small = delta;
        s.windows = std::move(w);
        if (s.delta_small <= 0 || s.delta_small >= 1) throw std::invalid_argument("delta_small must lie in (0,1)");
        return s;
    }

    static IdealSpec summable(double budget = 20.0, double decay = 0.9) {
        IdealSpec s;
        s.kind = Kind::Summable;
        s.budget = budget;
        s.decay_ratio = decay;
        if (budget <= 0) throw std::invalid_argument("budget must be positive");
        if (decay <= 0 || decay >= 1) throw std::invalid_argument("decay ratio must lie in (0,1)");
        return s;
    }

    static IdealSpec weight_functional(std::vector<double> w, double delta = 0.01) {
        IdealSpec s;
        s.kind = Kind::WeightFunctional;
        s.weights = std::move(w);
        s.delta_small = delta;
        for (double x : s.weights)
            if (!(x >= 0)) throw std::invalid_argument("weights must be nonnegative");
        if (s.delta_small <= 0 || s.delta_small >= 1) throw std::invalid_argument("delta_small must lie in (0,1)");
        return s;
    }

    std::string name() const {
        switch (kind) {
            case Kind::Fin: return "fin";
            case Kind::Density: return "density";
            case Kind::Summable: return "summable";
            default: return "weight";
        }
    }
};

namespace detail {

// Tail half of a schedule: the last ceil(m/2) windows.
inline std::size_t tail_start(std::size_t m) { return m - (m + 1) / 2; }

inline WindowSchedule effective_windows(const IdealSpec& spec, std::size_t horizon) {
    WindowSchedule w = spec.windows.empty() ? dyadic_windows(horizon) : spec.windows;
    validate_windows(w, horizon);
    if (w.back() != horizon) throw std::invalid_argument("last window must equal horizon");
    return w;
}

// Chunks between consecutive windows; a single window yields [0, w0).
inline std::vector<std::pair<std::size_t, std::size_t>> window_chunks(const WindowSchedule& w) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    if (w.size() == 1) {
        out.emplace_back(0, w[0]);
        return out;
    }
    for (std::size_t i = 1; i < w.size(); ++i) out.emplace_back(w[i - 1], w[i]);
    return out;
}

inline double recip_weight_sum(const IndexSet& s, std::size_t lo, std::size_t hi) {
    double acc = 0;
    for (std::size_t w = lo / 64 * 64; w < hi; w += 64) {
        std::size_t a = std::max(lo, w), b = std::min(hi, w + 64);
        for (std::size_t i = a; i < b; ++i)
            if (s.contains(i)) acc += 1.0 / static_cast<double>(i + 1);
    }
    return acc;
}

}  // namespace detail

inline double density_estimate(const IndexSet& s, const WindowSchedule& windows) {
    validate_windows(windows, s.horizon());
    double best = 0;
    for (std::size_t i = detail::tail_start(windows.size()); i < windows.size(); ++i) {
        double d = static_cast<double>(s.count_below(windows[i])) / static_cast<double>(windows[i]);
        best = std::max(best, d);
    }
    return best;
}

inline SmallnessVerdict is_small(const IdealSpec& spec, const IndexSet& s) {
    SmallnessVerdict out;
    const std::size_t n = s.horizon();
    if (spec.kind == IdealSpec::Kind::Fin) {
        WindowSchedule w = detail::effective_windows(spec, n);
        auto chunks = detail::window_chunks(w);
        out.windows = w;
        bool all_hit = true;
        for (auto [lo, hi] : chunks) {
            std::size_t c = s.count_between(lo, hi);
            out.trace.push_back(static_cast<double>(c));
            if (c == 0) all_hit = false;
        }
        std::size_t final_count = s.count_between(chunks.back().first, chunks.back().second);
        if (final_count == 0) {
            out.verdict = Verdict::Small;
            out.note = "final tail window empty";
        } else if (all_hit) {
            out.verdict = Verdict::NotSmall;
            out.note = "members persist in every tail window";
        } else {
            out.verdict = Verdict::Inconclusive;
            out.note = "intermittent tail membership";
        }
        return out;
    }

    if (spec.kind == IdealSpec::Kind::Density || spec.kind == IdealSpec::Kind::WeightFunctional) {
        WindowSchedule w = detail::effective_windows(spec, n);
        const bool weighted = spec.kind == IdealSpec::Kind::WeightFunctional;
        if (weighted && spec.weights.size() < n) throw std::invalid_argument("weights shorter than horizon");
        std::vector<double> prefix_wt;
        if (weighted) {
            prefix_wt.resize(n + 1, 0.0);
            for (std::size_t i = 0; i < n; ++i) prefix_wt[i + 1] = prefix_wt[i] + spec.weights[i];
        }
        double dmin = 1.0, dmax = 0.0;
        for (std::size_t i = detail::tail_start(w.size()); i < w.size(); ++i) {
            double d;
            if (weighted) {
                double tot = prefix_wt[w[i]];
                double hit = 0;
                s.for_each([&](std::size_t idx) {
                    if (idx < w[i]) hit += spec.weights[idx];
                });
                d = tot > 0 ? hit / tot : 0.0;
            } else {
                d = static_cast<double>(s.count_below(w[i])) / static_cast<double>(w[i]);
            }
            out.trace.push_back(d);
            out.windows.push_back(w[i]);
            dmin = std::min(dmin, d);
            dmax = std::max(dmax, d);
        }
        const double hi_bar = std::min(2 * spec.delta_small, 1 - spec.delta_small);
        if (dmax < spec.delta_small && dmin < 1 - spec.delta_small) {
            out.verdict = Verdict::Small;
        } else if (dmin >= hi_bar) {
            out.verdict = Verdict::NotSmall;
        } else {
            out.verdict = Verdict::Inconclusive;
        }
        return out;
    }

    // Summable: partial sums of 1/(n+1) over S on geometric checkpoints.
    WindowSchedule w = octave_windows(n);
    auto chunks = detail::window_chunks(w);
    out.windows = w;
    std::vector<double> inc;
    double total = 0;
    {
        double head = detail::recip_weight_sum(s, 0, chunks.front().first);
        total = head;
    }
    for (auto [lo, hi] : chunks) {
        double v = detail::recip_weight_sum(s, lo, hi);
        inc.push_back(v);
        total += v;
        out.trace.push_back(v);
    }
    if (s.empty()) {
        out.verdict = Verdict::Small;
        out.note = "empty set";
        return out;
    }
    if (total >= spec.budget) {
        out.verdict = Verdict::NotSmall;
        out.note = "partial sum reached budget";
        return out;
    }
    if (inc.size() < 2) {
        out.verdict = Verdict::Inconclusive;
        out.note = "horizon too short to assess decay";
        return out;
    }
    bool all_decay = true, all_grow = true;
    for (std::size_t i = 0; i + 1 < inc.size(); ++i) {
        bool decays = inc[i + 1] <= spec.decay_ratio * inc[i] + 1e-18;
        all_decay = all_decay && decays;
        all_grow = all_grow && !decays;
    }
    if (all_decay) {
        double projected = total + inc.back() * spec.decay_ratio / (1 - spec.decay_ratio);
        if (projected < spec.budget) {
            out.verdict = Verdict::Small;
            out.note = "increments decay; projected total below budget";
        } else {
            out.verdict = Verdict::Inconclusive;
            out.note = "increments decay but projection reaches budget";
        }
    } else if (all_grow) {
        out.verdict = Verdict::NotSmall;
        out.note = "increments never decay across geometric checkpoints";
    } else {
        out.verdict = Verdict::Inconclusive;
        out.note = "mixed increment behavior";
    }
    return out;
}

struct LimsupResult {
    double value = 0;
    bool low_confidence = false;
    std::size_t probes = 0;
};

// inf{a : {n : v_n > a} small}, restricted to the distinct values of the
// prefix. Verdicts are monotone in the threshold for the built-in ideals, so
// a binary search plus a downward sweep lands on the smallest qualifying value.
inline LimsupResult ideal_limsup_ex(const IdealSpec& spec, const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("empty prefix");
    const std::size_t n = values.size();
    std::vector<double> distinct(values);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    LimsupResult res;
    auto exceedance_small = [&](double a) {
        IndexSet s(n);
        for (std::size_t i = 0; i < n; ++i)
            if (values[i] > a) s.set(i);
        Verdict v = is_small(spec, s).verdict;
        ++res.probes;
        if (v == Verdict::Inconclusive) res.low_confidence = true;
        return v == Verdict::Small;
    };

    std::size_t lo = 0, hi = distinct.size() - 1;
    if (!exceedance_small(distinct[hi])) {
        res.value = distinct[hi];
        res.low_confidence = true;
        return res;
    }
    while (lo < hi) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (exceedance_small(distinct[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    while (hi > 0 && exceedance_small(distinct[hi - 1])) --hi;
    res.value = distinct[hi];
    return res;
}

inline double ideal_limsup(const IdealSpec& spec, const std::vector<double>& values) {
    return ideal_limsup_ex(spec, values).value;
}

}  // namespace roughconv
