#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "family.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "ideal.hpp"
#include "index_set.hpp"
#include "parallel.hpp"
#include "sequence.hpp"

namespace roughconv {

inline std::vector<double> default_cluster_eps(double h) { return {8 * h, 4 * h, 2 * h}; }
inline std::vector<double> default_enlargements(double h) { return {4 * h, 2 * h, h}; }

namespace detail {

inline void fill_dist2(const SequencePrefix& p, std::span<const double> c, std::vector<double>& out) {
    const std::size_t n = p.horizon, k = p.dim;
    out.resize(n);
    const double* d = p.data.data();
    if (k == 1) {
        const double c0 = c[0];
        for (std::size_t i = 0; i < n; ++i) {
            double t = d[i] - c0;
            out[i] = t * t;
        }
    } else if (k == 2) {
        const double c0 = c[0], c1 = c[1];
        for (std::size_t i = 0; i < n; ++i) {
            double t0 = d[2 * i] - c0, t1 = d[2 * i + 1] - c1;
            out[i] = t0 * t0 + t1 * t1;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) out[i] = dist2(p.point(i), c);
    }
}

inline IndexSet below_threshold(const std::vector<double>& d2, double thresh2) {
    IndexSet s(d2.size());
    for (std::size_t i = 0; i < d2.size(); ++i)
        if (d2[i] < thresh2) s.set(i);
    return s;
}

inline IndexSet at_least_threshold(const std::vector<double>& d2, double thresh2) {
    IndexSet s(d2.size());
    for (std::size_t i = 0; i < d2.size(); ++i)
        if (d2[i] >= thresh2) s.set(i);
    return s;
}

}  // namespace detail

struct ClusterReport {
    GridRegion region;                 // banded for presentation
    std::vector<CellLabel> crisp;      // pre-band labels drive downstream math
    std::vector<double> eps;
    IdealSpec ideal;
    std::size_t horizon = 0;
    nlohmann::json diagnostics;

    std::vector<Point> crisp_in_centers() const {
        std::vector<Point> out;
        for (std::size_t i = 0; i < crisp.size(); ++i)
            if (crisp[i] == CellLabel::In) out.push_back(region.center(i));
        return out;
    }

    bool nonempty() const {
        for (auto l : crisp)
            if (l == CellLabel::In) return true;
        return false;
    }

    nlohmann::json summary_json() const {
        nlohmann::json j;
        j["object"] = "cluster_set";
        j["region"] = region.summary_json();
        j["eps_schedule"] = eps;
        j["ideal"] = ideal.name();
        j["diagnostics"] = diagnostics;
        return j;
    }
};

inline void validate_eps_schedule(const std::vector<double>& eps, double h) {
    if (eps.empty()) throw std::invalid_argument("empty eps schedule");
    double prev = std::numeric_limits<double>::infinity();
    for (double e : eps) {
        if (!(e > 0) || e >= prev) throw std::invalid_argument("eps schedule must be positive and strictly decreasing");
        prev = e;
    }
    if (eps.back() < 2 * h - 1e-12) throw std::invalid_argument("schedule finer than grid");
}

// Cluster points at grid resolution: a cell is in when every epsilon
// neighborhood is hit on a non-small index set, out when some neighborhood is
// hit only smally, uncertain otherwise.
inline ClusterReport cluster_set(const SequencePrefix& prefix, const IdealSpec& ideal, const Box& box, double h,
                                 std::vector<double> eps = {}) {
    prefix.validate();
    if (prefix.dim > 2) throw std::invalid_argument("region grids limited to k <= 2");
    if (box.dim() != prefix.dim) throw std::invalid_argument("box dimension mismatch");
    if (eps.empty()) eps = default_cluster_eps(h);
    validate_eps_schedule(eps, h);

    ClusterReport rep;
    rep.eps = eps;
    rep.ideal = ideal;
    rep.horizon = prefix.horizon;
    rep.region = GridRegion::from_box(box, h);
    const std::size_t cells = rep.region.cell_count();
    rep.crisp.assign(cells, CellLabel::Out);
    std::vector<unsigned char> lowconf(cells, 0);

    parallel_for(cells, [&](std::size_t f) {
        thread_local std::vector<double> d2;
        Point c = rep.region.center(f);
        detail::fill_dist2(prefix, c, d2);
        bool all_not_small = true, any_small = false, any_inconclusive = false;
        for (double e : eps) {
            IndexSet hits = detail::below_threshold(d2, e * e);
            Verdict v = is_small(ideal, hits).verdict;
            if (v == Verdict::Small) any_small = true;
            if (v == Verdict::Inconclusive) any_inconclusive = true;
            if (v != Verdict::NotSmall) all_not_small = false;
        }
        if (all_not_small)
            rep.crisp[f] = CellLabel::In;
        else if (any_small)
            rep.crisp[f] = CellLabel::Out;
        else
            rep.crisp[f] = CellLabel::Uncertain;
        lowconf[f] = any_inconclusive ? 1 : 0;
    });

    rep.region.labels = rep.crisp;
    rep.region.apply_boundary_band();
    std::size_t lc = 0;
    for (auto x : lowconf) lc += x;
    rep.diagnostics["low_confidence_cells"] = lc;
    rep.diagnostics["crisp_in"] = static_cast<std::size_t>(std::count(rep.crisp.begin(), rep.crisp.end(), CellLabel::In));
    return rep;
}

// Point query version, any dimension up to the cap.
inline CellLabel is_cluster_point(const SequencePrefix& prefix, const IdealSpec& ideal, std::span<const double> eta,
                                  const std::vector<double>& eps) {
    if (eta.size() != prefix.dim) throw std::invalid_argument("point dimension mismatch");
    std::vector<double> d2;
    detail::fill_dist2(prefix, eta, d2);
    bool all_not_small = true, any_small = false;
    for (double e : eps) {
        IndexSet hits = detail::below_threshold(d2, e * e);
        Verdict v = is_small(ideal, hits).verdict;
        if (v == Verdict::Small) any_small = true;
        if (v != Verdict::NotSmall) all_not_small = false;
    }
    if (all_not_small) return CellLabel::In;
    if (any_small) return CellLabel::Out;
    return CellLabel::Uncertain;
}

struct LimitReport {
    GridRegion region;
    std::vector<CellLabel> crisp;
    std::string method;
    RoughFamily family;
    IdealSpec ideal;
    nlohmann::json diagnostics;

    nlohmann::json summary_json() const {
        nlohmann::json j;
        j["object"] = "limit_set";
        j["method"] = method;
        j["family"] = family.kind_name();
        j["radius_fn"] = family.radius.name();
        j["region"] = region.summary_json();
        j["diagnostics"] = diagnostics;
        return j;
    }
};

// Definition-level membership: for closed families the open supersets are
// discretized by the enlargement schedule (compactness of closed balls in
// R^k justifies testing enlargements only); open balls are tested as their
// own minimal open superset.
inline LimitReport rough_limit_direct(const SequencePrefix& prefix, const IdealSpec& ideal, const RoughFamily& family,
                                      const Box& box, double h) {
    prefix.validate();
    if (prefix.dim > 2) throw std::invalid_argument("region grids limited to k <= 2");
    if (box.dim() != prefix.dim) throw std::invalid_argument("box dimension mismatch");
    family.validate_on(box);

    LimitReport rep;
    rep.method = "direct";
    rep.family = family;
    rep.ideal = ideal;
    rep.region = GridRegion::from_box(box, h);
    const std::size_t cells = rep.region.cell_count();
    rep.crisp.assign(cells, CellLabel::Out);
    std::vector<unsigned char> lowconf(cells, 0);
    const std::vector<double> enl = default_enlargements(h);

    parallel_for(cells, [&](std::size_t f) {
        thread_local std::vector<double> d2;
        thread_local std::vector<double> sd;
        Point c = rep.region.center(f);
        bool any_not_small = false, all_small = true, any_inconclusive = false;
        if (family.kind == RoughFamily::Kind::GeneralClosed) {
            const std::size_t n = prefix.horizon;
            sd.resize(n);
            std::vector<double> off(prefix.dim);
            for (std::size_t i = 0; i < n; ++i) {
                auto pt = prefix.point(i);
                for (std::size_t a = 0; a < prefix.dim; ++a) off[a] = pt[a] - c[a];
                sd[i] = family.shape_distance(off);
            }
            for (double e : enl) {
                IndexSet exceed(n);
                for (std::size_t i = 0; i < n; ++i)
                    if (sd[i] >= e) exceed.set(i);
                Verdict v = is_small(ideal, exceed).verdict;
                if (v == Verdict::NotSmall) any_not_small = true;
                if (v == Verdict::Inconclusive) any_inconclusive = true;
                if (v != Verdict::Small) all_small = false;
            }
        } else {
            detail::fill_dist2(prefix, c, d2);
            const double r = family.radius(c);
            if (family.kind == RoughFamily::Kind::ClosedBall) {
                for (double e : enl) {
                    double t = r + e;
                    IndexSet exceed = detail::at_least_threshold(d2, t * t);
                    Verdict v = is_small(ideal, exceed).verdict;
                    if (v == Verdict::NotSmall) any_not_small = true;
                    if (v == Verdict::Inconclusive) any_inconclusive = true;
                    if (v != Verdict::Small) all_small = false;
                }
            } else {
                IndexSet exceed = detail::at_least_threshold(d2, r * r);
                Verdict v = is_small(ideal, exceed).verdict;
                any_not_small = v == Verdict::NotSmall;
                all_small = v == Verdict::Small;
                any_inconclusive = v == Verdict::Inconclusive;
            }
        }
        if (any_not_small)
            rep.crisp[f] = CellLabel::Out;
        else if (all_small)
            rep.crisp[f] = CellLabel::In;
        else
            rep.crisp[f] = CellLabel::Uncertain;
        lowconf[f] = any_inconclusive ? 1 : 0;
    });

    rep.region.labels = rep.crisp;
    rep.region.apply_boundary_band();
    std::size_t lc = 0;
    for (auto x : lowconf) lc += x;
    rep.diagnostics["low_confidence_cells"] = lc;
    rep.diagnostics["enlargements"] = enl;
    return rep;
}

// Characterization route: eta is a rough limit iff the cluster set fits
// inside F_eta. The computed cluster region dilates the true one by up to the
// schedule's smallest epsilon, so the fit test is slackened by exactly that
// amount; the residual cut gap versus the direct method is below the
// uncertain band width.
inline LimitReport rough_limit_via_clusters(const ClusterReport& cluster, const RoughFamily& family, const Box& box,
                                            double h) {
    if (!family.closed()) throw std::invalid_argument("characterization requires closed F_eta");
    if (!cluster.nonempty()) throw std::invalid_argument("empty cluster set");
    GridRegion grid = GridRegion::from_box(box, h);
    if (!grid.same_grid(cluster.region)) throw std::invalid_argument("grid mismatch with cluster report");
    family.validate_on(box);

    const std::vector<Point> gamma = cluster.crisp_in_centers();
    const double slack = cluster.eps.back();

    LimitReport rep;
    rep.method = "via_clusters";
    rep.family = family;
    rep.ideal = cluster.ideal;
    rep.region = std::move(grid);
    const std::size_t cells = rep.region.cell_count();
    rep.crisp.assign(cells, CellLabel::Out);

    parallel_for(cells, [&](std::size_t f) {
        Point c = rep.region.center(f);
        if (family.kind == RoughFamily::Kind::GeneralClosed) {
            const double band = family.shape_quantization();
            double worst = 0;
            std::vector<double> off(c.size());
            for (const auto& g : gamma) {
                for (std::size_t a = 0; a < c.size(); ++a) off[a] = g[a] - c[a];
                worst = std::max(worst, family.shape_distance(off));
            }
            if (worst <= slack + kGeomTol)
                rep.crisp[f] = CellLabel::In;
            else if (worst > slack + band + kGeomTol)
                rep.crisp[f] = CellLabel::Out;
            else
                rep.crisp[f] = CellLabel::Uncertain;
        } else {
            double r = family.radius(c) + slack;
            double m = max_dist(gamma, c);
            // one-cell uncertain window keeps the cut gap against the direct
            // route inside the band
            if (m <= r + kGeomTol)
                rep.crisp[f] = CellLabel::In;
            else if (m > r + rep.region.h + kGeomTol)
                rep.crisp[f] = CellLabel::Out;
            else
                rep.crisp[f] = CellLabel::Uncertain;
        }
    });

    rep.region.labels = rep.crisp;
    rep.region.apply_boundary_band();
    rep.diagnostics["cluster_in_cells"] = gamma.size();
    rep.diagnostics["cover_slack"] = slack;
    return rep;
}

// Closed convex hull of the cluster cells, rasterized back onto the same
// grid. The finite-sample stand-in for the intersection of hulls over large
// index sets.
inline GridRegion core_set(const ClusterReport& cluster) {
    std::vector<Point> gamma = cluster.crisp_in_centers();
    if (gamma.empty()) throw std::invalid_argument("core undefined for empty cluster set");
    const std::size_t k = gamma[0].size();
    if (k > 2) throw std::invalid_argument("region grids limited to k <= 2");
    GridRegion out = cluster.region;
    for (auto& l : out.labels) l = CellLabel::Out;
    const double h = out.h;

    if (k == 1) {
        double m = gamma[0][0], M = gamma[0][0];
        for (const auto& g : gamma) {
            m = std::min(m, g[0]);
            M = std::max(M, g[0]);
        }
        for (std::size_t f = 0; f < out.cell_count(); ++f) {
            double c = out.center(f)[0];
            if (c >= m - kGeomTol && c <= M + kGeomTol) out.labels[f] = CellLabel::In;
        }
    } else {
        std::vector<Point> hull = convex_hull(gamma);
        if (hull.size() == 1) {
            for (std::size_t f = 0; f < out.cell_count(); ++f)
                if (dist(out.center(f), hull[0]) <= h / 2 + kGeomTol) out.labels[f] = CellLabel::In;
        } else if (hull.size() == 2) {
            for (std::size_t f = 0; f < out.cell_count(); ++f) {
                Point c = out.center(f);
                // distance to segment hull[0]-hull[1]
                double vx = hull[1][0] - hull[0][0], vy = hull[1][1] - hull[0][1];
                double wx = c[0] - hull[0][0], wy = c[1] - hull[0][1];
                double t = (vx * wx + vy * wy) / (vx * vx + vy * vy);
                t = std::clamp(t, 0.0, 1.0);
                double dx = wx - t * vx, dy = wy - t * vy;
                if (std::sqrt(dx * dx + dy * dy) <= h / 2 + kGeomTol) out.labels[f] = CellLabel::In;
            }
        } else {
            for (std::size_t f = 0; f < out.cell_count(); ++f) {
                Point c = out.center(f);
                bool inside = true;
                for (std::size_t i = 0; i < hull.size() && inside; ++i) {
                    const Point& a = hull[i];
                    const Point& b = hull[(i + 1) % hull.size()];
                    double cr = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
                    if (cr < -kGeomTol) inside = false;
                }
                if (inside) out.labels[f] = CellLabel::In;
            }
        }
    }
    out.apply_boundary_band();
    return out;
}

// Hull membership query for any dimension up to the cap.
inline bool core_contains(const ClusterReport& cluster, std::span<const double> point, double tol) {
    std::vector<Point> gamma = cluster.crisp_in_centers();
    if (gamma.empty()) throw std::invalid_argument("core undefined for empty cluster set");
    return hull_distance(gamma, point) <= tol;
}

struct Certificate {
    bool nonempty = false;
    Point witness;
    double meb_radius = 0;
    double gap = 0;
};

// Constant-radius closed balls: some eta covers the cluster set iff the
// Chebyshev (minimal enclosing ball) radius fits within r; the MEB center is
// the witness.
inline Certificate nonemptiness_certificate(const ClusterReport& cluster, double r) {
    if (r < 0) throw std::invalid_argument("radius must be nonnegative");
    std::vector<Point> gamma = cluster.crisp_in_centers();
    if (gamma.empty()) throw std::invalid_argument("core undefined for empty cluster set");
    Ball b = minimal_enclosing_ball(gamma);
    Certificate cert;
    cert.meb_radius = b.radius;
    cert.witness = b.center;
    cert.nonempty = b.radius <= r + kGeomTol;
    cert.gap = cert.nonempty ? 0.0 : b.radius - r;
    return cert;
}

struct AutoBoxResult {
    Box box;
    Verdict escape_verdict = Verdict::Inconclusive;
    int inflations = 0;
    bool bounded_core = false;
};

// Bounded-core surrogate: a quantile box inflated until the escape indices
// form a small set. The verdict is reported, not silently assumed.
inline AutoBoxResult auto_core_box(const SequencePrefix& prefix, const IdealSpec& ideal, double h,
                                   double quantile = 0.005) {
    prefix.validate();
    const std::size_t n = prefix.horizon, k = prefix.dim;
    std::vector<double> lo(k), hi(k);
    std::vector<double> coords(n);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t i = 0; i < n; ++i) coords[i] = prefix.coord(i, a);
        std::sort(coords.begin(), coords.end());
        std::size_t li = static_cast<std::size_t>(std::floor(quantile * static_cast<double>(n - 1)));
        std::size_t hi_i = static_cast<std::size_t>(std::ceil((1 - quantile) * static_cast<double>(n - 1)));
        lo[a] = coords[li];
        hi[a] = coords[hi_i];
    }
    AutoBoxResult res;
    for (int iter = 0;; ++iter) {
        IndexSet escape(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto pt = prefix.point(i);
            for (std::size_t a = 0; a < k; ++a)
                if (pt[a] < lo[a] || pt[a] > hi[a]) {
                    escape.set(i);
                    break;
                }
        }
        res.escape_verdict = is_small(ideal, escape).verdict;
        res.inflations = iter;
        if (res.escape_verdict == Verdict::Small || iter >= 8) break;
        for (std::size_t a = 0; a < k; ++a) {
            double c = 0.5 * (lo[a] + hi[a]);
            double half = std::max({0.5 * (hi[a] - lo[a]), h, 1e-9});
            lo[a] = c - 2 * half;
            hi[a] = c + 2 * half;
        }
    }
    res.bounded_core = res.escape_verdict == Verdict::Small;
    for (std::size_t a = 0; a < k; ++a) {
        double pad = std::max(0.1 * (hi[a] - lo[a]), h);
        lo[a] -= pad;
        hi[a] += pad;
    }
    res.box = Box(lo, hi);
    return res;
}

// Adds the family's reach so limit candidates off the sequence's support are
// still inside the grid. Two evaluation passes cover radius functions that
// grow with |eta|.
inline AutoBoxResult auto_limit_box(const SequencePrefix& prefix, const IdealSpec& ideal, const RoughFamily& family,
                                    double h) {
    AutoBoxResult res = auto_core_box(prefix, ideal, h);
    double r1 = family.kind == RoughFamily::Kind::GeneralClosed
                    ? family.shape_quantization() + family.shape_reach()
                    : family.radius.upper_bound_on(res.box);
    Box grown = res.box.inflated(std::max(r1, 0.0) + h);
    double r2 = family.kind == RoughFamily::Kind::GeneralClosed
                    ? r1
                    : family.radius.upper_bound_on(grown);
    res.box = res.box.inflated(std::max({r1, r2, 0.0}) + h);
    return res;
}

}  // namespace roughconv
