#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "analysis.hpp"
#include "family.hpp"
#include "geometry.hpp"
#include "ideal.hpp"
#include "sequence.hpp"
#include "util.hpp"

namespace roughconv {

enum class CheckStatus { Pass, Fail, Uncertain, HypothesisViolated };

inline const char* check_status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::Uncertain: return "uncertain";
        default: return "hypothesis_violated";
    }
}

struct CheckReport {
    std::string name;
    CheckStatus status = CheckStatus::Uncertain;
    nlohmann::json params;
    nlohmann::json witnesses = nlohmann::json::array();
    double runtime_ms = 0;
    std::string note;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["check"] = name;
        j["status"] = check_status_name(status);
        j["params"] = params;
        j["witnesses"] = witnesses;
        j["runtime_ms"] = runtime_ms;
        if (!note.empty()) j["note"] = note;
        return j;
    }
};

namespace detail {

struct StopWatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
};

inline SequencePrefix two_value_points(const Point& a, const Point& b, const PartitionSpec& part, std::size_t n) {
    if (a.size() != b.size() || a.empty()) throw std::invalid_argument("witness points must share a dimension");
    IndexSet on = part.realize(n);
    if (on.count() == 0 || on.count() == n)
        throw std::invalid_argument("two-value partition needs both classes nonempty");
    SequencePrefix p;
    p.dim = a.size();
    p.horizon = n;
    p.data.resize(n * p.dim);
    for (std::size_t i = 0; i < n; ++i) {
        const Point& v = on.contains(i) ? a : b;
        for (std::size_t c = 0; c < p.dim; ++c) p.data[i * p.dim + c] = v[c];
    }
    p.provenance = "two_value_points";
    return p;
}

// Membership at grid tolerance, matching the direct route's labeling.
// 1 member, 0 non-member, -1 inconclusive.
inline int ball_membership(const SequencePrefix& prefix, const IdealSpec& ideal, const RoughFamily& fam,
                           std::span<const double> eta, double h) {
    std::vector<double> d2;
    fill_dist2(prefix, eta, d2);
    const double r = fam.radius(eta);
    if (fam.kind == RoughFamily::Kind::OpenBall) {
        Verdict v = is_small(ideal, at_least_threshold(d2, r * r)).verdict;
        return v == Verdict::Small ? 1 : v == Verdict::NotSmall ? 0 : -1;
    }
    bool inconclusive = false;
    for (double e : default_enlargements(h)) {
        double t = r + e;
        Verdict v = is_small(ideal, at_least_threshold(d2, t * t)).verdict;
        if (v == Verdict::NotSmall) return 0;
        if (v == Verdict::Inconclusive) inconclusive = true;
    }
    return inconclusive ? -1 : 1;
}

// Crisp In/Out interfaces along grid lines, spanning any uncertain run.
inline std::vector<std::pair<std::size_t, std::size_t>> crisp_transitions(const GridRegion& region,
                                                                          const std::vector<CellLabel>& crisp,
                                                                          std::size_t cap = 8) {
    std::vector<std::pair<std::size_t, std::size_t>> out;  // (in_flat, out_flat)
    auto scan = [&](std::size_t start, std::size_t stride, std::size_t count) {
        bool have = false;
        CellLabel last = CellLabel::Uncertain;
        std::size_t lastf = 0;
        for (std::size_t i = 0; i < count && out.size() < cap; ++i) {
            std::size_t f = start + i * stride;
            CellLabel l = crisp[f];
            if (l == CellLabel::Uncertain) continue;
            if (have && l != last) {
                if (l == CellLabel::Out)
                    out.emplace_back(lastf, f);
                else
                    out.emplace_back(f, lastf);
            }
            have = true;
            last = l;
            lastf = f;
        }
    };
    if (region.dim() == 1) {
        scan(0, 1, region.shape[0]);
    } else if (region.dim() == 2) {
        for (std::size_t i0 = 0; i0 < region.shape[0] && out.size() < cap; ++i0)
            scan(i0 * region.shape[1], 1, region.shape[1]);
        for (std::size_t i1 = 0; i1 < region.shape[1] && out.size() < cap; ++i1)
            scan(i1, region.shape[1], region.shape[0]);
    }
    return out;
}

// Banded-label conflicts between two regions on the same grid.
inline std::vector<std::size_t> banded_conflicts(const std::vector<CellLabel>& a, const std::vector<CellLabel>& b,
                                                 std::size_t cap = 8) {
    std::vector<std::size_t> out;
    for (std::size_t f = 0; f < a.size() && out.size() < cap; ++f) {
        bool conflict = (a[f] == CellLabel::In && b[f] == CellLabel::Out) ||
                        (a[f] == CellLabel::Out && b[f] == CellLabel::In);
        if (conflict) out.push_back(f);
    }
    return out;
}

inline nlohmann::json cell_witness(const GridRegion& region, std::size_t flat) {
    nlohmann::json j;
    j["cell"] = region.center(flat);
    return j;
}

}  // namespace detail

// Cross-method agreement: the definitional route and the cluster-cover route
// must label the same cells, up to the uncertain bands.
inline CheckReport check_characterization(const SequencePrefix& prefix, const IdealSpec& ideal, double r,
                                          const Box& box, double h) {
    detail::StopWatch sw;
    CheckReport rep;
    rep.name = "characterization";
    rep.params = {{"r", r}, {"h", h}, {"horizon", prefix.horizon}, {"ideal", ideal.name()}};
    RoughFamily fam = RoughFamily::closed_ball(RadiusFn::constant(r));
    ClusterReport cluster = cluster_set(prefix, ideal, box, h);
    if (!cluster.nonempty()) {
        rep.status = CheckStatus::Uncertain;
        rep.note = "empty cluster set";
        rep.runtime_ms = sw.ms();
        return rep;
    }
    LimitReport direct = rough_limit_direct(prefix, ideal, fam, box, h);
    LimitReport via = rough_limit_via_clusters(cluster, fam, box, h);
    auto conflicts = detail::banded_conflicts(direct.region.labels, via.region.labels);
    for (auto f : conflicts) rep.witnesses.push_back(detail::cell_witness(direct.region, f));
    rep.status = conflicts.empty() ? CheckStatus::Pass : CheckStatus::Fail;
    rep.params["direct_in"] = direct.region.count(CellLabel::In);
    rep.params["via_in"] = via.region.count(CellLabel::In);
    rep.runtime_ms = sw.ms();
    return rep;
}

// Boundary attainment: bisect each crisp In/Out interface to the true cut and
// test whether the cut point itself belongs. Closed families must contain it;
// open families that exclude it violate the closedness hypothesis, which the
// report labels rather than calling a failure.
inline CheckReport check_closedness(const LimitReport& limit, const SequencePrefix& prefix) {
    detail::StopWatch sw;
    CheckReport rep;
    rep.name = "closedness";
    rep.params = {{"family", limit.family.kind_name()}, {"h", limit.region.h}, {"horizon", prefix.horizon}};
    if (limit.family.kind == RoughFamily::Kind::GeneralClosed) {
        rep.status = CheckStatus::Uncertain;
        rep.note = "boundary probe supports ball families";
        rep.runtime_ms = sw.ms();
        return rep;
    }
    const double h = limit.region.h;
    const IdealSpec& ideal = limit.ideal;
    const RoughFamily& fam = limit.family;
    auto transitions = detail::crisp_transitions(limit.region, limit.crisp);
    if (transitions.empty()) {
        rep.status = CheckStatus::Pass;
        rep.note = "no in/out interface at resolution";
        rep.runtime_ms = sw.ms();
        return rep;
    }
    bool any_pass = false, any_uncertain = false, any_violated = false, any_fail = false;
    for (auto [fin, fout] : transitions) {
        Point a = limit.region.center(fin), b = limit.region.center(fout);
        if (detail::ball_membership(prefix, ideal, fam, a, h) != 1) {
            any_uncertain = true;
            continue;
        }
        bool aborted = false;
        for (int it = 0; it < 60; ++it) {
            Point mid(a.size());
            for (std::size_t c = 0; c < a.size(); ++c) mid[c] = 0.5 * (a[c] + b[c]);
            int m = detail::ball_membership(prefix, ideal, fam, mid, h);
            if (m == -1) {
                aborted = true;
                break;
            }
            (m == 1 ? a : b) = mid;
        }
        if (aborted) {
            any_uncertain = true;
            continue;
        }
        const Point& eta = b;  // out-side limit of member points
        std::vector<double> d2;
        detail::fill_dist2(prefix, eta, d2);
        const double r = fam.radius(eta);
        auto probe = [&](double t) { return is_small(ideal, detail::at_least_threshold(d2, t > 0 ? t * t : 0.0)).verdict; };
        if (fam.kind == RoughFamily::Kind::ClosedBall) {
            // computed cut sits where the exceedance limsup crosses r + h
            Verdict attain = probe(r + 0.5 * h);
            Verdict closure = probe(r + 1.5 * h);
            if (attain == Verdict::Inconclusive || closure == Verdict::Inconclusive) {
                any_uncertain = true;
            } else if (attain != Verdict::NotSmall) {
                any_uncertain = true;
            } else if (closure == Verdict::Small) {
                any_pass = true;
            } else {
                any_fail = true;
                rep.witnesses.push_back({{"cut", eta}});
            }
        } else {
            Verdict attain = probe(r - 0.5 * h);
            Verdict member = probe(r);
            if (attain == Verdict::Inconclusive || member == Verdict::Inconclusive) {
                any_uncertain = true;
            } else if (attain != Verdict::NotSmall) {
                any_uncertain = true;
            } else if (member == Verdict::NotSmall) {
                any_violated = true;
                rep.witnesses.push_back({{"cut", eta}});
            } else {
                any_pass = true;
            }
        }
    }
    if (any_fail)
        rep.status = CheckStatus::Fail;
    else if (any_violated) {
        rep.status = CheckStatus::HypothesisViolated;
        rep.note = "open family excludes a boundary point that is a limit of members";
    } else if (any_pass && !any_uncertain)
        rep.status = CheckStatus::Pass;
    else if (any_pass)
        rep.status = CheckStatus::Pass;
    else
        rep.status = CheckStatus::Uncertain;
    rep.params["transitions"] = transitions.size();
    rep.runtime_ms = sw.ms();
    return rep;
}

// Grid convexity: midpoints of in-cell pairs may not land on confirmed
// out-cells. Suspected violations are re-probed pointwise with margin before
// they count, so thin-boundary quantization cannot raise false alarms.
inline CheckReport check_convexity(const LimitReport& limit, const SequencePrefix& prefix) {
    detail::StopWatch sw;
    CheckReport rep;
    rep.name = "convexity";
    const bool certified = limit.family.kind != RoughFamily::Kind::GeneralClosed &&
                           limit.family.radius.certified_concave();
    rep.params = {{"family", limit.family.kind_name()},
                  {"radius_fn", limit.family.radius.name()},
                  {"concavity_certified", certified},
                  {"h", limit.region.h}};
    const GridRegion& region = limit.region;
    const double h = region.h;
    std::vector<std::size_t> in_cells;
    for (std::size_t f = 0; f < limit.crisp.size(); ++f)
        if (limit.crisp[f] == CellLabel::In) in_cells.push_back(f);
    const std::size_t k = region.dim();
    std::set<std::size_t> confirmed;
    std::set<std::size_t> cleared;
    auto confirm_out = [&](const Point& mu) {
        std::vector<double> d2;
        if (limit.family.kind == RoughFamily::Kind::GeneralClosed) {
            const double cut = 2 * h + limit.family.shape_quantization();
            std::size_t n = prefix.horizon;
            IndexSet exceed(n);
            std::vector<double> off(mu.size());
            for (std::size_t i = 0; i < n; ++i) {
                auto pt = prefix.point(i);
                for (std::size_t a = 0; a < mu.size(); ++a) off[a] = pt[a] - mu[a];
                if (limit.family.shape_distance(off) >= cut) exceed.set(i);
            }
            return is_small(limit.ideal, exceed).verdict == Verdict::NotSmall;
        }
        detail::fill_dist2(prefix, mu, d2);
        double t = limit.family.radius(mu) + 2 * h;
        return is_small(limit.ideal, detail::at_least_threshold(d2, t * t)).verdict == Verdict::NotSmall;
    };
    std::size_t pairs = 0;
    for (std::size_t ii = 0; ii < in_cells.size() && rep.witnesses.size() < 8; ++ii) {
        auto ia = region.multi_index(in_cells[ii]);
        for (std::size_t jj = ii + 1; jj < in_cells.size() && rep.witnesses.size() < 8; ++jj) {
            auto ib = region.multi_index(in_cells[jj]);
            ++pairs;
            // candidate cells containing the midpoint (two per odd axis sum)
            std::vector<std::vector<std::size_t>> axes(k);
            for (std::size_t a = 0; a < k; ++a) {
                std::size_t s = ia[a] + ib[a];
                axes[a].push_back(s / 2);
                if (s % 2) axes[a].push_back(s / 2 + 1);
            }
            std::vector<std::size_t> idx(k, 0);
            bool all_out = true;
            std::vector<std::size_t> cand;
            for (bool more = true; more && all_out;) {
                std::vector<std::size_t> mi(k);
                for (std::size_t a = 0; a < k; ++a) mi[a] = axes[a][idx[a]];
                std::size_t f = region.flat_index(mi);
                cand.push_back(f);
                if (limit.crisp[f] != CellLabel::Out) all_out = false;
                more = false;
                for (std::size_t a = k; a-- > 0;) {
                    if (++idx[a] < axes[a].size()) {
                        more = true;
                        break;
                    }
                    idx[a] = 0;
                }
            }
            if (!all_out) continue;
            std::size_t key = cand[0];
            if (cleared.count(key) || confirmed.count(key)) {
                if (confirmed.count(key)) {
                    rep.witnesses.push_back({{"pair", {region.center(in_cells[ii]), region.center(in_cells[jj])}},
                                             {"midpoint_cell", region.center(key)}});
                }
                continue;
            }
            Point mu(k);
            Point ca = region.center(in_cells[ii]), cb = region.center(in_cells[jj]);
            for (std::size_t a = 0; a < k; ++a) mu[a] = 0.5 * (ca[a] + cb[a]);
            if (confirm_out(mu)) {
                confirmed.insert(key);
                rep.witnesses.push_back(
                    {{"pair", {ca, cb}}, {"midpoint", mu}});
            } else {
                cleared.insert(key);
            }
        }
    }
    rep.params["in_cells"] = in_cells.size();
    rep.params["pairs"] = pairs;
    if (rep.witnesses.empty())
        rep.status = CheckStatus::Pass;
    else if (certified)
        rep.status = CheckStatus::Fail;
    else {
        rep.status = CheckStatus::HypothesisViolated;
        rep.note = "radius function not certified concave; violation expected";
    }
    rep.runtime_ms = sw.ms();
    return rep;
}

// Covering the hull of the cluster set must agree with covering the cluster
// set itself (farthest point of a hull is a vertex) and with the directly
// computed limit set.
inline CheckReport check_core_equality(const SequencePrefix& prefix, const IdealSpec& ideal, const RoughFamily& fam,
                                       const Box& box, double h) {
    detail::StopWatch sw;
    CheckReport rep;
    rep.name = "core_equality";
    rep.params = {{"h", h}, {"horizon", prefix.horizon}, {"ideal", ideal.name()}, {"radius_fn", fam.radius.name()}};
    if (fam.kind != RoughFamily::Kind::ClosedBall) throw std::invalid_argument("core equality requires closed balls");
    ClusterReport cluster = cluster_set(prefix, ideal, box, h);
    if (!cluster.nonempty()) {
        rep.status = CheckStatus::Uncertain;
        rep.note = "empty cluster set";
        rep.runtime_ms = sw.ms();
        return rep;
    }
    LimitReport direct = rough_limit_direct(prefix, ideal, fam, box, h);
    LimitReport via = rough_limit_via_clusters(cluster, fam, box, h);
    std::vector<Point> gamma = cluster.crisp_in_centers();
    std::vector<Point> hullv = (prefix.dim <= 2 && gamma.size() >= 2) ? convex_hull(gamma) : gamma;
    const double slack = cluster.eps.back();

    GridRegion hull_region = via.region;
    double max_discrepancy = 0;
    for (std::size_t f = 0; f < hull_region.cell_count(); ++f) {
        Point c = hull_region.center(f);
        double ma = max_dist(gamma, c);
        double mh = max_dist(hullv, c);
        max_discrepancy = std::max(max_discrepancy, std::abs(ma - mh));
        double r = fam.radius(c) + slack;
        hull_region.labels[f] = mh <= r + kGeomTol              ? CellLabel::In
                                : mh > r + h + kGeomTol ? CellLabel::Out
                                                                : CellLabel::Uncertain;
    }
    hull_region.apply_boundary_band();
    rep.params["hull_vertices"] = hullv.size();
    rep.params["max_hull_vs_all_discrepancy"] = max_discrepancy;
    auto conflicts = detail::banded_conflicts(hull_region.labels, direct.region.labels);
    for (auto f : conflicts) rep.witnesses.push_back(detail::cell_witness(hull_region, f));
    auto route_conflicts = detail::banded_conflicts(hull_region.labels, via.region.labels);
    for (auto f : route_conflicts) rep.witnesses.push_back(detail::cell_witness(hull_region, f));
    if (max_discrepancy > 1e-9) {
        rep.status = CheckStatus::Fail;
        rep.note = "hull max-distance differs from point-set max-distance";
    } else if (!conflicts.empty() || !route_conflicts.empty())
        rep.status = CheckStatus::Fail;
    else
        rep.status = CheckStatus::Pass;
    rep.runtime_ms = sw.ms();
    return rep;
}

// Three equivalent descriptions of rough convergence with constant radius:
// classical convergence to the core centroid, singleton core, and the limit
// set being a full ball of radius r.
inline CheckReport check_equivalence_core(const SequencePrefix& prefix, const IdealSpec& ideal, double r, double h) {
    detail::StopWatch sw;
    CheckReport rep;
    rep.name = "equivalence_core";
    rep.params = {{"r", r}, {"h", h}, {"horizon", prefix.horizon}, {"ideal", ideal.name()}};
    AutoBoxResult cb = auto_core_box(prefix, ideal, h);
    ClusterReport cluster = cluster_set(prefix, ideal, cb.box, h);
    if (!cluster.nonempty()) {
        rep.status = CheckStatus::Uncertain;
        rep.note = "empty cluster set";
        rep.runtime_ms = sw.ms();
        return rep;
    }
    bool shaky = !cb.bounded_core;

    // (i) classical convergence to the core centroid, decided by the ideal's
    // own verdict on the exceedance set at grid scale
    GridRegion core = core_set(cluster);
    std::vector<Point> core_in = core.centers_with(CellLabel::In);
    std::vector<Point> gamma = cluster.crisp_in_centers();
    const std::vector<Point>& centroid_src = core_in.empty() ? gamma : core_in;
    Point centroid(prefix.dim, 0.0);
    for (const auto& p : centroid_src)
        for (std::size_t a = 0; a < prefix.dim; ++a) centroid[a] += p[a];
    for (auto& v : centroid) v /= static_cast<double>(centroid_src.size());
    std::vector<double> dists(prefix.horizon);
    for (std::size_t i = 0; i < prefix.horizon; ++i) dists[i] = dist(prefix.point(i), centroid);
    IndexSet exceed(prefix.horizon);
    for (std::size_t i = 0; i < prefix.horizon; ++i)
        if (dists[i] >= 2 * h) exceed.set(i);
    Verdict conv_v = is_small(ideal, exceed).verdict;
    bool cond_convergent = conv_v == Verdict::Small;
    LimsupResult lim = ideal_limsup_ex(ideal, dists);
    if (conv_v == Verdict::Inconclusive || std::abs(lim.value - 2 * h) <= 0.25 * h) shaky = true;

    // (ii) singleton core at resolution
    std::vector<Point> dv = (prefix.dim <= 2 && gamma.size() >= 2) ? convex_hull(gamma) : gamma;
    double diam = 0;
    for (std::size_t i = 0; i < dv.size(); ++i)
        for (std::size_t j = i + 1; j < dv.size(); ++j) diam = std::max(diam, dist(dv[i], dv[j]));
    bool cond_singleton = diam <= 4 * h;
    if (std::abs(diam - 4 * h) <= 0.5 * h) shaky = true;

    // (iii) limit set is a ball of radius r around the certificate witness
    RoughFamily fam = RoughFamily::closed_ball(RadiusFn::constant(r));
    AutoBoxResult lb = auto_limit_box(prefix, ideal, fam, h);
    LimitReport direct = rough_limit_direct(prefix, ideal, fam, lb.box, h);
    Certificate cert = nonemptiness_certificate(cluster, r);
    bool cond_ball = direct.region.count(CellLabel::In) > 0;
    const double ball_band = 6 * h;
    if (cond_ball) {
        for (std::size_t f = 0; f < direct.crisp.size() && cond_ball; ++f) {
            double dd = dist(direct.region.center(f), cert.witness);
            if (direct.crisp[f] == CellLabel::In && dd > r + ball_band) cond_ball = false;
            if (direct.crisp[f] == CellLabel::Out && dd < r - ball_band) cond_ball = false;
        }
    }

    rep.params["limsup_to_centroid"] = lim.value;
    rep.params["core_diameter"] = diam;
    rep.params["meb_radius"] = cert.meb_radius;
    rep.witnesses.push_back({{"centroid", centroid}, {"ball_center", cert.witness}});
    rep.params["conditions"] = {{"convergent", cond_convergent}, {"singleton_core", cond_singleton}, {"ball", cond_ball}};
    bool agree = cond_convergent == cond_singleton && cond_singleton == cond_ball;
    if (shaky)
        rep.status = CheckStatus::Uncertain;
    else
        rep.status = agree ? CheckStatus::Pass : CheckStatus::Fail;
    rep.runtime_ms = sw.ms();
    return rep;
}

// Scaling a two-valued sequence spreads its cluster points linearly, so any
// fixed radius is eventually escaped: the smallest escaping scale must match
// the Chebyshev-radius oracle.
inline CheckReport check_vector_space_failure(const Point& pa, const Point& pb, double r, const IdealSpec& ideal,
                                              int k_max, std::size_t horizon = 2000, double h = 0.005,
                                              PartitionSpec partition = {}) {
    detail::StopWatch sw;
    if (!(r > 0)) throw std::invalid_argument("radius must be positive");
    if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
    if (pa.size() != pb.size() || pa.empty()) throw std::invalid_argument("witness points must share a dimension");
    if (pa.size() > 2) throw std::invalid_argument("region grids limited to k <= 2");
    if (dist(pa, pb) <= 1e-12) throw std::invalid_argument("witness points must differ");
    CheckReport rep;
    rep.name = "vector_space_failure";
    const double d = dist(pa, pb);
    rep.params = {{"r", r}, {"distance", d}, {"k_max", k_max}, {"horizon", horizon}, {"ideal", ideal.name()}};
    int k_oracle = 0;
    for (int k = 1; k <= k_max; ++k)
        if (static_cast<double>(k) * d / 2 > r + 1e-9) {
            k_oracle = k;
            break;
        }
    int k_measured = 0;
    bool near_tie = false;
    std::vector<double> radii;
    for (int k = 1; k <= k_max; ++k) {
        double gap = std::abs(static_cast<double>(k) * d / 2 - r);
        if (gap > 1e-9 && gap <= 3 * h) near_tie = true;
        Point sa(pa), sb(pb);
        for (auto& v : sa) v *= k;
        for (auto& v : sb) v *= k;
        SequencePrefix prefix = detail::two_value_points(sa, sb, partition, horizon);
        Box box = auto_core_box(prefix, ideal, h).box;
        ClusterReport cluster = cluster_set(prefix, ideal, box, h);
        if (!cluster.nonempty()) {
            rep.status = CheckStatus::Uncertain;
            rep.note = "empty cluster set at scale " + std::to_string(k);
            rep.runtime_ms = sw.ms();
            return rep;
        }
        double r_eff = r + cluster.eps.back() + h;
        Certificate cert = nonemptiness_certificate(cluster, r_eff);
        radii.push_back(cert.meb_radius);
        if (!cert.nonempty) {
            k_measured = k;
            break;
        }
    }
    rep.params["meb_radii"] = radii;
    rep.params["smallest_failing_k"] = k_measured;
    rep.params["oracle_k"] = k_oracle;
    rep.witnesses.push_back({{"k", k_measured}});
    if (k_measured != 0 && k_measured == k_oracle)
        rep.status = CheckStatus::Pass;
    else if (near_tie)
        rep.status = CheckStatus::Uncertain;
    else {
        rep.status = CheckStatus::Fail;
        rep.note = k_oracle == 0 ? "no escaping scale within k_max" : "measured scale disagrees with oracle";
    }
    rep.runtime_ms = sw.ms();
    return rep;
}

// Two-valued sequences with values r and r+s and unit-radius closed balls
// have the limit set [r+s-1, r+1], for either assignment of values to the
// partition classes.
inline CheckReport check_two_value_interval(double r, double s, const IdealSpec& ideal, std::size_t horizon = 10000,
                                            double h = 0.005, PartitionSpec partition = {}) {
    detail::StopWatch sw;
    if (!(s > 0) || s > 1) throw std::invalid_argument("shift must lie in (0, 1]");
    CheckReport rep;
    rep.name = "two_value_interval";
    rep.params = {{"r", r}, {"shift", s}, {"h", h}, {"horizon", horizon}, {"ideal", ideal.name()}};
    SequencePrefix x = generate(SequenceSpec::two_value(r, s, partition), horizon);
    SequencePrefix y = generate(SequenceSpec::two_value(r + s, -s, partition), horizon);
    RoughFamily fam = RoughFamily::closed_ball(RadiusFn::constant(1.0));
    Box box = auto_limit_box(x, ideal, fam, h).box;
    LimitReport lx = rough_limit_direct(x, ideal, fam, box, h);
    LimitReport ly = rough_limit_direct(y, ideal, fam, box, h);
    const double lo = r + s - 1, hi = r + 1, band = 2 * h;
    auto interval_conflicts = [&](const LimitReport& L, const char* tag) {
        std::size_t found = 0;
        for (std::size_t f = 0; f < L.crisp.size(); ++f) {
            double c = L.region.center(f)[0];
            bool bad = (L.crisp[f] == CellLabel::In && (c < lo - band || c > hi + band)) ||
                       (L.crisp[f] == CellLabel::Out && c > lo + band && c < hi - band);
            if (bad && rep.witnesses.size() < 8) {
                rep.witnesses.push_back({{"sequence", tag}, {"cell", c}});
                ++found;
            }
        }
        return found;
    };
    std::size_t bad = interval_conflicts(lx, "x") + interval_conflicts(ly, "y");
    auto cross = detail::banded_conflicts(lx.region.labels, ly.region.labels);
    for (auto f : cross) rep.witnesses.push_back({{"sequence", "x_vs_y"}, {"cell", lx.region.center(f)[0]}});
    auto measured = [&](const LimitReport& L) {
        double mn = std::numeric_limits<double>::infinity(), mx = -mn;
        for (std::size_t f = 0; f < L.crisp.size(); ++f)
            if (L.crisp[f] == CellLabel::In) {
                double c = L.region.center(f)[0];
                mn = std::min(mn, c);
                mx = std::max(mx, c);
            }
        return std::vector<double>{mn, mx};
    };
    rep.params["expected"] = {lo, hi};
    rep.params["measured_x"] = measured(lx);
    rep.params["measured_y"] = measured(ly);
    rep.status = (bad == 0 && cross.empty()) ? CheckStatus::Pass : CheckStatus::Fail;
    rep.runtime_ms = sw.ms();
    return rep;
}

struct SuiteCase {
    std::string id;
    CheckStatus expected = CheckStatus::Pass;
    CheckReport report;
    bool as_expected() const { return report.status == expected; }
};

struct SuiteResult {
    std::string suite;
    std::vector<SuiteCase> cases;

    bool all_expected() const {
        for (const auto& c : cases)
            if (!c.as_expected()) return false;
        return true;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["suite"] = suite;
        j["all_expected"] = all_expected();
        j["cases"] = nlohmann::json::array();
        for (const auto& c : cases) {
            nlohmann::json e = c.report.to_json();
            e["id"] = c.id;
            e["expected"] = check_status_name(c.expected);
            e["as_expected"] = c.as_expected();
            j["cases"].push_back(std::move(e));
        }
        return j;
    }
};

inline SuiteResult run_golden_suite() {
    SuiteResult res;
    res.suite = "golden";
    const std::size_t n = 10000;
    const double h = 0.005;
    IdealSpec fin = IdealSpec::fin();
    SequencePrefix alt = generate(SequenceSpec::alternating(), n);
    SequencePrefix rat = generate(SequenceSpec::rationals(), n);
    SequencePrefix conv = [&] {
        SequencePrefix p;
        p.dim = 1;
        p.horizon = n;
        p.data.resize(n);
        for (std::size_t i = 0; i < n; ++i) p.data[i] = 1.0 / (static_cast<double>(i) + 1.0);
        p.provenance = "reciprocal";
        return p;
    }();
    auto push = [&](std::string id, CheckStatus expected, CheckReport r) {
        res.cases.push_back({std::move(id), expected, std::move(r)});
    };

    push("characterization_alternating_r3", CheckStatus::Pass,
         check_characterization(alt, fin, 3.0, Box({-4.0}, {4.0}), h));
    push("characterization_rationals_r_half", CheckStatus::Pass,
         check_characterization(rat, fin, 0.5, Box({-0.6}, {1.6}), h));

    {
        RoughFamily closed3 = RoughFamily::closed_ball(RadiusFn::constant(3.0));
        Box b({-4.0}, {4.0});
        LimitReport L = rough_limit_direct(alt, fin, closed3, b, h);
        push("closedness_alternating_closed_r3", CheckStatus::Pass, check_closedness(L, alt));
        RoughFamily open3 = RoughFamily::open_ball(RadiusFn::constant(3.0));
        LimitReport Lo = rough_limit_direct(alt, fin, open3, b, h);
        push("closedness_alternating_open_r3", CheckStatus::HypothesisViolated, check_closedness(Lo, alt));
        RoughFamily closed0 = RoughFamily::closed_ball(RadiusFn::constant(0.0));
        LimitReport Lc = rough_limit_direct(conv, fin, closed0, Box({-0.5}, {1.5}), h);
        push("closedness_convergent_r0", CheckStatus::Pass, check_closedness(Lc, conv));
    }

    {
        RoughFamily c1 = RoughFamily::closed_ball(RadiusFn::constant(1.0));
        LimitReport L = rough_limit_direct(alt, fin, c1, Box({-2.5}, {2.5}), h);
        push("convexity_constant_r1", CheckStatus::Pass, check_convexity(L, alt));
        RoughFamily ma = RoughFamily::closed_ball(
            RadiusFn::min_affine({{{0.0}, 1.0}, {{-0.5}, 2.0}, {{0.5}, 2.0}}));  // min(1, 2 - |eta|/2)
        LimitReport Lm = rough_limit_direct(alt, fin, ma, Box({-2.5}, {2.5}), h);
        push("convexity_concave_min_affine", CheckStatus::Pass, check_convexity(Lm, alt));
        SequencePrefix tv = generate(SequenceSpec::two_value(0.0, 0.2, {}), n);
        // non-concave upper semicontinuous radius: wide near the values,
        // pinched between them
        std::vector<double> rv;
        const double th = 0.01;
        long long tb = -60;
        for (long long i = tb; i <= 80; ++i) {
            double eta = static_cast<double>(i) * th;
            bool widel = eta >= -0.5 - 1e-12 && eta <= 1e-12;
            bool wider = eta >= 0.2 - 1e-12 && eta <= 0.7 + 1e-12;
            rv.push_back(widel || wider ? 0.5 : 0.01);
        }
        const std::size_t rcount = rv.size();
        RoughFamily usc = RoughFamily::closed_ball(RadiusFn::usc_table(th, {tb}, {rcount}, std::move(rv)));
        LimitReport Lu = rough_limit_direct(tv, fin, usc, Box({-0.65}, {0.85}), h);
        push("convexity_non_concave_usc", CheckStatus::HypothesisViolated, check_convexity(Lu, tv));
    }

    {
        RoughFamily c3 = RoughFamily::closed_ball(RadiusFn::constant(3.0));
        push("core_equality_alternating_r3", CheckStatus::Pass,
             check_core_equality(alt, fin, c3, Box({-4.0}, {4.0}), h));
        RoughFamily c1 = RoughFamily::closed_ball(RadiusFn::constant(1.0));
        push("core_equality_convergent_r1", CheckStatus::Pass,
             check_core_equality(conv, fin, c1, Box({-1.5}, {1.5}), h));
    }

    push("equivalence_convergent_r1", CheckStatus::Pass, check_equivalence_core(conv, fin, 1.0, h));
    push("equivalence_alternating_r1", CheckStatus::Pass, check_equivalence_core(alt, fin, 1.0, h));
    {
        SequencePrefix cst = generate(SequenceSpec::two_value(0.7, 0.0, {}), n);
        push("equivalence_constant", CheckStatus::Pass, check_equivalence_core(cst, fin, 0.3, h));
    }

    {
        IdealSpec fin2k = IdealSpec::fin();
        push("vector_space_failure_r1", CheckStatus::Pass,
             check_vector_space_failure({0.0}, {1.0}, 1.0, fin2k, 6));
        push("vector_space_failure_r04", CheckStatus::Pass,
             check_vector_space_failure({0.0}, {1.0}, 0.4, fin2k, 6));
    }

    push("two_value_interval_0_1", CheckStatus::Pass, check_two_value_interval(0.0, 1.0, fin));
    push("two_value_interval_1_half", CheckStatus::Pass, check_two_value_interval(1.0, 0.5, fin));
    push("two_value_interval_neg2_quarter", CheckStatus::Pass, check_two_value_interval(-2.0, 0.25, fin));

    return res;
}

inline SuiteResult run_random_suite(std::uint64_t base_seed = 20240915) {
    SuiteResult res;
    res.suite = "random";
    auto push = [&](std::string id, CheckStatus expected, CheckReport r) {
        res.cases.push_back({std::move(id), expected, std::move(r)});
    };

    {
        const std::size_t n = 10000;
        const double h = 0.01;
        IdealSpec fin = IdealSpec::fin();
        const double radii[3] = {0.5, 1.0, 2.0};
        for (int i = 0; i < 25; ++i) {
            SequencePrefix p =
                generate(SequenceSpec::random_bounded(base_seed + static_cast<std::uint64_t>(i), Box({-1.0}, {1.0})), n);
            double r = radii[i % 3];
            push("characterization_seed_" + std::to_string(i), CheckStatus::Pass,
                 check_characterization(p, fin, r, Box({-1.5 - r}, {1.5 + r}), h));
        }
    }

    {
        const std::size_t n = 5000;
        const double h = 0.05;
        IdealSpec fin = IdealSpec::fin();
        for (int i = 0; i < 10; ++i) {
            SequencePrefix p = generate(
                SequenceSpec::random_bounded(base_seed + 100 + static_cast<std::uint64_t>(i),
                                             Box({-1.0, -1.0}, {1.0, 1.0})),
                n);
            RoughFamily fam = RoughFamily::closed_ball(RadiusFn::constant(1.0));
            push("core_equality_2d_seed_" + std::to_string(i), CheckStatus::Pass,
                 check_core_equality(p, fin, fam, Box({-2.6, -2.6}, {2.6, 2.6}), h));
        }
    }

    {
        const std::size_t n = 10000;
        const double h = 0.01;
        IdealSpec fin = IdealSpec::fin();
        const double radii[3] = {0.3, 0.7, 1.1};
        for (int i = 0; i < 10; ++i) {
            SequencePrefix p =
                generate(SequenceSpec::random_bounded(base_seed + 200 + static_cast<std::uint64_t>(i), Box({-1.0}, {1.0})),
                         n);
            double r = radii[i % 3];
            RoughFamily fam = RoughFamily::closed_ball(RadiusFn::constant(r));
            LimitReport L = rough_limit_direct(p, fin, fam, Box({-1.5 - r}, {1.5 + r}), h);
            push("convexity_seed_" + std::to_string(i), CheckStatus::Pass, check_convexity(L, p));
        }
    }

    return res;
}

inline std::vector<SuiteResult> run_suites(const std::string& name, std::uint64_t seed = 20240915) {
    std::vector<SuiteResult> out;
    if (name == "golden" || name == "all") out.push_back(run_golden_suite());
    if (name == "random" || name == "all") out.push_back(run_random_suite(seed));
    if (out.empty()) throw std::invalid_argument("unknown suite: " + name);
    return out;
}

}  // namespace roughconv
