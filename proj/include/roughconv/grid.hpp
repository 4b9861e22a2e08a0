#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "geometry.hpp"
#include "util.hpp"

namespace roughconv {

enum class CellLabel : unsigned char { In, Out, Uncertain };

inline const char* label_name(CellLabel l) {
    switch (l) {
        case CellLabel::In: return "in";
        case CellLabel::Out: return "out";
        default: return "uncertain";
    }
}

// Axis-aligned cell grid over a box, cell centers snapped to integer
// multiples of h so that analysis targets expressible in h land exactly on
// centers. A requested box only ever grows (by less than one cell per side).
struct GridRegion {
    double h = 0;
    std::vector<long long> base;        // center(axis a, index i) = (base[a] + i) * h
    std::vector<std::size_t> shape;
    std::vector<CellLabel> labels;

    static GridRegion from_box(const Box& box, double h) {
        if (!(h > 0)) throw std::invalid_argument("resolution must be positive");
        GridRegion g;
        g.h = h;
        const std::size_t k = box.dim();
        g.base.resize(k);
        g.shape.resize(k);
        std::size_t total = 1;
        for (std::size_t a = 0; a < k; ++a) {
            long long ilo = static_cast<long long>(std::floor(box.lo[a] / h + 0.5 + 1e-9));
            long long ihi = static_cast<long long>(std::ceil(box.hi[a] / h - 0.5 - 1e-9));
            if (ihi < ilo) ihi = ilo;
            g.base[a] = ilo;
            g.shape[a] = static_cast<std::size_t>(ihi - ilo + 1);
            total *= g.shape[a];
        }
        if (total > 50'000'000) throw std::invalid_argument("grid too large");
        g.labels.assign(total, CellLabel::Out);
        return g;
    }

    std::size_t dim() const { return shape.size(); }
    std::size_t cell_count() const { return labels.size(); }

    Point center(std::size_t flat) const {
        Point p(dim());
        for (std::size_t a = dim(); a-- > 0;) {
            std::size_t i = flat % shape[a];
            flat /= shape[a];
            p[a] = static_cast<double>(base[a] + static_cast<long long>(i)) * h;
        }
        return p;
    }

    std::vector<std::size_t> multi_index(std::size_t flat) const {
        std::vector<std::size_t> idx(dim());
        for (std::size_t a = dim(); a-- > 0;) {
            idx[a] = flat % shape[a];
            flat /= shape[a];
        }
        return idx;
    }

    std::size_t flat_index(const std::vector<std::size_t>& idx) const {
        std::size_t f = 0;
        for (std::size_t a = 0; a < dim(); ++a) f = f * shape[a] + idx[a];
        return f;
    }

    Box outer_box() const {
        std::vector<double> lo(dim()), hi(dim());
        for (std::size_t a = 0; a < dim(); ++a) {
            lo[a] = (static_cast<double>(base[a]) - 0.5) * h;
            hi[a] = (static_cast<double>(base[a] + static_cast<long long>(shape[a]) - 1) + 0.5) * h;
        }
        return Box(lo, hi);
    }

    std::size_t count(CellLabel l) const {
        std::size_t c = 0;
        for (auto x : labels)
            if (x == l) ++c;
        return c;
    }

    std::vector<Point> centers_with(CellLabel l) const {
        std::vector<Point> out;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == l) out.push_back(center(i));
        return out;
    }

    // Marks every crisp cell with an oppositely-labeled Chebyshev neighbor as
    // uncertain: the discretization boundary, total width <= 2h.
    void apply_boundary_band() {
        std::vector<std::size_t> flips;
        const std::size_t k = dim();
        std::vector<std::size_t> idx(k), nb(k);
        for (std::size_t f = 0; f < labels.size(); ++f) {
            if (labels[f] == CellLabel::Uncertain) continue;
            idx = multi_index(f);
            bool flip = false;
            std::size_t combos = 1;
            for (std::size_t a = 0; a < k; ++a) combos *= 3;
            for (std::size_t c = 0; c < combos && !flip; ++c) {
                std::size_t t = c;
                bool valid = true, self = true;
                for (std::size_t a = 0; a < k; ++a) {
                    int d = static_cast<int>(t % 3) - 1;
                    t /= 3;
                    long long v = static_cast<long long>(idx[a]) + d;
                    if (v < 0 || v >= static_cast<long long>(shape[a])) {
                        valid = false;
                        break;
                    }
                    nb[a] = static_cast<std::size_t>(v);
                    if (d != 0) self = false;
                }
                if (!valid || self) continue;
                CellLabel ln = labels[flat_index(nb)];
                if (ln != CellLabel::Uncertain && ln != labels[f]) flip = true;
            }
            if (flip) flips.push_back(f);
        }
        for (auto f : flips) labels[f] = CellLabel::Uncertain;
    }

    // Connected components of the in-cells under face adjacency.
    std::size_t component_count() const {
        std::vector<char> seen(labels.size(), 0);
        std::size_t comps = 0;
        const std::size_t k = dim();
        for (std::size_t f = 0; f < labels.size(); ++f) {
            if (labels[f] != CellLabel::In || seen[f]) continue;
            ++comps;
            std::deque<std::size_t> q{f};
            seen[f] = 1;
            while (!q.empty()) {
                std::size_t cur = q.front();
                q.pop_front();
                auto idx = multi_index(cur);
                for (std::size_t a = 0; a < k; ++a) {
                    for (int d = -1; d <= 1; d += 2) {
                        long long v = static_cast<long long>(idx[a]) + d;
                        if (v < 0 || v >= static_cast<long long>(shape[a])) continue;
                        auto nb = idx;
                        nb[a] = static_cast<std::size_t>(v);
                        std::size_t g = flat_index(nb);
                        if (!seen[g] && labels[g] == CellLabel::In) {
                            seen[g] = 1;
                            q.push_back(g);
                        }
                    }
                }
            }
        }
        return comps;
    }

    double measure_estimate() const {
        double cell = 1;
        for (std::size_t a = 0; a < dim(); ++a) cell *= h;
        return static_cast<double>(count(CellLabel::In)) * cell;
    }

    void to_csv(std::ostream& os) const {
        for (std::size_t f = 0; f < labels.size(); ++f) {
            Point c = center(f);
            for (std::size_t a = 0; a < c.size(); ++a) os << format_double(c[a]) << ',';
            os << label_name(labels[f]) << '\n';
        }
    }

    nlohmann::json summary_json() const {
        nlohmann::json j;
        j["resolution"] = h;
        j["cells"] = cell_count();
        j["in"] = count(CellLabel::In);
        j["out"] = count(CellLabel::Out);
        j["uncertain"] = count(CellLabel::Uncertain);
        j["components"] = component_count();
        j["measure"] = measure_estimate();
        auto ins = centers_with(CellLabel::In);
        if (ins.empty()) {
            j["in_bbox"] = nullptr;
        } else {
            std::vector<double> lo = ins[0], hi = ins[0];
            for (const auto& p : ins)
                for (std::size_t a = 0; a < p.size(); ++a) {
                    lo[a] = std::min(lo[a], p[a]);
                    hi[a] = std::max(hi[a], p[a]);
                }
            j["in_bbox"] = {{"lo", lo}, {"hi", hi}};
        }
        return j;
    }

    bool same_grid(const GridRegion& o) const {
        return h == o.h && base == o.base && shape == o.shape;
    }
};

// One-sided Hausdorff surrogate: max over in-cells of A of the distance to
// the nearest in-cell of B. Zero when A's in-set is cell-wise inside B's.
inline double excess(const GridRegion& a, const GridRegion& b) {
    if (!a.same_grid(b)) throw std::invalid_argument("mismatched grids");
    auto apts = a.centers_with(CellLabel::In);
    auto bpts = b.centers_with(CellLabel::In);
    if (apts.empty()) return 0;
    if (bpts.empty()) return std::numeric_limits<double>::infinity();
    double worst = 0;
    for (const auto& p : apts) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : bpts) best = std::min(best, dist2(p, q));
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

}  // namespace roughconv
