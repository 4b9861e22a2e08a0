#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace roughconv {

// Roughness radius as a function of the would-be limit point.
struct RadiusFn {
    enum class Kind { Constant, MinAffine, UscTable };

    struct Affine {
        std::vector<double> slope;
        double offset = 0;
    };

    Kind kind = Kind::Constant;
    double value = 0;                    // Constant
    std::vector<Affine> terms;           // MinAffine: pointwise min over terms
    // UscTable: samples on a lattice, evaluated by upper envelope of the
    // surrounding samples (preserves upper semicontinuity direction).
    double table_h = 0;
    std::vector<long long> tbase;
    std::vector<std::size_t> tshape;
    std::vector<double> tvalues;

    static RadiusFn constant(double r) {
        if (r < 0) throw std::invalid_argument("radius must be nonnegative");
        RadiusFn f;
        f.value = r;
        return f;
    }

    static RadiusFn min_affine(std::vector<Affine> ts) {
        if (ts.empty()) throw std::invalid_argument("min-affine needs at least one term");
        RadiusFn f;
        f.kind = Kind::MinAffine;
        f.terms = std::move(ts);
        return f;
    }

    static RadiusFn usc_table(double h, std::vector<long long> base, std::vector<std::size_t> shape,
                              std::vector<double> values) {
        if (!(h > 0)) throw std::invalid_argument("table step must be positive");
        std::size_t total = 1;
        for (auto s : shape) total *= s;
        if (values.size() != total || total == 0) throw std::invalid_argument("table size mismatch");
        for (double v : values)
            if (!(v >= 0)) throw std::invalid_argument("radius must be nonnegative");
        RadiusFn f;
        f.kind = Kind::UscTable;
        f.table_h = h;
        f.tbase = std::move(base);
        f.tshape = std::move(shape);
        f.tvalues = std::move(values);
        return f;
    }

    double operator()(std::span<const double> eta) const {
        switch (kind) {
            case Kind::Constant:
                return value;
            case Kind::MinAffine: {
                double best = std::numeric_limits<double>::infinity();
                for (const auto& t : terms) {
                    double v = t.offset;
                    for (std::size_t a = 0; a < eta.size() && a < t.slope.size(); ++a) v += t.slope[a] * eta[a];
                    best = std::min(best, v);
                }
                return best;
            }
            default: {
                const std::size_t k = tshape.size();
                // surrounding corner samples, clamped to the table
                std::vector<long long> lo(k);
                for (std::size_t a = 0; a < k; ++a) {
                    double pos = eta[a] / table_h - static_cast<double>(tbase[a]);
                    long long f = static_cast<long long>(std::floor(pos));
                    lo[a] = std::clamp(f, 0ll, static_cast<long long>(tshape[a]) - 1);
                }
                double best = 0;
                std::size_t combos = std::size_t{1} << k;
                for (std::size_t c = 0; c < combos; ++c) {
                    std::size_t flat = 0;
                    for (std::size_t a = 0; a < k; ++a) {
                        long long i = lo[a] + ((c >> a) & 1);
                        i = std::clamp(i, 0ll, static_cast<long long>(tshape[a]) - 1);
                        flat = flat * tshape[a] + static_cast<std::size_t>(i);
                    }
                    best = std::max(best, tvalues[flat]);
                }
                return best;
            }
        }
    }

    bool certified_concave() const { return kind != Kind::UscTable; }

    // Safe upper bound for sup over the box; used to size analysis domains.
    double upper_bound_on(const Box& box) const {
        switch (kind) {
            case Kind::Constant:
                return value;
            case Kind::MinAffine: {
                double best = std::numeric_limits<double>::infinity();
                for (const auto& t : terms) {
                    double worst = t.offset;
                    for (std::size_t a = 0; a < box.dim(); ++a) {
                        double s = a < t.slope.size() ? t.slope[a] : 0;
                        worst += s * (s >= 0 ? box.hi[a] : box.lo[a]);
                    }
                    best = std::min(best, worst);
                }
                return std::max(best, 0.0);
            }
            default: {
                double best = 0;
                for (double v : tvalues) best = std::max(best, v);
                return best;
            }
        }
    }

    // Exact for Constant/MinAffine (concave: minimum over box corners); table
    // minimum for UscTable.
    double lower_bound_on(const Box& box) const {
        switch (kind) {
            case Kind::Constant:
                return value;
            case Kind::MinAffine: {
                double best = std::numeric_limits<double>::infinity();
                for (const auto& t : terms) {
                    double wl = t.offset;
                    for (std::size_t a = 0; a < box.dim(); ++a) {
                        double s = a < t.slope.size() ? t.slope[a] : 0;
                        wl += s * (s >= 0 ? box.lo[a] : box.hi[a]);
                    }
                    best = std::min(best, wl);
                }
                return best;
            }
            default: {
                double best = std::numeric_limits<double>::infinity();
                for (double v : tvalues) best = std::min(best, v);
                return best;
            }
        }
    }

    std::string name() const {
        switch (kind) {
            case Kind::Constant: return "constant";
            case Kind::MinAffine: return "min_affine";
            default: return "usc_table";
        }
    }
};

// F_eta assignment. Closed/open balls take their radius from the radius
// function; GeneralClosed is a sampled closed shape S0 of offsets around eta
// (F_eta = eta + S0), with a precomputed distance table.
struct RoughFamily {
    enum class Kind { ClosedBall, OpenBall, GeneralClosed };

    Kind kind = Kind::ClosedBall;
    RadiusFn radius;

    double shape_h = 0;
    std::vector<long long> sbase;
    std::vector<std::size_t> sshape;
    std::vector<unsigned char> smask;
    std::vector<double> sdist;  // distance from cell center to the mask

    static RoughFamily closed_ball(RadiusFn r) {
        RoughFamily f;
        f.kind = Kind::ClosedBall;
        f.radius = std::move(r);
        return f;
    }

    static RoughFamily open_ball(RadiusFn r) {
        RoughFamily f;
        f.kind = Kind::OpenBall;
        f.radius = std::move(r);
        return f;
    }

    static RoughFamily general_closed(double h, std::vector<long long> base, std::vector<std::size_t> shape,
                                      std::vector<unsigned char> mask) {
        if (!(h > 0)) throw std::invalid_argument("shape step must be positive");
        std::size_t total = 1;
        for (auto s : shape) total *= s;
        if (mask.size() != total || total == 0) throw std::invalid_argument("shape size mismatch");
        RoughFamily f;
        f.kind = Kind::GeneralClosed;
        f.shape_h = h;
        f.sbase = std::move(base);
        f.sshape = std::move(shape);
        f.smask = std::move(mask);
        f.build_distance_table();
        return f;
    }

    bool closed() const { return kind != Kind::OpenBall; }

    std::string kind_name() const {
        switch (kind) {
            case Kind::ClosedBall: return "closed_ball";
            case Kind::OpenBall: return "open_ball";
            default: return "general_closed";
        }
    }

    // Quantization slack of the sampled shape; distance queries are accurate
    // to within this value.
    double shape_quantization() const {
        return shape_h * std::sqrt(static_cast<double>(sshape.size()));
    }

    // Farthest extent of the shape from eta; bounds how far limit candidates
    // can sit from the sequence's support.
    double shape_reach() const {
        const std::size_t k = sshape.size();
        double best = 0;
        for (std::size_t f = 0; f < smask.size(); ++f) {
            if (!smask[f]) continue;
            std::size_t rem = f;
            double d2v = 0;
            for (std::size_t a = k; a-- > 0;) {
                std::size_t i = rem % sshape[a];
                rem /= sshape[a];
                double v = static_cast<double>(sbase[a] + static_cast<long long>(i)) * shape_h;
                d2v += v * v;
            }
            best = std::max(best, d2v);
        }
        return std::sqrt(best);
    }

    // Distance from offset (point - eta) to the sampled shape; large sentinel
    // outside the tabulated window (thresholds of interest are grid-scale).
    double shape_distance(std::span<const double> offset) const {
        const std::size_t k = sshape.size();
        std::size_t flat = 0;
        for (std::size_t a = 0; a < k; ++a) {
            double pos = offset[a] / shape_h - static_cast<double>(sbase[a]);
            long long i = static_cast<long long>(std::llround(pos));
            if (i < 0 || i >= static_cast<long long>(sshape[a])) return 1e18;
            flat = flat * sshape[a] + static_cast<std::size_t>(i);
        }
        return sdist[flat];
    }

    void validate_on(const Box& box) const {
        if (kind == Kind::GeneralClosed) return;
        if (radius.lower_bound_on(box) < 0)
            throw std::invalid_argument("radius function negative on analysis box");
    }

private:
    void build_distance_table() {
        const std::size_t k = sshape.size();
        std::size_t total = smask.size();
        // collect mask-on centers
        std::vector<std::vector<double>> on;
        for (std::size_t f = 0; f < total; ++f) {
            if (!smask[f]) continue;
            std::vector<double> c(k);
            std::size_t rem = f;
            for (std::size_t a = k; a-- > 0;) {
                std::size_t i = rem % sshape[a];
                rem /= sshape[a];
                c[a] = static_cast<double>(sbase[a] + static_cast<long long>(i)) * shape_h;
            }
            on.push_back(std::move(c));
        }
        if (on.empty()) throw std::invalid_argument("shape mask empty");
        // the shape must contain the origin: eta belongs to its own F_eta
        {
            std::vector<double> origin(k, 0.0);
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : on) best = std::min(best, dist2(c, origin));
            if (std::sqrt(best) > shape_quantization() + kGeomTol)
                throw std::invalid_argument("shape must contain the origin");
        }
        sdist.assign(total, 0.0);
        std::vector<double> c(k);
        for (std::size_t f = 0; f < total; ++f) {
            std::size_t rem = f;
            for (std::size_t a = k; a-- > 0;) {
                std::size_t i = rem % sshape[a];
                rem /= sshape[a];
                c[a] = static_cast<double>(sbase[a] + static_cast<long long>(i)) * shape_h;
            }
            if (smask[f]) continue;
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : on) best = std::min(best, dist2(c, q));
            sdist[f] = std::sqrt(best);
        }
    }
};

// Does F_eta contain every point of gamma?
inline CoverResult covers(const std::vector<Point>& gamma, const RoughFamily& fam, std::span<const double> eta,
                          double tol = kGeomTol) {
    if (gamma.empty()) throw std::invalid_argument("empty point set");
    if (fam.kind != RoughFamily::Kind::GeneralClosed)
        return covers_ball(gamma, eta, fam.radius(eta), fam.kind == RoughFamily::Kind::ClosedBall, tol);
    const double band = fam.shape_quantization();
    double worst = 0;
    std::vector<double> off(eta.size());
    for (const auto& g : gamma) {
        for (std::size_t a = 0; a < eta.size(); ++a) off[a] = g[a] - eta[a];
        worst = std::max(worst, fam.shape_distance(off));
    }
    if (worst <= tol) return CoverResult::Yes;
    if (worst > band + tol) return CoverResult::No;
    return CoverResult::Boundary;
}

}  // namespace roughconv
