#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace roughconv {

using Point = std::vector<double>;

constexpr double kGeomTol = 1e-9;
constexpr std::size_t kMaxDim = 8;

inline double dist2(std::span<const double> a, std::span<const double> b) {
    double acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

inline double dist(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(dist2(a, b));
}

struct Box {
    std::vector<double> lo, hi;

    Box() = default;
    Box(std::vector<double> l, std::vector<double> h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo.size() != hi.size() || lo.empty()) throw std::invalid_argument("box dimension mismatch");
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (!(lo[i] <= hi[i])) throw std::invalid_argument("box lo must not exceed hi");
    }

    std::size_t dim() const { return lo.size(); }
    double side(std::size_t i) const { return hi[i] - lo[i]; }

    bool contains(std::span<const double> p, double tol = 0) const {
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (p[i] < lo[i] - tol || p[i] > hi[i] + tol) return false;
        return true;
    }

    Box inflated(double pad) const {
        Box b = *this;
        for (std::size_t i = 0; i < lo.size(); ++i) {
            b.lo[i] -= pad;
            b.hi[i] += pad;
        }
        return b;
    }

    Point center() const {
        Point c(dim());
        for (std::size_t i = 0; i < dim(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
        return c;
    }
};

struct Ball {
    Point center;
    double radius = 0;
    bool closed = true;

    bool contains(std::span<const double> p, double tol = kGeomTol) const {
        double d = dist(center, p);
        return closed ? d <= radius + tol : d < radius - tol;
    }
};

namespace detail {

// Ball with all of T on its boundary and center in T's affine hull.
// Returns radius < 0 when T is affinely degenerate.
inline Ball circumball(const std::vector<Point>& t) {
    Ball b;
    b.radius = -1;
    if (t.empty()) return b;
    const std::size_t k = t[0].size(), m = t.size() - 1;
    if (m == 0) {
        b.center = t[0];
        b.radius = 0;
        return b;
    }
    // Solve 2 (v_i . v_j) lam_j = |v_i|^2 with v_i = t[i+1] - t[0].
    std::vector<std::vector<double>> v(m, std::vector<double>(k));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j) v[i][j] = t[i + 1][j] - t[0][j];
    std::vector<std::vector<double>> a(m, std::vector<double>(m + 1));
    double scale = 0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            double dot = 0;
            for (std::size_t c = 0; c < k; ++c) dot += v[i][c] * v[j][c];
            a[i][j] = 2 * dot;
            scale = std::max(scale, std::abs(a[i][j]));
        }
        double n2 = 0;
        for (std::size_t c = 0; c < k; ++c) n2 += v[i][c] * v[i][c];
        a[i][m] = n2;
    }
    if (scale == 0) return b;
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-12 * scale) return b;  // degenerate
        std::swap(a[piv], a[col]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col) continue;
            double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= m; ++c) a[r][c] -= f * a[col][c];
        }
    }
    b.center = t[0];
    for (std::size_t i = 0; i < m; ++i) {
        double lam = a[i][m] / a[i][i];
        for (std::size_t c = 0; c < k; ++c) b.center[c] += lam * v[i][c];
    }
    b.radius = dist(b.center, t[0]);
    return b;
}

// Smallest ball containing the (tiny) support set S; brute force over
// boundary subsets, robust to duplicates and affine degeneracy.
inline Ball ball_of_support(const std::vector<Point>& s) {
    Ball best;
    best.radius = -1;
    if (s.empty()) return best;
    const std::size_t m = s.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
        std::vector<Point> sub;
        for (std::size_t i = 0; i < m; ++i)
            if (mask & (std::size_t{1} << i)) sub.push_back(s[i]);
        Ball c = circumball(sub);
        if (c.radius < 0) continue;
        bool covers_all = true;
        double r2 = c.radius * c.radius;
        for (const auto& p : s) {
            if (dist2(c.center, p) > r2 * (1 + 1e-12) + 1e-30) {
                covers_all = false;
                break;
            }
        }
        if (covers_all && (best.radius < 0 || c.radius < best.radius)) best = c;
    }
    return best;
}

inline bool mb_contains(const Ball& b, const Point& p) {
    if (b.radius < 0) return false;
    return dist2(b.center, p) <= b.radius * b.radius * (1 + 1e-12) + 1e-30;
}

// Welzl, move-to-front form; recursion depth bounded by the support size.
inline Ball mtf_mb(std::vector<const Point*>& pts, std::size_t end, std::vector<Point> support, std::size_t k) {
    Ball ball = ball_of_support(support);
    if (support.size() == k + 1) return ball;
    for (std::size_t i = 0; i < end; ++i) {
        if (!mb_contains(ball, *pts[i])) {
            std::vector<Point> sup2 = support;
            sup2.push_back(*pts[i]);
            ball = mtf_mb(pts, i, std::move(sup2), k);
            const Point* moved = pts[i];
            for (std::size_t j = i; j > 0; --j) pts[j] = pts[j - 1];
            pts[0] = moved;
        }
    }
    return ball;
}

}  // namespace detail

// Smallest closed ball containing the points. Input order is normalized by a
// lexicographic sort so the result is deterministic; exact duplicates are
// dropped before the move-to-front pass.
inline Ball minimal_enclosing_ball(std::vector<Point> pts) {
    if (pts.empty()) throw std::invalid_argument("empty point set");
    const std::size_t k = pts[0].size();
    if (k == 0 || k > kMaxDim) throw std::invalid_argument("dimension cap is 8");
    for (const auto& p : pts) {
        if (p.size() != k) throw std::invalid_argument("mixed dimensions");
        for (double c : p)
            if (!std::isfinite(c)) throw std::invalid_argument("nonfinite point");
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<const Point*> order(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) order[i] = &pts[i];
    Ball b = detail::mtf_mb(order, order.size(), {}, k);
    b.closed = true;
    return b;
}

// k = 1: [min, max] as two endpoints. k = 2: counterclockwise monotone chain,
// collinear vertices dropped. Higher dimensions are served by membership
// queries elsewhere, not by hulls.
inline std::vector<Point> convex_hull(std::vector<Point> pts) {
    if (pts.empty()) throw std::invalid_argument("empty point set");
    const std::size_t k = pts[0].size();
    if (k > 2) throw std::invalid_argument("hull regions limited to k <= 2");
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (k == 1) {
        if (pts.size() == 1) return {pts.front()};
        return {pts.front(), pts.back()};
    }
    if (pts.size() <= 2) return pts;
    double scale = 0;
    for (const auto& p : pts) scale = std::max({scale, std::abs(p[0]), std::abs(p[1])});
    const double eps = 1e-12 * std::max(1.0, scale * scale);
    auto cross = [](const Point& o, const Point& a, const Point& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<Point> h(2 * pts.size());
    std::size_t m = 0;
    for (const auto& p : pts) {
        while (m >= 2 && cross(h[m - 2], h[m - 1], p) <= eps) --m;
        h[m++] = p;
    }
    std::size_t lower = m + 1;
    for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
        while (m >= lower && cross(h[m - 2], h[m - 1], *it) <= eps) --m;
        h[m++] = *it;
    }
    h.resize(m - 1);
    if (h.empty()) h.push_back(pts.front());  // all collinear collapsed
    return h;
}

// max over points of distance to eta; the quantity every ball-cover test
// reduces to.
inline double max_dist(const std::vector<Point>& pts, std::span<const double> eta) {
    double m2 = 0;
    for (const auto& p : pts) m2 = std::max(m2, dist2(p, eta));
    return std::sqrt(m2);
}

enum class CoverResult { Yes, No, Boundary };

// Closed-ball cover test with a symmetric tolerance band; open balls use the
// same band with strict inequality semantics.
inline CoverResult covers_ball(const std::vector<Point>& gamma, std::span<const double> eta, double r,
                               bool closed, double tol = kGeomTol) {
    if (gamma.empty()) throw std::invalid_argument("empty point set");
    double m = max_dist(gamma, eta);
    if (m <= tol) return CoverResult::Yes;  // gamma = {eta}: eta is a member of its own F_eta
    if (closed) {
        if (m <= r - tol) return CoverResult::Yes;
        if (m > r + tol) return CoverResult::No;
        return CoverResult::Boundary;
    }
    if (m < r - tol) return CoverResult::Yes;
    if (m >= r + tol) return CoverResult::No;
    return CoverResult::Boundary;
}

namespace geomdetail {

inline double point_segment_dist(std::span<const double> q, const Point& a, const Point& b) {
    double vx = b[0] - a[0], vy = b[1] - a[1];
    double wx = q[0] - a[0], wy = q[1] - a[1];
    double den = vx * vx + vy * vy;
    double t = den > 0 ? std::clamp((vx * wx + vy * wy) / den, 0.0, 1.0) : 0.0;
    double dx = wx - t * vx, dy = wy - t * vy;
    return std::sqrt(dx * dx + dy * dy);
}

}  // namespace geomdetail

// Distance from q to the convex hull of pts. Exact for k <= 2 (interval /
// polygon); higher dimensions fall back to Frank-Wolfe on
// min |sum lam_i p_i - q|^2, which overestimates interior hits slowly, so
// callers there threshold generously.
inline double hull_distance(const std::vector<Point>& pts, std::span<const double> q, std::size_t iters = 512) {
    if (pts.empty()) throw std::invalid_argument("empty point set");
    const std::size_t k = pts[0].size();
    if (k == 1) {
        double lo = pts[0][0], hi = pts[0][0];
        for (const auto& p : pts) {
            lo = std::min(lo, p[0]);
            hi = std::max(hi, p[0]);
        }
        if (q[0] < lo) return lo - q[0];
        if (q[0] > hi) return q[0] - hi;
        return 0.0;
    }
    if (k == 2) {
        std::vector<Point> hull = convex_hull(pts);
        if (hull.size() == 1) return dist(hull[0], q);
        if (hull.size() == 2) return geomdetail::point_segment_dist(q, hull[0], hull[1]);
        bool inside = true;
        for (std::size_t i = 0; i < hull.size() && inside; ++i) {
            const Point& a = hull[i];
            const Point& b = hull[(i + 1) % hull.size()];
            double cr = (b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0]);
            if (cr < 0) inside = false;
        }
        if (inside) return 0.0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < hull.size(); ++i)
            best = std::min(best, geomdetail::point_segment_dist(q, hull[i], hull[(i + 1) % hull.size()]));
        return best;
    }
    Point x = pts[0];
    for (std::size_t it = 0; it < iters; ++it) {
        // gradient of 0.5|x-q|^2 is x-q; pick the vertex minimizing <g, p>
        double best = std::numeric_limits<double>::infinity();
        const Point* bestp = nullptr;
        for (const auto& p : pts) {
            double dot = 0;
            for (std::size_t c = 0; c < k; ++c) dot += (x[c] - q[c]) * p[c];
            if (dot < best) {
                best = dot;
                bestp = &p;
            }
        }
        // exact line search toward bestp
        double num = 0, den = 0;
        for (std::size_t c = 0; c < k; ++c) {
            double d = (*bestp)[c] - x[c];
            num += (q[c] - x[c]) * d;
            den += d * d;
        }
        if (den <= 0) break;
        double step = std::clamp(num / den, 0.0, 1.0);
        if (step <= 0) break;
        for (std::size_t c = 0; c < k; ++c) x[c] += step * ((*bestp)[c] - x[c]);
    }
    return dist(x, q);
}

}  // namespace roughconv
