#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "roughconv/geometry.hpp"
#include "roughconv/grid.hpp"

using namespace roughconv;

TEST_CASE("enclosing ball handles the textbook cases") {
    REQUIRE_THROWS_WITH(minimal_enclosing_ball({}), "empty point set");

    Ball single = minimal_enclosing_ball({{2.0, 3.0}});
    REQUIRE(single.radius == 0.0);
    REQUIRE(single.center == Point{2.0, 3.0});

    Ball pair = minimal_enclosing_ball({{0.0, 0.0}, {2.0, 0.0}});
    REQUIRE(pair.radius == Catch::Approx(1.0));
    REQUIRE(pair.center[0] == Catch::Approx(1.0));

    // right triangle: hypotenuse midpoint, radius sqrt(2)/2
    Ball tri = minimal_enclosing_ball({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
    REQUIRE(tri.radius == Catch::Approx(0.7071067811865476).margin(1e-12));
    REQUIRE(tri.center[0] == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(tri.center[1] == Catch::Approx(0.5).margin(1e-12));

    // duplicates and collinear points
    Ball dup = minimal_enclosing_ball({{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}});
    REQUIRE(dup.radius == 0.0);
    Ball col = minimal_enclosing_ball({{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}});
    REQUIRE(col.radius == Catch::Approx(1.5));
    REQUIRE(col.center[0] == Catch::Approx(1.5));

    // 1d works too
    Ball one = minimal_enclosing_ball({{-3.0}, {5.0}, {0.0}});
    REQUIRE(one.radius == Catch::Approx(4.0));
    REQUIRE(one.center[0] == Catch::Approx(1.0));
}

TEST_CASE("enclosing ball agrees with the brute-force oracle", "[property]") {
    oracles::Rand rng(100);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t m = 1 + rng.index(6);
        std::vector<Point> pts;
        for (std::size_t i = 0; i < m; ++i) pts.push_back({rng.uniform(-10, 10), rng.uniform(-10, 10)});
        if (trial % 7 == 0 && m > 1) pts.back() = pts.front();  // force duplicates sometimes
        Ball got = minimal_enclosing_ball(pts);
        Ball want = oracles::brute_meb_2d(pts);
        REQUIRE(got.radius == Catch::Approx(want.radius).margin(1e-9));
        REQUIRE(dist(got.center, want.center) < 1e-8);
    }
}

TEST_CASE("enclosing ball ignores permutation and commutes with translation", "[property]") {
    oracles::Rand rng(200);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<Point> pts;
        std::size_t m = 2 + rng.index(8);
        for (std::size_t i = 0; i < m; ++i) pts.push_back({rng.uniform(-4, 4), rng.uniform(-4, 4)});
        Ball a = minimal_enclosing_ball(pts);

        std::vector<Point> rev(pts.rbegin(), pts.rend());
        Ball b = minimal_enclosing_ball(rev);
        REQUIRE(a.radius == Catch::Approx(b.radius).margin(1e-9));
        REQUIRE(dist(a.center, b.center) < 1e-8);

        double tx = rng.uniform(-9, 9), ty = rng.uniform(-9, 9);
        std::vector<Point> moved = pts;
        for (auto& p : moved) {
            p[0] += tx;
            p[1] += ty;
        }
        Ball c = minimal_enclosing_ball(moved);
        REQUIRE(c.radius == Catch::Approx(a.radius).margin(1e-9));
        REQUIRE(c.center[0] == Catch::Approx(a.center[0] + tx).margin(1e-8));
        REQUIRE(c.center[1] == Catch::Approx(a.center[1] + ty).margin(1e-8));
    }
}

TEST_CASE("convex hull on known shapes") {
    // square plus interior points
    std::vector<Point> pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.25, 0.75}};
    auto hull = convex_hull(pts);
    REQUIRE(hull.size() == 4);
    for (const auto& corner : std::vector<Point>{{0, 0}, {1, 0}, {1, 1}, {0, 1}})
        REQUIRE(std::find(hull.begin(), hull.end(), corner) != hull.end());

    // hull of a hull is itself
    auto again = convex_hull(hull);
    REQUIRE(again.size() == hull.size());

    // 1d hull is the extreme pair
    auto h1 = convex_hull({{3.0}, {-1.0}, {2.0}});
    REQUIRE(h1.size() == 2);
    REQUIRE(h1.front()[0] == -1.0);
    REQUIRE(h1.back()[0] == 3.0);

    REQUIRE(convex_hull({{2.0, 2.0}}).size() == 1);
    REQUIRE_THROWS_WITH(convex_hull({{1.0, 2.0, 3.0}}), "hull regions limited to k <= 2");
}

TEST_CASE("hull distance agrees with the polygon oracle", "[property]") {
    oracles::Rand rng(300);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Point> pts;
        std::size_t m = 3 + rng.index(10);
        for (std::size_t i = 0; i < m; ++i) pts.push_back({rng.uniform(-3, 3), rng.uniform(-3, 3)});
        auto hull = convex_hull(pts);
        Point q{rng.uniform(-5, 5), rng.uniform(-5, 5)};
        double d = hull_distance(pts, q);
        if (hull.size() >= 3) {
            bool inside = oracles::point_in_ccw_polygon(hull, q, 0.0);
            if (inside) {
                REQUIRE(d == 0.0);
            } else {
                REQUIRE(d > 0.0);
                // outside distance is the min over edges
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < hull.size(); ++i) {
                    const Point& a = hull[i];
                    const Point& b = hull[(i + 1) % hull.size()];
                    Point ab{b[0] - a[0], b[1] - a[1]};
                    double den = ab[0] * ab[0] + ab[1] * ab[1];
                    double t = std::clamp(((q[0] - a[0]) * ab[0] + (q[1] - a[1]) * ab[1]) / den, 0.0, 1.0);
                    double dx = q[0] - a[0] - t * ab[0], dy = q[1] - a[1] - t * ab[1];
                    best = std::min(best, std::sqrt(dx * dx + dy * dy));
                }
                REQUIRE(d == Catch::Approx(best).margin(1e-12));
            }
        }
    }
    // 1d clamps to the interval
    REQUIRE(hull_distance({{1.0}, {4.0}}, Point{0.0}) == 1.0);
    REQUIRE(hull_distance({{1.0}, {4.0}}, Point{2.5}) == 0.0);
}

TEST_CASE("cover queries resolve the boundary band") {
    std::vector<Point> gamma = {{-1.0}, {1.0}};
    REQUIRE(covers_ball(gamma, Point{0.0}, 1.0, true) == CoverResult::Boundary);
    REQUIRE(covers_ball(gamma, Point{0.0}, 1.5, true) == CoverResult::Yes);
    REQUIRE(covers_ball(gamma, Point{0.0}, 0.5, true) == CoverResult::No);
    // singleton cluster set: radius zero still covers at its own point
    REQUIRE(covers_ball({{2.0}}, Point{2.0}, 0.0, true) == CoverResult::Yes);
}

TEST_CASE("grid snapping puts centers on integer multiples of the resolution") {
    GridRegion g = GridRegion::from_box(Box({-0.013}, {1.007}), 0.005);
    for (std::size_t f = 0; f < g.cell_count(); ++f) {
        double c = g.center(f)[0];
        double ratio = c / 0.005;
        REQUIRE(std::abs(ratio - std::round(ratio)) < 1e-9);
    }
    // requested box is covered
    REQUIRE(g.center(0)[0] <= -0.013 + 0.0025 + 1e-12);
    REQUIRE(g.center(g.cell_count() - 1)[0] >= 1.007 - 0.0025 - 1e-12);
}

TEST_CASE("boundary banding flips only interface cells") {
    GridRegion g = GridRegion::from_box(Box({0.0}, {1.0}), 0.1);
    for (std::size_t f = 0; f < g.cell_count(); ++f)
        g.labels[f] = g.center(f)[0] < 0.55 ? CellLabel::In : CellLabel::Out;
    std::size_t in_before = g.count(CellLabel::In);
    std::size_t out_before = g.count(CellLabel::Out);
    g.apply_boundary_band();
    REQUIRE(g.count(CellLabel::Uncertain) == 2);  // one cell each side of the cut
    REQUIRE(g.count(CellLabel::In) == in_before - 1);
    REQUIRE(g.count(CellLabel::Out) == out_before - 1);

    // uniform labels never band
    GridRegion u = GridRegion::from_box(Box({0.0, 0.0}, {1.0, 1.0}), 0.25);
    for (auto& l : u.labels) l = CellLabel::In;
    u.apply_boundary_band();
    REQUIRE(u.count(CellLabel::Uncertain) == 0);
}

TEST_CASE("region csv and summary are stable") {
    GridRegion g = GridRegion::from_box(Box({0.0}, {0.02}), 0.01);
    g.labels = {CellLabel::In, CellLabel::Uncertain, CellLabel::Out};
    std::ostringstream os;
    g.to_csv(os);
    REQUIRE(os.str() == "0,in\n0.01,uncertain\n0.02,out\n");
    auto j = g.summary_json();
    REQUIRE(j["cells"] == 3);
    REQUIRE(j["in"] == 1);
    REQUIRE(j["uncertain"] == 1);
    REQUIRE(j["measure"].get<double>() == Catch::Approx(0.01));
}

TEST_CASE("excess measures one-sided containment") {
    GridRegion a = GridRegion::from_box(Box({0.0}, {1.0}), 0.1);
    GridRegion b = a;
    for (std::size_t f = 0; f < a.cell_count(); ++f) {
        double c = a.center(f)[0];
        a.labels[f] = c <= 0.5 ? CellLabel::In : CellLabel::Out;
        b.labels[f] = CellLabel::In;
    }
    REQUIRE(excess(a, b) == 0.0);
    REQUIRE(excess(b, a) == Catch::Approx(0.5).margin(1e-9));
    GridRegion c = GridRegion::from_box(Box({0.0}, {1.0}), 0.25);
    REQUIRE_THROWS_WITH(excess(a, c), "mismatched grids");
}
