// Rough limit sets of the alternating sequence 1, -1, 1, -1, ...
// For closed balls of radius r the limit set is the interval
// [-(r-1), r-1] once r reaches 1, and empty below that. At the
// knife edge r = 1 the set is the single point {0}: the direct
// route leaves those cells uncertain while the via route, which
// carries a one-cell slack, admits them.

#include <iostream>

#include "roughconv/analysis.hpp"

using namespace roughconv;

int main() {
    const std::size_t n = 10000;
    const double h = 0.005;
    SequencePrefix x = generate(SequenceSpec::alternating(), n);
    IdealSpec fin = IdealSpec::fin();

    for (double r : {0.5, 1.0, 3.0}) {
        RoughFamily fam = RoughFamily::closed_ball(RadiusFn::constant(r));
        Box box = auto_limit_box(x, fin, fam, h).box;
        LimitReport direct = rough_limit_direct(x, fin, fam, box, h);

        ClusterReport cluster = cluster_set(x, fin, box, h);
        std::cout << "r = " << r << ": " << direct.region.count(CellLabel::In) << " in cells";
        auto ins = direct.region.centers_with(CellLabel::In);
        if (!ins.empty())
            std::cout << ", span [" << format_double(ins.front()[0]) << ", "
                      << format_double(ins.back()[0]) << "]";
        if (cluster.nonempty()) {
            LimitReport via = rough_limit_via_clusters(cluster, fam, box, h);
            std::cout << ", via-route in cells " << via.region.count(CellLabel::In);
        }
        std::cout << "\n";
    }

    // open balls at r = 3: the endpoints drop out
    RoughFamily open3 = RoughFamily::open_ball(RadiusFn::constant(3.0));
    Box box = auto_limit_box(x, fin, open3, h).box;
    LimitReport open_direct = rough_limit_direct(x, fin, open3, box, h);
    auto ins = open_direct.region.centers_with(CellLabel::In);
    std::cout << "open r = 3: span (" << format_double(ins.front()[0]) << ", "
              << format_double(ins.back()[0]) << ")\n";
    return 0;
}
