// Cluster set, convex core, and a ball-family nonemptiness certificate for a
// planar sequence cycling through three points.

#include <iostream>

#include "roughconv/analysis.hpp"

using namespace roughconv;

int main() {
    const std::size_t n = 6000;
    const double h = 0.05;

    // cycle through the corners of a right triangle
    SequencePrefix x;
    x.dim = 2;
    x.horizon = n;
    x.provenance = "triangle_cycle";
    x.data.resize(2 * n);
    const double corners[3][2] = {{0, 0}, {1, 0}, {0, 1}};
    for (std::size_t i = 0; i < n; ++i) {
        x.data[2 * i] = corners[i % 3][0];
        x.data[2 * i + 1] = corners[i % 3][1];
    }

    IdealSpec fin = IdealSpec::fin();
    Box box({-0.4, -0.4}, {1.4, 1.4});
    ClusterReport cluster = cluster_set(x, fin, box, h);
    std::cout << "cluster cells: " << cluster.region.count(CellLabel::In) << " in\n";

    GridRegion core = core_set(cluster);
    std::cout << "core cells: " << core.count(CellLabel::In) << " in (filled triangle)\n";

    // the smallest constant radius with a nonempty limit set is the
    // circumradius of the triangle
    for (double r : {0.5, 0.75}) {
        Certificate cert = nonemptiness_certificate(cluster, r);
        std::cout << "r = " << r << ": " << (cert.nonempty ? "nonempty" : "empty")
                  << " (enclosing radius " << format_double(cert.meb_radius) << ")\n";
    }
    return 0;
}
