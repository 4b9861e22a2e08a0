#pragma once

#include <cstddef>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "grid.hpp"
#include "util.hpp"

namespace roughconv {

namespace plotdetail {

inline std::string svg_num(double v) {
    // round to 1/100 px so coordinates stay short and deterministic
    double r = std::round(v * 100.0) / 100.0;
    if (r == 0) r = 0;  // avoid -0
    return format_double(r);
}

struct Frame {
    double px0, py0, pw, ph;   // plot area in canvas px
    double x0, x1, y0, y1;     // data window

    double sx(double x) const { return px0 + (x - x0) / (x1 - x0) * pw; }
    double sy(double y) const { return py0 + ph - (y - y0) / (y1 - y0) * ph; }
};

inline void rect(std::string& s, double x, double y, double w, double h, const std::string& attrs) {
    s += "<rect x=\"" + svg_num(x) + "\" y=\"" + svg_num(y) + "\" width=\"" + svg_num(w) +
         "\" height=\"" + svg_num(h) + "\" " + attrs + "/>\n";
}

inline void text(std::string& s, double x, double y, const std::string& t) {
    s += "<text x=\"" + svg_num(x) + "\" y=\"" + svg_num(y) +
         "\" font-family=\"monospace\" font-size=\"11\" fill=\"#333\">" + t + "</text>\n";
}

inline void legend(std::string& s, double x, double y, bool with_overlay) {
    rect(s, x, y, 14, 10, "fill=\"#2f6f9f\" stroke=\"#234\" stroke-width=\"0.5\"");
    text(s, x + 19, y + 9, "in");
    rect(s, x + 52, y, 14, 10, "fill=\"url(#hatch)\" stroke=\"#999\" stroke-width=\"0.5\"");
    text(s, x + 71, y + 9, "uncertain");
    rect(s, x + 148, y, 14, 10, "fill=\"#ffffff\" stroke=\"#ccc\" stroke-width=\"0.5\"");
    text(s, x + 167, y + 9, "out");
    if (with_overlay) {
        s += "<circle cx=\"" + svg_num(x + 208) + "\" cy=\"" + svg_num(y + 5) +
             "\" r=\"2.5\" fill=\"#c0392b\"/>\n";
        text(s, x + 215, y + 9, "cluster pts");
    }
}

}  // namespace plotdetail

// Writes <base>.csv (one labeled cell center per row) and <base>.svg (a
// deterministic picture of the region, optionally with cluster points laid
// on top). Output bytes depend only on the inputs.
inline void emit_plot_data(const GridRegion& region, const std::string& base_path,
                           const std::vector<Point>& overlay = {}) {
    using namespace plotdetail;
    const std::size_t k = region.dim();
    if (k > 2) throw std::invalid_argument("plot output limited to k <= 2");

    {
        std::ofstream csv(base_path + ".csv");
        if (!csv) throw std::runtime_error("cannot open '" + base_path + ".csv' for writing");
        region.to_csv(csv);
    }

    const double W = 640, H = 360;
    const Frame fr = [&] {
        Frame f;
        f.px0 = 50;
        f.py0 = 20;
        f.pw = W - 70;
        f.ph = H - 80;
        Box ob = k > 0 && region.cell_count() > 0 ? region.outer_box() : Box({0.0}, {1.0});
        f.x0 = ob.lo[0];
        f.x1 = ob.hi[0];
        if (k == 2) {
            f.y0 = ob.lo[1];
            f.y1 = ob.hi[1];
        } else {
            f.y0 = 0;
            f.y1 = 1;
        }
        return f;
    }();

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"360\" "
         "viewBox=\"0 0 640 360\">\n";
    s += "<defs><pattern id=\"hatch\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\" "
         "patternTransform=\"rotate(45)\"><rect width=\"6\" height=\"6\" fill=\"#fdf6e3\"/>"
         "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#b58900\" stroke-width=\"2\"/>"
         "</pattern></defs>\n";
    rect(s, 0, 0, W, H, "fill=\"#ffffff\"");

    if (region.cell_count() > 0) {
        const double hw = region.h / 2;
        for (std::size_t f = 0; f < region.cell_count(); ++f) {
            CellLabel l = region.labels[f];
            Point c = region.center(f);
            double x = fr.sx(c[0] - hw);
            double w = fr.sx(c[0] + hw) - x;
            double y, hh;
            if (k == 2) {
                y = fr.sy(c[1] + hw);
                hh = fr.sy(c[1] - hw) - y;
            } else {
                y = fr.py0 + fr.ph * 0.25;
                hh = fr.ph * 0.5;
            }
            if (l == CellLabel::In)
                rect(s, x, y, w, hh, "fill=\"#2f6f9f\"");
            else if (l == CellLabel::Uncertain)
                rect(s, x, y, w, hh, "fill=\"url(#hatch)\"");
            // out cells stay on the white ground
        }
        // plot frame and axis extents
        rect(s, fr.px0, fr.py0, fr.pw, fr.ph, "fill=\"none\" stroke=\"#888\" stroke-width=\"1\"");
        text(s, fr.px0, H - 46, format_double(fr.x0));
        text(s, fr.px0 + fr.pw - 40, H - 46, format_double(fr.x1));
        if (k == 2) {
            text(s, 4, fr.py0 + fr.ph, format_double(fr.y0));
            text(s, 4, fr.py0 + 11, format_double(fr.y1));
        }
    } else {
        text(s, fr.px0, fr.py0 + 40, "empty region");
    }

    if (!overlay.empty()) {
        for (const Point& p : overlay) {
            if (p.size() != k && !(k == 0)) continue;
            double cx = fr.sx(p[0]);
            double cy = k == 2 ? fr.sy(p[1]) : fr.py0 + fr.ph * 0.5;
            s += "<circle cx=\"" + svg_num(cx) + "\" cy=\"" + svg_num(cy) +
                 "\" r=\"2\" fill=\"#c0392b\"/>\n";
        }
    }

    legend(s, 50, H - 24, !overlay.empty());
    s += "</svg>\n";

    std::ofstream svg(base_path + ".svg", std::ios::binary);
    if (!svg) throw std::runtime_error("cannot open '" + base_path + ".svg' for writing");
    svg << s;
}

}  // namespace roughconv
