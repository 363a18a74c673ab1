#include "signlab/svg.hpp"

#include <algorithm>
#include <cmath>

#include "signlab/format.hpp"

namespace signlab {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

} // namespace

void write_loglog_svg(std::ostream& os,
                      const std::vector<std::pair<double, double>>& points,
                      std::optional<double> reference_slope,
                      const std::string& title) {
    const int width = 640, height = 480;
    const double ml = 70, mr = 20, mt = 40, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;

    std::vector<std::pair<double, double>> pts; // log10 coords
    for (const auto& [x, y] : points)
        if (x > 0 && y > 0) pts.emplace_back(std::log10(x), std::log10(y));

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
       << "\" height=\"" << height << "\">\n";
    os << "<rect width=\"" << width << "\" height=\"" << height
       << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"15\">"
       << title << "</text>\n";

    if (pts.size() < 1) {
        os << "<text x=\"" << width / 2 << "\" y=\"" << height / 2
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
              "font-size=\"13\">no positive points</text>\n</svg>\n";
        return;
    }

    double x_min = pts[0].first, x_max = pts[0].first;
    double y_min = pts[0].second, y_max = pts[0].second;
    for (const auto& [x, y] : pts) {
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
    }
    if (x_max - x_min < 1e-9) { x_min -= 0.5; x_max += 0.5; }
    if (y_max - y_min < 1e-9) { y_min -= 0.5; y_max += 0.5; }
    y_min -= 0.1 * (y_max - y_min);
    y_max += 0.1 * (y_max - y_min);

    const auto sx = [&](double lx) { return ml + (lx - x_min) / (x_max - x_min) * pw; };
    const auto sy = [&](double ly) {
        return mt + ph - (ly - y_min) / (y_max - y_min) * ph;
    };

    // decade grid lines and tick labels
    for (int d = static_cast<int>(std::ceil(x_min)); d <= std::floor(x_max); ++d) {
        os << "<line x1=\"" << num(sx(d)) << "\" y1=\"" << num(mt) << "\" x2=\""
           << num(sx(d)) << "\" y2=\"" << num(mt + ph)
           << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << num(sx(d)) << "\" y=\"" << num(mt + ph + 18)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
              "font-size=\"11\">1e"
           << d << "</text>\n";
    }
    for (int d = static_cast<int>(std::ceil(y_min)); d <= std::floor(y_max); ++d) {
        os << "<line x1=\"" << num(ml) << "\" y1=\"" << num(sy(d)) << "\" x2=\""
           << num(ml + pw) << "\" y2=\"" << num(sy(d))
           << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << num(ml - 6) << "\" y=\"" << num(sy(d) + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
              "font-size=\"11\">1e"
           << d << "</text>\n";
    }
    os << "<rect x=\"" << num(ml) << "\" y=\"" << num(mt) << "\" width=\""
       << num(pw) << "\" height=\"" << num(ph)
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    // reference line of the requested slope, anchored at the first point
    if (reference_slope && pts.size() >= 1) {
        const double slope = *reference_slope;
        const double bx = pts.front().first, by = pts.front().second;
        const double y_at = [&](double lx) { return by + slope * (lx - bx); };
        os << "<line x1=\"" << num(sx(x_min)) << "\" y1=\"" << num(sy(y_at(x_min)))
           << "\" x2=\"" << num(sx(x_max)) << "\" y2=\"" << num(sy(y_at(x_max)))
           << "\" stroke=\"#cc3333\" stroke-dasharray=\"6 4\"/>\n";
        os << "<text x=\"" << num(ml + pw - 4) << "\" y=\"" << num(mt + 16)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" "
              "fill=\"#cc3333\">reference slope "
           << fmt_g12(slope) << "</text>\n";
    }

    os << "<polyline fill=\"none\" stroke=\"#2255aa\" stroke-width=\"1.5\" "
          "points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) os << ' ';
        os << num(sx(pts[i].first)) << ',' << num(sy(pts[i].second));
    }
    os << "\"/>\n";
    for (const auto& [lx, ly] : pts)
        os << "<circle cx=\"" << num(sx(lx)) << "\" cy=\"" << num(sy(ly))
           << "\" r=\"3\" fill=\"#2255aa\"/>\n";
    os << "</svg>\n";
}

} // namespace signlab
