#include "persbar/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace persbar {

namespace {

const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

std::string decade_label(int e) {
    if (e >= -2 && e <= 3) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", std::pow(10.0, e));
        return buf;
    }
    return "1e" + std::to_string(e);
}

}  // namespace

std::string render_loglog_svg(const Plot& plot) {
    const double W = 720, H = 480, left = 80, right = 190, top = 40, bottom = 60;
    const double pw = W - left - right, ph = H - top - bottom;

    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const PlotSeries& s : plot.series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0) || !(s.y[i] > 0)) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (!(xmin <= xmax)) xmin = 1, xmax = 10, ymin = 1, ymax = 10;
    int x0 = static_cast<int>(std::floor(std::log10(xmin))), x1 = static_cast<int>(std::ceil(std::log10(xmax)));
    int y0 = static_cast<int>(std::floor(std::log10(ymin))), y1 = static_cast<int>(std::ceil(std::log10(ymax)));
    if (x1 == x0) ++x1;
    if (y1 == y0) ++y1;
    auto px = [&](double x) { return left + (std::log10(x) - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return top + ph - (std::log10(y) - y0) / (y1 - y0) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
       << W << " " << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << num(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
       << escape(plot.title) << "</text>\n";

    // decade gridlines with faint minor lines at 2..9
    for (int e = x0; e <= x1; ++e) {
        const double x = px(std::pow(10.0, e));
        os << "<line x1=\"" << num(x) << "\" y1=\"" << num(top) << "\" x2=\"" << num(x) << "\" y2=\""
           << num(top + ph) << "\" stroke=\"#bbb\"/>\n";
        os << "<text x=\"" << num(x) << "\" y=\"" << num(top + ph + 18) << "\" text-anchor=\"middle\">"
           << decade_label(e) << "</text>\n";
        for (int m = 2; m < 10 && e < x1; ++m) {
            const double xm = px(m * std::pow(10.0, e));
            os << "<line x1=\"" << num(xm) << "\" y1=\"" << num(top) << "\" x2=\"" << num(xm) << "\" y2=\""
               << num(top + ph) << "\" stroke=\"#eee\"/>\n";
        }
    }
    for (int e = y0; e <= y1; ++e) {
        const double y = py(std::pow(10.0, e));
        os << "<line x1=\"" << num(left) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left + pw) << "\" y2=\""
           << num(y) << "\" stroke=\"#bbb\"/>\n";
        os << "<text x=\"" << num(left - 8) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">"
           << decade_label(e) << "</text>\n";
        for (int m = 2; m < 10 && e < y1; ++m) {
            const double ym = py(m * std::pow(10.0, e));
            os << "<line x1=\"" << num(left) << "\" y1=\"" << num(ym) << "\" x2=\"" << num(left + pw)
               << "\" y2=\"" << num(ym) << "\" stroke=\"#eee\"/>\n";
        }
    }
    os << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw) << "\" height=\""
       << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(H - 16) << "\" text-anchor=\"middle\">"
       << escape(plot.xlabel) << "</text>\n";
    os << "<text transform=\"translate(20 " << num(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
       << escape(plot.ylabel) << "</text>\n";

    for (std::size_t si = 0; si < plot.series.size(); ++si) {
        const PlotSeries& s = plot.series[si];
        const char* colour = palette[si % std::size(palette)];
        if (s.line) {
            os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i)
                if (s.x[i] > 0 && s.y[i] > 0) os << num(px(s.x[i])) << "," << num(py(s.y[i])) << " ";
            os << "\"/>\n";
        } else {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!(s.x[i] > 0) || !(s.y[i] > 0)) continue;
                const double cx = px(s.x[i]), cy = py(s.y[i]);
                if (i < s.err.size() && s.err[i] > 0) {
                    const double lo = s.y[i] - s.err[i], hi = s.y[i] + s.err[i];
                    const double ylo = lo > 0 ? std::min(py(lo), top + ph) : top + ph;
                    os << "<line x1=\"" << num(cx) << "\" y1=\"" << num(ylo) << "\" x2=\"" << num(cx)
                       << "\" y2=\"" << num(std::max(py(hi), top)) << "\" stroke=\"" << colour << "\"/>\n";
                }
                os << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"3\" fill=\"" << colour
                   << "\"/>\n";
            }
        }
        const double ly = top + 12 + 20 * static_cast<double>(si);
        os << "<line x1=\"" << num(left + pw + 14) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(left + pw + 34)
           << "\" y2=\"" << num(ly) << "\" stroke=\"" << colour << "\" stroke-width=\"3\"/>\n";
        os << "<text x=\"" << num(left + pw + 40) << "\" y=\"" << num(ly + 4) << "\">" << escape(s.label)
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace persbar
