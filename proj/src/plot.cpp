#include "fluxlink/plot.hpp"

#include "fluxlink/config.hpp"
#include "fluxlink/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fluxlink::cli {

namespace {

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string tick_label(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

} // namespace

std::string svg_line_plot(const std::vector<double>& x, const std::vector<double>& y, const PlotOptions& opt) {
    if (x.size() != y.size()) throw ArgumentError("svg_line_plot: x and y differ in length");
    std::vector<std::pair<double, double>> pts;
    for (size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
        if (opt.log_x && !(x[i] > 0.0)) continue;
        pts.push_back({opt.log_x ? std::log10(x[i]) : x[i], y[i]});
    }
    if (pts.size() < 2) return {};

    double x0 = pts.front().first, x1 = x0, y0 = pts.front().second, y1 = y0;
    for (const auto& [a, b] : pts) {
        x0 = std::min(x0, a);
        x1 = std::max(x1, a);
        y0 = std::min(y0, b);
        y1 = std::max(y1, b);
    }
    if (opt.y_range) {
        y0 = opt.y_range->first;
        y1 = opt.y_range->second;
    }
    if (x1 == x0) x1 = x0 + 1.0;
    if (y1 == y0) {
        y0 -= 0.5;
        y1 += 0.5;
    }

    const double ml = 70, mr = 20, mt = 40, mb = 50;
    const double pw = opt.width - ml - mr, ph = opt.height - mt - mb;
    auto px = [&](double a) { return ml + (a - x0) / (x1 - x0) * pw; };
    auto py = [&](double b) { return mt + (1.0 - (std::clamp(b, y0, y1) - y0) / (y1 - y0)) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
      << "\" viewBox=\"0 0 " << opt.width << " " << opt.height << "\">\n";
    if (!opt.config_hash.empty()) o << "<!-- config " << escape_xml(opt.config_hash) << " -->\n";
    o << "<metadata>config-hash:" << escape_xml(opt.config_hash) << "</metadata>\n";
    o << "<rect x=\"0\" y=\"0\" width=\"" << opt.width << "\" height=\"" << opt.height << "\" fill=\"white\"/>\n";
    o << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\"" << fmt(pw) << "\" height=\"" << fmt(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double a = x0 + k * (x1 - x0) / 4.0;
        const double b = y0 + k * (y1 - y0) / 4.0;
        o << "<text x=\"" << fmt(px(a)) << "\" y=\"" << fmt(mt + ph + 18) << "\" font-size=\"11\" text-anchor=\"middle\">"
          << tick_label(opt.log_x ? std::pow(10.0, a) : a) << "</text>\n";
        o << "<text x=\"" << fmt(ml - 6) << "\" y=\"" << fmt(py(b) + 4) << "\" font-size=\"11\" text-anchor=\"end\">"
          << tick_label(b) << "</text>\n";
    }
    o << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"" << fmt(opt.height - 10.0)
      << "\" font-size=\"13\" text-anchor=\"middle\">" << escape_xml(opt.x_label) << (opt.log_x ? " (log)" : "")
      << "</text>\n";
    o << "<text x=\"16\" y=\"" << fmt(mt + ph / 2) << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << fmt(mt + ph / 2) << ")\">" << escape_xml(opt.y_label) << "</text>\n";
    o << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"24\" font-size=\"14\" text-anchor=\"middle\">"
      << escape_xml(opt.title) << "</text>\n";
    o << "<polyline fill=\"none\" stroke=\"#1f4e9a\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < pts.size(); ++i) o << (i ? " " : "") << fmt(px(pts[i].first)) << "," << fmt(py(pts[i].second));
    o << "\"/>\n</svg>\n";
    return o.str();
}

} // namespace fluxlink::cli
