#include "lambda_engine/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace lambda_engine {

namespace {

const char* kPalette[6] = {"#000000", "#1f5fbf", "#c22f2f",
                           "#2f8f4e", "#9240a3", "#b07d10"};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Ticks {
    double lo = 0.0, hi = 1.0, step = 0.2;
};

// 1-2-5 tick spacing covering [lo, hi].
Ticks nice_ticks(double lo, double hi) {
    if (!(hi > lo)) {
        const double pad = (lo == 0.0) ? 1.0 : std::abs(lo) * 0.5;
        lo -= pad;
        hi += pad;
    }
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    double step = (frac <= 1.0) ? 1.0 : (frac <= 2.0) ? 2.0 : (frac <= 5.0) ? 5.0 : 10.0;
    step *= mag;
    Ticks t;
    t.step = step;
    t.lo = std::floor(lo / step) * step;
    t.hi = std::ceil(hi / step) * step;
    return t;
}

}  // namespace

std::string render_svg_plot(const std::vector<SvgSeries>& series,
                            const SvgPlotSpec& spec) {
    const double ml = 78, mr = 22, mt = 42, mb = 58;  // margins
    const double W = spec.width, H = spec.height;
    const double pw = W - ml - mr, ph = H - mt - mb;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const SvgSeries& s : series)
        for (auto [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (!std::isfinite(xmin)) {
        xmin = 0.0;
        xmax = 1.0;
        ymin = 0.0;
        ymax = 1.0;
    }
    const Ticks tx = nice_ticks(xmin, xmax);
    const Ticks ty = nice_ticks(ymin, ymax);

    auto X = [&](double x) { return ml + (x - tx.lo) / (tx.hi - tx.lo) * pw; };
    auto Y = [&](double y) { return mt + ph - (y - ty.lo) / (ty.hi - ty.lo) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W
       << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"#ffffff\"/>\n";

    // grid and ticks
    os << "<g stroke=\"#d8d8d8\" stroke-width=\"1\">\n";
    for (double x = tx.lo; x <= tx.hi + 0.5 * tx.step; x += tx.step)
        os << "<line x1=\"" << fmt(X(x)) << "\" y1=\"" << fmt(mt) << "\" x2=\""
           << fmt(X(x)) << "\" y2=\"" << fmt(mt + ph) << "\"/>\n";
    for (double y = ty.lo; y <= ty.hi + 0.5 * ty.step; y += ty.step)
        os << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(Y(y)) << "\" x2=\""
           << fmt(ml + pw) << "\" y2=\"" << fmt(Y(y)) << "\"/>\n";
    os << "</g>\n";

    os << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\"" << fmt(pw)
       << "\" height=\"" << fmt(ph)
       << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.2\"/>\n";

    os << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#000000\">\n";
    for (double x = tx.lo; x <= tx.hi + 0.5 * tx.step; x += tx.step)
        os << "<text x=\"" << fmt(X(x)) << "\" y=\"" << fmt(mt + ph + 18)
           << "\" text-anchor=\"middle\">" << fmt(x) << "</text>\n";
    for (double y = ty.lo; y <= ty.hi + 0.5 * ty.step; y += ty.step)
        os << "<text x=\"" << fmt(ml - 8) << "\" y=\"" << fmt(Y(y) + 4)
           << "\" text-anchor=\"end\">" << fmt(y) << "</text>\n";
    os << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"" << fmt(H - 14)
       << "\" text-anchor=\"middle\">" << escape(spec.xlabel) << "</text>\n";
    os << "<text x=\"18\" y=\"" << fmt(mt + ph / 2)
       << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << fmt(mt + ph / 2)
       << ")\">" << escape(spec.ylabel) << "</text>\n";
    os << "<text x=\"" << fmt(W / 2) << "\" y=\"24\" text-anchor=\"middle\" "
          "font-size=\"15\">"
       << escape(spec.title) << "</text>\n";
    os << "</g>\n";

    for (size_t i = 0; i < series.size(); ++i) {
        std::ostringstream pts;
        bool any = false;
        for (auto [x, y] : series[i].points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (any) pts << ' ';
            pts << fmt(X(x)) << ',' << fmt(Y(y));
            any = true;
        }
        if (!any) continue;
        os << "<polyline fill=\"none\" stroke=\"" << kPalette[i % 6]
           << "\" stroke-width=\"1.8\" points=\"" << pts.str() << "\"/>\n";
    }

    // legend
    os << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    double ly = mt + 14;
    for (size_t i = 0; i < series.size(); ++i) {
        const double lx = ml + pw - 180;
        os << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly - 4) << "\" x2=\""
           << fmt(lx + 26) << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\""
           << kPalette[i % 6] << "\" stroke-width=\"1.8\"/>\n";
        os << "<text x=\"" << fmt(lx + 32) << "\" y=\"" << fmt(ly) << "\">"
           << escape(series[i].label) << "</text>\n";
        ly += 18;
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

}  // namespace lambda_engine
