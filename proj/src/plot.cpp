#include "apollo/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "apollo/error.hpp"

namespace apollo {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

std::string num(double x, int digits = 6)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

std::string escape(std::string const& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

// Roughly five round tick values in [lo, hi].
std::vector<double> linear_ticks(double lo, double hi)
{
    double span = hi - lo;
    double step = std::pow(10.0, std::floor(std::log10(span / 5.0)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (span / (m * step) <= 6.0) {
            step *= m;
            break;
        }
    }
    std::vector<double> t;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step)
        t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return t;
}

}  // namespace

std::string svg_plot(std::span<const double> xs, std::span<const double> ys, PlotSpec const& spec)
{
    if (xs.size() != ys.size() || xs.empty())
        throw PreconditionError("svg_plot: need matching, nonempty series");
    if (spec.log_x && *std::min_element(xs.begin(), xs.end()) <= 0.0)
        throw PreconditionError("svg_plot: log axis needs positive x");

    auto tx = [&](double x) { return spec.log_x ? std::log10(x) : x; };
    double x0 = tx(*std::min_element(xs.begin(), xs.end()));
    double x1 = tx(*std::max_element(xs.begin(), xs.end()));
    double y0 = *std::min_element(ys.begin(), ys.end());
    double y1 = *std::max_element(ys.begin(), ys.end());
    if (spec.reference) {
        y0 = std::min(y0, *spec.reference);
        y1 = std::max(y1, *spec.reference);
    }
    if (x1 == x0) {
        x0 -= 0.5;
        x1 += 0.5;
    }
    double pad = y1 > y0 ? 0.05 * (y1 - y0) : 0.05;
    y0 -= pad;
    y1 += pad;

    double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (tx(x) - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight)
        + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!spec.title.empty())
        s += "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
            + escape(spec.title) + "</text>\n";
    s += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph)
        + "\" fill=\"none\" stroke=\"black\"/>\n";

    // ticks
    std::vector<double> xt;
    if (spec.log_x) {
        for (double e = std::ceil(x0 - 1e-9); e <= x1 + 1e-9; e += 1.0)
            xt.push_back(std::pow(10.0, e));
    } else {
        xt = linear_ticks(x0, x1);
    }
    for (double v : xt) {
        double x = px(v);
        s += "<line x1=\"" + num(x) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(x) + "\" y2=\""
            + num(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + num(x) + "\" y=\"" + num(kTop + ph + 18) + "\" text-anchor=\"middle\">"
            + (spec.log_x ? "1e" + num(std::log10(v), 3) : num(v, 4)) + "</text>\n";
    }
    for (double v : linear_ticks(y0, y1)) {
        double y = py(v);
        s += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(y) + "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(y)
            + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" + num(v, 4)
            + "</text>\n";
    }
    s += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 10) + "\" text-anchor=\"middle\">"
        + escape(spec.x_label) + "</text>\n";
    s += "<text x=\"16\" y=\"" + num(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        + num(kTop + ph / 2) + ")\">" + escape(spec.y_label) + "</text>\n";

    if (spec.reference) {
        double y = py(*spec.reference);
        s += "<line class=\"reference\" x1=\"" + num(kLeft) + "\" y1=\"" + num(y) + "\" x2=\"" + num(kLeft + pw)
            + "\" y2=\"" + num(y) + "\" stroke=\"red\" stroke-dasharray=\"6 4\"/>\n";
        if (!spec.reference_label.empty())
            s += "<text x=\"" + num(kLeft + pw - 4) + "\" y=\"" + num(y - 6) + "\" text-anchor=\"end\" fill=\"red\">"
                + escape(spec.reference_label) + "</text>\n";
    }

    std::vector<std::size_t> order(xs.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    s += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (k)
            s += ' ';
        s += num(px(xs[order[k]]), 7) + "," + num(py(ys[order[k]]), 7);
    }
    s += "\"/>\n</svg>\n";
    return s;
}

}  // namespace apollo
