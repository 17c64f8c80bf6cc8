#pragma once

#include "seriescast/time_series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace seriescast {

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

} // namespace detail

/**
 * Renders history plus a forecast path with shaded interval bands as a
 * self-contained SVG document. No third-party plotting dependency:
 * polylines and filled polygons are enough for these charts.
 */
inline std::string svg_forecast_plot(const TimeSeries& history, const Forecast& forecast,
                                     const std::string& title) {
    const double width = 920.0, height = 420.0;
    const double ml = 70.0, mr = 20.0, mt = 40.0, mb = 45.0;
    const double pw = width - ml - mr, ph = height - mt - mb;

    const std::size_t n = history.size();
    const std::size_t total = n + forecast.points.size();

    double ymin = history[0], ymax = history[0];
    const auto stretch = [&](double v) {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
    };
    for (double v : history.values()) stretch(v);
    for (double v : forecast.points) stretch(v);
    for (const auto& [level, band] : forecast.intervals) {
        for (double v : band.lower) stretch(v);
        for (double v : band.upper) stretch(v);
    }
    if (ymax <= ymin) ymax = ymin + 1.0;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    const auto px = [&](double t) { return ml + pw * t / static_cast<double>(total - 1); };
    const auto py = [&](double v) { return mt + ph * (1.0 - (v - ymin) / (ymax - ymin)); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"920\" height=\"420\" "
           "viewBox=\"0 0 920 420\">\n";
    svg += "<rect width=\"920\" height=\"420\" fill=\"white\"/>\n";
    svg += "<text x=\"" + detail::svg_num(width / 2) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" + title + "</text>\n";

    // y grid and labels
    const int yticks = 6;
    for (int i = 0; i <= yticks; ++i) {
        const double v = ymin + (ymax - ymin) * i / yticks;
        const double yy = py(v);
        svg += "<line x1=\"" + detail::svg_num(ml) + "\" y1=\"" + detail::svg_num(yy) +
               "\" x2=\"" + detail::svg_num(width - mr) + "\" y2=\"" + detail::svg_num(yy) +
               "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        char label[32];
        std::snprintf(label, sizeof(label), "%.0f", v);
        svg += "<text x=\"" + detail::svg_num(ml - 8) + "\" y=\"" + detail::svg_num(yy + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + label +
               "</text>\n";
    }

    // x labels: a handful of dates across history + horizon
    const int xticks = 6;
    for (int i = 0; i <= xticks; ++i) {
        const std::size_t idx = static_cast<std::size_t>(
            std::lround(static_cast<double>(total - 1) * i / xticks));
        const double xx = px(static_cast<double>(idx));
        const Date date = history.start_date().plus_days(static_cast<long>(idx));
        svg += "<text x=\"" + detail::svg_num(xx) + "\" y=\"" +
               detail::svg_num(height - mb + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               date.to_string() + "</text>\n";
    }

    // bands, widest level first so narrower ones draw on top
    std::vector<double> levels;
    for (const auto& [level, band] : forecast.intervals) levels.push_back(level);
    std::sort(levels.rbegin(), levels.rend());
    const char* fills[] = {"#c9ddf2", "#8fbbe8", "#6aa5df", "#4f93d6"};
    int fill_index = 0;
    for (double level : levels) {
        const auto& band = forecast.intervals.at(level);
        std::string points;
        for (std::size_t s = 0; s < band.upper.size(); ++s) {
            points += detail::svg_num(px(static_cast<double>(n - 1 + s + 1))) + "," +
                      detail::svg_num(py(band.upper[s])) + " ";
        }
        for (std::size_t s = band.lower.size(); s-- > 0;) {
            points += detail::svg_num(px(static_cast<double>(n - 1 + s + 1))) + "," +
                      detail::svg_num(py(band.lower[s])) + " ";
        }
        svg += "<polygon points=\"" + points + "\" fill=\"" +
               fills[std::min(fill_index, 3)] + "\" stroke=\"none\" fill-opacity=\"0.85\"/>\n";
        ++fill_index;
    }

    // history line
    {
        std::string points;
        for (std::size_t t = 0; t < n; ++t) {
            points += detail::svg_num(px(static_cast<double>(t))) + "," +
                      detail::svg_num(py(history[t])) + " ";
        }
        svg += "<polyline points=\"" + points +
               "\" fill=\"none\" stroke=\"#222222\" stroke-width=\"1.3\"/>\n";
    }

    // forecast line, connected to the last observation
    {
        std::string points = detail::svg_num(px(static_cast<double>(n - 1))) + "," +
                             detail::svg_num(py(history[n - 1])) + " ";
        for (std::size_t s = 0; s < forecast.points.size(); ++s) {
            points += detail::svg_num(px(static_cast<double>(n + s))) + "," +
                      detail::svg_num(py(forecast.points[s])) + " ";
        }
        svg += "<polyline points=\"" + points +
               "\" fill=\"none\" stroke=\"#0b4f9e\" stroke-width=\"1.8\"/>\n";
    }

    svg += "<rect x=\"" + detail::svg_num(ml) + "\" y=\"" + detail::svg_num(mt) + "\" width=\"" +
           detail::svg_num(pw) + "\" height=\"" + detail::svg_num(ph) +
           "\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1\"/>\n";
    svg += "</svg>\n";
    return svg;
}

} // namespace seriescast
