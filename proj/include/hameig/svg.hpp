#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace hameig {

// Minimal line-plot writer. Fixed 800x600 viewBox; the data rectangle maps
// linearly onto the plot area x in [70, 780], y in [30, 550] with the y axis
// inverted (larger values up). Axis end labels carry the data bounds.
class SvgPlot {
public:
    struct Series {
        std::vector<double> x, y;
        std::string color = "#1f77b4";
        bool markers = false;
    };

    SvgPlot(std::string title, std::string xlabel, std::string ylabel)
        : title_(std::move(title)), xlabel_(std::move(xlabel)),
          ylabel_(std::move(ylabel)) {}

    void add_series(Series s) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xmin_ = std::min(xmin_, s.x[i]);
            xmax_ = std::max(xmax_, s.x[i]);
            ymin_ = std::min(ymin_, s.y[i]);
            ymax_ = std::max(ymax_, s.y[i]);
        }
        series_.push_back(std::move(s));
    }

    // horizontal reference line, drawn across the full x range
    void add_level(double y, std::string color = "#d62728") {
        levels_.emplace_back(y, std::move(color));
        ymin_ = std::min(ymin_, y);
        ymax_ = std::max(ymax_, y);
    }

    std::string render() const {
        double xmin = xmin_, xmax = xmax_, ymin = ymin_, ymax = ymax_;
        if (!(xmin < xmax)) { xmin -= 0.5; xmax += 0.5; }
        if (!(ymin < ymax)) { ymin -= 0.5; ymax += 0.5; }
        double ypad = 0.05 * (ymax - ymin);
        ymin -= ypad;
        ymax += ypad;

        auto px = [&](double x) { return x0_ + (x - xmin) / (xmax - xmin) * (x1_ - x0_); };
        auto py = [&](double y) { return y1_ - (y - ymin) / (ymax - ymin) * (y1_ - y0_); };

        std::ostringstream os;
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
              "width=\"800\" height=\"600\">\n";
        os << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
        os << "<text x=\"400\" y=\"20\" text-anchor=\"middle\" font-size=\"16\">"
           << escape(title_) << "</text>\n";

        // frame
        os << "<rect x=\"" << x0_ << "\" y=\"" << y0_ << "\" width=\"" << x1_ - x0_
           << "\" height=\"" << y1_ - y0_
           << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

        // axis labels and bounds
        os << "<text x=\"" << (x0_ + x1_) / 2 << "\" y=\"585\" text-anchor=\"middle\" "
              "font-size=\"13\">" << escape(xlabel_) << "</text>\n";
        os << "<text x=\"18\" y=\"" << (y0_ + y1_) / 2 << "\" text-anchor=\"middle\" "
              "font-size=\"13\" transform=\"rotate(-90 18 " << (y0_ + y1_) / 2 << ")\">"
           << escape(ylabel_) << "</text>\n";
        os << "<text x=\"" << x0_ << "\" y=\"568\" text-anchor=\"middle\" font-size=\"11\">"
           << fmt(xmin) << "</text>\n";
        os << "<text x=\"" << x1_ << "\" y=\"568\" text-anchor=\"middle\" font-size=\"11\">"
           << fmt(xmax) << "</text>\n";
        os << "<text x=\"" << x0_ - 6 << "\" y=\"" << y1_ + 4
           << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(ymin) << "</text>\n";
        os << "<text x=\"" << x0_ - 6 << "\" y=\"" << y0_ + 4
           << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(ymax) << "</text>\n";

        for (const auto& [lv, color] : levels_) {
            os << "<line x1=\"" << x0_ << "\" y1=\"" << py(lv) << "\" x2=\"" << x1_
               << "\" y2=\"" << py(lv) << "\" stroke=\"" << color
               << "\" stroke-dasharray=\"6 4\" stroke-width=\"1\"/>\n";
        }

        for (const Series& s : series_) {
            os << "<polyline fill=\"none\" stroke=\"" << s.color
               << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                os << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
            }
            os << "\"/>\n";
            if (s.markers) {
                for (std::size_t i = 0; i < s.x.size(); ++i) {
                    if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                    os << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\""
                       << fmt(py(s.y[i])) << "\" r=\"4\" fill=\"" << s.color
                       << "\"/>\n";
                }
            }
        }
        os << "</svg>\n";
        return os.str();
    }

private:
    std::string title_, xlabel_, ylabel_;
    std::vector<Series> series_;
    std::vector<std::pair<double, std::string>> levels_;
    double xmin_ = std::numeric_limits<double>::infinity();
    double xmax_ = -std::numeric_limits<double>::infinity();
    double ymin_ = std::numeric_limits<double>::infinity();
    double ymax_ = -std::numeric_limits<double>::infinity();
    static constexpr double x0_ = 70, x1_ = 780, y0_ = 30, y1_ = 550;

    static std::string fmt(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return buf;
    }

    static std::string escape(const std::string& s) {
        std::string out;
        for (char c : s) {
            if (c == '&') out += "&amp;";
            else if (c == '<') out += "&lt;";
            else if (c == '>') out += "&gt;";
            else out += c;
        }
        return out;
    }
};

} // namespace hameig
