#include "crossing/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "crossing/cli/csv.hpp"

namespace crossing::cli {

std::vector<double> nice_ticks(double lo, double hi, int target) {
    if (!(hi > lo)) return {lo};
    const double raw = (hi - lo) / std::max(1, target);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    std::vector<double> out;
    for (double v = std::ceil(lo / step - 1e-9) * step; v <= hi + 1e-9 * step; v += step)
        out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return out;
}

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

std::string tick_label(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

std::string render_svg(const Plot& p) {
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
    for (const auto& s : p.series)
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xlo = std::min(xlo, s.x[i]);
            xhi = std::max(xhi, s.x[i]);
            ylo = std::min(ylo, s.y[i]);
            yhi = std::max(yhi, s.y[i]);
        }
    for (const auto& g : p.vlines) xlo = std::min(xlo, g.at), xhi = std::max(xhi, g.at);
    for (const auto& g : p.hlines) ylo = std::min(ylo, g.at), yhi = std::max(yhi, g.at);
    if (!std::isfinite(xlo)) xlo = 0, xhi = 1;
    if (!std::isfinite(ylo)) ylo = 0, yhi = 1;
    if (xhi <= xlo) xhi = xlo + 1;
    if (yhi <= ylo) yhi = ylo + 1;
    const double ypad = 0.05 * (yhi - ylo);
    ylo -= ypad;
    yhi += ypad;

    const double left = 70, right = p.width - 20.0, top = 40, bottom = p.height - 55.0;
    auto X = [&](double x) { return left + (x - xlo) / (xhi - xlo) * (right - left); };
    auto Y = [&](double y) { return bottom - (y - ylo) / (yhi - ylo) * (bottom - top); };
    auto num = [](double v) { return format_number(std::round(v * 100) / 100); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << p.width << "\" height=\"" << p.height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << p.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(p.title)
       << "</text>\n";

    for (double v : nice_ticks(xlo, xhi)) {
        os << "<line x1=\"" << num(X(v)) << "\" y1=\"" << num(bottom) << "\" x2=\"" << num(X(v)) << "\" y2=\""
           << num(bottom + 5) << "\" stroke=\"black\"/>";
        os << "<text x=\"" << num(X(v)) << "\" y=\"" << num(bottom + 18) << "\" text-anchor=\"middle\">"
           << tick_label(v) << "</text>\n";
    }
    for (double v : nice_ticks(ylo, yhi)) {
        os << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(Y(v)) << "\" x2=\"" << num(left) << "\" y2=\""
           << num(Y(v)) << "\" stroke=\"black\"/>";
        os << "<text x=\"" << num(left - 8) << "\" y=\"" << num(Y(v) + 4) << "\" text-anchor=\"end\">"
           << tick_label(v) << "</text>\n";
    }
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << right - left << "\" height=\"" << bottom - top
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << (left + right) / 2 << "\" y=\"" << p.height - 12 << "\" text-anchor=\"middle\">"
       << escape(p.xlabel) << "</text>\n";
    os << "<text transform=\"translate(16," << (top + bottom) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
       << escape(p.ylabel) << "</text>\n";

    for (const auto& g : p.vlines) {
        os << "<line class=\"vgrid\" x1=\"" << num(X(g.at)) << "\" y1=\"" << top << "\" x2=\"" << num(X(g.at))
           << "\" y2=\"" << bottom << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>";
        os << "<text x=\"" << num(X(g.at) + 4) << "\" y=\"" << top + 14 << "\" fill=\"gray\">" << escape(g.label)
           << "</text>\n";
    }
    for (const auto& g : p.hlines) {
        os << "<line class=\"hgrid\" x1=\"" << left << "\" y1=\"" << num(Y(g.at)) << "\" x2=\"" << right
           << "\" y2=\"" << num(Y(g.at)) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>";
        os << "<text x=\"" << right - 4 << "\" y=\"" << num(Y(g.at) - 4) << "\" text-anchor=\"end\" fill=\"gray\">"
           << escape(g.label) << "</text>\n";
    }

    for (const auto& s : p.series) {
        const std::size_t n = std::min(s.x.size(), s.y.size());
        if (s.markers) {
            for (std::size_t i = 0; i < n; ++i)
                if (std::isfinite(s.x[i]) && std::isfinite(s.y[i]))
                    os << "<circle cx=\"" << num(X(s.x[i])) << "\" cy=\"" << num(Y(s.y[i]))
                       << "\" r=\"3\" fill=\"" << s.color << "\"/>";
            os << '\n';
            continue;
        }
        std::string pts;
        auto flush = [&] {
            if (!pts.empty())
                os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"" << pts
                   << "\"/>\n";
            pts.clear();
        };
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                flush();
                continue;
            }
            if (!pts.empty()) pts += ' ';
            pts += num(X(s.x[i])) + "," + num(Y(s.y[i]));
        }
        flush();
    }

    double ly = top + 12;
    for (const auto& s : p.series) {
        const double lx = left + 12;
        if (s.markers)
            os << "<circle cx=\"" << lx + 10 << "\" cy=\"" << ly - 4 << "\" r=\"3\" fill=\"" << s.color << "\"/>";
        else
            os << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 20 << "\" y2=\"" << ly - 4
               << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>";
        os << "<text x=\"" << lx + 26 << "\" y=\"" << ly << "\">" << escape(s.name) << "</text>\n";
        ly += 16;
    }
    os << "</svg>\n";
    return os.str();
}

void write_svg(const Plot& plot, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << render_svg(plot);
}

}  // namespace crossing::cli
