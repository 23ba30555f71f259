#include "areal/io_svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "areal/error.hpp"

namespace areal {

namespace {

constexpr double kCanvasWidth = 800.0;
constexpr double kLegendWidth = 170.0;

struct Viewport {
    double min_x, min_y, scale, height;
    double x(double wx) const { return (wx - min_x) * scale; }
    double y(double wy) const { return height - (wy - min_y) * scale; }  // flip
};

Viewport fit_viewport(const UnitCollection& units) {
    double lo_x = 1e300, lo_y = 1e300, hi_x = -1e300, hi_y = -1e300;
    for (const auto& u : units.units()) {
        for (const auto& ring : u.polygon) {
            for (const auto& p : ring) {
                lo_x = std::min(lo_x, p.x);
                hi_x = std::max(hi_x, p.x);
                lo_y = std::min(lo_y, p.y);
                hi_y = std::max(hi_y, p.y);
            }
        }
    }
    const double span_x = hi_x - lo_x, span_y = hi_y - lo_y;
    const double margin_x = span_x > 0.0 ? 0.05 * span_x : 1.0;
    const double margin_y = span_y > 0.0 ? 0.05 * span_y : 1.0;
    Viewport v{};
    v.min_x = lo_x - margin_x;
    v.min_y = lo_y - margin_y;
    v.scale = kCanvasWidth / (span_x + 2.0 * margin_x);
    v.height = (span_y + 2.0 * margin_y) * v.scale;
    return v;
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(2) << v;
    return ss.str();
}

std::string fmt_value(double v) {
    std::ostringstream ss;
    ss << std::setprecision(6) << v;
    return ss.str();
}

std::string path_data(const SpatialUnit& u, const Viewport& v) {
    std::ostringstream d;
    for (const auto& ring : u.polygon) {
        for (std::size_t t = 0; t + 1 < ring.size(); ++t)
            d << (t == 0 ? "M" : "L") << fmt(v.x(ring[t].x)) << "," << fmt(v.y(ring[t].y));
        d << "Z";
    }
    return d.str();
}

struct LegendEntry {
    std::string color, label;
};

void write_svg(const UnitCollection& units, const std::vector<std::string>& fills,
               const std::vector<LegendEntry>& legend, const std::string& path,
               const nlohmann::json& provenance) {
    if (!units.has_polygons())
        throw DataError("choropleth rendering requires polygons on all units");
    const Viewport v = fit_viewport(units);
    const double total_w = kCanvasWidth + kLegendWidth;
    const double total_h = std::max(v.height, 24.0 * legend.size() + 20.0);

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(total_w)
        << "\" height=\"" << fmt(total_h) << "\" viewBox=\"0 0 " << fmt(total_w) << " "
        << fmt(total_h) << "\">\n";
    if (!provenance.is_null())
        svg << "<metadata><![CDATA[" << provenance.dump() << "]]></metadata>\n";
    svg << "<g stroke=\"#555555\" stroke-width=\"0.5\">\n";
    for (int i = 0; i < units.size(); ++i)
        svg << "<path d=\"" << path_data(units[i], v) << "\" fill=\""
            << fills[static_cast<std::size_t>(i)] << "\"/>\n";
    svg << "</g>\n";
    for (std::size_t e = 0; e < legend.size(); ++e) {
        const double ly = 16.0 + 24.0 * static_cast<double>(e);
        svg << "<rect x=\"" << fmt(kCanvasWidth + 10.0) << "\" y=\"" << fmt(ly)
            << "\" width=\"16\" height=\"16\" fill=\"" << legend[e].color
            << "\" stroke=\"#555555\"/>\n";
        svg << "<text x=\"" << fmt(kCanvasWidth + 32.0) << "\" y=\"" << fmt(ly + 13.0)
            << "\" font-family=\"sans-serif\" font-size=\"13\">" << legend[e].label
            << "</text>\n";
    }
    svg << "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << svg.str();
}

}  // namespace

void write_choropleth_svg(const UnitCollection& units, const std::vector<LisaClass>& classes,
                          const std::string& path, const nlohmann::json& provenance) {
    if (static_cast<int>(classes.size()) != units.size())
        throw DataError("class vector length does not match unit count");
    static const std::pair<LisaClass, const char*> palette[] = {
        {LisaClass::HighHigh, "#d7191c"}, {LisaClass::LowLow, "#2c7bb6"},
        {LisaClass::HighLow, "#fdae61"},  {LisaClass::LowHigh, "#abd9e9"},
        {LisaClass::NotSignificant, "#d9d9d9"}};
    auto color_of = [&](LisaClass c) {
        for (const auto& [cls, color] : palette)
            if (cls == c) return color;
        return "#d9d9d9";
    };
    std::vector<std::string> fills;
    fills.reserve(classes.size());
    for (auto c : classes) fills.emplace_back(color_of(c));

    std::vector<LegendEntry> legend;
    for (const auto& [cls, color] : palette) {
        const auto count = std::count(classes.begin(), classes.end(), cls);
        legend.push_back({color, std::string(lisa_code(cls)) + " (" +
                                     std::to_string(count) + ")"});
    }
    write_svg(units, fills, legend, path, provenance);
}

void write_choropleth_svg(const UnitCollection& units, const std::vector<double>& values,
                          const std::string& path, const nlohmann::json& provenance) {
    if (static_cast<int>(values.size()) != units.size())
        throw DataError("value vector length does not match unit count");
    static const char* ramp[5] = {"#ffffcc", "#c2e699", "#78c679", "#31a354", "#006837"};

    // quintile thresholds, lower interpolation
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const auto m = sorted.size();
    double thresh[4];
    for (int k = 1; k <= 4; ++k) {
        auto idx = static_cast<std::size_t>(
                       std::ceil(static_cast<double>(m) * k / 5.0)) - 1;
        thresh[k - 1] = sorted[std::min(idx, m - 1)];
    }
    auto bucket_of = [&](double v) {
        for (int k = 0; k < 4; ++k)
            if (v <= thresh[k]) return k;
        return 4;
    };
    std::vector<std::string> fills;
    fills.reserve(values.size());
    for (double v : values) fills.emplace_back(ramp[bucket_of(v)]);

    std::vector<LegendEntry> legend;
    legend.push_back({ramp[0], "&lt;= " + fmt_value(thresh[0])});
    for (int k = 1; k < 4; ++k)
        legend.push_back({ramp[k], fmt_value(thresh[k - 1]) + " - " + fmt_value(thresh[k])});
    legend.push_back({ramp[4], "&gt; " + fmt_value(thresh[3])});
    write_svg(units, fills, legend, path, provenance);
}

}  // namespace areal
