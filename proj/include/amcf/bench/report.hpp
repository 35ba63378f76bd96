#ifndef AMCF_BENCH_REPORT_HPP
#define AMCF_BENCH_REPORT_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "metrics.hpp"
#include "sequence.hpp"

namespace amcf::bench {

inline nlohmann::json to_json(const Curve& c) { return {{"thresholds", c.thresholds}, {"values", c.values}}; }

inline Curve curve_from_json(const nlohmann::json& j) {
    return {j.at("thresholds").get<std::vector<double>>(), j.at("values").get<std::vector<double>>()};
}

inline nlohmann::json to_json(const EvalReport& r) {
    const auto optional_list = [](const std::vector<std::optional<double>>& v) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& x : v) a.push_back(x ? nlohmann::json(*x) : nlohmann::json(nullptr));
        return a;
    };
    return {{"sequence", r.sequence},
            {"precision_20", r.precision_20},
            {"auc", r.auc},
            {"mean_iou", r.mean_iou},
            {"fps", r.fps},
            {"precision_curve", to_json(r.precision)},
            {"success_curve", to_json(r.success)},
            {"center_errors", optional_list(r.center_errors)},
            {"ious", optional_list(r.ious)}};
}

inline EvalReport report_from_json(const nlohmann::json& j) {
    const auto optional_list = [](const nlohmann::json& a) {
        std::vector<std::optional<double>> v;
        for (const auto& x : a) v.push_back(x.is_null() ? std::nullopt : std::optional<double>(x.get<double>()));
        return v;
    };
    EvalReport r;
    try {
        r.sequence = j.value("sequence", "");
        r.precision_20 = j.at("precision_20").get<double>();
        r.auc = j.at("auc").get<double>();
        r.mean_iou = j.value("mean_iou", 0.0);
        r.fps = j.value("fps", 0.0);
        r.precision = curve_from_json(j.at("precision_curve"));
        r.success = curve_from_json(j.at("success_curve"));
        if (j.contains("center_errors")) r.center_errors = optional_list(j.at("center_errors"));
        if (j.contains("ious")) r.ious = optional_list(j.at("ious"));
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidInput, std::string("report: ") + e.what());
    }
    return r;
}

inline void save_report(const fs::path& file, const EvalReport& r) {
    std::ofstream out(file);
    if (!out)
        fail(ErrorKind::InvalidInput, "cannot write " + file.string());
    out << to_json(r).dump(2) << '\n';
}

inline EvalReport load_report(const fs::path& file) {
    std::ifstream in(file);
    if (!in)
        fail(ErrorKind::InvalidInput, "cannot open report " + file.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(ErrorKind::InvalidInput, "report " + file.string() + ": " + e.what());
    }
    return report_from_json(j);
}

/// Two blocks of curve samples: "precision,<threshold_px>,<value>" and "success,<iou>,<value>".
inline std::string curves_csv(const EvalReport& r) {
    std::ostringstream o;
    o << "curve,threshold,value\n";
    char buf[96];
    for (std::size_t i = 0; i < r.precision.values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "precision,%g,%.6f\n", r.precision.thresholds[i], r.precision.values[i]);
        o << buf;
    }
    for (std::size_t i = 0; i < r.success.values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "success,%g,%.6f\n", r.success.thresholds[i], r.success.values[i]);
        o << buf;
    }
    return o.str();
}

namespace detail {

inline void svg_panel(std::ostringstream& o, double x0, const Curve& c, double x_max, const std::string& title,
                      const std::string& x_label, const std::string& legend) {
    constexpr double w = 360, h = 260, pad = 40;
    char buf[256];
    std::snprintf(buf, sizeof buf, "<g transform=\"translate(%g,20)\">\n", x0);
    o << buf;
    std::snprintf(buf, sizeof buf, "<rect x=\"%g\" y=\"0\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"#444\"/>\n", pad,
                  w, h);
    o << buf;
    for (int i = 0; i <= 4; ++i) {
        const double y = h - h * i / 4.0;
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"#ddd\"/><text x=\"%g\" y=\"%g\" "
                      "font-size=\"10\" text-anchor=\"end\">%.2f</text>\n",
                      pad, y, pad + w, y, pad - 4, y + 3, i / 4.0);
        o << buf;
    }
    o << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", pad + w * c.thresholds[i] / x_max, h - h * c.values[i]);
        o << buf;
    }
    o << "\"/>\n";
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"-6\" font-size=\"13\" text-anchor=\"middle\">%s</text>\n", pad + w / 2,
                  title.c_str());
    o << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"11\" text-anchor=\"middle\">%s</text>\n", pad + w / 2,
                  h + 28, x_label.c_str());
    o << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"11\" text-anchor=\"end\">%s</text>\n", pad + w - 6,
                  18.0, legend.c_str());
    o << buf << "</g>\n";
}

} // namespace detail

/// Side-by-side precision and success plots.
inline std::string plot_svg(const EvalReport& r) {
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"840\" height=\"330\" font-family=\"sans-serif\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    char legend[96];
    std::snprintf(legend, sizeof legend, "%s [%.3f]", r.sequence.c_str(), r.precision_20);
    detail::svg_panel(o, 0, r.precision, kPrecisionMaxPx, "Precision plot", "Location error threshold (px)", legend);
    std::snprintf(legend, sizeof legend, "%s [%.3f]", r.sequence.c_str(), r.auc);
    detail::svg_panel(o, 420, r.success, 1.0, "Success plot", "Overlap threshold", legend);
    o << "</svg>\n";
    return o.str();
}

} // namespace amcf::bench

#endif
