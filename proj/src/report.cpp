// SPDX-License-Identifier: Apache-2.0
#include "doa/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "doa/error.hpp"

namespace doa {

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot open output file: " + path);
    out << content;
    if (!out)
        throw ConfigError("failed writing output file: " + path);
}

double value_db(double v) {
    return 10.0 * std::log10(std::max(v, 1e-300));
}

// Minimal polyline plot scaffolding shared by both SVG emitters.
struct PlotFrame {
    static constexpr int width = 880;
    static constexpr int height = 560;
    static constexpr int left = 70, right = 30, top = 40, bottom = 60;

    double x_min, x_max, y_min, y_max;

    double px(double x) const {
        return left + (x - x_min) / (x_max - x_min) * (width - left - right);
    }
    double py(double y) const {
        return height - bottom - (y - y_min) / (y_max - y_min) * (height - top - bottom);
    }
};

void svg_open(std::ostringstream& s, const std::string& title) {
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << PlotFrame::width
      << "\" height=\"" << PlotFrame::height << "\" viewBox=\"0 0 " << PlotFrame::width << " "
      << PlotFrame::height << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << PlotFrame::width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
}

void svg_axes(std::ostringstream& s, const PlotFrame& f, const std::string& x_label,
              const std::string& y_label) {
    s << "<line x1=\"" << f.px(f.x_min) << "\" y1=\"" << f.py(f.y_min) << "\" x2=\""
      << f.px(f.x_max) << "\" y2=\"" << f.py(f.y_min) << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << f.px(f.x_min) << "\" y1=\"" << f.py(f.y_min) << "\" x2=\""
      << f.px(f.x_min) << "\" y2=\"" << f.py(f.y_max) << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 8; ++i) {
        const double x = f.x_min + (f.x_max - f.x_min) * i / 8.0;
        s << "<line x1=\"" << f.px(x) << "\" y1=\"" << f.py(f.y_min) << "\" x2=\"" << f.px(x)
          << "\" y2=\"" << f.py(f.y_min) + 5 << "\" stroke=\"black\"/>\n";
        s << "<text x=\"" << f.px(x) << "\" y=\"" << f.py(f.y_min) + 20
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
          << format_double(std::round(x * 100.0) / 100.0) << "</text>\n";
    }
    for (int i = 0; i <= 6; ++i) {
        const double y = f.y_min + (f.y_max - f.y_min) * i / 6.0;
        s << "<line x1=\"" << f.px(f.x_min) - 5 << "\" y1=\"" << f.py(y) << "\" x2=\""
          << f.px(f.x_min) << "\" y2=\"" << f.py(y) << "\" stroke=\"black\"/>\n";
        s << "<text x=\"" << f.px(f.x_min) - 8 << "\" y=\"" << f.py(y) + 4
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
          << format_double(std::round(y * 100.0) / 100.0) << "</text>\n";
    }
    s << "<text x=\"" << (f.px(f.x_min) + f.px(f.x_max)) / 2 << "\" y=\""
      << PlotFrame::height - 15
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_label
      << "</text>\n";
    s << "<text x=\"18\" y=\"" << (f.py(f.y_min) + f.py(f.y_max)) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << (f.py(f.y_min) + f.py(f.y_max)) / 2 << ")\">" << y_label
      << "</text>\n";
}

const char* arm_color(std::size_t index) {
    static constexpr const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                             "#ff7f0e", "#8c564b"};
    return colors[index % 6];
}

} // namespace

std::string format_double(double value) {
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buf;
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{})
        throw ContractError("format_double: conversion failed");
    return {buf.data(), ptr};
}

std::string spectrum_csv(const Spectrum& spectrum) {
    std::ostringstream out;
    out << "angle_deg,value,value_db\n";
    for (std::size_t i = 0; i < spectrum.values.size(); ++i) {
        out << format_double(spectrum.angles_deg[i]) << ',' << format_double(spectrum.values[i])
            << ',' << format_double(value_db(spectrum.values[i])) << '\n';
    }
    return out.str();
}

void write_spectrum_csv(const std::string& path, const Spectrum& spectrum) {
    write_file(path, spectrum_csv(spectrum));
}

std::string sweep_csv(const MonteCarloReport& report) {
    std::ostringstream out;
    out << "snr_db,estimator,preprocessing,rmse_deg,resolution_rate,mean_spurious_db,runs\n";
    for (const SweepRow& row : report.rows) {
        out << format_double(row.snr_db) << ','
            << (row.arm.estimator == EstimatorKind::music ? "music" : "cyclic_music") << ','
            << (row.arm.preprocess ? "on" : "off") << ',' << format_double(row.rmse_deg) << ','
            << format_double(row.resolution_rate) << ',' << format_double(row.mean_spurious_db)
            << ',' << row.runs << '\n';
    }
    return out.str();
}

void write_sweep_csv(const std::string& path, const MonteCarloReport& report) {
    write_file(path, sweep_csv(report));
}

void write_spectrum_svg(const std::string& path, const Spectrum& spectrum,
                        std::span<const double> truth_angles_deg, const std::string& title) {
    if (spectrum.values.empty())
        throw ContractError("write_spectrum_svg: empty spectrum");
    PlotFrame f;
    f.x_min = spectrum.angles_deg.front();
    f.x_max = spectrum.angles_deg.back();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : spectrum.values) {
        const double db = value_db(v);
        lo = std::min(lo, db);
        hi = std::max(hi, db);
    }
    if (hi - lo < 1.0)
        hi = lo + 1.0;
    f.y_min = lo - 0.05 * (hi - lo);
    f.y_max = hi + 0.05 * (hi - lo);

    std::ostringstream s;
    svg_open(s, title);
    svg_axes(s, f, "angle [deg]", "pseudo-spectrum [dB]");
    for (double truth : truth_angles_deg) {
        if (truth < f.x_min || truth > f.x_max)
            continue;
        s << "<line x1=\"" << f.px(truth) << "\" y1=\"" << f.py(f.y_min) << "\" x2=\""
          << f.px(truth) << "\" y2=\"" << f.py(f.y_max)
          << "\" stroke=\"#999\" stroke-dasharray=\"5,4\"/>\n";
    }
    s << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < spectrum.values.size(); ++i)
        s << f.px(spectrum.angles_deg[i]) << ',' << f.py(value_db(spectrum.values[i])) << ' ';
    s << "\"/>\n</svg>\n";
    write_file(path, s.str());
}

void write_sweep_svg(const std::string& path, const MonteCarloReport& report,
                     const std::string& title) {
    if (report.rows.empty())
        throw ContractError("write_sweep_svg: empty report");

    std::map<std::string, std::vector<const SweepRow*>> curves;
    for (const SweepRow& row : report.rows)
        curves[row.arm.label()].push_back(&row);

    PlotFrame f;
    f.x_min = std::numeric_limits<double>::infinity();
    f.x_max = -f.x_min;
    f.y_min = 0.0;
    f.y_max = -std::numeric_limits<double>::infinity();
    for (const SweepRow& row : report.rows) {
        if (std::isnan(row.snr_db))
            continue;
        f.x_min = std::min(f.x_min, row.snr_db);
        f.x_max = std::max(f.x_max, row.snr_db);
        if (std::isfinite(row.rmse_deg))
            f.y_max = std::max(f.y_max, row.rmse_deg);
    }
    if (!std::isfinite(f.x_min)) {
        f.x_min = 0.0;
        f.x_max = 1.0;
    }
    if (f.x_max == f.x_min)
        f.x_max = f.x_min + 1.0;
    if (!std::isfinite(f.y_max) || f.y_max <= 0.0)
        f.y_max = 1.0;
    f.y_max *= 1.05;

    std::ostringstream s;
    svg_open(s, title);
    svg_axes(s, f, "SNR [dB]", "RMSE [deg]");
    std::size_t index = 0;
    for (const auto& [label, rows] : curves) {
        const char* color = arm_color(index);
        s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const SweepRow* row : rows)
            if (!std::isnan(row->snr_db) && std::isfinite(row->rmse_deg))
                s << f.px(row->snr_db) << ',' << f.py(row->rmse_deg) << ' ';
        s << "\"/>\n";
        for (const SweepRow* row : rows)
            if (!std::isnan(row->snr_db) && std::isfinite(row->rmse_deg))
                s << "<circle cx=\"" << f.px(row->snr_db) << "\" cy=\"" << f.py(row->rmse_deg)
                  << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        s << "<text x=\"" << PlotFrame::width - 200 << "\" y=\"" << 50 + 18 * index
          << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\">" << label
          << "</text>\n";
        ++index;
    }
    s << "</svg>\n";
    write_file(path, s.str());
}

} // namespace doa
