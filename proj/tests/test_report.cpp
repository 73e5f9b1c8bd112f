// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doa/report.hpp"

using namespace doa;

TEST_CASE("doubles format without locale surprises") {
    CHECK(format_double(1.5) == "1.5");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(-2.25) == "-2.25");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    // Shortest round-trip representation.
    const double value = 0.1 + 0.2;
    CHECK(std::stod(format_double(value)) == value);
}

TEST_CASE("spectrum csv has the documented schema") {
    Spectrum s;
    s.angles_deg = {0.0, 0.1, 0.2};
    s.values = {1.0, 10.0, 100.0};
    const std::string csv = spectrum_csv(s);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "angle_deg,value,value_db");
    std::getline(lines, line);
    CHECK(line == "0,1,0");
    std::getline(lines, line);
    CHECK(line == "0.1,10,10");
    std::getline(lines, line);
    CHECK(line == "0.2,100,20");
}

TEST_CASE("sweep csv carries one row per (snr, arm)") {
    MonteCarloReport report;
    SweepRow row;
    row.snr_db = 10.0;
    row.arm = {EstimatorKind::music, false};
    row.rmse_deg = 0.25;
    row.resolution_rate = 0.995;
    row.mean_spurious_db = -12.5;
    row.runs = 200;
    report.rows.push_back(row);
    row.arm = {EstimatorKind::cyclic_music, true};
    report.rows.push_back(row);

    const std::string csv = sweep_csv(report);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "snr_db,estimator,preprocessing,rmse_deg,resolution_rate,mean_spurious_db,runs");
    std::getline(lines, line);
    CHECK(line == "10,music,off,0.25,0.995,-12.5,200");
    std::getline(lines, line);
    CHECK(line == "10,cyclic_music,on,0.25,0.995,-12.5,200");
}

TEST_CASE("svg emission produces well-formed files") {
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "doa_report_test";
    std::filesystem::create_directories(dir);

    Spectrum s;
    for (double a = 0.0; a <= 40.0; a += 0.5) {
        s.angles_deg.push_back(a);
        s.values.push_back(1.0 + 99.0 * std::exp(-(a - 20.0) * (a - 20.0)));
    }
    const std::string spectrum_path = (dir / "spectrum.svg").string();
    write_spectrum_svg(spectrum_path, s, std::vector<double>{20.0}, "test spectrum");

    MonteCarloReport report;
    for (double snr : {0.0, 10.0, 20.0}) {
        SweepRow row;
        row.snr_db = snr;
        row.arm = {EstimatorKind::music, false};
        row.rmse_deg = 2.0 / (1.0 + snr);
        row.runs = 10;
        report.rows.push_back(row);
    }
    const std::string sweep_path = (dir / "sweep.svg").string();
    write_sweep_svg(sweep_path, report, "test sweep");

    for (const std::string& path : {spectrum_path, sweep_path}) {
        std::ifstream in(path);
        REQUIRE(in.good());
        std::stringstream buffer;
        buffer << in.rdbuf();
        const std::string content = buffer.str();
        CHECK(content.rfind("<svg", 0) == 0);
        CHECK(content.find("</svg>") != std::string::npos);
        CHECK(content.find("polyline") != std::string::npos);
    }
    std::filesystem::remove_all(dir);
}
