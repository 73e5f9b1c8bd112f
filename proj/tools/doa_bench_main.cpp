// SPDX-License-Identifier: Apache-2.0
//
// doa-bench: narrowband DOA estimation simulator.
//
//   doa-bench spectrum <scenario> [--seed K] [--arm I] [--out-csv P] [--out-svg P] [--threads T]
//   doa-bench sweep    <scenario> [--out-csv P] [--out-svg P] [--threads T]
//   doa-bench validate <scenario>
//
// Exit codes: 0 success, 2 input error, 3 model or runtime error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "doa/error.hpp"
#include "doa/montecarlo.hpp"
#include "doa/report.hpp"
#include "doa/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitModel = 3;

struct SpectrumArgs {
    std::string scenario_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::size_t arm = 0;
    std::string out_csv;
    std::string out_svg;
    int threads = 0;
};

struct SweepArgs {
    std::string scenario_path;
    std::string out_csv;
    std::string out_svg;
    int threads = 0;
};

int run_spectrum(const doa::LoadedScenario& loaded, const SpectrumArgs& args) {
    const doa::ScenarioConfig& config = loaded.config;
    if (args.arm >= config.arms.size())
        throw doa::ConfigError("--arm index out of range for this scenario");

    const std::uint64_t seed = args.seed_given ? args.seed : config.montecarlo.base_seed;
    const doa::TrialOutput trial = doa::run_trial(config, args.arm, seed, args.threads);

    const doa::EstimatorArm& arm = config.arms[args.arm];
    const std::vector<double> truths = config.truth_angles(arm);
    const doa::SpuriousPeakResult spurious =
        doa::spurious_peak_db(trial.spectrum, truths, config.peaks.guard_deg);

    std::cout << "arm: " << arm.label() << "  seed: " << seed << "\n";
    std::cout << "truth angles [deg]:";
    for (double t : truths)
        std::cout << ' ' << doa::format_double(t);
    std::cout << "\nestimates [deg]:";
    for (double d : trial.estimate.doas_deg)
        std::cout << ' ' << doa::format_double(d);
    std::cout << "\nspurious_peak_db: " << doa::format_double(spurious.db) << "\n";
    for (const std::string& warning : trial.spectrum.warnings)
        std::cout << "warning: " << warning << "\n";

    if (!args.out_csv.empty())
        doa::write_spectrum_csv(args.out_csv, trial.spectrum);
    if (!args.out_svg.empty()) {
        const std::string title =
            std::filesystem::path(args.scenario_path).filename().string() + " - " + arm.label();
        doa::write_spectrum_svg(args.out_svg, trial.spectrum, truths, title);
    }
    return kExitOk;
}

int run_sweep_cmd(const doa::LoadedScenario& loaded, const SweepArgs& args) {
    doa::MonteCarloReport report = doa::run_sweep(loaded.config, args.threads);
    report.scenario_echo = loaded.normalized;

    std::cout << doa::sweep_csv(report);
    std::cerr << "elapsed: " << doa::format_double(report.elapsed_seconds) << " s\n";

    if (!args.out_csv.empty())
        doa::write_sweep_csv(args.out_csv, report);
    if (!args.out_svg.empty()) {
        const std::string title =
            std::filesystem::path(args.scenario_path).filename().string() + " - RMSE vs SNR";
        doa::write_sweep_svg(args.out_svg, report, title);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Narrowband DOA estimation simulator (MUSIC / Cyclic MUSIC)"};
    app.require_subcommand(1);

    SpectrumArgs spectrum_args;
    CLI::App* spectrum = app.add_subcommand("spectrum", "Run one trial and emit the spectrum");
    spectrum->add_option("scenario", spectrum_args.scenario_path, "Scenario file")->required();
    spectrum->add_option("--seed", spectrum_args.seed, "Trial seed (default: base_seed)")
        ->each([&](const std::string&) { spectrum_args.seed_given = true; });
    spectrum->add_option("--arm", spectrum_args.arm, "Estimator arm index (default 0)");
    spectrum->add_option("--out-csv", spectrum_args.out_csv, "CSV output path");
    spectrum->add_option("--out-svg", spectrum_args.out_svg, "SVG output path");
    spectrum->add_option("--threads", spectrum_args.threads, "Worker threads (0 = auto)");

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over SNR points and arms");
    sweep->add_option("scenario", sweep_args.scenario_path, "Scenario file")->required();
    sweep->add_option("--out-csv", sweep_args.out_csv, "CSV output path");
    sweep->add_option("--out-svg", sweep_args.out_svg, "SVG output path");
    sweep->add_option("--threads", sweep_args.threads, "Worker threads (0 = auto)");

    std::string validate_path;
    CLI::App* validate = app.add_subcommand("validate", "Parse and echo the effective scenario");
    validate->add_option("scenario", validate_path, "Scenario file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    // Anything wrong with the scenario file itself is an input error.
    doa::LoadedScenario loaded;
    const std::string& scenario_path = *spectrum   ? spectrum_args.scenario_path
                                       : *sweep    ? sweep_args.scenario_path
                                                   : validate_path;
    try {
        loaded = doa::load_scenario_file(scenario_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }

    try {
        if (*spectrum)
            return run_spectrum(loaded, spectrum_args);
        if (*sweep)
            return run_sweep_cmd(loaded, sweep_args);
        std::cout << loaded.normalized;
        return kExitOk;
    } catch (const doa::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const doa::ModelError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return kExitModel;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitModel;
    }
}
