// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "doa/array_model.hpp"
#include "doa/estimators.hpp"
#include "doa/preprocess.hpp"

namespace doa {

struct GridSpec {
    double start_deg = 0.0;
    double stop_deg = 180.0;
    double step_deg = 0.1;

    std::vector<double> angles() const;
    void validate() const;
};

enum class EstimatorKind {
    music,
    cyclic_music,
};

// One arm of a comparison: which estimator runs and whether the denoising /
// band-filtering pipeline feeds it. All arms of a trial see the same
// synthesized data.
struct EstimatorArm {
    EstimatorKind estimator = EstimatorKind::music;
    bool preprocess = false;

    std::string label() const;
};

struct CyclicConfig {
    double alpha_hz = 1.0e6; // defaults to the SOI symbol rate
    int lag_samples = 2;
    bool conjugate_variant = true; // y(t+)y(t-)^H accumulation
    int n_cyclic_sources = 1;
};

struct PeakSearchConfig {
    int num_sources = 0; // 0 -> number of configured sources
    double guard_deg = 2.0;
    double resolution_tol_deg = 1.0;
};

struct MonteCarloConfig {
    int num_runs = 1000;
    std::uint64_t base_seed = 20240101;
};

struct ScenarioConfig {
    SynthesisScenario synthesis;
    std::vector<double> snr_db_sweep; // empty -> single point from synthesis.noise
    GridSpec grid;
    std::vector<EstimatorArm> arms = {EstimatorArm{}};
    CyclicConfig cyclic;
    PipelineOptions preprocess;
    PeakSearchConfig peaks;
    MonteCarloConfig montecarlo;

    // Requested peak count and true DOAs for one arm. The cyclic estimator
    // searches only for the leading n_cyclic_sources sources (SOI first).
    int peak_count(const EstimatorArm& arm) const;
    std::vector<double> truth_angles(const EstimatorArm& arm) const;

    void validate() const;
};

struct TrialOutput {
    EstimationResult estimate;
    Spectrum spectrum;
};

// One synthesis -> (optional preprocess) -> estimator -> peak search chain.
// Pure in (scenario, arm, seed); two arms under the same seed consume
// byte-identical snapshot matrices.
TrialOutput run_trial(const ScenarioConfig& scenario, std::size_t arm_index, std::uint64_t seed,
                      int threads = 1);

// Root mean squared matched error across runs. Estimates are matched to
// truths by the minimum-total-absolute-error assignment; every unmatched
// truth contributes penalty_deg of error.
double rmse(const std::vector<EstimationResult>& estimates, std::span<const double> truths_deg,
            double penalty_deg);

// Optimal assignment cost helper shared with the tests.
double matched_error_sum(std::span<const double> estimates_deg, std::span<const double> truths_deg,
                         double penalty_deg, std::vector<double>* per_truth_error = nullptr);

struct SpuriousPeakResult {
    // 10 log10(strongest spurious local max / weakest matched true peak);
    // -inf when no spurious local maximum exists.
    double db = 0.0;
    bool truths_matched = false; // every truth had a local max within guard
    bool has_spurious = false;
};

SpuriousPeakResult spurious_peak_db(const Spectrum& spectrum, std::span<const double> truths_deg,
                                    double guard_deg);

struct SweepRow {
    double snr_db = 0.0;
    EstimatorArm arm;
    double rmse_deg = 0.0;
    double resolution_rate = 0.0;
    // Mean over runs; clean runs (no spurious maxima) enter at the -100 dB
    // sentinel floor so they still reward the estimator.
    double mean_spurious_db = 0.0;
    int runs = 0;   // successful trials
    int failed = 0; // trials that raised a model error
};

inline constexpr double kSpuriousFloorDb = -100.0;

struct MonteCarloReport {
    std::vector<SweepRow> rows;
    std::string scenario_echo; // normalized configuration, for provenance
    double elapsed_seconds = 0.0;
};

// Full sweep over SNR points and arms. Trials are independent; with
// threads != 1 they run concurrently, and the aggregation is a fixed-order
// reduction over the trial index so the report is identical for any thread
// count.
MonteCarloReport run_sweep(const ScenarioConfig& scenario, int threads = 1);

} // namespace doa
