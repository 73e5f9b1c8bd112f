// SPDX-License-Identifier: Apache-2.0
#include "doa/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "doa/error.hpp"
#include "doa/parallel.hpp"

namespace doa {

std::vector<double> GridSpec::angles() const {
    validate();
    const auto count = static_cast<std::size_t>(std::llround((stop_deg - start_deg) / step_deg)) + 1;
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = start_deg + static_cast<double>(i) * step_deg;
    if (grid.back() > stop_deg + 1e-9)
        grid.pop_back();
    return grid;
}

void GridSpec::validate() const {
    if (!(step_deg > 0.0))
        throw ConfigError("grid: step must be positive");
    if (!(stop_deg > start_deg))
        throw ConfigError("grid: stop must exceed start");
    if (start_deg < 0.0 || stop_deg > 180.0)
        throw ConfigError("grid: angles must lie in [0, 180] degrees");
}

std::string EstimatorArm::label() const {
    std::string name = (estimator == EstimatorKind::music) ? "music" : "cyclic_music";
    return name + (preprocess ? "+preprocess" : "");
}

int ScenarioConfig::peak_count(const EstimatorArm& arm) const {
    if (peaks.num_sources > 0)
        return peaks.num_sources;
    if (arm.estimator == EstimatorKind::cyclic_music)
        return cyclic.n_cyclic_sources;
    return static_cast<int>(synthesis.sources.size());
}

std::vector<double> ScenarioConfig::truth_angles(const EstimatorArm& arm) const {
    std::size_t count = synthesis.sources.size();
    if (arm.estimator == EstimatorKind::cyclic_music)
        count = std::min(count, static_cast<std::size_t>(cyclic.n_cyclic_sources));
    std::vector<double> truths;
    truths.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        truths.push_back(synthesis.sources[i].doa_deg);
    return truths;
}

void ScenarioConfig::validate() const {
    synthesis.validate();
    grid.validate();
    if (synthesis.sources.empty())
        throw ConfigError("scenario: estimator runs need at least one source");
    if (arms.empty())
        throw ConfigError("scenario: needs at least one estimator arm");
    if (montecarlo.num_runs < 1)
        throw ConfigError("scenario: num_runs must be >= 1");
    if (peaks.guard_deg < 0.0)
        throw ConfigError("scenario: peak guard must be non-negative");
    if (!(peaks.resolution_tol_deg > 0.0))
        throw ConfigError("scenario: resolution tolerance must be positive");
    if (peaks.num_sources >= synthesis.geometry.num_elements)
        throw ModelError("scenario: needs fewer assumed sources than array elements");

    const bool has_cyclic =
        std::any_of(arms.begin(), arms.end(),
                    [](const EstimatorArm& a) { return a.estimator == EstimatorKind::cyclic_music; });
    if (has_cyclic) {
        if (cyclic.lag_samples < 0 || cyclic.lag_samples % 2 != 0)
            throw ConfigError("scenario: cyclic lag must be even");
        if (cyclic.n_cyclic_sources < 1)
            throw ConfigError("scenario: n_cyclic_sources must be >= 1");
        if (static_cast<std::size_t>(cyclic.lag_samples) >= synthesis.num_snapshots)
            throw ConfigError("scenario: cyclic lag exceeds the snapshot count");
        int cyclostationary = 0;
        for (const QpskSource& s : synthesis.sources)
            if (source_cyclostationary_at(s, cyclic.alpha_hz))
                ++cyclostationary;
        if (cyclic.n_cyclic_sources > cyclostationary)
            throw ConfigError("scenario: n_cyclic_sources exceeds the number of sources "
                              "cyclostationary at alpha");
    }
    if (!(preprocess.beta > 0.0) || !(preprocess.beta < 1.0))
        throw ConfigError("scenario: obw beta must lie in (0, 1)");
}

TrialOutput run_trial(const ScenarioConfig& scenario, std::size_t arm_index, std::uint64_t seed,
                      int threads) {
    scenario.validate();
    if (arm_index >= scenario.arms.size())
        throw ContractError("run_trial: arm index out of range");
    const EstimatorArm& arm = scenario.arms[arm_index];

    const CMatrix snapshots = synthesize_snapshots(scenario.synthesis, seed);
    const std::vector<double> grid = scenario.grid.angles();
    const int wanted = scenario.peak_count(arm);

    Spectrum spectrum;
    if (arm.estimator == EstimatorKind::music) {
        CovarianceMatrix covariance =
            arm.preprocess
                ? preprocess_pipeline(snapshots, scenario.preprocess,
                                      scenario.synthesis.sample_rate_hz, threads)
                      .covariance
                : sample_covariance(snapshots, threads);
        spectrum = music_spectrum(covariance, wanted, scenario.synthesis.geometry, grid, threads);
    } else {
        CMatrix input = snapshots;
        if (arm.preprocess) {
            // The cyclic estimator needs a waveform, so the pipeline output
            // here is the denoised, band-limited time series.
            PipelineResult pipe = preprocess_pipeline(snapshots, scenario.preprocess,
                                                      scenario.synthesis.sample_rate_hz, threads);
            input = band_filtered_snapshots(pipe.denoised, pipe.limits,
                                            scenario.synthesis.sample_rate_hz, threads);
        }
        const CyclicCorrelationMatrix correlation =
            cyclic_correlation(input, scenario.cyclic.alpha_hz, scenario.cyclic.lag_samples,
                               scenario.cyclic.conjugate_variant,
                               scenario.synthesis.sample_rate_hz, threads);
        spectrum = cyclic_music_spectrum(correlation, scenario.cyclic.n_cyclic_sources,
                                         scenario.synthesis.geometry, grid, threads);
    }

    TrialOutput out;
    out.estimate = find_peaks(spectrum, wanted, scenario.peaks.guard_deg);
    out.spectrum = std::move(spectrum);
    return out;
}

double matched_error_sum(std::span<const double> estimates_deg, std::span<const double> truths_deg,
                         double penalty_deg, std::vector<double>* per_truth_error) {
    const std::size_t nt = truths_deg.size();
    const std::size_t ne = estimates_deg.size();
    if (nt == 0)
        throw ContractError("matched_error_sum: no truths");
    if (ne > 20)
        throw ContractError("matched_error_sum: too many estimates for exact matching");

    // DP over (truth index, used-estimate mask): each truth either takes an
    // unused estimate or is declared missed at the penalty cost. arrived_by
    // records the decision that reached each state on the best path.
    const std::size_t masks = std::size_t{1} << ne;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> cost(nt + 1, std::vector<double>(masks, inf));
    std::vector<std::vector<int>> arrived_by(nt + 1, std::vector<int>(masks, -2));
    cost[0][0] = 0.0;
    for (std::size_t t = 0; t < nt; ++t) {
        for (std::size_t mask = 0; mask < masks; ++mask) {
            if (cost[t][mask] == inf)
                continue;
            if (cost[t][mask] + penalty_deg < cost[t + 1][mask]) {
                cost[t + 1][mask] = cost[t][mask] + penalty_deg;
                arrived_by[t + 1][mask] = -1; // missed
            }
            for (std::size_t e = 0; e < ne; ++e) {
                const std::size_t bit = std::size_t{1} << e;
                if (mask & bit)
                    continue;
                const double err = std::abs(estimates_deg[e] - truths_deg[t]);
                if (cost[t][mask] + err < cost[t + 1][mask | bit]) {
                    cost[t + 1][mask | bit] = cost[t][mask] + err;
                    arrived_by[t + 1][mask | bit] = static_cast<int>(e);
                }
            }
        }
    }

    std::size_t best_mask = 0;
    double best = inf;
    for (std::size_t mask = 0; mask < masks; ++mask) {
        if (cost[nt][mask] < best) {
            best = cost[nt][mask];
            best_mask = mask;
        }
    }

    if (per_truth_error) {
        per_truth_error->assign(nt, penalty_deg);
        std::size_t mask = best_mask;
        for (std::size_t t = nt; t-- > 0;) {
            const int decision = arrived_by[t + 1][mask];
            if (decision >= 0) {
                (*per_truth_error)[t] =
                    std::abs(estimates_deg[static_cast<std::size_t>(decision)] - truths_deg[t]);
                mask ^= std::size_t{1} << decision;
            }
        }
    }
    return best;
}

double rmse(const std::vector<EstimationResult>& estimates, std::span<const double> truths_deg,
            double penalty_deg) {
    if (estimates.empty() || truths_deg.empty())
        throw ContractError("rmse: empty inputs");
    double sum_sq = 0.0;
    std::size_t count = 0;
    std::vector<double> per_truth;
    for (const EstimationResult& run : estimates) {
        if (run.doas_deg.empty())
            throw ContractError("rmse: a run produced no estimates");
        matched_error_sum(run.doas_deg, truths_deg, penalty_deg, &per_truth);
        for (double err : per_truth)
            sum_sq += err * err;
        count += per_truth.size();
    }
    return std::sqrt(sum_sq / static_cast<double>(count));
}

SpuriousPeakResult spurious_peak_db(const Spectrum& spectrum, std::span<const double> truths_deg,
                                    double guard_deg) {
    if (spectrum.values.empty() || truths_deg.empty())
        throw ContractError("spurious_peak_db: empty inputs");

    // Local maxima straight off the sampled spectrum, plateau-aware.
    std::vector<std::size_t> maxima;
    const std::vector<double>& v = spectrum.values;
    std::size_t i = 0;
    while (i < v.size()) {
        std::size_t j = i;
        while (j + 1 < v.size() && v[j + 1] == v[i])
            ++j;
        const bool rises = (i == 0) || (v[i] > v[i - 1]);
        const bool falls = (j + 1 == v.size()) || (v[j] > v[j + 1]);
        if (rises && falls && v.size() > 1)
            maxima.push_back(i);
        i = j + 1;
    }

    SpuriousPeakResult out;
    double weakest_true = std::numeric_limits<double>::infinity();
    double strongest_spurious = 0.0;
    std::size_t matched = 0;
    for (double truth : truths_deg) {
        double best = -1.0;
        for (std::size_t idx : maxima)
            if (std::abs(spectrum.angles_deg[idx] - truth) <= guard_deg)
                best = std::max(best, v[idx]);
        if (best >= 0.0) {
            ++matched;
            weakest_true = std::min(weakest_true, best);
        }
    }
    for (std::size_t idx : maxima) {
        const double angle = spectrum.angles_deg[idx];
        const bool near_truth =
            std::any_of(truths_deg.begin(), truths_deg.end(),
                        [&](double t) { return std::abs(angle - t) <= guard_deg; });
        if (!near_truth) {
            out.has_spurious = true;
            strongest_spurious = std::max(strongest_spurious, v[idx]);
        }
    }

    out.truths_matched = matched == truths_deg.size();
    if (!out.truths_matched) {
        out.db = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    if (!out.has_spurious) {
        out.db = -std::numeric_limits<double>::infinity();
        return out;
    }
    out.db = 10.0 * std::log10(strongest_spurious / weakest_true);
    return out;
}

namespace {

struct TrialMetrics {
    bool ok = false;
    EstimationResult estimate;
    SpuriousPeakResult spurious;
    bool resolved = false;
};

} // namespace

MonteCarloReport run_sweep(const ScenarioConfig& scenario, int threads) {
    scenario.validate();
    const auto t_start = std::chrono::steady_clock::now();

    std::vector<double> snr_points = scenario.snr_db_sweep;
    const bool sweep_noise = !snr_points.empty();
    if (!sweep_noise)
        snr_points.push_back(scenario.synthesis.noise.snr_db.value_or(
            std::numeric_limits<double>::quiet_NaN()));

    MonteCarloReport report;
    const int runs = scenario.montecarlo.num_runs;

    for (double snr_db : snr_points) {
        ScenarioConfig point = scenario;
        if (sweep_noise)
            point.synthesis.noise = NoiseSpec::from_snr_db(snr_db);

        for (std::size_t arm_index = 0; arm_index < scenario.arms.size(); ++arm_index) {
            const EstimatorArm& arm = scenario.arms[arm_index];
            const std::vector<double> truths = scenario.truth_angles(arm);

            std::vector<TrialMetrics> metrics(static_cast<std::size_t>(runs));
            parallel_for(runs, threads, [&](std::int64_t run) {
                const std::uint64_t seed =
                    scenario.montecarlo.base_seed + static_cast<std::uint64_t>(run);
                TrialMetrics& m = metrics[static_cast<std::size_t>(run)];
                try {
                    // Inner kernels stay serial; the parallelism lives here.
                    TrialOutput trial = run_trial(point, arm_index, seed, 1);
                    m.estimate = std::move(trial.estimate);
                    m.spurious = spurious_peak_db(trial.spectrum, truths, scenario.peaks.guard_deg);
                    std::vector<double> per_truth;
                    matched_error_sum(m.estimate.doas_deg, truths, scenario.peaks.guard_deg,
                                      &per_truth);
                    m.resolved = std::all_of(per_truth.begin(), per_truth.end(), [&](double e) {
                        return e <= scenario.peaks.resolution_tol_deg;
                    });
                    m.ok = true;
                } catch (const ModelError&) {
                    m.ok = false;
                } catch (const ContractError&) {
                    m.ok = false;
                }
            });

            // Fixed-order reduction: identical aggregates for any thread count.
            SweepRow row;
            row.snr_db = snr_db;
            row.arm = arm;
            std::vector<EstimationResult> estimates;
            double spurious_sum = 0.0;
            int spurious_count = 0;
            int resolved = 0;
            for (const TrialMetrics& m : metrics) {
                if (!m.ok) {
                    ++row.failed;
                    continue;
                }
                ++row.runs;
                estimates.push_back(m.estimate);
                if (m.resolved)
                    ++resolved;
                if (m.spurious.truths_matched) {
                    spurious_sum += std::max(m.spurious.db, kSpuriousFloorDb);
                    ++spurious_count;
                }
            }
            row.rmse_deg = estimates.empty()
                               ? std::numeric_limits<double>::quiet_NaN()
                               : rmse(estimates, truths, scenario.peaks.guard_deg);
            row.resolution_rate =
                row.runs > 0 ? static_cast<double>(resolved) / row.runs : 0.0;
            row.mean_spurious_db = spurious_count > 0
                                       ? spurious_sum / spurious_count
                                       : std::numeric_limits<double>::quiet_NaN();
            report.rows.push_back(std::move(row));
        }
    }

    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

} // namespace doa
