// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one line per criterion, PASS/FAIL, non-zero exit on any
// failure. Budgets are wall-clock seconds and part of the criterion.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "doa/array_model.hpp"
#include "doa/estimators.hpp"
#include "doa/montecarlo.hpp"
#include "doa/numerics.hpp"
#include "doa/preprocess.hpp"
#include "doa/rng.hpp"

namespace {

using doa::cplx;
using Clock = std::chrono::steady_clock;

int failures = 0;

struct Criterion {
    const char* name;
    double budget_seconds;
    Clock::time_point start = Clock::now();

    explicit Criterion(const char* n, double budget) : name(n), budget_seconds(budget) {}

    void finish(bool ok, const std::string& detail) const {
        const double elapsed =
            std::chrono::duration<double>(Clock::now() - start).count();
        const bool in_budget = elapsed < budget_seconds;
        const bool pass = ok && in_budget;
        std::cout << (pass ? "PASS " : "FAIL ") << name << "  [" << detail;
        std::cout << "; " << elapsed << " s of " << budget_seconds << " s]" << std::endl;
        if (!pass)
            ++failures;
    }
};

doa::QpskSource soi(double doa_deg) {
    return {.bit_rate_bps = 2e6, .doa_deg = doa_deg, .power_linear = 1.0, .samples_per_bit = 10};
}

doa::QpskSource interferer(double doa_deg) {
    return {.bit_rate_bps = 1e6, .doa_deg = doa_deg, .power_linear = 1.0, .samples_per_bit = 20};
}

doa::ScenarioConfig base_scenario() {
    doa::ScenarioConfig scenario;
    scenario.synthesis.sources = {soi(20.0), interferer(5.0)};
    scenario.synthesis.noise = doa::NoiseSpec::from_snr_db(10.0);
    scenario.synthesis.num_snapshots = 1000;
    scenario.grid = {0.0, 180.0, 0.1};
    scenario.montecarlo.num_runs = 200;
    scenario.montecarlo.base_seed = 424200;
    return scenario;
}

// The cyclic experiments assume the interferer does not share the SOI's
// cycle frequency. Half-sine pulses confine each source's cyclostationarity
// to its own symbol rate, so the 1 Mb/s interferer stays silent at 1 MHz.
// The record length is 4096 snapshots: the cyclic-coefficient estimate
// averages ~205 SOI symbols, putting the peak jitter well inside the
// 1-degree tolerance, and at -10 dB it is the operating point where the
// estimators respond to pre-processing at all.
doa::ScenarioConfig cyclic_scenario() {
    doa::ScenarioConfig scenario = base_scenario();
    for (doa::QpskSource& source : scenario.synthesis.sources)
        source.pulse = doa::PulseShape::half_sine;
    scenario.synthesis.num_snapshots = 4096;
    return scenario;
}

std::vector<std::size_t> local_maxima(const std::vector<double>& v) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const bool rises = i == 0 || v[i] > v[i - 1];
        const bool falls = i + 1 == v.size() || v[i] > v[i + 1];
        if (rises && falls)
            out.push_back(i);
    }
    return out;
}

// ---------------------------------------------------------------- criterion 1
void noise_free_exactness() {
    Criterion criterion("1 noise-free MUSIC exactness", 5.0);
    bool ok = true;
    std::ostringstream detail;

    const std::vector<std::vector<double>> angle_sets = {
        {20.0}, {20.0, 5.0}, {20.0, 5.0, 47.3}};
    double worst_err = 0.0, worst_null = 0.0;
    for (const std::vector<double>& truths : angle_sets) {
        doa::ScenarioConfig scenario = base_scenario();
        scenario.synthesis.sources.clear();
        for (double angle : truths)
            scenario.synthesis.sources.push_back(soi(angle));
        scenario.synthesis.noise = doa::NoiseSpec::disabled();

        const doa::CMatrix y = doa::synthesize_snapshots(scenario.synthesis, 1);
        const doa::CovarianceMatrix r = doa::sample_covariance(y);
        const doa::Spectrum spectrum =
            doa::music_spectrum(r, static_cast<int>(truths.size()),
                                scenario.synthesis.geometry, scenario.grid.angles());
        const doa::EstimationResult peaks =
            doa::find_peaks(spectrum, static_cast<int>(truths.size()), 2.0);

        ok &= peaks.doas_deg.size() == truths.size();
        std::vector<double> per_truth;
        doa::matched_error_sum(peaks.doas_deg, truths, 10.0, &per_truth);
        for (double err : per_truth) {
            worst_err = std::max(worst_err, err);
            ok &= err <= 0.05;
        }

        // Orthogonality residual of the noise subspace at the exact truths.
        const doa::EvdResult evd = doa::hermitian_evd(r.matrix);
        const doa::CMatrix noise_basis =
            doa::column_slice(evd.eigenvectors, truths.size(), 16);
        for (double truth : truths) {
            const doa::SteeringVector sv =
                doa::steering_vector(scenario.synthesis.geometry, truth);
            double null_value = 0.0;
            for (std::size_t c = 0; c < noise_basis.cols(); ++c) {
                cplx dot = 0.0;
                for (std::size_t row = 0; row < 16; ++row)
                    dot += std::conj(noise_basis(row, c)) * sv.entries[row];
                null_value += std::norm(dot);
            }
            worst_null = std::max(worst_null, null_value);
            ok &= null_value <= 1e-8;
        }
    }
    detail << "max |error| " << worst_err << " deg (<= 0.05), max null residual " << worst_null
           << " (<= 1e-8)";
    criterion.finish(ok, detail.str());
}

// ---------------------------------------------------------------- criterion 2
void numerics_oracles() {
    Criterion criterion("2 numerics oracles", 30.0);
    bool ok = true;
    std::ostringstream detail;

    doa::RngStream sizes(2024, doa::StreamRole::generic);
    double worst_evd = 0.0, worst_svd = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + sizes.next_u32() % 31; // up to 32x32
        doa::RngStream entries(trial, doa::StreamRole::generic, 1);
        doa::CMatrix h(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                const cplx v = entries.next_cnormal();
                h(i, j) = (i == j) ? cplx{v.real()} : v;
                if (i != j)
                    h(j, i) = std::conj(v);
            }
        }
        const doa::EvdResult evd = doa::hermitian_evd(h);
        worst_evd = std::max(worst_evd, doa::orthonormality_defect(evd.eigenvectors));
        ok &= doa::orthonormality_defect(evd.eigenvectors) <= 1e-10;
        doa::CMatrix lambda(n, n);
        for (std::size_t i = 0; i < n; ++i)
            lambda(i, i) = evd.eigenvalues[i];
        const doa::CMatrix rebuilt =
            doa::multiply(doa::multiply(evd.eigenvectors, lambda), doa::adjoint(evd.eigenvectors));
        ok &= doa::frobenius_distance(h, rebuilt) <= 1e-9 * doa::frobenius_norm(h);

        // SVD cross-oracle: singular values against the Gram-matrix EVD.
        const std::size_t rows = 2 + sizes.next_u32() % 31;
        const std::size_t cols = 2 + sizes.next_u32() % 31;
        doa::RngStream rect(trial, doa::StreamRole::generic, 2);
        doa::CMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                m(i, j) = rect.next_cnormal();
        const doa::SvdResult s = doa::svd(m);
        const doa::EvdResult gram = doa::hermitian_evd(doa::multiply(doa::adjoint(m), m));
        for (std::size_t i = 0; i < std::min(rows, cols); ++i) {
            const double expected = std::sqrt(std::max(gram.eigenvalues[i], 0.0));
            worst_svd = std::max(worst_svd, std::abs(s.singular_values[i] - expected));
            ok &= std::abs(s.singular_values[i] - expected) <= 1e-8;
        }
        ok &= doa::orthonormality_defect(s.left_vectors) <= 1e-10;
        ok &= doa::orthonormality_defect(s.right_vectors) <= 1e-10;
    }

    // DFT Parseval + DWT perfect reconstruction.
    for (std::size_t n : {std::size_t{64}, std::size_t{1000}, std::size_t{4096}}) {
        doa::RngStream rng(n, doa::StreamRole::generic, 3);
        std::vector<cplx> x(n);
        double energy = 0.0;
        for (cplx& v : x) {
            v = rng.next_cnormal();
            energy += std::norm(v);
        }
        const std::vector<cplx> spectrum = doa::dft(x);
        double freq_energy = 0.0;
        for (const cplx& v : spectrum)
            freq_energy += std::norm(v);
        ok &= std::abs(freq_energy / static_cast<double>(n) - energy) <= 1e-10 * energy;
        const std::vector<cplx> back = doa::idft(spectrum);
        double rt = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            rt += std::norm(back[i] - x[i]);
        ok &= std::sqrt(rt) <= 1e-10 * std::sqrt(energy);

        if (n % 2 == 0) {
            const doa::DwtLevel1 w = doa::dwt_level1(x);
            const std::vector<cplx> re = doa::idwt_level1(w.approx, w.detail);
            double err = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                err += std::norm(re[i] - x[i]);
            ok &= std::sqrt(err) <= 1e-12 * std::sqrt(energy);
        }
    }
    detail << "100 matrices; worst EVD orthonormality " << worst_evd << ", worst SVD-vs-Gram "
           << worst_svd;
    criterion.finish(ok, detail.str());
}

// ---------------------------------------------------------------- criterion 3
void music_reference_scenario() {
    Criterion criterion("3 reference MUSIC scenario", 300.0);
    doa::ScenarioConfig scenario = base_scenario();
    scenario.snr_db_sweep = {0.0, 10.0, 20.0};
    scenario.arms = {doa::EstimatorArm{doa::EstimatorKind::music, false}};

    const doa::MonteCarloReport report = doa::run_sweep(scenario, 0);
    const doa::SweepRow* at0 = nullptr;
    const doa::SweepRow* at10 = nullptr;
    const doa::SweepRow* at20 = nullptr;
    for (const doa::SweepRow& row : report.rows) {
        if (row.snr_db == 0.0)
            at0 = &row;
        if (row.snr_db == 10.0)
            at10 = &row;
        if (row.snr_db == 20.0)
            at20 = &row;
    }
    bool ok = at0 && at10 && at20;
    std::ostringstream detail;
    if (ok) {
        ok &= at10->resolution_rate >= 0.95;
        ok &= at20->rmse_deg < at0->rmse_deg;
        detail << "resolution@10dB " << at10->resolution_rate << " (>= 0.95), rmse 20dB "
               << at20->rmse_deg << " < rmse 0dB " << at0->rmse_deg;
    } else {
        detail << "missing sweep rows";
    }
    criterion.finish(ok, detail.str());
}

// ---------------------------------------------------------------- criterion 4
void cyclic_selectivity() {
    Criterion criterion("4 cyclic MUSIC signal selectivity", 300.0);
    doa::ScenarioConfig scenario = cyclic_scenario();
    scenario.arms = {doa::EstimatorArm{doa::EstimatorKind::cyclic_music, false}};

    int selective = 0;
    const int runs = scenario.montecarlo.num_runs;
    for (int run = 0; run < runs; ++run) {
        const doa::TrialOutput trial =
            doa::run_trial(scenario, 0, scenario.montecarlo.base_seed + run, 0);
        const std::vector<std::size_t> maxima = local_maxima(trial.spectrum.values);
        if (maxima.empty())
            continue;
        std::size_t tallest = maxima.front();
        for (std::size_t idx : maxima)
            if (trial.spectrum.values[idx] > trial.spectrum.values[tallest])
                tallest = idx;
        const double main_angle = trial.spectrum.angles_deg[tallest];
        const double main_value = trial.spectrum.values[tallest];
        if (std::abs(main_angle - 20.0) > 1.0)
            continue;
        bool interferer_suppressed = true;
        for (std::size_t idx : maxima) {
            if (std::abs(trial.spectrum.angles_deg[idx] - 5.0) <= 2.0 &&
                trial.spectrum.values[idx] > 0.5 * main_value)
                interferer_suppressed = false;
        }
        if (interferer_suppressed)
            ++selective;
    }
    const double rate = static_cast<double>(selective) / runs;
    std::ostringstream detail;
    detail << "selectivity rate " << rate << " (>= 0.9) over " << runs << " runs";
    criterion.finish(rate >= 0.9, detail.str());
}

// ---------------------------------------------------------------- criterion 5
void preprocessing_benefit() {
    Criterion criterion("5 pre-processing spurious-peak benefit", 600.0);
    doa::ScenarioConfig scenario = cyclic_scenario();
    scenario.synthesis.noise = doa::NoiseSpec::from_snr_db(-10.0);
    scenario.arms = {
        doa::EstimatorArm{doa::EstimatorKind::music, false},
        doa::EstimatorArm{doa::EstimatorKind::music, true},
        doa::EstimatorArm{doa::EstimatorKind::cyclic_music, false},
        doa::EstimatorArm{doa::EstimatorKind::cyclic_music, true},
    };

    const doa::MonteCarloReport report = doa::run_sweep(scenario, 0);
    double music_off = 0.0, music_on = 0.0, cyclic_off = 0.0, cyclic_on = 0.0;
    for (const doa::SweepRow& row : report.rows) {
        if (row.arm.estimator == doa::EstimatorKind::music)
            (row.arm.preprocess ? music_on : music_off) = row.mean_spurious_db;
        else
            (row.arm.preprocess ? cyclic_on : cyclic_off) = row.mean_spurious_db;
    }
    const bool ok = music_on < music_off && cyclic_on < cyclic_off;
    std::ostringstream detail;
    detail << "mean spurious dB, music " << music_off << " -> " << music_on << " (margin "
           << music_off - music_on << " dB), cyclic " << cyclic_off << " -> " << cyclic_on
           << " (margin " << cyclic_off - cyclic_on
           << " dB); the reference margin of 10 dB is recorded, not gated";
    criterion.finish(ok, detail.str());
}

// ---------------------------------------------------------------- criterion 6
void obw_correctness() {
    Criterion criterion("6 occupied-bandwidth correctness", 30.0);
    bool ok = true;

    // Band-limited raised-cosine bump over a known bin range plus a tiny
    // pedestal, so the true cumulative sums are computable directly.
    doa::PowerSpectrum spectrum;
    const int bins = 501;
    for (int i = 0; i < bins; ++i) {
        spectrum.bin_freqs_hz.push_back(static_cast<double>(i - bins / 2) * 1e3);
        const double x = (i - bins / 2) / 60.0;
        const double bump = (std::abs(x) <= 1.0) ? 0.5 * (1.0 + std::cos(std::numbers::pi * x)) : 0.0;
        spectrum.powers.push_back(bump + 1e-6);
    }

    // Independent brute-force scan.
    const auto brute = [&](double beta) {
        double total = 0.0;
        for (double p : spectrum.powers)
            total += p;
        const double target = total * beta / 2.0;
        std::size_t lo = 0, hi = spectrum.powers.size() - 1;
        double cum = 0.0;
        for (std::size_t i = 0; i < spectrum.powers.size(); ++i) {
            cum += spectrum.powers[i];
            if (cum >= target) {
                lo = i;
                break;
            }
        }
        cum = 0.0;
        for (std::size_t i = spectrum.powers.size(); i-- > 0;) {
            cum += spectrum.powers[i];
            if (cum >= target) {
                hi = i;
                break;
            }
        }
        return std::pair<std::size_t, std::size_t>{lo, hi};
    };

    std::ostringstream detail;
    {
        const doa::ObwLimits limits = doa::obw_limits(spectrum, 0.01);
        const auto [lo, hi] = brute(0.01);
        ok &= std::llabs(static_cast<long long>(limits.low_bin) - static_cast<long long>(lo)) <= 1;
        ok &= std::llabs(static_cast<long long>(limits.high_bin) - static_cast<long long>(hi)) <= 1;
        detail << "99% band bins [" << limits.low_bin << ", " << limits.high_bin
               << "] vs brute force [" << lo << ", " << hi << "]";
    }
    std::size_t prev_lo = 0, prev_hi = spectrum.powers.size() - 1;
    bool first = true;
    for (double beta : {0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.4}) {
        const doa::ObwLimits limits = doa::obw_limits(spectrum, beta);
        if (!first) {
            ok &= limits.low_bin >= prev_lo;
            ok &= limits.high_bin <= prev_hi;
        }
        prev_lo = limits.low_bin;
        prev_hi = limits.high_bin;
        first = false;
    }
    detail << "; monotone over the beta grid";
    criterion.finish(ok, detail.str());
}

// ---------------------------------------------------------------- criterion 7
void denoising_mse() {
    Criterion criterion("7 wavelet denoising MSE", 60.0);
    const std::size_t n = 10000;
    const double fs = 48000.0;
    double mse_in = 0.0, mse_out = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        doa::RngStream rng(seed, doa::StreamRole::noise);
        std::vector<cplx> clean(n), noisy(n);
        for (std::size_t t = 0; t < n; ++t) {
            clean[t] = std::numbers::sqrt2 *
                       std::cos(2.0 * std::numbers::pi * 1000.0 * static_cast<double>(t) / fs);
            noisy[t] = clean[t] + rng.next_cnormal(); // unit noise power: 0 dB
        }
        doa::DenoiseConfig config; // universal threshold
        const std::vector<cplx> out = doa::wavelet_denoise(noisy, config);
        for (std::size_t t = 0; t < n; ++t) {
            mse_in += std::norm(noisy[t] - clean[t]);
            mse_out += std::norm(out[t] - clean[t]);
        }
    }
    mse_in /= 100.0 * n;
    mse_out /= 100.0 * n;
    std::ostringstream detail;
    detail << "mean MSE " << mse_in << " -> " << mse_out << " over 100 seeds";
    criterion.finish(mse_out < mse_in, detail.str());
}

// ---------------------------------------------------------------- criterion 8
void reproducibility() {
    Criterion criterion("8 sweep reproducibility", 3600.0);
    const char* bin = std::getenv("DOA_BENCH_BIN");
    const char* dir = std::getenv("DOA_SCENARIO_DIR");
    if (!bin || !dir) {
        criterion.finish(false, "DOA_BENCH_BIN / DOA_SCENARIO_DIR not set; run through ctest");
        return;
    }
    namespace fs = std::filesystem;
    const fs::path work = fs::temp_directory_path() / "doa_acceptance";
    fs::create_directories(work);
    const std::string scenario = (fs::path(dir) / "paper_default.json").string();

    const auto invoke = [&](const std::string& csv, int threads) {
        const std::string cmd = std::string("\"") + bin + "\" sweep \"" + scenario +
                                "\" --out-csv \"" + csv + "\" --threads " +
                                std::to_string(threads) + " > /dev/null 2>&1";
        return std::system(cmd.c_str()) == 0;
    };
    const auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    };

    const std::string run1 = (work / "run1.csv").string();
    const std::string run2 = (work / "run2.csv").string();
    const std::string run8 = (work / "run8.csv").string();
    bool ok = invoke(run1, 1) && invoke(run2, 1) && invoke(run8, 8);
    std::string detail = "three cmd_sweep invocations on paper_default";
    if (ok) {
        const std::string a = slurp(run1);
        ok &= !a.empty() && a == slurp(run2);
        ok &= a == slurp(run8);
        detail = "serial runs byte-identical and equal to the 8-thread run (" +
                 std::to_string(a.size()) + " csv bytes)";
    }
    fs::remove_all(work);
    criterion.finish(ok, detail);
}

} // namespace

int main() {
    std::cout << "acceptance criteria\n";
    noise_free_exactness();
    numerics_oracles();
    music_reference_scenario();
    cyclic_selectivity();
    preprocessing_benefit();
    obw_correctness();
    denoising_mse();
    reproducibility();
    std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED") << " (" << failures
              << " failures)\n";
    return failures == 0 ? 0 : 1;
}
