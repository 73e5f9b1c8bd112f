// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "doa/complex_matrix.hpp"
#include "doa/estimators.hpp"

namespace doa {

// |X[k]|^2 per DFT bin, center-shifted so bin frequencies ascend from
// -fs/2 towards +fs/2.
struct PowerSpectrum {
    std::vector<double> bin_freqs_hz; // strictly increasing
    std::vector<double> powers;       // >= 0
};

PowerSpectrum power_spectrum(std::span<const cplx> samples, double sample_rate_hz);

// Occupied-bandwidth edges: walk the cumulative power in from each spectrum
// boundary until beta/2 of the total is excluded on that side.
struct ObwLimits {
    double f_low_hz = 0.0;
    double f_high_hz = 0.0;
    std::size_t low_bin = 0;  // indices into the center-shifted bin grid
    std::size_t high_bin = 0; // inclusive
    double beta = 0.01;
};

ObwLimits obw_limits(const PowerSpectrum& spectrum, double beta);

enum class WaveletFamily {
    haar,
};

enum class ThresholdRule {
    universal,      // sigma_hat * sqrt(2 ln L)
    heuristic_sure, // hybrid SURE / universal selection
};

struct DenoiseConfig {
    WaveletFamily wavelet = WaveletFamily::haar;
    int level = 1; // fixed at one
    ThresholdRule threshold_rule = ThresholdRule::universal;
};

// Level-1 analysis, soft threshold on the detail coefficients (real and
// imaginary parts independently), synthesis back to the input length. Odd
// inputs are zero-padded by one sample and truncated after reconstruction.
std::vector<cplx> wavelet_denoise(std::span<const cplx> samples, const DenoiseConfig& config);

// Same pipeline with a caller-chosen threshold, shared by both rules.
std::vector<cplx> wavelet_denoise_fixed(std::span<const cplx> samples, double threshold);

// Threshold selection on one real coefficient set; exposed for testing.
double select_threshold(std::span<const double> details, std::size_t signal_length,
                        ThresholdRule rule);

// Covariance of the band-limited signal, formed directly from the per-bin
// frequency snapshots inside [f_low, f_high]. Equals the time-domain
// covariance of the band-passed signal up to a positive scale.
CovarianceMatrix band_filtered_covariance(const CMatrix& snapshots, const ObwLimits& limits,
                                          double sample_rate_hz, int threads = 1);

// Time-domain snapshots with all out-of-band bins zeroed; feeds the cyclic
// estimator, which needs a waveform rather than a covariance.
CMatrix band_filtered_snapshots(const CMatrix& snapshots, const ObwLimits& limits,
                                double sample_rate_hz, int threads = 1);

struct PipelineOptions {
    DenoiseConfig denoise;
    double beta = 0.01;
    bool obw_on_raw = false;      // measure OBW before denoising instead of after
    int reference_element = 0;    // element whose spectrum drives the OBW measurement
    bool average_spectrum = false; // average |X|^2 across elements instead
};

// Denoise -> occupied-bandwidth measurement -> band-filtered covariance,
// with every intermediate product kept for diagnostics.
struct PipelineResult {
    CMatrix denoised;
    PowerSpectrum measured_spectrum;
    ObwLimits limits;
    CovarianceMatrix covariance;
};

PipelineResult preprocess_pipeline(const CMatrix& snapshots, const PipelineOptions& options,
                                   double sample_rate_hz, int threads = 1);

} // namespace doa
