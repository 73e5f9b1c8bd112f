// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include "doa/array_model.hpp"
#include "doa/complex_matrix.hpp"

namespace doa {

// Floor applied to the null spectrum before inversion, so reported
// pseudo-spectrum values stay finite.
inline constexpr double kSpectrumFloor = 1e-12;

struct CovarianceMatrix {
    CMatrix matrix; // Hermitian, positive semidefinite
    std::size_t num_snapshots = 0;
};

// R = (1/N) sum_t y(:,t) y(:,t)^H, symmetrized before return.
CovarianceMatrix sample_covariance(const CMatrix& snapshots, int threads = 1);

// Cyclic (conjugate) correlation matrix at cycle frequency alpha and an even
// sample lag. Generally not Hermitian. conjugate_variant selects the
// y(t+)y(t-)^H product; false selects y(t+)y(t-)^T. The sum is normalized by
// the number of valid edge-trimmed terms for scale stability.
struct CyclicCorrelationMatrix {
    CMatrix matrix;
    double cycle_freq_hz = 0.0;
    int lag_samples = 0;
    bool conjugate_variant = true;
    std::size_t num_snapshots = 0;
};

CyclicCorrelationMatrix cyclic_correlation(const CMatrix& snapshots, double alpha_hz,
                                           int lag_samples, bool conjugate_variant,
                                           double sample_rate_hz, int threads = 1);

enum class SpectrumKind {
    music_pseudo,
    cyclic_music_pseudo,
};

// Pseudo-spectrum over an angle grid: 1 / max(null_spectrum, floor), so
// source directions appear as maxima.
struct Spectrum {
    std::vector<double> angles_deg; // strictly increasing
    std::vector<double> values;     // finite, >= 0
    SpectrumKind kind = SpectrumKind::music_pseudo;
    std::vector<std::string> warnings;
};

Spectrum music_spectrum(const CovarianceMatrix& covariance, int num_sources,
                        const ArrayGeometry& geometry, std::span<const double> grid_deg,
                        int threads = 1);

Spectrum cyclic_music_spectrum(const CyclicCorrelationMatrix& correlation,
                               int num_cyclic_sources, const ArrayGeometry& geometry,
                               std::span<const double> grid_deg, int threads = 1);

struct EstimationResult {
    std::vector<double> doas_deg;    // descending peak height
    std::vector<double> peak_values; // matching pseudo-spectrum heights
    int num_sources_assumed = 0;
    bool complete = true; // false when fewer peaks were found than requested
};

// Local maxima (plateaus count once, at their leftmost sample), tallest
// first with ties to the lower angle, greedily thinned to a pairwise
// separation of at least guard_deg, then refined by a three-point parabolic
// fit on the log spectrum.
EstimationResult find_peaks(const Spectrum& spectrum, int num_peaks, double guard_deg);

} // namespace doa
