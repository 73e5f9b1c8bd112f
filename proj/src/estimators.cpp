// SPDX-License-Identifier: Apache-2.0
#include "doa/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "doa/error.hpp"
#include "doa/kernels.hpp"
#include "doa/numerics.hpp"

namespace doa {

namespace {

Spectrum spectrum_from_null_basis(const CMatrix& noise_basis, const ArrayGeometry& geometry,
                                  std::span<const double> grid_deg, SpectrumKind kind,
                                  int threads) {
    if (grid_deg.empty())
        throw ContractError("spectrum: empty angle grid");
    for (std::size_t i = 1; i < grid_deg.size(); ++i)
        if (!(grid_deg[i] > grid_deg[i - 1]))
            throw ContractError("spectrum: grid must be strictly increasing");

    std::vector<double> null_values =
        (threads == 1) ? kernels::projection_scan_serial(noise_basis, geometry, grid_deg)
                       : kernels::projection_scan_omp(noise_basis, geometry, grid_deg, threads);

    Spectrum s;
    s.kind = kind;
    s.angles_deg.assign(grid_deg.begin(), grid_deg.end());
    s.values.resize(null_values.size());
    for (std::size_t i = 0; i < null_values.size(); ++i)
        s.values[i] = 1.0 / std::max(null_values[i], kSpectrumFloor);
    return s;
}

struct PeakCandidate {
    std::size_t index;
    double value;
};

std::vector<PeakCandidate> local_maxima(const std::vector<double>& v) {
    std::vector<PeakCandidate> peaks;
    const std::size_t n = v.size();
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[j + 1] == v[i])
            ++j; // plateau [i, j]
        const bool rises = (i == 0) || (v[i] > v[i - 1]);
        const bool falls = (j + 1 == n) || (v[j] > v[j + 1]);
        const bool interior_peak = i > 0 && j + 1 < n && rises && falls;
        const bool edge_peak = (i == 0 || j + 1 == n) && rises && falls && n > 1;
        if (interior_peak || edge_peak)
            peaks.push_back({i, v[i]}); // leftmost sample of the plateau
        i = j + 1;
    }
    return peaks;
}

// Vertex of the parabola through three (x, log y) samples. Falls back to the
// center sample when the points are not strictly concave or the vertex
// leaves the bracket.
void refine_peak(const Spectrum& s, std::size_t idx, double& angle, double& value) {
    angle = s.angles_deg[idx];
    value = s.values[idx];
    if (idx == 0 || idx + 1 >= s.values.size())
        return;
    // Plateaus keep their grid angle; a parabola through equal samples has
    // no meaningful vertex.
    if (s.values[idx - 1] == s.values[idx] || s.values[idx + 1] == s.values[idx])
        return;
    const double x0 = s.angles_deg[idx - 1], x1 = s.angles_deg[idx], x2 = s.angles_deg[idx + 1];
    const double y0 = std::log(std::max(s.values[idx - 1], kSpectrumFloor));
    const double y1 = std::log(std::max(s.values[idx], kSpectrumFloor));
    const double y2 = std::log(std::max(s.values[idx + 1], kSpectrumFloor));
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double a = (d12 - d01) / (x2 - x0);
    if (!(a < 0.0))
        return;
    const double b = d01 - a * (x0 + x1);
    const double c = y0 - (a * x0 + b) * x0;
    const double vertex = -b / (2.0 * a);
    if (vertex < x0 || vertex > x2)
        return;
    angle = vertex;
    value = std::exp((a * vertex + b) * vertex + c);
}

} // namespace

CovarianceMatrix sample_covariance(const CMatrix& snapshots, int threads) {
    if (snapshots.cols() == 0 || snapshots.rows() == 0)
        throw ContractError("sample_covariance: needs at least one snapshot");
    CMatrix r = (threads == 1) ? kernels::covariance_serial(snapshots)
                               : kernels::covariance_omp(snapshots, threads);
    return {std::move(r), snapshots.cols()};
}

CyclicCorrelationMatrix cyclic_correlation(const CMatrix& snapshots, double alpha_hz,
                                           int lag_samples, bool conjugate_variant,
                                           double sample_rate_hz, int threads) {
    if (lag_samples < 0 || lag_samples % 2 != 0)
        throw ContractError("cyclic_correlation: lag must be even and non-negative");
    if (!(sample_rate_hz > 0.0))
        throw ContractError("cyclic_correlation: sample rate must be positive");
    const std::size_t n = snapshots.cols();
    if (n <= static_cast<std::size_t>(lag_samples))
        throw ContractError("cyclic_correlation: too few snapshots for the requested lag");

    // e^{-j 2 pi alpha t_n} with t_n in seconds; shared by all entries.
    std::vector<cplx> phase(n);
    const double dt = 1.0 / sample_rate_hz;
    for (std::size_t t = 0; t < n; ++t)
        phase[t] = std::polar(1.0, -2.0 * std::numbers::pi * alpha_hz * static_cast<double>(t) * dt);

    CMatrix c = (threads == 1)
                    ? kernels::shifted_outer_accumulate_serial(snapshots, lag_samples,
                                                               conjugate_variant, phase)
                    : kernels::shifted_outer_accumulate_omp(snapshots, lag_samples,
                                                            conjugate_variant, phase, threads);
    return {std::move(c), alpha_hz, lag_samples, conjugate_variant, n};
}

Spectrum music_spectrum(const CovarianceMatrix& covariance, int num_sources,
                        const ArrayGeometry& geometry, std::span<const double> grid_deg,
                        int threads) {
    const std::size_t m = covariance.matrix.rows();
    if (m != static_cast<std::size_t>(geometry.num_elements))
        throw ContractError("music_spectrum: covariance size does not match the array");
    if (num_sources < 1 || static_cast<std::size_t>(num_sources) >= m)
        throw ModelError("music_spectrum: need 1 <= num_sources < num_elements");

    const EvdResult evd = hermitian_evd(covariance.matrix);
    const CMatrix noise_basis =
        column_slice(evd.eigenvectors, static_cast<std::size_t>(num_sources), m);

    Spectrum s = spectrum_from_null_basis(noise_basis, geometry, grid_deg,
                                          SpectrumKind::music_pseudo, threads);

    // A vanishing gap between the assumed signal and noise eigenvalues means
    // the subspace split carries no directional information.
    const double top = std::abs(evd.eigenvalues.front());
    const double gap = evd.eigenvalues[static_cast<std::size_t>(num_sources) - 1] -
                       evd.eigenvalues[static_cast<std::size_t>(num_sources)];
    if (!(gap > 1e-12 * std::max(top, 1e-300)))
        s.warnings.push_back("degenerate eigenvalue split: subspace selection is arbitrary");
    return s;
}

Spectrum cyclic_music_spectrum(const CyclicCorrelationMatrix& correlation,
                               int num_cyclic_sources, const ArrayGeometry& geometry,
                               std::span<const double> grid_deg, int threads) {
    const std::size_t m = correlation.matrix.rows();
    if (m != static_cast<std::size_t>(geometry.num_elements))
        throw ContractError("cyclic_music_spectrum: matrix size does not match the array");
    if (num_cyclic_sources < 1 || static_cast<std::size_t>(num_cyclic_sources) >= m)
        throw ModelError("cyclic_music_spectrum: need 1 <= num_cyclic_sources < num_elements");

    const SvdResult decomposition = svd(correlation.matrix);
    if (!(decomposition.singular_values.front() > 0.0))
        throw ModelError("cyclic_music_spectrum: zero correlation matrix "
                         "(no cyclostationary energy at this cycle frequency)");

    const CMatrix noise_basis =
        column_slice(decomposition.left_vectors, static_cast<std::size_t>(num_cyclic_sources), m);
    return spectrum_from_null_basis(noise_basis, geometry, grid_deg,
                                    SpectrumKind::cyclic_music_pseudo, threads);
}

EstimationResult find_peaks(const Spectrum& spectrum, int num_peaks, double guard_deg) {
    if (num_peaks < 1)
        throw ContractError("find_peaks: num_peaks must be >= 1");
    if (guard_deg < 0.0)
        throw ContractError("find_peaks: guard must be non-negative");
    if (spectrum.values.size() != spectrum.angles_deg.size() || spectrum.values.empty())
        throw ContractError("find_peaks: malformed spectrum");

    std::vector<PeakCandidate> peaks = local_maxima(spectrum.values);
    std::sort(peaks.begin(), peaks.end(), [&](const PeakCandidate& a, const PeakCandidate& b) {
        if (a.value != b.value)
            return a.value > b.value;
        return a.index < b.index; // lower angle wins ties
    });

    std::vector<std::size_t> selected;
    for (const PeakCandidate& p : peaks) {
        if (selected.size() >= static_cast<std::size_t>(num_peaks))
            break;
        const double angle = spectrum.angles_deg[p.index];
        const bool clear = std::all_of(selected.begin(), selected.end(), [&](std::size_t s) {
            return std::abs(spectrum.angles_deg[s] - angle) >= guard_deg;
        });
        if (clear)
            selected.push_back(p.index);
    }

    EstimationResult result;
    result.num_sources_assumed = num_peaks;
    result.complete = selected.size() == static_cast<std::size_t>(num_peaks);
    for (std::size_t idx : selected) {
        double angle, value;
        refine_peak(spectrum, idx, angle, value);
        result.doas_deg.push_back(angle);
        result.peak_values.push_back(value);
    }
    return result;
}

} // namespace doa
