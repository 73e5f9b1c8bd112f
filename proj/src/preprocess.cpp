// SPDX-License-Identifier: Apache-2.0
#include "doa/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "doa/error.hpp"
#include "doa/kernels.hpp"
#include "doa/numerics.hpp"
#include "doa/parallel.hpp"

namespace doa {

namespace {

// Index permutation taking raw DFT order to ascending-frequency order.
std::size_t shifted_to_raw(std::size_t shifted, std::size_t n) {
    const std::size_t half = n / 2; // bins below zero frequency
    return (shifted + n - half) % n;
}

double bin_frequency(std::size_t shifted, std::size_t n, double sample_rate_hz) {
    const std::size_t half = n / 2;
    const double k = static_cast<double>(shifted) - static_cast<double>(half);
    return k * sample_rate_hz / static_cast<double>(n);
}

double median_abs(std::vector<double> v) {
    if (v.empty())
        return 0.0;
    for (double& x : v)
        x = std::abs(x);
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1)
        return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double soft(double x, double threshold) {
    const double mag = std::abs(x) - threshold;
    return mag > 0.0 ? std::copysign(mag, x) : 0.0;
}

// Minimizer of Stein's unbiased risk estimate over candidate thresholds
// drawn from the coefficient magnitudes themselves.
double sure_threshold(std::span<const double> z) {
    const std::size_t n = z.size();
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i)
        sq[i] = z[i] * z[i];
    std::sort(sq.begin(), sq.end());

    double best_risk = 0.0;
    std::size_t best_k = 0;
    double prefix = 0.0;
    bool first = true;
    for (std::size_t k = 0; k < n; ++k) {
        prefix += sq[k];
        const double risk = (static_cast<double>(n) - 2.0 * static_cast<double>(k + 1) + prefix +
                             static_cast<double>(n - k - 1) * sq[k]) /
                            static_cast<double>(n);
        if (first || risk < best_risk) {
            best_risk = risk;
            best_k = k;
            first = false;
        }
    }
    return std::sqrt(sq[best_k]);
}

std::vector<cplx> pad_even(std::span<const cplx> samples) {
    std::vector<cplx> x(samples.begin(), samples.end());
    if (x.size() % 2 != 0)
        x.push_back(cplx{});
    return x;
}

std::size_t hz_to_bin(double freq_hz, std::size_t n, double sample_rate_hz) {
    const double step = sample_rate_hz / static_cast<double>(n);
    const double idx = freq_hz / step + static_cast<double>(n / 2);
    const long rounded = std::lround(idx);
    if (rounded < 0 || rounded >= static_cast<long>(n))
        throw ContractError("band filter: limits outside the Nyquist band");
    return static_cast<std::size_t>(rounded);
}

} // namespace

PowerSpectrum power_spectrum(std::span<const cplx> samples, double sample_rate_hz) {
    if (samples.size() < 2)
        throw ContractError("power_spectrum: need at least two samples");
    if (!(sample_rate_hz > 0.0))
        throw ContractError("power_spectrum: sample rate must be positive");
    const std::vector<cplx> bins = dft(samples);
    const std::size_t n = bins.size();
    PowerSpectrum out;
    out.bin_freqs_hz.resize(n);
    out.powers.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
        out.bin_freqs_hz[s] = bin_frequency(s, n, sample_rate_hz);
        out.powers[s] = std::norm(bins[shifted_to_raw(s, n)]);
    }
    return out;
}

ObwLimits obw_limits(const PowerSpectrum& spectrum, double beta) {
    if (spectrum.powers.empty() || spectrum.powers.size() != spectrum.bin_freqs_hz.size())
        throw ContractError("obw_limits: malformed spectrum");
    if (!(beta > 0.0) || !(beta < 1.0))
        throw ConfigError("obw_limits: beta must lie in (0, 1)");

    double total = 0.0;
    for (double p : spectrum.powers) {
        if (p < 0.0)
            throw ContractError("obw_limits: negative power bin");
        total += p;
    }
    if (!(total > 0.0))
        throw ContractError("obw_limits: all-zero spectrum");

    const double excluded = total * beta / 2.0;
    const std::size_t n = spectrum.powers.size();

    std::size_t low = 0;
    double cum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cum += spectrum.powers[i];
        if (cum >= excluded) {
            low = i;
            break;
        }
    }
    std::size_t high = n - 1;
    cum = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        cum += spectrum.powers[i];
        if (cum >= excluded) {
            high = i;
            break;
        }
    }

    ObwLimits limits;
    limits.low_bin = low;
    limits.high_bin = high;
    limits.f_low_hz = spectrum.bin_freqs_hz[low];
    limits.f_high_hz = spectrum.bin_freqs_hz[high];
    limits.beta = beta;
    return limits;
}

double select_threshold(std::span<const double> details, std::size_t signal_length,
                        ThresholdRule rule) {
    if (details.empty() || signal_length < 2)
        return 0.0;
    const double sigma = median_abs({details.begin(), details.end()}) / 0.6745;
    if (!(sigma > 0.0))
        return 0.0;
    const double universal = sigma * std::sqrt(2.0 * std::log(static_cast<double>(signal_length)));
    if (rule == ThresholdRule::universal)
        return universal;

    // Hybrid rule: with sparse evidence of signal energy fall back to the
    // universal threshold, otherwise take the smaller of universal and SURE.
    const std::size_t n = details.size();
    std::vector<double> z(n);
    double energy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = details[i] / sigma;
        energy += z[i] * z[i];
    }
    const double excess = (energy - static_cast<double>(n)) / static_cast<double>(n);
    const double log2n = std::log2(static_cast<double>(n));
    const double crit = std::pow(log2n, 1.5) / std::sqrt(static_cast<double>(n));
    if (excess < crit)
        return universal;
    return sigma * std::min(universal / sigma, sure_threshold(z));
}

std::vector<cplx> wavelet_denoise_fixed(std::span<const cplx> samples, double threshold) {
    if (samples.size() < 2)
        throw ContractError("wavelet_denoise: need at least two samples");
    const std::vector<cplx> padded = pad_even(samples);
    DwtLevel1 coeffs = dwt_level1(padded);
    for (cplx& d : coeffs.detail)
        d = {soft(d.real(), threshold), soft(d.imag(), threshold)};
    std::vector<cplx> out = idwt_level1(coeffs.approx, coeffs.detail);
    out.resize(samples.size());
    return out;
}

std::vector<cplx> wavelet_denoise(std::span<const cplx> samples, const DenoiseConfig& config) {
    if (config.level != 1)
        throw ConfigError("wavelet_denoise: only level-1 decomposition is supported");
    if (samples.size() < 2)
        throw ContractError("wavelet_denoise: need at least two samples");

    const std::vector<cplx> padded = pad_even(samples);
    DwtLevel1 coeffs = dwt_level1(padded);

    std::vector<double> re(coeffs.detail.size()), im(coeffs.detail.size());
    for (std::size_t i = 0; i < coeffs.detail.size(); ++i) {
        re[i] = coeffs.detail[i].real();
        im[i] = coeffs.detail[i].imag();
    }
    const double thr_re = select_threshold(re, samples.size(), config.threshold_rule);
    const double thr_im = select_threshold(im, samples.size(), config.threshold_rule);

    for (cplx& d : coeffs.detail)
        d = {soft(d.real(), thr_re), soft(d.imag(), thr_im)};
    std::vector<cplx> out = idwt_level1(coeffs.approx, coeffs.detail);
    out.resize(samples.size());
    return out;
}

namespace {

// Frequency-domain rows plus the retained-bin range [lo, hi] in shifted
// order, shared by both band filter outputs.
struct BandSelection {
    CMatrix freq_rows;
    std::size_t lo = 0;
    std::size_t hi = 0;
};

BandSelection select_band(const CMatrix& snapshots, const ObwLimits& limits,
                          double sample_rate_hz, int threads) {
    if (snapshots.cols() == 0 || snapshots.rows() == 0)
        throw ContractError("band filter: empty snapshot matrix");
    if (limits.f_low_hz > limits.f_high_hz)
        throw ContractError("band filter: inverted limits");
    const std::size_t n = snapshots.cols();
    BandSelection sel;
    sel.lo = hz_to_bin(limits.f_low_hz, n, sample_rate_hz);
    sel.hi = hz_to_bin(limits.f_high_hz, n, sample_rate_hz);
    if (sel.hi < sel.lo)
        throw ContractError("band filter: empty retained band");
    const DftPlan plan(n);
    sel.freq_rows = (threads == 1) ? kernels::transform_rows_serial(snapshots, plan, false)
                                   : kernels::transform_rows_omp(snapshots, plan, false, threads);
    return sel;
}

} // namespace

CovarianceMatrix band_filtered_covariance(const CMatrix& snapshots, const ObwLimits& limits,
                                          double sample_rate_hz, int threads) {
    const BandSelection sel = select_band(snapshots, limits, sample_rate_hz, threads);
    const std::size_t m = snapshots.rows();
    const std::size_t n = snapshots.cols();
    const std::size_t bins = sel.hi - sel.lo + 1;

    // Average the outer products of the per-bin frequency snapshots.
    CMatrix r(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            cplx acc = 0.0;
            for (std::size_t s = sel.lo; s <= sel.hi; ++s) {
                const std::size_t k = shifted_to_raw(s, n);
                acc += sel.freq_rows(i, k) * std::conj(sel.freq_rows(j, k));
            }
            r(i, j) = acc / static_cast<double>(bins);
            if (i != j)
                r(j, i) = std::conj(r(i, j));
        }
    }
    // Exact symmetrization of the diagonal.
    for (std::size_t i = 0; i < m; ++i)
        r(i, i) = r(i, i).real();
    return {std::move(r), n};
}

CMatrix band_filtered_snapshots(const CMatrix& snapshots, const ObwLimits& limits,
                                double sample_rate_hz, int threads) {
    const BandSelection sel = select_band(snapshots, limits, sample_rate_hz, threads);
    const std::size_t n = snapshots.cols();

    CMatrix masked = sel.freq_rows;
    for (std::size_t i = 0; i < masked.rows(); ++i) {
        for (std::size_t s = 0; s < n; ++s) {
            if (s < sel.lo || s > sel.hi)
                masked(i, shifted_to_raw(s, n)) = 0.0;
        }
    }
    const DftPlan plan(n);
    return (threads == 1) ? kernels::transform_rows_serial(masked, plan, true)
                          : kernels::transform_rows_omp(masked, plan, true, threads);
}

PipelineResult preprocess_pipeline(const CMatrix& snapshots, const PipelineOptions& options,
                                   double sample_rate_hz, int threads) {
    if (options.reference_element < 0 ||
        static_cast<std::size_t>(options.reference_element) >= snapshots.rows())
        throw ConfigError("preprocess: reference element out of range");

    PipelineResult result;
    result.denoised = CMatrix(snapshots.rows(), snapshots.cols());
    parallel_for(static_cast<std::int64_t>(snapshots.rows()), threads, [&](std::int64_t i) {
        const std::span<const cplx> row(snapshots.row(static_cast<std::size_t>(i)),
                                        snapshots.cols());
        const std::vector<cplx> clean = wavelet_denoise(row, options.denoise);
        std::copy(clean.begin(), clean.end(), result.denoised.row(static_cast<std::size_t>(i)));
    });

    const CMatrix& obw_input = options.obw_on_raw ? snapshots : result.denoised;
    if (options.average_spectrum) {
        PowerSpectrum avg;
        for (std::size_t i = 0; i < obw_input.rows(); ++i) {
            const PowerSpectrum one =
                power_spectrum({obw_input.row(i), obw_input.cols()}, sample_rate_hz);
            if (i == 0) {
                avg = one;
            } else {
                for (std::size_t k = 0; k < avg.powers.size(); ++k)
                    avg.powers[k] += one.powers[k];
            }
        }
        for (double& p : avg.powers)
            p /= static_cast<double>(obw_input.rows());
        result.measured_spectrum = std::move(avg);
    } else {
        const std::size_t ref = static_cast<std::size_t>(options.reference_element);
        result.measured_spectrum =
            power_spectrum({obw_input.row(ref), obw_input.cols()}, sample_rate_hz);
    }

    result.limits = obw_limits(result.measured_spectrum, options.beta);
    result.covariance =
        band_filtered_covariance(result.denoised, result.limits, sample_rate_hz, threads);
    return result;
}

} // namespace doa
