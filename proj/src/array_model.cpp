// SPDX-License-Identifier: Apache-2.0
#include "doa/array_model.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "doa/error.hpp"
#include "doa/rng.hpp"

namespace doa {

void ArrayGeometry::validate() const {
    if (num_elements < 2)
        throw ConfigError("array: num_elements must be >= 2");
    if (!(spacing_m > 0.0))
        throw ConfigError("array: spacing must be positive");
    if (!(carrier_freq_hz > 0.0))
        throw ConfigError("array: carrier frequency must be positive");
}

SteeringVector steering_vector(const ArrayGeometry& geometry, double theta_deg) {
    geometry.validate();
    if (theta_deg < 0.0 || theta_deg > 180.0)
        throw ConfigError("steering_vector: angle must be in [0, 180] degrees");
    SteeringVector sv;
    sv.entries.resize(static_cast<std::size_t>(geometry.num_elements));
    const double theta = theta_deg * std::numbers::pi / 180.0;
    sv.electrical_phase_rad = 2.0 * std::numbers::pi / geometry.wavelength_m() * geometry.spacing_m * std::cos(theta);
    fill_steering(geometry, theta_deg, sv.entries.data());
    return sv;
}

void fill_steering(const ArrayGeometry& geometry, double theta_deg, cplx* out) {
    const double theta = theta_deg * std::numbers::pi / 180.0;
    const double phase =
        2.0 * std::numbers::pi / geometry.wavelength_m() * geometry.spacing_m * std::cos(theta);
    for (int k = 0; k < geometry.num_elements; ++k)
        out[k] = std::polar(1.0, -phase * static_cast<double>(k));
}

void QpskSource::validate() const {
    if (!(bit_rate_bps > 0.0))
        throw ConfigError("source: bit rate must be positive");
    if (doa_deg < 0.0 || doa_deg > 180.0)
        throw ConfigError("source: DOA must be in [0, 180] degrees");
    if (!(power_linear > 0.0))
        throw ConfigError("source: power must be positive");
    if (samples_per_bit < 1)
        throw ConfigError("source: samples_per_bit must be >= 1");
}

cplx qpsk_symbol(unsigned dibit) {
    static constexpr double h = std::numbers::sqrt2 / 2.0;
    // Index is (first_bit << 1) | second_bit; adjacent dibits differ by one bit.
    static constexpr std::array<cplx, 4> table = {
        cplx{h, h},   // 00
        cplx{-h, h},  // 01
        cplx{h, -h},  // 10
        cplx{-h, -h}, // 11
    };
    return table[dibit & 3u];
}

bool source_cyclostationary_at(const QpskSource& source, double alpha_hz) {
    const double base = source.symbol_rate_hz();
    if (!(base > 0.0) || !(alpha_hz > 0.0))
        return false;
    const double ratio = alpha_hz / base;
    const double k = std::round(ratio);
    if (k < 0.5 || std::abs(ratio - k) > 1e-6 * std::max(1.0, ratio))
        return false;
    return source.pulse == PulseShape::rectangular || k == 1.0;
}

std::vector<cplx> generate_qpsk(const QpskSource& source, std::size_t num_samples,
                                std::uint64_t seed, std::uint32_t stream_index) {
    source.validate();
    if (num_samples == 0)
        throw ContractError("generate_qpsk: num_samples must be >= 1");

    RngStream bits(seed, StreamRole::source_bits, stream_index);
    const std::size_t samples_per_symbol = 2 * static_cast<std::size_t>(source.samples_per_bit);
    const double amplitude = std::sqrt(source.power_linear);

    // Unit-mean-square pulse samples; the half-sine sum of sin^2 over the
    // half-offset grid is exactly half the symbol length.
    std::vector<double> pulse(samples_per_symbol, 1.0);
    if (source.pulse == PulseShape::half_sine) {
        for (std::size_t i = 0; i < samples_per_symbol; ++i)
            pulse[i] = std::numbers::sqrt2 *
                       std::sin(std::numbers::pi * (static_cast<double>(i) + 0.5) /
                                static_cast<double>(samples_per_symbol));
    }

    std::vector<cplx> waveform(num_samples);
    std::size_t filled = 0;
    while (filled < num_samples) {
        const unsigned first = bits.next_u32() & 1u;
        const unsigned second = bits.next_u32() & 1u;
        const cplx value = amplitude * qpsk_symbol((first << 1) | second);
        const std::size_t run = std::min(samples_per_symbol, num_samples - filled);
        for (std::size_t i = 0; i < run; ++i)
            waveform[filled + i] = value * pulse[i];
        filled += run;
    }
    return waveform;
}

NoiseSpec NoiseSpec::disabled() {
    NoiseSpec n;
    n.enabled = false;
    n.snr_db.reset();
    return n;
}

NoiseSpec NoiseSpec::from_snr_db(double snr_db) {
    NoiseSpec n;
    n.enabled = true;
    n.snr_db = snr_db;
    return n;
}

NoiseSpec NoiseSpec::from_power(double power_linear) {
    NoiseSpec n;
    n.enabled = true;
    n.snr_db.reset();
    n.power_linear = power_linear;
    return n;
}

double NoiseSpec::resolve_power(double reference_signal_power) const {
    if (!enabled)
        return 0.0;
    if (snr_db)
        return reference_signal_power / std::pow(10.0, *snr_db / 10.0);
    return power_linear;
}

void SynthesisScenario::validate() const {
    geometry.validate();
    if (num_snapshots == 0)
        throw ConfigError("scenario: num_snapshots must be >= 1");
    if (!(sample_rate_hz > 0.0))
        throw ConfigError("scenario: sample rate must be positive");
    if (sources.size() >= static_cast<std::size_t>(geometry.num_elements))
        throw ModelError("scenario: needs fewer sources than array elements");
    std::set<double> seen;
    for (const QpskSource& s : sources) {
        s.validate();
        if (!seen.insert(s.doa_deg).second)
            throw ConfigError("scenario: duplicate source DOAs");
    }
    if (noise.enabled && noise.snr_db && sources.empty())
        throw ConfigError("scenario: SNR-relative noise needs at least one source");
    if (noise.enabled && !noise.snr_db && noise.power_linear < 0.0)
        throw ConfigError("scenario: noise power must be non-negative");
}

CMatrix synthesize_snapshots(const SynthesisScenario& scenario, std::uint64_t seed) {
    scenario.validate();
    const std::size_t m = static_cast<std::size_t>(scenario.geometry.num_elements);
    const std::size_t n_samp = scenario.num_snapshots;

    CMatrix y(m, n_samp);

    for (std::size_t k = 0; k < scenario.sources.size(); ++k) {
        const QpskSource& src = scenario.sources[k];
        const std::vector<cplx> x =
            generate_qpsk(src, n_samp, seed, static_cast<std::uint32_t>(k));

        std::vector<cplx> column(m);
        RngStream fading(seed, StreamRole::fading, static_cast<std::uint32_t>(k));
        switch (scenario.channel.variant) {
        case ChannelVariant::no_fading:
            fill_steering(scenario.geometry, src.doa_deg, column.data());
            break;
        case ChannelVariant::coherent_wavefront: {
            fill_steering(scenario.geometry, src.doa_deg, column.data());
            const cplx alpha = fading.next_cnormal();
            for (cplx& c : column)
                c *= alpha;
            break;
        }
        case ChannelVariant::noncoherent_element:
            for (cplx& c : column)
                c = fading.next_cnormal();
            break;
        }

        for (std::size_t i = 0; i < m; ++i) {
            const cplx gain = column[i];
            cplx* row = y.row(i);
            for (std::size_t t = 0; t < n_samp; ++t)
                row[t] += gain * x[t];
        }
    }

    const double reference_power =
        scenario.sources.empty() ? 0.0 : scenario.sources.front().power_linear;
    const double noise_power = scenario.noise.resolve_power(reference_power);
    if (scenario.noise.enabled && noise_power > 0.0) {
        RngStream noise(seed, StreamRole::noise);
        const double amp = std::sqrt(noise_power);
        // Draw order is snapshot-major so the stream layout is independent
        // of how the matrix is stored.
        for (std::size_t t = 0; t < n_samp; ++t)
            for (std::size_t i = 0; i < m; ++i)
                y(i, t) += amp * noise.next_cnormal();
    }
    return y;
}

} // namespace doa
