// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "doa/complex_matrix.hpp"

namespace doa {

// Free-space propagation speed used for wavelength derivation.
inline constexpr double kPropagationSpeedMps = 3.0e8;

// Uniform linear array. Angles are measured from the array axis, so endfire
// is 0 deg and broadside is 90 deg (many texts instead use sin from
// broadside; outputs here follow the cos-from-axis convention throughout).
struct ArrayGeometry {
    int num_elements = 16;
    double spacing_m = 0.0625; // half wavelength at 2.4 GHz
    double carrier_freq_hz = 2.4e9;

    double wavelength_m() const { return kPropagationSpeedMps / carrier_freq_hz; }
    void validate() const; // throws ConfigError
};

struct SteeringVector {
    std::vector<cplx> entries;     // entries[k] = e^{-j k phase}, entries[0] = 1
    double electrical_phase_rad;   // (2 pi / lambda) * d * cos(theta)
};

SteeringVector steering_vector(const ArrayGeometry& geometry, double theta_deg);

// Allocation-free variant for grid scans; out must hold num_elements values.
void fill_steering(const ArrayGeometry& geometry, double theta_deg, cplx* out);

// Baseband pulse of one symbol. Rectangular is the default; a rectangular
// pulse is cyclostationary at every harmonic of the symbol rate, so two
// rates that divide each other share cycle frequencies. The half-sine pulse
// confines the lag-product spectrum to the first harmonic, which makes
// signals with different symbol rates separable by cycle frequency.
enum class PulseShape {
    rectangular,
    half_sine,
};

// One QPSK emitter. Dibits map to the unit-energy Gray constellation
//   00 -> ( 1+j)/sqrt2   01 -> (-1+j)/sqrt2
//   11 -> (-1-j)/sqrt2   10 -> ( 1-j)/sqrt2
// and each symbol spans 2*samples_per_bit samples of the chosen pulse,
// scaled so the mean waveform power equals power_linear exactly.
struct QpskSource {
    double bit_rate_bps = 2.0e6;
    double doa_deg = 20.0;
    double power_linear = 1.0;
    int samples_per_bit = 10; // at the scenario sample rate
    PulseShape pulse = PulseShape::rectangular;

    double bit_duration_s() const { return 1.0 / bit_rate_bps; }
    double symbol_rate_hz() const { return bit_rate_bps / 2.0; }
    void validate() const;
};

// Whether the source's lag-product statistics oscillate at alpha: any
// positive harmonic of the symbol rate for rectangular pulses, only the
// symbol rate itself for half-sine pulses.
bool source_cyclostationary_at(const QpskSource& source, double alpha_hz);

// Gray-mapped constellation point for a dibit (first_bit << 1) | second_bit.
cplx qpsk_symbol(unsigned dibit);

// Deterministic baseband waveform with mean power source.power_linear.
// stream_index separates the bit streams of different sources under one seed.
std::vector<cplx> generate_qpsk(const QpskSource& source, std::size_t num_samples,
                                std::uint64_t seed, std::uint32_t stream_index = 0);

enum class ChannelVariant {
    no_fading,
    // One complex scalar per user; the steering structure survives.
    coherent_wavefront,
    // Independent draw per element and user; no steering structure left.
    noncoherent_element,
};

struct ChannelModel {
    ChannelVariant variant = ChannelVariant::no_fading;
};

// Additive noise with E[n n^H] = power * I per snapshot. When snr_db is set
// the power is derived from the first source's nominal per-element power.
struct NoiseSpec {
    bool enabled = true;
    std::optional<double> snr_db = 10.0;
    double power_linear = 0.0; // used when snr_db is not set

    static NoiseSpec disabled();
    static NoiseSpec from_snr_db(double snr_db);
    static NoiseSpec from_power(double power_linear);

    double resolve_power(double reference_signal_power) const;
};

// Everything the synthesizer needs for one trial.
struct SynthesisScenario {
    ArrayGeometry geometry;
    std::vector<QpskSource> sources; // sources[0] is the signal of interest
    ChannelModel channel;
    NoiseSpec noise;
    double sample_rate_hz = 2.0e7;
    std::size_t num_snapshots = 1000;

    void validate() const; // throws ConfigError / ModelError
};

// y(t) = sum_k c_k x_k(t) + n(t), columns are snapshots. c_k is the steering
// vector, alpha_k times the steering vector, or a per-element fading draw
// depending on the channel variant. Pure in (scenario, seed).
CMatrix synthesize_snapshots(const SynthesisScenario& scenario, std::uint64_t seed);

} // namespace doa
