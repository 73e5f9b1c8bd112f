// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace doa {

// Philox4x32-10 block function. Counter-based: each 128-bit counter maps to
// four fresh 32-bit words under a 64-bit key, so independent streams are
// just disjoint counter ranges and parallel trials never share state.
std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key);

// Role of a substream within one trial. Keeps bit draws, fading draws and
// noise draws on disjoint counters so adding samples to one does not shift
// the others.
enum class StreamRole : std::uint32_t {
    source_bits = 0,
    fading = 1,
    noise = 2,
    generic = 3,
};

// One deterministic random stream: a view onto the Philox counter space
// keyed by (seed, role, index). Copyable; no global state.
class RngStream {
public:
    RngStream(std::uint64_t seed, StreamRole role, std::uint32_t index = 0);

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53 random bits.
    double next_double();
    // Uniform on (0, 1]; safe as a log() argument.
    double next_double_oc();

    // Standard normal via Box-Muller (pairs cached).
    double next_normal();

    // Circularly symmetric complex normal with E|z|^2 = 1.
    std::complex<double> next_cnormal();

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::uint32_t stream_lo_;
    std::uint32_t stream_hi_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int buffer_pos_ = 4;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace doa
