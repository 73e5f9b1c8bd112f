// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include "doa/error.hpp"
#include "doa/numerics.hpp"

namespace doa {

namespace {

bool is_pow2(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n)
        p <<= 1;
    return p;
}

// Iterative radix-2 Cooley-Tukey, decimation in time. sign = -1 forward.
void fft_pow2(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const cplx wstep = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            cplx w = 1.0;
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx even = a[i + k];
                const cplx odd = a[i + k + len / 2] * w;
                a[i + k] = even + odd;
                a[i + k + len / 2] = even - odd;
                w *= wstep;
            }
        }
    }
}

} // namespace

struct DftPlan::Impl {
    std::size_t n = 0;
    bool pow2 = false;
    // Bluestein machinery (unused when n is a power of two).
    std::size_t conv_len = 0;
    std::vector<cplx> chirp;        // w_k = e^{-j pi k^2 / n}
    std::vector<cplx> kernel_freq;  // FFT of the conjugate-chirp kernel

    explicit Impl(std::size_t length) : n(length), pow2(is_pow2(length)) {
        if (n == 0)
            throw ContractError("DftPlan: length must be >= 1");
        if (pow2)
            return;
        conv_len = next_pow2(2 * n - 1);
        chirp.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            // k^2 mod 2n keeps the phase argument small and exact.
            const std::size_t sq = (k * k) % (2 * n);
            chirp[k] = std::polar(1.0, -std::numbers::pi * static_cast<double>(sq) / static_cast<double>(n));
        }
        std::vector<cplx> kernel(conv_len, cplx{});
        kernel[0] = std::conj(chirp[0]);
        for (std::size_t k = 1; k < n; ++k) {
            kernel[k] = std::conj(chirp[k]);
            kernel[conv_len - k] = std::conj(chirp[k]);
        }
        fft_pow2(kernel, -1);
        kernel_freq = std::move(kernel);
    }

    std::vector<cplx> forward(std::span<const cplx> x) const {
        if (x.size() != n)
            throw ContractError("DftPlan: input length does not match the plan");
        if (n == 1)
            return {x[0]};
        if (pow2) {
            std::vector<cplx> a(x.begin(), x.end());
            fft_pow2(a, -1);
            return a;
        }
        // Bluestein: X[k] = w_k * (x.w  convolved with conj(w)).
        std::vector<cplx> a(conv_len, cplx{});
        for (std::size_t k = 0; k < n; ++k)
            a[k] = x[k] * chirp[k];
        fft_pow2(a, -1);
        for (std::size_t k = 0; k < conv_len; ++k)
            a[k] *= kernel_freq[k];
        fft_pow2(a, +1);
        const double inv = 1.0 / static_cast<double>(conv_len);
        std::vector<cplx> out(n);
        for (std::size_t k = 0; k < n; ++k)
            out[k] = a[k] * inv * chirp[k];
        return out;
    }

    std::vector<cplx> inverse(std::span<const cplx> x) const {
        if (x.size() != n)
            throw ContractError("DftPlan: input length does not match the plan");
        std::vector<cplx> conj_in(n);
        for (std::size_t k = 0; k < n; ++k)
            conj_in[k] = std::conj(x[k]);
        std::vector<cplx> y = forward(conj_in);
        const double inv = 1.0 / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k)
            y[k] = std::conj(y[k]) * inv;
        return y;
    }
};

DftPlan::DftPlan(std::size_t length) : impl_(std::make_unique<Impl>(length)) {}
DftPlan::~DftPlan() = default;
DftPlan::DftPlan(DftPlan&&) noexcept = default;
DftPlan& DftPlan::operator=(DftPlan&&) noexcept = default;

std::size_t DftPlan::length() const {
    return impl_->n;
}

std::vector<cplx> DftPlan::forward(std::span<const cplx> x) const {
    return impl_->forward(x);
}

std::vector<cplx> DftPlan::inverse(std::span<const cplx> x) const {
    return impl_->inverse(x);
}

std::vector<cplx> dft(std::span<const cplx> x) {
    return DftPlan(x.size()).forward(x);
}

std::vector<cplx> idft(std::span<const cplx> x) {
    return DftPlan(x.size()).inverse(x);
}

} // namespace doa
