// SPDX-License-Identifier: Apache-2.0
#include <numbers>

#include "doa/error.hpp"
#include "doa/numerics.hpp"

namespace doa {

namespace {
constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;
}

DwtLevel1 dwt_level1(std::span<const cplx> x) {
    if (x.size() < 2 || x.size() % 2 != 0)
        throw ContractError("dwt_level1: length must be even and >= 2");
    const std::size_t half = x.size() / 2;
    DwtLevel1 out;
    out.approx.resize(half);
    out.detail.resize(half);
    for (std::size_t i = 0; i < half; ++i) {
        out.approx[i] = (x[2 * i] + x[2 * i + 1]) * kInvSqrt2;
        out.detail[i] = (x[2 * i] - x[2 * i + 1]) * kInvSqrt2;
    }
    return out;
}

std::vector<cplx> idwt_level1(std::span<const cplx> approx, std::span<const cplx> detail) {
    if (approx.size() != detail.size() || approx.empty())
        throw ContractError("idwt_level1: coefficient lengths must match and be non-empty");
    std::vector<cplx> x(2 * approx.size());
    for (std::size_t i = 0; i < approx.size(); ++i) {
        x[2 * i] = (approx[i] + detail[i]) * kInvSqrt2;
        x[2 * i + 1] = (approx[i] - detail[i]) * kInvSqrt2;
    }
    return x;
}

} // namespace doa
