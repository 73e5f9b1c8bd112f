// SPDX-License-Identifier: Apache-2.0
#include "doa/complex_matrix.hpp"

#include <cmath>

#include "doa/error.hpp"

namespace doa {

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

bool CMatrix::all_finite() const {
    for (const cplx& v : data_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            return false;
    }
    return true;
}

CMatrix multiply(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows())
        throw ContractError("multiply: inner dimensions disagree");
    CMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{})
                continue;
            const cplx* brow = b.row(k);
            cplx* orow = out.row(i);
            for (std::size_t j = 0; j < b.cols(); ++j)
                orow[j] += aik * brow[j];
        }
    }
    return out;
}

CMatrix adjoint(const CMatrix& a) {
    CMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out(j, i) = std::conj(a(i, j));
    return out;
}

CMatrix scale(const CMatrix& a, cplx factor) {
    CMatrix out = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out(i, j) *= factor;
    return out;
}

double frobenius_norm(const CMatrix& a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            sum += std::norm(a(i, j));
    return std::sqrt(sum);
}

double frobenius_distance(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ContractError("frobenius_distance: shape mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            sum += std::norm(a(i, j) - b(i, j));
    return std::sqrt(sum);
}

CMatrix column_slice(const CMatrix& a, std::size_t first, std::size_t last) {
    if (first > last || last > a.cols())
        throw ContractError("column_slice: bad column range");
    CMatrix out(a.rows(), last - first);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = first; j < last; ++j)
            out(i, j - first) = a(i, j);
    return out;
}

double orthonormality_defect(const CMatrix& u) {
    double worst = 0.0;
    for (std::size_t i = 0; i < u.cols(); ++i) {
        for (std::size_t j = i; j < u.cols(); ++j) {
            cplx dot = 0.0;
            for (std::size_t r = 0; r < u.rows(); ++r)
                dot += std::conj(u(r, i)) * u(r, j);
            const double target = (i == j) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(dot - target));
        }
    }
    return worst;
}

} // namespace doa
