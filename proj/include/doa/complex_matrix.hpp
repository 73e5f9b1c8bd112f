// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace doa {

using cplx = std::complex<double>;

// Dense row-major complex matrix. Just the operations the estimators need;
// not a general linear-algebra type.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static CMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    cplx* row(std::size_t r) { return data_.data() + r * cols_; }
    const cplx* row(std::size_t r) const { return data_.data() + r * cols_; }

    cplx* data() { return data_.data(); }
    const cplx* data() const { return data_.data(); }

    bool all_finite() const;

    bool operator==(const CMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

CMatrix multiply(const CMatrix& a, const CMatrix& b);
CMatrix adjoint(const CMatrix& a);
CMatrix scale(const CMatrix& a, cplx factor);
double frobenius_norm(const CMatrix& a);
double frobenius_distance(const CMatrix& a, const CMatrix& b);

// Columns [first, last) as a new matrix.
CMatrix column_slice(const CMatrix& a, std::size_t first, std::size_t last);

// Largest |u_i^H u_j - delta_ij| over all column pairs.
double orthonormality_defect(const CMatrix& u);

} // namespace doa
