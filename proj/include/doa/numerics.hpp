// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <span>
#include <vector>

#include "doa/complex_matrix.hpp"

namespace doa {

struct EvdResult {
    std::vector<double> eigenvalues; // descending
    CMatrix eigenvectors;            // unitary, column i pairs with eigenvalues[i]
};

// Eigendecomposition of a Hermitian matrix via cyclic complex Jacobi
// rotations. The input must satisfy ||M - M^H||_F <= 1e-8 ||M||_F; it is
// symmetrized exactly before iterating. Eigenvector phases are fixed so the
// largest-magnitude entry of each column is real positive, which makes the
// output a deterministic function of the input bits.
EvdResult hermitian_evd(const CMatrix& m);

struct SvdResult {
    CMatrix left_vectors;               // unitary, rows x rows
    std::vector<double> singular_values; // descending, length min(rows, cols)
    CMatrix right_vectors;              // unitary, cols x cols
};

// Full SVD via one-sided (Hestenes) Jacobi orthogonalization of the columns.
// Deliberately a different algorithm from hermitian_evd so the two can
// cross-check each other through the Gram-matrix identity.
SvdResult svd(const CMatrix& m);

// X[k] = sum_n x[n] e^{-j 2 pi k n / L}. Any length >= 1 (radix-2 when L is
// a power of two, Bluestein otherwise).
std::vector<cplx> dft(std::span<const cplx> x);
// Inverse of dft: idft(dft(x)) == x.
std::vector<cplx> idft(std::span<const cplx> x);

// Precomputed tables for one transform length, for callers that transform
// many vectors of the same size. Immutable after construction; safe to share
// across threads.
class DftPlan {
public:
    explicit DftPlan(std::size_t length);
    ~DftPlan();
    DftPlan(DftPlan&&) noexcept;
    DftPlan& operator=(DftPlan&&) noexcept;

    std::size_t length() const;
    std::vector<cplx> forward(std::span<const cplx> x) const;
    std::vector<cplx> inverse(std::span<const cplx> x) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct DwtLevel1 {
    std::vector<cplx> approx;
    std::vector<cplx> detail;
};

// Orthonormal Haar analysis: approx[i] = (x[2i] + x[2i+1]) / sqrt(2),
// detail[i] = (x[2i] - x[2i+1]) / sqrt(2). Length must be even.
DwtLevel1 dwt_level1(std::span<const cplx> x);
std::vector<cplx> idwt_level1(std::span<const cplx> approx, std::span<const cplx> detail);

} // namespace doa
