// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "doa/array_model.hpp"
#include "doa/complex_matrix.hpp"
#include "doa/numerics.hpp"

// Hot inner loops, each in two versions: a plain serial reference and an
// OpenMP variant parallelized over independent output entries. Because every
// output element accumulates in the same order in both versions, the two
// agree bit for bit; the serial version is the testing reference and the
// kernel-bench tool compares their speed.
namespace doa::kernels {

// R = (1/N) sum_t y(:,t) y(:,t)^H, Hermitian by construction (upper triangle
// computed, then mirrored).
CMatrix covariance_serial(const CMatrix& snapshots);
CMatrix covariance_omp(const CMatrix& snapshots, int threads);

// C = (1/N') sum over valid t of y(:,t+h) y(:,t-h)^{H or T} * phase[t] with
// h = lag/2; phase is precomputed by the caller. N' = number of valid terms.
CMatrix shifted_outer_accumulate_serial(const CMatrix& snapshots, int lag_samples,
                                        bool conjugate_variant, std::span<const cplx> phase);
CMatrix shifted_outer_accumulate_omp(const CMatrix& snapshots, int lag_samples,
                                     bool conjugate_variant, std::span<const cplx> phase,
                                     int threads);

// out[g] = || basis^H a(grid[g]) ||^2 - projection energy of the steering
// vector onto the (noise) subspace spanned by the basis columns.
std::vector<double> projection_scan_serial(const CMatrix& basis, const ArrayGeometry& geometry,
                                           std::span<const double> grid_deg);
std::vector<double> projection_scan_omp(const CMatrix& basis, const ArrayGeometry& geometry,
                                        std::span<const double> grid_deg, int threads);

// Row-wise transform bank sharing one plan; forward or inverse per flag.
CMatrix transform_rows_serial(const CMatrix& x, const DftPlan& plan, bool inverse);
CMatrix transform_rows_omp(const CMatrix& x, const DftPlan& plan, bool inverse, int threads);

} // namespace doa::kernels
