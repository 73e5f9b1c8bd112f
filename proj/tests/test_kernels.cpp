// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <numbers>

#include "doa/kernels.hpp"
#include "doa/rng.hpp"

using namespace doa;

namespace {

CMatrix random_snapshots(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    RngStream rng(seed, StreamRole::generic);
    CMatrix y(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t t = 0; t < cols; ++t)
            y(i, t) = rng.next_cnormal();
    return y;
}

} // namespace

TEST_CASE("openmp covariance kernel matches the serial reference bit for bit") {
    const CMatrix y = random_snapshots(16, 3000, 1);
    const CMatrix serial = kernels::covariance_serial(y);
    for (int threads : {2, 4, 8})
        CHECK(serial == kernels::covariance_omp(y, threads));
}

TEST_CASE("openmp cyclic kernel matches the serial reference bit for bit") {
    const CMatrix y = random_snapshots(8, 2000, 2);
    std::vector<cplx> phase(y.cols());
    for (std::size_t t = 0; t < phase.size(); ++t)
        phase[t] = std::polar(1.0, -0.01 * static_cast<double>(t));
    for (bool conjugate : {true, false}) {
        const CMatrix serial = kernels::shifted_outer_accumulate_serial(y, 4, conjugate, phase);
        for (int threads : {2, 8})
            CHECK(serial == kernels::shifted_outer_accumulate_omp(y, 4, conjugate, phase, threads));
    }
}

TEST_CASE("openmp projection scan matches the serial reference bit for bit") {
    const CMatrix basis = random_snapshots(16, 12, 3);
    const ArrayGeometry geometry;
    std::vector<double> grid;
    for (double a = 0.0; a <= 180.0 + 1e-9; a += 0.1)
        grid.push_back(a);
    const std::vector<double> serial = kernels::projection_scan_serial(basis, geometry, grid);
    for (int threads : {2, 8})
        CHECK(serial == kernels::projection_scan_omp(basis, geometry, grid, threads));
}

TEST_CASE("openmp transform bank matches the serial reference bit for bit") {
    const CMatrix y = random_snapshots(12, 1000, 4); // Bluestein length
    const DftPlan plan(y.cols());
    for (bool inverse : {false, true}) {
        const CMatrix serial = kernels::transform_rows_serial(y, plan, inverse);
        for (int threads : {2, 8})
            CHECK(serial == kernels::transform_rows_omp(y, plan, inverse, threads));
    }
}
