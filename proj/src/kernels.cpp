// SPDX-License-Identifier: Apache-2.0
#include "doa/kernels.hpp"

#include <cmath>

#include "doa/error.hpp"
#include "doa/parallel.hpp"

namespace doa::kernels {

namespace {

// One Hermitian covariance entry; i <= j.
cplx covariance_entry(const CMatrix& y, std::size_t i, std::size_t j) {
    const cplx* ri = y.row(i);
    const cplx* rj = y.row(j);
    cplx acc = 0.0;
    for (std::size_t t = 0; t < y.cols(); ++t)
        acc += ri[t] * std::conj(rj[t]);
    return acc / static_cast<double>(y.cols());
}

cplx shifted_entry(const CMatrix& y, std::size_t i, std::size_t j, int half_lag,
                   bool conjugate_variant, std::span<const cplx> phase) {
    const cplx* ri = y.row(i);
    const cplx* rj = y.row(j);
    const std::size_t h = static_cast<std::size_t>(half_lag);
    const std::size_t first = h;
    const std::size_t last = y.cols() - h; // exclusive
    cplx acc = 0.0;
    if (conjugate_variant) {
        for (std::size_t t = first; t < last; ++t)
            acc += ri[t + h] * std::conj(rj[t - h]) * phase[t];
    } else {
        for (std::size_t t = first; t < last; ++t)
            acc += ri[t + h] * rj[t - h] * phase[t];
    }
    return acc / static_cast<double>(last - first);
}

void mirror_lower(CMatrix& r) {
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = i + 1; j < r.cols(); ++j)
            r(j, i) = std::conj(r(i, j));
}

double scan_value(const CMatrix& basis, const ArrayGeometry& geometry, double angle_deg,
                  std::vector<cplx>& steer_buf) {
    fill_steering(geometry, angle_deg, steer_buf.data());
    const std::size_t m = basis.rows();
    double energy = 0.0;
    for (std::size_t c = 0; c < basis.cols(); ++c) {
        cplx dot = 0.0;
        for (std::size_t r = 0; r < m; ++r)
            dot += std::conj(basis(r, c)) * steer_buf[r];
        energy += std::norm(dot);
    }
    return energy;
}

} // namespace

CMatrix covariance_serial(const CMatrix& snapshots) {
    const std::size_t m = snapshots.rows();
    CMatrix r(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j)
            r(i, j) = covariance_entry(snapshots, i, j);
    mirror_lower(r);
    return r;
}

CMatrix covariance_omp(const CMatrix& snapshots, int threads) {
    const std::size_t m = snapshots.rows();
    CMatrix r(m, m);
    parallel_for(static_cast<std::int64_t>(m * m), threads, [&](std::int64_t idx) {
        const std::size_t i = static_cast<std::size_t>(idx) / m;
        const std::size_t j = static_cast<std::size_t>(idx) % m;
        if (i <= j)
            r(i, j) = covariance_entry(snapshots, i, j);
    });
    mirror_lower(r);
    return r;
}

CMatrix shifted_outer_accumulate_serial(const CMatrix& snapshots, int lag_samples,
                                        bool conjugate_variant, std::span<const cplx> phase) {
    const std::size_t m = snapshots.rows();
    const int h = lag_samples / 2;
    CMatrix c(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            c(i, j) = shifted_entry(snapshots, i, j, h, conjugate_variant, phase);
    return c;
}

CMatrix shifted_outer_accumulate_omp(const CMatrix& snapshots, int lag_samples,
                                     bool conjugate_variant, std::span<const cplx> phase,
                                     int threads) {
    const std::size_t m = snapshots.rows();
    const int h = lag_samples / 2;
    CMatrix c(m, m);
    parallel_for(static_cast<std::int64_t>(m * m), threads, [&](std::int64_t idx) {
        const std::size_t i = static_cast<std::size_t>(idx) / m;
        const std::size_t j = static_cast<std::size_t>(idx) % m;
        c(i, j) = shifted_entry(snapshots, i, j, h, conjugate_variant, phase);
    });
    return c;
}

std::vector<double> projection_scan_serial(const CMatrix& basis, const ArrayGeometry& geometry,
                                           std::span<const double> grid_deg) {
    std::vector<double> out(grid_deg.size());
    std::vector<cplx> steer(basis.rows());
    for (std::size_t g = 0; g < grid_deg.size(); ++g)
        out[g] = scan_value(basis, geometry, grid_deg[g], steer);
    return out;
}

std::vector<double> projection_scan_omp(const CMatrix& basis, const ArrayGeometry& geometry,
                                        std::span<const double> grid_deg, int threads) {
    std::vector<double> out(grid_deg.size());
#ifdef _OPENMP
    const int t = resolve_threads(threads);
    if (t > 1) {
#pragma omp parallel num_threads(t)
        {
            std::vector<cplx> steer(basis.rows());
#pragma omp for schedule(static)
            for (std::int64_t g = 0; g < static_cast<std::int64_t>(grid_deg.size()); ++g)
                out[static_cast<std::size_t>(g)] =
                    scan_value(basis, geometry, grid_deg[static_cast<std::size_t>(g)], steer);
        }
        return out;
    }
#else
    (void)threads;
#endif
    std::vector<cplx> steer(basis.rows());
    for (std::size_t g = 0; g < grid_deg.size(); ++g)
        out[g] = scan_value(basis, geometry, grid_deg[g], steer);
    return out;
}

CMatrix transform_rows_serial(const CMatrix& x, const DftPlan& plan, bool inverse) {
    if (plan.length() != x.cols())
        throw ContractError("transform_rows: plan length mismatch");
    CMatrix out(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        std::span<const cplx> row(x.row(i), x.cols());
        const std::vector<cplx> y = inverse ? plan.inverse(row) : plan.forward(row);
        std::copy(y.begin(), y.end(), out.row(i));
    }
    return out;
}

CMatrix transform_rows_omp(const CMatrix& x, const DftPlan& plan, bool inverse, int threads) {
    if (plan.length() != x.cols())
        throw ContractError("transform_rows: plan length mismatch");
    CMatrix out(x.rows(), x.cols());
    parallel_for(static_cast<std::int64_t>(x.rows()), threads, [&](std::int64_t i) {
        std::span<const cplx> row(x.row(static_cast<std::size_t>(i)), x.cols());
        const std::vector<cplx> y = inverse ? plan.inverse(row) : plan.forward(row);
        std::copy(y.begin(), y.end(), out.row(static_cast<std::size_t>(i)));
    });
    return out;
}

} // namespace doa::kernels
