// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "doa/error.hpp"
#include "doa/numerics.hpp"

namespace doa {

namespace {

struct ColumnPair {
    double c;
    double s;
    cplx cu; // conj of the phase of the inner product
};

// Rotation that orthogonalizes columns i and j, derived from the 2x2 Gram
// block [[a, g], [conj(g), b]].
ColumnPair make_pair_rotation(double a, double b, cplx g) {
    const double r = std::abs(g);
    const cplx u = g / r;
    const double tau = (b - a) / (2.0 * r);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    return {c, t * c, std::conj(u)};
}

// Appends orthonormal columns to u (filled up to `have` columns) until it is
// a full basis, drawing candidates from the identity in index order.
void complete_basis(CMatrix& u, std::size_t have) {
    const std::size_t dim = u.rows();
    std::size_t next = have;
    for (double accept : {0.5, 1e-3, 1e-8}) {
        for (std::size_t cand = 0; cand < dim && next < dim; ++cand) {
            std::vector<cplx> w(dim, cplx{});
            w[cand] = 1.0;
            // Two MGS passes keep the residual orthogonal to working precision.
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t c = 0; c < next; ++c) {
                    cplx dot = 0.0;
                    for (std::size_t r = 0; r < dim; ++r)
                        dot += std::conj(u(r, c)) * w[r];
                    for (std::size_t r = 0; r < dim; ++r)
                        w[r] -= dot * u(r, c);
                }
            }
            double norm = 0.0;
            for (const cplx& x : w)
                norm += std::norm(x);
            norm = std::sqrt(norm);
            if (norm < accept)
                continue;
            for (std::size_t r = 0; r < dim; ++r)
                u(r, next) = w[r] / norm;
            ++next;
        }
        if (next == dim)
            return;
    }
    if (next != dim)
        throw ContractError("svd: failed to complete an orthonormal basis");
}

SvdResult svd_tall(const CMatrix& m) {
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();

    CMatrix a = m;
    CMatrix v = CMatrix::identity(cols);

    // One-sided Jacobi: sweep column pairs until all are orthogonal.
    const double conv = 1e-14;
    bool rotated = true;
    for (int sweep = 0; sweep < 60 && rotated; ++sweep) {
        rotated = false;
        for (std::size_t i = 0; i + 1 < cols; ++i) {
            for (std::size_t j = i + 1; j < cols; ++j) {
                double ni = 0.0, nj = 0.0;
                cplx g = 0.0;
                for (std::size_t r = 0; r < rows; ++r) {
                    ni += std::norm(a(r, i));
                    nj += std::norm(a(r, j));
                    g += std::conj(a(r, i)) * a(r, j);
                }
                if (std::abs(g) <= conv * std::sqrt(ni * nj) || std::abs(g) == 0.0)
                    continue;
                rotated = true;
                const ColumnPair rot = make_pair_rotation(ni, nj, g);
                for (std::size_t r = 0; r < rows; ++r) {
                    const cplx ai = a(r, i), aj = a(r, j);
                    a(r, i) = rot.c * ai - rot.cu * rot.s * aj;
                    a(r, j) = rot.s * ai + rot.cu * rot.c * aj;
                }
                for (std::size_t r = 0; r < cols; ++r) {
                    const cplx vi = v(r, i), vj = v(r, j);
                    v(r, i) = rot.c * vi - rot.cu * rot.s * vj;
                    v(r, j) = rot.s * vi + rot.cu * rot.c * vj;
                }
            }
        }
    }

    std::vector<double> norms(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        double sum = 0.0;
        for (std::size_t r = 0; r < rows; ++r)
            sum += std::norm(a(r, j));
        norms[j] = std::sqrt(sum);
    }

    std::vector<std::size_t> order(cols);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return norms[i] > norms[j]; });

    SvdResult out;
    out.singular_values.resize(cols);
    out.left_vectors = CMatrix(rows, rows);
    out.right_vectors = CMatrix(cols, cols);

    const double sigma_max = norms.empty() ? 0.0 : norms[order[0]];
    const double negligible =
        static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon() * sigma_max;

    std::size_t kept = 0;
    for (std::size_t k = 0; k < cols; ++k) {
        const std::size_t src = order[k];
        out.singular_values[k] = norms[src];
        for (std::size_t r = 0; r < cols; ++r)
            out.right_vectors(r, k) = v(r, src);
        if (norms[src] > negligible && norms[src] > 0.0) {
            for (std::size_t r = 0; r < rows; ++r)
                out.left_vectors(r, k) = a(r, src) / norms[src];
            kept = k + 1;
        }
    }
    complete_basis(out.left_vectors, kept);

    // Phase convention on the kept pairs keeps the factorization exact:
    // scaling u_k and v_k by the same unit factor leaves u s v^H unchanged.
    for (std::size_t k = 0; k < kept; ++k) {
        std::size_t pivot = 0;
        double best = -1.0;
        for (std::size_t r = 0; r < rows; ++r) {
            const double mag = std::abs(out.left_vectors(r, k));
            if (mag > best) {
                best = mag;
                pivot = r;
            }
        }
        const cplx ref = out.left_vectors(pivot, k);
        const cplx phase = std::conj(ref) / std::abs(ref);
        for (std::size_t r = 0; r < rows; ++r)
            out.left_vectors(r, k) *= phase;
        for (std::size_t r = 0; r < cols; ++r)
            out.right_vectors(r, k) *= phase;
    }
    return out;
}

} // namespace

SvdResult svd(const CMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0)
        throw ContractError("svd: empty matrix");
    if (!m.all_finite())
        throw ContractError("svd: non-finite entries");

    if (m.rows() >= m.cols())
        return svd_tall(m);

    // Wide case: factor the adjoint and swap the unitary factors.
    SvdResult t = svd_tall(adjoint(m));
    SvdResult out;
    out.left_vectors = std::move(t.right_vectors);
    out.right_vectors = std::move(t.left_vectors);
    out.singular_values = std::move(t.singular_values);
    return out;
}

} // namespace doa
