// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numeric>

#include "doa/error.hpp"
#include "doa/numerics.hpp"

namespace doa {

namespace {

double offdiagonal_norm(const CMatrix& a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j)
                sum += std::norm(a(i, j));
    return std::sqrt(sum);
}

// Unitary 2x2 rotation annihilating the (p,q) entry of a Hermitian matrix.
// With a_pq = r*u (r = |a_pq|), the rotation is
//   J = [ c        s      ]
//       [-conj(u)s conj(u)c]
// where (c, s) is the classic real Jacobi pair for [[a_pp, r], [r, a_qq]].
struct Rotation {
    double c;
    double s;
    cplx u;
};

Rotation make_rotation(double app, double aqq, cplx apq) {
    const double r = std::abs(apq);
    const cplx u = apq / r;
    const double tau = (aqq - app) / (2.0 * r);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    return {c, t * c, u};
}

} // namespace

EvdResult hermitian_evd(const CMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw ContractError("hermitian_evd: matrix must be square and non-empty");
    if (!m.all_finite())
        throw ContractError("hermitian_evd: non-finite entries");

    const std::size_t n = m.rows();
    const double fro = frobenius_norm(m);
    {
        const double asym = frobenius_distance(m, adjoint(m));
        if (asym > 1e-8 * std::max(fro, 1e-300))
            throw ContractError("hermitian_evd: input is not Hermitian");
    }

    // Exact symmetrization; the iteration below preserves it.
    CMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));

    CMatrix v = CMatrix::identity(n);
    const double tol = 1e-14 * std::max(fro, 1e-300);

    for (int sweep = 0; sweep < 100 && offdiagonal_norm(a) > tol; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) == 0.0)
                    continue;
                const Rotation rot = make_rotation(a(p, p).real(), a(q, q).real(), a(p, q));
                const cplx cu = std::conj(rot.u);
                // Column update: A <- A * J and V <- V * J.
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx ap = a(i, p), aq = a(i, q);
                    a(i, p) = rot.c * ap - cu * rot.s * aq;
                    a(i, q) = rot.s * ap + cu * rot.c * aq;
                    const cplx vp = v(i, p), vq = v(i, q);
                    v(i, p) = rot.c * vp - cu * rot.s * vq;
                    v(i, q) = rot.s * vp + cu * rot.c * vq;
                }
                // Row update: A <- J^H * A.
                for (std::size_t j = 0; j < n; ++j) {
                    const cplx ap = a(p, j), aq = a(q, j);
                    a(p, j) = rot.c * ap - rot.u * rot.s * aq;
                    a(q, j) = rot.s * ap + rot.u * rot.c * aq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    EvdResult out;
    out.eigenvalues.resize(n);
    out.eigenvectors = CMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        out.eigenvalues[k] = a(src, src).real();
        // Phase convention: largest-magnitude entry real positive (ties to
        // the lowest row index).
        std::size_t pivot = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double mag = std::abs(v(i, src));
            if (mag > best) {
                best = mag;
                pivot = i;
            }
        }
        const cplx ref = v(pivot, src);
        const cplx phase = (best > 0.0) ? std::conj(ref) / std::abs(ref) : cplx{1.0};
        for (std::size_t i = 0; i < n; ++i)
            out.eigenvectors(i, k) = v(i, src) * phase;
    }
    return out;
}

} // namespace doa
