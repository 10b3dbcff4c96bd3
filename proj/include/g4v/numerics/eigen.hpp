#pragma once

#include <numeric>
#include <vector>

#include "g4v/numerics/matrix.hpp"

namespace g4v {

/// Spectral decomposition of a Hermitian operator.
///
/// Conventions: energies ascend; within a degenerate block the columns are
/// ordered by the index of each eigenvector's largest-magnitude entry; in each
/// eigenvector the largest-magnitude entry is made real and non-negative
/// (ties within 1e-12 of the max magnitude break toward the lowest index).
struct EigenSystem {
    std::vector<double> energies;  // GHz
    Cmat vectors;                  // orthonormal columns

    Cvec column(int k) const {
        Cvec v(vectors.dim());
        for (int i = 0; i < vectors.dim(); ++i) v[i] = vectors(i, k);
        return v;
    }
};

namespace detail {

inline int phase_anchor_index(const Cmat& v, int col) {
    const int n = v.dim();
    double mx = 0.0;
    for (int i = 0; i < n; ++i) mx = std::max(mx, std::abs(v(i, col)));
    for (int i = 0; i < n; ++i)
        if (std::abs(v(i, col)) >= mx - 1e-12 * std::max(mx, 1.0)) return i;
    return 0;
}

}  // namespace detail

/// Cyclic complex Jacobi diagonalization of a Hermitian matrix.
inline EigenSystem hermitian_eigensystem(const Cmat& a_in, double herm_rel_tol = 1e-12) {
    const int n = a_in.dim();
    if (n < 2) throw Error("hermitian_eigensystem: dim must be 2..16");

    const double scale = std::max(a_in.max_abs(), 1e-300);
    const double asym = a_in.hermiticity_error();
    if (asym > herm_rel_tol * scale)
        throw Error("hermitian_eigensystem: input not Hermitian, asymmetry " + std::to_string(asym) + " vs max|A| " +
                    std::to_string(scale));

    // work on the symmetrized matrix
    Cmat a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (a_in(i, j) + std::conj(a_in(j, i)));
    Cmat v = Cmat::identity(n);

    const int max_sweeps = 100;
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (off <= 1e-30 * scale * scale) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx g = a(p, q);
                const double m = std::abs(g);
                if (m <= 1e-18 * scale) continue;
                const double phi = std::arg(g);
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = 0.5 * std::atan2(2.0 * m, app - aqq);
                const double c = std::cos(theta);
                const double s = std::sin(theta);
                const cplx em = std::polar(1.0, -phi);  // e^{-i phi}
                const cplx ep = std::conj(em);

                // A <- J^dag A J, J = [[c, s],[-s e^{-i phi}, c e^{-i phi}]] on (p,q)
                for (int i = 0; i < n; ++i) {
                    const cplx aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * em * aiq;
                    a(i, q) = s * aip + c * em * aiq;
                }
                for (int j = 0; j < n; ++j) {
                    const cplx apj = a(p, j), aqj = a(q, j);
                    a(p, j) = c * apj - s * ep * aqj;
                    a(q, j) = s * apj + c * ep * aqj;
                }
                for (int i = 0; i < n; ++i) {
                    const cplx vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * em * viq;
                    v(i, q) = s * vip + c * em * viq;
                }
            }
        }
    }
    if (sweep >= max_sweeps) throw Error("hermitian_eigensystem: Jacobi iteration did not converge in 100 sweeps");

    // sort ascending; stable within degenerate blocks (anchor index decides)
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> ev(n);
    for (int k = 0; k < n; ++k) ev[k] = a(k, k).real();
    std::sort(order.begin(), order.end(), [&](int x, int y) { return ev[x] < ev[y]; });

    Cmat vs(n);
    std::vector<double> es(n);
    for (int k = 0; k < n; ++k) {
        es[k] = ev[order[k]];
        for (int i = 0; i < n; ++i) vs(i, k) = v(i, order[k]);
    }

    // reorder inside degenerate blocks by phase-anchor index
    const double deg_tol = 1e-10 * std::max(scale, 1.0);
    int b = 0;
    while (b < n) {
        int e = b + 1;
        while (e < n && es[e] - es[e - 1] <= deg_tol) ++e;
        if (e - b > 1) {
            std::vector<int> idx(e - b);
            std::iota(idx.begin(), idx.end(), b);
            std::vector<int> anchor(n);
            for (int k = b; k < e; ++k) anchor[k] = detail::phase_anchor_index(vs, k);
            std::sort(idx.begin(), idx.end(), [&](int x, int y) { return anchor[x] < anchor[y]; });
            Cmat tmp = vs;
            std::vector<double> etmp(es);
            for (int k = 0; k < e - b; ++k) {
                es[b + k] = etmp[idx[k]];
                for (int i = 0; i < n; ++i) vs(i, b + k) = tmp(i, idx[k]);
            }
        }
        b = e;
    }

    // fix phases
    for (int k = 0; k < n; ++k) {
        const int i = detail::phase_anchor_index(vs, k);
        const cplx z = vs(i, k);
        if (std::abs(z) > 0.0) {
            const cplx ph = std::conj(z) / std::abs(z);
            for (int r = 0; r < n; ++r) vs(r, k) *= ph;
            vs(i, k) = cplx(std::abs(vs(i, k)), 0.0);
        }
    }

    return EigenSystem{std::move(es), std::move(vs)};
}

inline EigenSystem hermitian_eigensystem(const OperatorMatrix& a) { return hermitian_eigensystem(a.m); }

}  // namespace g4v
