#pragma once

#include "g4v/numerics/eigen.hpp"
#include "g4v/numerics/matrix.hpp"

namespace g4v {

namespace detail {

inline double one_norm(const Cmat& a) {
    double m = 0.0;
    for (int j = 0; j < a.dim(); ++j) {
        double s = 0.0;
        for (int i = 0; i < a.dim(); ++i) s += std::abs(a(i, j));
        m = std::max(m, s);
    }
    return m;
}

/// Gaussian elimination solve A X = B (small dense, partial pivoting).
inline Cmat solve(Cmat a, Cmat b) {
    const int n = a.dim();
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (std::abs(a(piv, col)) == 0.0) throw Error("expm: singular Pade denominator");
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(a(col, j), a(piv, j));
                std::swap(b(col, j), b(piv, j));
            }
        const cplx d = a(col, col);
        for (int j = 0; j < n; ++j) {
            a(col, j) /= d;
            b(col, j) /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const cplx f = a(r, col);
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                a(r, j) -= f * a(col, j);
                b(r, j) -= f * b(col, j);
            }
        }
    }
    return b;
}

/// Pade(13) + scaling/squaring matrix exponential.
inline Cmat expm_pade(const Cmat& m) {
    static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
                               129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
                               1323241920.0,        40840800.0,          960960.0,           16380.0,
                               182.0,               1.0};
    const int n = m.dim();
    const double nrm = one_norm(m);
    int s = 0;
    const double theta13 = 5.371920351148152;
    if (nrm > theta13) s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
    Cmat a = m * cplx(std::ldexp(1.0, -s), 0.0);

    const Cmat a2 = a * a;
    const Cmat a4 = a2 * a2;
    const Cmat a6 = a4 * a2;
    const Cmat id = Cmat::identity(n);

    Cmat u = a * (a6 * (a6 * b[13] + a4 * b[11] + a2 * b[9]) + a6 * b[7] + a4 * b[5] + a2 * b[3] + id * b[1]);
    Cmat v = a6 * (a6 * b[12] + a4 * b[10] + a2 * b[8]) + a6 * b[6] + a4 * b[4] + a2 * b[2] + id * b[0];

    Cmat r = solve(v - u, v + u);
    for (int k = 0; k < s; ++k) r = r * r;
    return r;
}

}  // namespace detail

/// exp(scale * A). Hermitian inputs go through the spectral route; anything
/// else through Pade scaling/squaring.
inline Cmat matrix_exponential(const Cmat& a, cplx scale = 1.0) {
    if (a.is_hermitian()) {
        const EigenSystem es = hermitian_eigensystem(a);
        const int n = a.dim();
        Cmat d(n);
        for (int k = 0; k < n; ++k) d(k, k) = std::exp(scale * es.energies[k]);
        return es.vectors * d * es.vectors.adjoint();
    }
    return detail::expm_pade(a * scale);
}

inline OperatorMatrix matrix_exponential(const OperatorMatrix& a, cplx scale = 1.0) {
    return OperatorMatrix(matrix_exponential(a.m, scale), false);
}

}  // namespace g4v
