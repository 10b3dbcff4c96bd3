#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace g4v {

using cplx = std::complex<double>;

inline constexpr int kMaxDim = 16;

/// Error raised by numeric kernels and model builders.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Configuration/input error (CLI maps these to exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

/// Dense complex matrix, dimension 2..16, row-major, value semantics.
class Cmat {
  public:
    Cmat() = default;

    explicit Cmat(int n) : n_(n) {
        if (n < 1 || n > kMaxDim) throw Error("Cmat: dimension " + std::to_string(n) + " outside 1.." + std::to_string(kMaxDim));
    }

    static Cmat zero(int n) { return Cmat(n); }

    static Cmat identity(int n) {
        Cmat m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int dim() const { return n_; }

    cplx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    const cplx& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

    Cmat& operator+=(const Cmat& o) {
        for (int k = 0; k < n_ * n_; ++k) a_[k] += o.a_[k];
        return *this;
    }
    Cmat& operator-=(const Cmat& o) {
        for (int k = 0; k < n_ * n_; ++k) a_[k] -= o.a_[k];
        return *this;
    }
    Cmat& operator*=(cplx s) {
        for (int k = 0; k < n_ * n_; ++k) a_[k] *= s;
        return *this;
    }

    friend Cmat operator+(Cmat a, const Cmat& b) { return a += b; }
    friend Cmat operator-(Cmat a, const Cmat& b) { return a -= b; }
    friend Cmat operator*(Cmat a, cplx s) { return a *= s; }
    friend Cmat operator*(cplx s, Cmat a) { return a *= s; }

    friend Cmat operator*(const Cmat& a, const Cmat& b) {
        const int n = a.n_;
        Cmat c(n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                const cplx aik = a(i, k);
                if (aik == 0.0) continue;
                for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    Cmat adjoint() const {
        Cmat c(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) c(j, i) = std::conj((*this)(i, j));
        return c;
    }

    cplx trace() const {
        cplx t = 0.0;
        for (int i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (int k = 0; k < n_ * n_; ++k) m = std::max(m, std::abs(a_[k]));
        return m;
    }

    double frobenius() const {
        double s = 0.0;
        for (int k = 0; k < n_ * n_; ++k) s += std::norm(a_[k]);
        return std::sqrt(s);
    }

    /// max_ij |A[i][j] - conj(A[j][i])|
    double hermiticity_error() const {
        double m = 0.0;
        for (int i = 0; i < n_; ++i)
            for (int j = i; j < n_; ++j) m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return m;
    }

    bool is_hermitian(double rel_tol = 1e-12) const {
        const double scale = std::max(max_abs(), 1e-300);
        return hermiticity_error() <= rel_tol * scale;
    }

  private:
    int n_ = 0;
    std::array<cplx, static_cast<size_t>(kMaxDim) * kMaxDim> a_{};
};

/// Spec-facing operator wrapper carrying the Hermitian intent flag.
struct OperatorMatrix {
    Cmat m;
    bool hermitian_hint = false;

    OperatorMatrix() = default;
    OperatorMatrix(Cmat mat, bool herm) : m(std::move(mat)), hermitian_hint(herm) {
        if (m.dim() < 2) throw Error("OperatorMatrix: dim must be at least 2");
        if (hermitian_hint && !m.is_hermitian())
            throw Error("OperatorMatrix: hermitian_hint set but asymmetry " + std::to_string(m.hermiticity_error()) +
                        " exceeds 1e-12 * max|A|");
    }
};

/// Complex vector with the same fixed capacity as Cmat.
class Cvec {
  public:
    Cvec() = default;
    explicit Cvec(int n) : n_(n) {
        if (n < 1 || n > kMaxDim) throw Error("Cvec: bad dimension");
    }

    int dim() const { return n_; }
    cplx& operator[](int i) { return a_[static_cast<size_t>(i)]; }
    const cplx& operator[](int i) const { return a_[static_cast<size_t>(i)]; }

    double norm() const {
        double s = 0.0;
        for (int i = 0; i < n_; ++i) s += std::norm(a_[i]);
        return std::sqrt(s);
    }

    friend Cvec operator*(const Cmat& m, const Cvec& v) {
        const int n = m.dim();
        Cvec r(n);
        for (int i = 0; i < n; ++i) {
            cplx s = 0.0;
            for (int j = 0; j < n; ++j) s += m(i, j) * v[j];
            r[i] = s;
        }
        return r;
    }

  private:
    int n_ = 0;
    std::array<cplx, kMaxDim> a_{};
};

inline cplx dot(const Cvec& a, const Cvec& b) {
    cplx s = 0.0;
    for (int i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

}  // namespace g4v
