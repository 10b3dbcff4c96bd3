#pragma once

#include <functional>

#include "g4v/numerics/matrix.hpp"

namespace g4v {

/// Flat complex state buffer for the integrators (psi vectors, flattened
/// propagators and density matrices).
class Cbuf {
  public:
    static constexpr int kCap = kMaxDim * kMaxDim;

    Cbuf() = default;
    explicit Cbuf(int n) : n_(n) {
        if (n < 1 || n > kCap) throw Error("Cbuf: bad size");
    }

    int size() const { return n_; }
    cplx& operator[](int i) { return a_[static_cast<size_t>(i)]; }
    const cplx& operator[](int i) const { return a_[static_cast<size_t>(i)]; }

    static Cbuf from_vec(const Cvec& v) {
        Cbuf b(v.dim());
        for (int i = 0; i < v.dim(); ++i) b[i] = v[i];
        return b;
    }
    static Cbuf from_mat(const Cmat& m) {
        Cbuf b(m.dim() * m.dim());
        for (int i = 0; i < m.dim(); ++i)
            for (int j = 0; j < m.dim(); ++j) b[i * m.dim() + j] = m(i, j);
        return b;
    }
    Cvec to_vec() const {
        Cvec v(n_);
        for (int i = 0; i < n_; ++i) v[i] = a_[static_cast<size_t>(i)];
        return v;
    }
    Cmat to_mat(int dim) const {
        Cmat m(dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) m(i, j) = a_[static_cast<size_t>(i * dim + j)];
        return m;
    }

  private:
    int n_ = 0;
    std::array<cplx, kCap> a_{};
};

/// Adaptive embedded Dormand-Prince 5(4). Rhs: (t, y, dydt).
/// tol acts as both relative and absolute local error target.
template <class Rhs>
Cbuf integrate_adaptive(Rhs&& rhs, Cbuf y, double t0, double t1, double tol) {
    if (t1 < t0) throw Error("integrate_adaptive: t1 < t0");
    if (t1 == t0) return y;
    tol = std::max(tol, 1e-14);

    // Dormand-Prince coefficients
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;

    const int n = y.size();
    Cbuf k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), y5(n);

    double t = t0;
    double h = (t1 - t0) / 100.0;
    rhs(t, y, k1);
    // initial step heuristic from the first derivative
    {
        double d0 = 0.0, d1 = 0.0;
        for (int i = 0; i < n; ++i) {
            d0 = std::max(d0, std::abs(y[i]));
            d1 = std::max(d1, std::abs(k1[i]));
        }
        if (d1 > 0.0) h = std::min(h, 0.01 * (d0 + tol) / d1);
        h = std::max(h, 1e-12 * (t1 - t0));
    }
    bool k1_fresh = true;

    while (t < t1) {
        if (h > t1 - t) h = t1 - t;
        if (h < 1e-14 * (t1 - t0))
            throw Error("integrate_adaptive: step underflow at t = " + std::to_string(t));

        if (!k1_fresh) rhs(t, y, k1);

        for (int i = 0; i < n; ++i) yt[i] = y[i] + h * (a21 * k1[i]);
        rhs(t + c2 * h, yt, k2);
        for (int i = 0; i < n; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, yt, k3);
        for (int i = 0; i < n; ++i) yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, yt, k4);
        for (int i = 0; i < n; ++i) yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, yt, k5);
        for (int i = 0; i < n; ++i)
            yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(t + h, yt, k6);
        for (int i = 0; i < n; ++i)
            y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(t + h, y5, k7);

        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            const cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = tol + tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err += std::norm(e) / (sc * sc);
        }
        err = std::sqrt(err / n);

        if (err <= 1.0) {
            t += h;
            y = y5;
            k1 = k7;  // FSAL
            k1_fresh = true;
        } else {
            k1_fresh = false;
        }
        const double fac = std::clamp(0.9 * std::pow(err > 0 ? err : 1e-10, -0.2), 0.2, 5.0);
        h *= fac;
    }
    return y;
}

/// Schroedinger propagation: i d|psi>/dt = 2*pi*H(t)|psi>, H in GHz, t in ns.
/// H_of_t fills a Cmat for the requested time.
template <class HamFn>
Cvec propagate_schrodinger(HamFn&& h_of_t, const Cvec& psi0, double t_i, double t_e, double tol) {
    const int n = psi0.dim();
    Cmat hbuf(n);
    auto rhs = [&](double t, const Cbuf& y, Cbuf& dy) {
        h_of_t(t, hbuf);
        for (int i = 0; i < n; ++i) {
            cplx s = 0.0;
            for (int j = 0; j < n; ++j) s += hbuf(i, j) * y[j];
            dy[i] = cplx(0.0, -2.0 * M_PI) * s;
        }
    };
    Cbuf out = integrate_adaptive(rhs, Cbuf::from_vec(psi0), t_i, t_e, tol);
    return out.to_vec();
}

}  // namespace g4v
