#pragma once

#include <vector>

#include "g4v/numerics/matrix.hpp"

namespace g4v {

/// Gauss-Legendre nodes/weights on [-1, 1] (Newton on P_n).
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int k = 0; k < (n + 1) / 2; ++k) {
        double z = std::cos(M_PI * (k + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) * z * p1 - j * p2) / (j + 1);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[k] = -z;
        x[n - 1 - k] = z;
        w[k] = w[n - 1 - k] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
}

/// Bloch state |psi(theta, phi)> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
inline Cvec bloch_state(double theta, double phi) {
    Cvec v(2);
    v[0] = std::cos(0.5 * theta);
    v[1] = std::polar(std::sin(0.5 * theta), phi);
    return v;
}

/// (1/4pi) * integral of f(psi) over the Bloch sphere. Gauss-Legendre in
/// cos(theta), trapezoid in phi (periodic, so spectrally accurate).
template <class Fn>
double bloch_average(Fn&& f, int n_theta = 32, int n_phi = 64) {
    if (n_theta < 8 || n_phi < 8) throw Error("bloch_average: need n_theta, n_phi >= 8");
    std::vector<double> u, w;
    gauss_legendre(n_theta, u, w);
    double acc = 0.0;
    for (int k = 0; k < n_theta; ++k) {
        const double theta = std::acos(std::clamp(u[k], -1.0, 1.0));
        double ring = 0.0;
        for (int j = 0; j < n_phi; ++j) ring += f(bloch_state(theta, 2.0 * M_PI * j / n_phi));
        acc += w[k] * ring / n_phi;
    }
    return 0.5 * acc;
}

}  // namespace g4v
