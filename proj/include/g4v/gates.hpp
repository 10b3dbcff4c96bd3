#pragma once

#include <functional>

#include "g4v/effective.hpp"
#include "g4v/numerics/expm.hpp"
#include "g4v/numerics/ode.hpp"
#include "g4v/numerics/quadrature.hpp"

namespace g4v {

enum class Envelope { rect, cosine_ramp };

/// Microwave pulse: B_ac(t) = b(t) * B_ac * cos(2 pi carrier t + phase).
struct DriveSpec {
    FieldVector b_ac;
    double carrier = 0.0;        // GHz
    double phase = 0.0;          // rad
    Envelope envelope = Envelope::rect;
    double ramp_fraction = 0.0;  // of duration, each side (cosine_ramp only)
    double duration = 0.0;       // ns

    void validate() const {
        if (carrier <= 0.0) throw ConfigError("DriveSpec: carrier must be positive");
        if (duration <= 0.0) throw ConfigError("DriveSpec: duration must be positive");
        if (envelope == Envelope::cosine_ramp && (ramp_fraction < 0.0 || ramp_fraction > 0.5))
            throw ConfigError("DriveSpec: ramp_fraction must lie in [0, 0.5]");
    }

    double envelope_at(double t) const {
        if (envelope == Envelope::rect) return 1.0;
        const double tr = ramp_fraction * duration;
        if (tr <= 0.0) return 1.0;
        if (t < 0.0 || t > duration) return 0.0;
        if (t < tr) return 0.5 * (1.0 - std::cos(M_PI * t / tr));
        if (t > duration - tr) return 0.5 * (1.0 - std::cos(M_PI * (duration - t) / tr));
        return 1.0;
    }

    /// integral of b(t) over the pulse, ns
    double envelope_area() const {
        return envelope == Envelope::rect ? duration : duration * (1.0 - ramp_fraction);
    }
};

namespace detail {

/// exp(A) for anti-Hermitian A, through the spectral route (exactly unitary).
inline Cmat expm_antihermitian(const Cmat& a) {
    const int n = a.dim();
    Cmat g(n);  // g = i*a is Hermitian
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = cplx(0.0, 1.0) * a(i, j);
    const EigenSystem es = hermitian_eigensystem(g);
    Cmat d(n);
    for (int k = 0; k < n; ++k) d(k, k) = std::polar(1.0, -es.energies[k]);
    return es.vectors * d * es.vectors.adjoint();
}

/// One fixed-step fourth-order Magnus segment for H(t) = D + b(t)cos(2 pi w t
/// + phase) V, t in [t0, t0+len]. Exponentials stay exactly unitary.
inline Cmat magnus_segment(const Cmat& d, const Cmat& v, const DriveSpec& drive, double t0, double len, int steps) {
    const double c1 = 0.5 - std::sqrt(3.0) / 6.0, c2 = 0.5 + std::sqrt(3.0) / 6.0;
    const double h = len / steps;
    const int n = d.dim();
    Cmat u = Cmat::identity(n);
    for (int k = 0; k < steps; ++k) {
        const double t = t0 + k * h;
        const double w1 = drive.envelope_at(t + c1 * h) * std::cos(2.0 * M_PI * drive.carrier * (t + c1 * h) + drive.phase);
        const double w2 = drive.envelope_at(t + c2 * h) * std::cos(2.0 * M_PI * drive.carrier * (t + c2 * h) + drive.phase);
        const Cmat h1 = d + v * cplx(w1, 0.0);
        const Cmat h2 = d + v * cplx(w2, 0.0);
        Cmat a = (h1 + h2) * cplx(0.0, -M_PI * h);
        const double cc = 4.0 * M_PI * M_PI * std::sqrt(3.0) * h * h / 12.0;
        a += (h1 * h2 - h2 * h1) * cplx(cc, 0.0);
        u = expm_antihermitian(a) * u;
    }
    return u;
}

inline int steps_per_period(double emax, double period) {
    const double target = 2.0 * M_PI * emax * period / 2.5;
    return std::clamp(static_cast<int>(std::ceil(target)), 600, 24000);
}

/// Propagator over the pulse. Rect envelopes exploit carrier periodicity:
/// one-period map raised to an integer power plus a residual segment.
inline Cmat drive_propagator(const Cmat& d, const Cmat& v, const DriveSpec& drive) {
    const double period = 1.0 / drive.carrier;
    double emax = 1.0;
    for (int i = 0; i < d.dim(); ++i) emax = std::max(emax, std::abs(d(i, i)));
    const int spp = steps_per_period(emax, period);

    auto powered = [&](const Cmat& up, long long m) {
        Cmat u = Cmat::identity(d.dim());
        Cmat p = up;
        while (m) {
            if (m & 1) u = p * u;
            p = p * p;
            m >>= 1;
        }
        return u;
    };

    if (drive.envelope == Envelope::rect) {
        const long long nper = static_cast<long long>(std::floor(drive.duration / period));
        Cmat u = powered(magnus_segment(d, v, drive, 0.0, period, spp), nper);
        const double rem = drive.duration - nper * period;
        if (rem > 1e-13 * drive.duration)
            u = magnus_segment(d, v, drive, 0.0, rem, std::max(8, static_cast<int>(spp * rem / period) + 1)) * u;
        return u;
    }

    // cosine_ramp: integrate the ramps directly, power the flat middle.
    // During the flat section b = 1, so folding the elapsed time into the
    // drive phase makes it exactly periodic.
    const double tr = drive.ramp_fraction * drive.duration;
    Cmat u = magnus_segment(d, v, drive, 0.0, tr, std::max(8, static_cast<int>(spp * tr / period) + 1));
    const double flat = drive.duration - 2.0 * tr;
    if (flat > 0.0) {
        DriveSpec shifted = drive;
        shifted.envelope = Envelope::rect;
        shifted.phase = drive.phase + 2.0 * M_PI * drive.carrier * tr;
        shifted.duration = flat;
        const long long nper = static_cast<long long>(std::floor(flat / period));
        Cmat uf = powered(magnus_segment(d, v, shifted, 0.0, period, spp), nper);
        const double rem = flat - nper * period;
        if (rem > 1e-13 * drive.duration)
            uf = magnus_segment(d, v, shifted, 0.0, rem, std::max(8, static_cast<int>(spp * rem / period) + 1)) * uf;
        u = uf * u;
    }
    u = magnus_segment(d, v, drive, drive.duration - tr, tr, std::max(8, static_cast<int>(spp * tr / period) + 1)) * u;
    return u;
}

}  // namespace detail

/// Result of an exact gate simulation.
struct GateResult {
    Cmat unitary_4;       // full-manifold propagator, H_dc eigenbasis
    Cmat qubit_2;         // projection on |1>,|2> in the carrier rotating frame
    double leakage = 0.0;     // Bloch-averaged population loss from the qubit subspace
    double infidelity = 0.0;  // gauge-minimized infidelity against the RWA prediction
};

/// 2x2 rotation exp(i theta n.sigma), n equatorial at angle axis_phase.
inline Cmat rwa_gate(double theta, double axis_phase) {
    Cmat u(2);
    const double c = std::cos(theta), s = std::sin(theta);
    u(0, 0) = c;
    u(1, 1) = c;
    u(0, 1) = cplx(0.0, s) * std::polar(1.0, -axis_phase);
    u(1, 0) = cplx(0.0, s) * std::polar(1.0, axis_phase);
    return u;
}

inline Cmat pauli_rotation_x(double angle) { return rwa_gate(-angle / 2.0, 0.0); }  // R_x(angle)

/// Closed-form Bloch-sphere average of |<psi|V^dag M|psi>|^2 for 2x2 M.
inline double fidelity_closed_form(const Cmat& m, const Cmat& v) {
    const Cmat a = v.adjoint() * m;
    const cplx a0 = 0.5 * (a(0, 0) + a(1, 1));
    const cplx az = 0.5 * (a(0, 0) - a(1, 1));
    const cplx ax = 0.5 * (a(0, 1) + a(1, 0));
    const cplx ay = 0.5 * (cplx(0, 1) * (a(0, 1) - a(1, 0)));
    return std::norm(a0) + (std::norm(ax) + std::norm(ay) + std::norm(az)) / 3.0;
}

/// Average gate fidelity over the Bloch sphere by product quadrature
/// (Gauss-Legendre in cos(theta) x trapezoid in phi). The projected map may
/// be non-unitary; leakage then depresses the result.
inline double average_fidelity(const Cmat& u_qubit, const Cmat& v, int n_theta = 32, int n_phi = 64) {
    if (!v.is_hermitian() && (v * v.adjoint() - Cmat::identity(2)).max_abs() > 1e-8)
        throw Error("average_fidelity: target gate is not unitary");
    return bloch_average(
        [&](const Cvec& psi) {
            const Cvec w = u_qubit * psi;
            const Cvec t = v * psi;
            return std::norm(dot(t, w));
        },
        n_theta, n_phi);
}

/// Fidelity maximized over the rotating-frame phase gauge (a z-rotation
/// conjugation, i.e. the free choice of equatorial axis origin).
inline double gauge_fidelity(const Cmat& m, const Cmat& v) {
    auto fid = [&](double chi) {
        Cmat rz(2);
        rz(0, 0) = std::polar(1.0, -0.5 * chi);
        rz(1, 1) = std::polar(1.0, 0.5 * chi);
        return fidelity_closed_form(rz * m * rz.adjoint(), v);
    };
    double best_chi = 0.0, best = -1.0;
    for (int k = 0; k < 64; ++k) {
        const double chi = 2.0 * M_PI * k / 64;
        const double f = fid(chi);
        if (f > best) {
            best = f;
            best_chi = chi;
        }
    }
    double a = best_chi - 2.0 * M_PI / 64, b = best_chi + 2.0 * M_PI / 64;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), dd = a + gr * (b - a);
    double fc = fid(c), fd = fid(dd);
    for (int it = 0; it < 60; ++it) {
        if (fc > fd) {
            b = dd;
            dd = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = fid(c);
        } else {
            a = c;
            c = dd;
            fc = fd;
            dd = a + gr * (b - a);
            fd = fid(dd);
        }
    }
    return std::max(best, std::max(fc, fd));
}

/// Carrier for resonant driving: the numeric qubit splitting of H_dc.
inline double resonant_carrier(const SpeciesParams& p, const StrainConfig& s, const FieldVector& b_dc) {
    return numeric_splittings(build_static_hamiltonian(p, {Manifold::ground}, s, b_dc)).delta_g;
}

/// Exact four-level gate simulation: H(t) = H_dc + b(t) cos(2 pi carrier t +
/// phase) * H_Zeeman(B_ac), integrated in the H_dc eigenbasis.
inline GateResult simulate_gate(const SpeciesParams& p, const StrainConfig& s, const FieldVector& b_dc,
                                const DriveSpec& drive) {
    drive.validate();
    const Cmat h0 = build_static_hamiltonian(p, {Manifold::ground}, s, b_dc);
    const EigenSystem es = hermitian_eigensystem(h0);

    Cmat vac(4);
    if (drive.b_ac.magnitude > 0.0) {
        const Cmat hz = build_static_hamiltonian(p, {Manifold::ground}, StrainConfig(), drive.b_ac) -
                        build_static_hamiltonian(p, {Manifold::ground}, StrainConfig(), FieldVector());
        vac = es.vectors.adjoint() * hz * es.vectors;
    }
    Cmat d(4);
    for (int i = 0; i < 4; ++i) d(i, i) = es.energies[i];

    GateResult r;
    r.unitary_4 = detail::drive_propagator(d, vac, drive);

    // rotating frame of the carrier on the qubit pair, phase referenced to pulse start
    const double mid = 0.5 * (es.energies[0] + es.energies[1]);
    Cmat m(2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m(i, j) = r.unitary_4(i, j);
    Cmat frame(2);
    frame(0, 0) = std::polar(1.0, 2.0 * M_PI * (mid - 0.5 * drive.carrier) * drive.duration);
    frame(1, 1) = std::polar(1.0, 2.0 * M_PI * (mid + 0.5 * drive.carrier) * drive.duration);
    r.qubit_2 = frame * m;

    double keep = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) keep += std::norm(r.qubit_2(i, j));
    r.leakage = std::clamp(1.0 - 0.5 * keep, 0.0, 1.0);

    // RWA reference: rotation about an equatorial axis by the pulse area
    const double omega_ghz = std::abs(vac(0, 1));
    const double theta = M_PI * omega_ghz * drive.envelope_area();
    r.infidelity = std::clamp(1.0 - gauge_fidelity(r.qubit_2, rwa_gate(theta, 0.0)), 0.0, 1.0);
    return r;
}

/// Euler-angle pulse decomposition: V = R_x(alpha) R_y(beta) R_x(gamma) up to
/// global phase, alpha/gamma in (-2pi, 2pi], beta in [0, pi].
struct EulerXYX {
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
};

inline EulerXYX su2_decompose(const Cmat& v) {
    if (v.dim() != 2) throw Error("su2_decompose: expected 2x2");
    if ((v * v.adjoint() - Cmat::identity(2)).max_abs() > 1e-10)
        throw Error("su2_decompose: input is not unitary to 1e-10");
    const cplx det = v(0, 0) * v(1, 1) - v(0, 1) * v(1, 0);
    const cplx ph = std::sqrt(det);
    Cmat w = v * (1.0 / ph);

    // x-y-x angles of W equal z-y-z angles of Ry(-pi/2) W Ry(pi/2)
    auto ry = [](double t) {
        Cmat r(2);
        r(0, 0) = std::cos(t / 2);
        r(0, 1) = -std::sin(t / 2);
        r(1, 0) = std::sin(t / 2);
        r(1, 1) = std::cos(t / 2);
        return r;
    };
    const Cmat mm = ry(-M_PI / 2) * w * ry(M_PI / 2);

    EulerXYX e;
    const double c = std::abs(mm(0, 0)), sn = std::abs(mm(1, 0));
    e.beta = 2.0 * std::atan2(sn, c);
    if (sn < 1e-12) {
        e.alpha = -2.0 * std::arg(mm(0, 0));
        e.gamma = 0.0;
    } else if (c < 1e-12) {
        e.alpha = 2.0 * std::arg(mm(1, 0));
        e.gamma = 0.0;
    } else {
        const double sum = -2.0 * std::arg(mm(0, 0));
        const double dif = 2.0 * std::arg(mm(1, 0));
        e.alpha = 0.5 * (sum + dif);
        e.gamma = 0.5 * (sum - dif);
    }
    return e;
}

inline Cmat euler_xyx_gate(const EulerXYX& e) {
    auto rx = [](double t) { return pauli_rotation_x(t); };
    Cmat ry(2);
    ry(0, 0) = std::cos(e.beta / 2);
    ry(0, 1) = -std::sin(e.beta / 2);
    ry(1, 0) = std::sin(e.beta / 2);
    ry(1, 1) = std::cos(e.beta / 2);
    return rx(e.alpha) * ry * rx(e.gamma);
}

namespace detail {

template <class Fn>
double golden_min(Fn&& f, double a, double b, int iters, double* fbest = nullptr) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    const double xm = 0.5 * (a + b);
    if (fbest) *fbest = f(xm);
    return xm;
}

}  // namespace detail

enum class GateTarget { pi, pi_half };

inline Cmat target_gate(GateTarget t) { return pauli_rotation_x(t == GateTarget::pi ? M_PI : M_PI / 2); }

struct OptimizedGate {
    double b_ac = 0.0;       // tesla
    double duration = 0.0;   // ns
    double infidelity = 0.0;
    double carrier = 0.0;    // GHz
    double phase = 0.0;      // rad
};

/// Scalar gate-duration optimization: for each candidate B_ac magnitude, a
/// bracketing scan plus golden-section refinement (1e-3 ns) of the infidelity
/// against the target rotation; returns the best point found.
inline OptimizedGate optimize_gate_time(const SpeciesParams& p, const StrainConfig& s, const FieldVector& b_dc,
                                        GateTarget target, const FieldVector& b_ac_direction,
                                        const std::vector<double>& b_ac_candidates) {
    const double carrier = resonant_carrier(p, s, b_dc);
    const Cmat tgt = target_gate(target);
    OptimizedGate best;
    best.infidelity = 2.0;

    for (double bac : b_ac_candidates) {
        FieldVector bv(bac, b_ac_direction.theta, b_ac_direction.phi);
        const double omega = rabi_frequency(p, Manifold::ground, s, b_dc, bv) * 1e-3;  // GHz
        if (!(omega > 0.0)) throw Error("optimize_gate_time: drive produces no coupling (flat landscape)");
        const double tnom = (target == GateTarget::pi ? 0.5 : 0.25) / omega;

        auto infid = [&](double T) {
            DriveSpec dr;
            dr.b_ac = bv;
            dr.carrier = carrier;
            dr.duration = T;
            const GateResult r = simulate_gate(p, s, b_dc, dr);
            return 1.0 - gauge_fidelity(r.qubit_2, tgt);
        };

        // coarse bracket over a wide window (the analytic duration can be off
        // when the reduction is marginal), then golden polish
        const int nscan = 48;
        double fmin = 2.0, tmin = tnom;
        bool interior = false;
        for (int k = 0; k < nscan; ++k) {
            const double T = tnom * (0.55 + 0.9 * k / (nscan - 1));
            const double f = infid(T);
            if (f < fmin) {
                fmin = f;
                tmin = T;
                interior = (k > 0 && k < nscan - 1);
            }
        }
        if (!interior) throw Error("optimize_gate_time: no interior minimum in the duration bracket");
        const double dt = tnom * 0.9 / (nscan - 1);
        int iters = static_cast<int>(std::ceil(std::log((2 * dt) / 1e-3) / std::log(1.0 / 0.618))) + 1;
        iters = std::clamp(iters, 10, 60);
        double fbest = 0.0;
        const double tstar = detail::golden_min(infid, tmin - dt, tmin + dt, iters, &fbest);
        if (fbest < best.infidelity) best = {bac, tstar, fbest, carrier, 0.0};
    }
    return best;
}

/// Fully calibrated gate for the fidelity benchmark: coordinate descent over
/// carrier shift, duration and drive phase (all deterministic golden-section
/// passes), with the frame azimuth treated as gauge.
inline OptimizedGate calibrate_gate(const SpeciesParams& p, const StrainConfig& s, const FieldVector& b_dc,
                                    const FieldVector& b_ac, GateTarget target, int rounds = 5) {
    const double dg = resonant_carrier(p, s, b_dc);
    const double omega = rabi_frequency(p, Manifold::ground, s, b_dc, b_ac) * 1e-3;  // GHz
    if (!(omega > 0.0)) throw Error("calibrate_gate: no drive coupling");
    const Cmat tgt = target_gate(target);
    const double tnom = (target == GateTarget::pi ? 0.5 : 0.25) / omega;
    const double bs = omega * omega / (4.0 * dg);  // Bloch-Siegert scale

    double shift = 0.0, T = tnom, phase = 0.0;
    auto infid = [&](double sh, double tt, double ph) {
        DriveSpec dr;
        dr.b_ac = b_ac;
        dr.carrier = dg + sh;
        dr.duration = tt;
        dr.phase = ph;
        const GateResult r = simulate_gate(p, s, b_dc, dr);
        return 1.0 - gauge_fidelity(r.qubit_2, tgt);
    };
    double f = infid(shift, T, phase);
    for (int rd = 0; rd < rounds; ++rd) {
        shift = detail::golden_min([&](double q) { return infid(q, T, phase); }, shift - 8 * bs, shift + 8 * bs, 48);
        T = detail::golden_min([&](double q) { return infid(shift, q, phase); }, T * 0.97, T * 1.03, 48);
        if (rd >= 1)
            phase = detail::golden_min([&](double q) { return infid(shift, T, q); }, phase - 0.05, phase + 0.05, 40);
        f = infid(shift, T, phase);
        if (f < 1e-13) break;
    }
    return {b_ac.magnitude, T, f, dg + shift, phase};
}

}  // namespace g4v
