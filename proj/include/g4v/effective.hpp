#pragma once

#include <limits>

#include "g4v/hamiltonian.hpp"

namespace g4v {

/// Mixing angle of the orbital doublet: tan(x) = xi / lambda, with
/// xi^2 = ups_x^2 + ups_y^2 combining Jahn-Teller and strain.
struct MixingAngle {
    double x = 0.0;          // rad, in [0, pi/2]
    double xi = 0.0;         // GHz
    double upsilon_x = 0.0;  // GHz
    double upsilon_y = 0.0;  // GHz
};

inline MixingAngle mixing_angle(const SpeciesParams& p, Manifold m, const StrainConfig& s) {
    const OrbitalCouplings oc = orbital_couplings(p, m, s);
    const double xi = std::hypot(oc.upsilon_x, oc.upsilon_y);
    const double lam = manifold_row(p, m).lambda;
    return {std::atan2(xi, lam), xi, oc.upsilon_x, oc.upsilon_y};
}

/// Effective axial g-factor: 1 + f*(gamma_l/gamma_s)*cos(x). The orbital
/// Zeeman contribution survives quenching in proportion to cos(x).
inline double axial_factor(double x, double f) { return 1.0 + f * (kGammaL / kGammaS) * std::cos(x); }

/// Theta(Bz) = -Bz * axial_factor, the axial part of the reduced Zeeman term.
inline double theta_axial(double b_z, double x, double f) { return -b_z * axial_factor(x, f); }

/// Qubit splitting of the reduced two-level model, GHz.
inline double delta_g_analytic(const SpeciesParams& p, Manifold m, const StrainConfig& s, const FieldVector& b_dc) {
    const MixingAngle mx = mixing_angle(p, m, s);
    const double f = require(manifold_row(p, m).f, "f", p.species);
    const auto B = b_dc.cartesian();
    const double th = theta_axial(B[2], mx.x, f);
    return 2.0 * kGammaS * std::hypot(std::sin(mx.x) * std::hypot(B[0], B[1]), th);
}

/// 3x3 coupling matrix between the lab-frame ac field and the reduced qubit:
/// H_ac = -(1/2) (mu . B_ac) . sigma. Built from the projected operator form
/// (direction cosines of the dc field), so the removable singularities of the
/// printed component ratios (B_x, B_y or B_z = 0) never divide by zero.
/// Units GHz/T. Depends on the dc field direction only.
inline std::array<std::array<double, 3>, 3> mu_matrix(const SpeciesParams& p, Manifold m, const StrainConfig& s,
                                                      const FieldVector& b_dc) {
    const MixingAngle mx = mixing_angle(p, m, s);
    const double f = require(manifold_row(p, m).f, "f", p.species);
    const double sp = std::sin(mx.x);
    const double q = axial_factor(mx.x, f);
    const double st = std::sin(b_dc.theta), ct = std::cos(b_dc.theta);
    const double cp = std::cos(b_dc.phi), sph = std::sin(b_dc.phi);
    const double dh = std::hypot(sp * st, q * ct);
    if (dh < 1e-14)
        throw Error("mu_matrix: qubit splitting vanishes (x = 0 with equatorial dc field); mu is undefined");
    const double g2 = 2.0 * kGammaS;
    return {{{-g2 * sp * q * cp * ct / dh, -g2 * sp * q * sph * ct / dh, g2 * q * sp * st / dh},
             {g2 * sp * sph, -g2 * sp * cp, 0.0},
             {g2 * sp * sp * st * cp / dh, g2 * sp * sp * st * sph / dh, g2 * q * q * ct / dh}}};
}

/// Relative geometry of the two fields. Lambda depends on the azimuths only
/// through their difference phi = phi_dc - phi_ac.
struct FieldGeometry {
    double theta_dc = 0.0;
    double theta_ac = 0.0;
    double phi = 0.0;
};

inline double xi_factor(const FieldGeometry& g) { return std::sin(g.phi) * std::sin(g.theta_ac); }

inline double chi_factor(const FieldGeometry& g) {
    return std::sin(g.theta_dc) * std::cos(g.theta_ac) - std::cos(g.phi) * std::cos(g.theta_dc) * std::sin(g.theta_ac);
}

inline double zeta_factor(double x, double f) { return std::sin(x) / axial_factor(x, f); }

/// Dimensionless microwave coupling efficiency Lambda; Omega = gamma_s B_ac Lambda.
inline double coupling_lambda(const FieldGeometry& g, double x, double f) {
    const double s = std::sin(x);
    const double q = axial_factor(x, f);
    const double xi = xi_factor(g);
    const double chi = chi_factor(g);
    const double st = std::sin(g.theta_dc), ct = std::cos(g.theta_dc);
    // chi term written as chi^2 q^2 s^2 / (s^2 st^2 + q^2 ct^2): finite limit
    // at x -> 0 with an equatorial dc field.
    const double den = s * s * st * st + q * q * ct * ct;
    double chi_term;
    if (den < 1e-300)
        chi_term = chi * chi * q * q;  // x = 0 and theta_dc = pi/2 limit
    else
        chi_term = chi * chi * q * q * s * s / den;
    return std::sqrt(s * s * xi * xi + chi_term);
}

/// Small-x and large-xi closed-form limits of Lambda.
struct LambdaLimits {
    double f_small_x = 0.0;   // Lambda / x as x -> 0 (unbounded at theta_dc = pi/2)
    double g_large_xi = 0.0;  // Lambda as x -> pi/2 (free-electron limit)
};

inline LambdaLimits lambda_limits(const FieldGeometry& g) {
    const double xi = xi_factor(g);
    const double chi = chi_factor(g);
    LambdaLimits out;
    out.g_large_xi = std::hypot(xi, chi);
    const double ct = std::cos(g.theta_dc);
    if (std::abs(ct) < 1e-15 && std::abs(std::cos(g.theta_ac)) > 0.0)
        out.f_small_x = std::numeric_limits<double>::infinity();
    else {
        const double t = std::cos(g.phi) * std::sin(g.theta_ac) - std::cos(g.theta_ac) * std::tan(g.theta_dc);
        out.f_small_x = std::hypot(std::sin(g.phi) * std::sin(g.theta_ac), t);
    }
    return out;
}

/// The two extremal field configurations: dc axial / ac equatorial (lambda1)
/// and dc equatorial / ac axial (lambda2, the global optimum).
struct ExtremalConfigs {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double ratio = 0.0;
};

inline ExtremalConfigs extremal_configs(double x, double f) {
    ExtremalConfigs e;
    e.lambda1 = std::sin(x);
    e.lambda2 = axial_factor(x, f);
    e.ratio = e.lambda1 > 0.0 ? e.lambda2 / e.lambda1 : std::numeric_limits<double>::infinity();
    return e;
}

/// Rabi frequency in MHz for the given dc/ac field pair (analytic model).
inline double rabi_frequency(const SpeciesParams& p, Manifold m, const StrainConfig& s, const FieldVector& b_dc,
                             const FieldVector& b_ac) {
    const MixingAngle mx = mixing_angle(p, m, s);
    const double f = require(manifold_row(p, m).f, "f", p.species);
    const FieldGeometry g{b_dc.theta, b_ac.theta, b_dc.phi - b_ac.phi};
    return kGammaS * b_ac.magnitude * coupling_lambda(g, mx.x, f) * 1e3;
}

/// Reduced two-level model for a concrete field pair.
struct EffectiveQubit {
    double x = 0.0;                                 // rad
    double xi = 0.0;                                // GHz
    double delta_g = 0.0;                           // GHz
    std::array<std::array<double, 3>, 3> mu{};      // GHz/T
    std::array<double, 3> rotation_axis{};          // unit, z component 0
    double rabi = 0.0;                              // MHz
    bool adiabatic_valid = true;                    // false when delta_g or rabi > 10% of branch splitting
};

inline EffectiveQubit make_effective_qubit(const SpeciesParams& p, Manifold m, const StrainConfig& s,
                                           const FieldVector& b_dc, const FieldVector& b_ac) {
    EffectiveQubit q;
    const MixingAngle mx = mixing_angle(p, m, s);
    q.x = mx.x;
    q.xi = mx.xi;
    q.delta_g = delta_g_analytic(p, m, s, b_dc);
    q.mu = mu_matrix(p, m, s, b_dc);
    const auto bac = b_ac.cartesian();
    double mb[3] = {0, 0, 0};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) mb[i] += q.mu[i][j] * bac[j];
    const double omega_ghz = 0.5 * std::hypot(mb[0], mb[1]);
    q.rabi = omega_ghz * 1e3;
    if (omega_ghz > 0.0)
        q.rotation_axis = {0.5 * mb[0] / omega_ghz, 0.5 * mb[1] / omega_ghz, 0.0};
    else
        q.rotation_axis = {1.0, 0.0, 0.0};
    const double lam = manifold_row(p, m).lambda;
    const double branch = 2.0 * std::hypot(lam, mx.xi);
    q.adiabatic_valid = (q.delta_g <= 0.1 * branch) && (omega_ghz <= 0.1 * branch);
    return q;
}

/// Lambda over a strain sweep for several quenching factors (dc equatorial,
/// ac axial geometry, where the orbital Zeeman amplifies the drive).
struct AmplificationPoint {
    double ex = 0.0;
    double f = 0.0;
    double lambda = 0.0;
};

inline std::vector<AmplificationPoint> amplification_curve(const SpeciesParams& p, Manifold m,
                                                           const std::vector<double>& ex_values,
                                                           const std::vector<double>& f_values) {
    std::vector<AmplificationPoint> out;
    out.reserve(ex_values.size() * f_values.size());
    const FieldGeometry g{M_PI / 2, 0.0, 0.0};
    for (double f : f_values)
        for (double ex : ex_values) {
            const MixingAngle mx = mixing_angle(p, m, StrainConfig(ex, 0.0));
            out.push_back({ex, f, coupling_lambda(g, mx.x, f)});
        }
    return out;
}

}  // namespace g4v
