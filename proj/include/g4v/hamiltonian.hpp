#pragma once

#include <optional>

#include "g4v/numerics/eigen.hpp"
#include "g4v/numerics/matrix.hpp"
#include "g4v/species.hpp"

namespace g4v {

/// dc or ac magnetic field: magnitude plus polar/azimuthal angles relative to
/// the defect symmetry axis (z).
struct FieldVector {
    double magnitude = 0.0;  // tesla
    double theta = 0.0;      // rad, polar from z
    double phi = 0.0;        // rad, azimuth

    FieldVector() = default;
    FieldVector(double b, double th, double ph) : magnitude(b), theta(th), phi(ph) {
        if (b < 0.0) throw ConfigError("FieldVector: magnitude must be >= 0");
        if (th < 0.0 || th > M_PI) throw ConfigError("FieldVector: theta must lie in [0, pi]");
    }

    std::array<double, 3> cartesian() const {
        return {magnitude * std::cos(phi) * std::sin(theta), magnitude * std::sin(phi) * std::sin(theta),
                magnitude * std::cos(theta)};
    }
};

/// External strain components. Internal strain is folded into the
/// Jahn-Teller constants; zero here means zero external strain.
struct StrainConfig {
    double ex = 0.0;       // eps_xx - eps_yy
    double eps_xy = 0.0;

    StrainConfig() = default;
    StrainConfig(double e, double exy, double sanity_bound = 1e-2) : ex(e), eps_xy(exy) {
        if (std::abs(e) > sanity_bound || std::abs(exy) > sanity_bound)
            throw ConfigError("StrainConfig: |strain| exceeds sanity bound " + std::to_string(sanity_bound));
    }
};

struct ManifoldSelector {
    Manifold manifold = Manifold::ground;
};

namespace detail {

/// Orbital (x/y doublet) x spin ordering: |x up>, |x dn>, |y up>, |y dn>.
inline void add_orbital(Cmat& h, double oxx, cplx oxy) {
    // [[oxx, oxy],[conj(oxy), -oxx]] (x) I_spin
    for (int s = 0; s < 2; ++s) {
        h(0 + s, 0 + s) += oxx;
        h(2 + s, 2 + s) += -oxx;
        h(0 + s, 2 + s) += oxy;
        h(2 + s, 0 + s) += std::conj(oxy);
    }
}

}  // namespace detail

/// Combined Jahn-Teller + external-strain orbital couplings.
struct OrbitalCouplings {
    double upsilon_x = 0.0;  // GHz, d*Ex + Ups_x
    double upsilon_y = 0.0;  // GHz, 2*d*eps_xy + Ups_y
};

inline OrbitalCouplings orbital_couplings(const SpeciesParams& p, Manifold m, const StrainConfig& s) {
    const ManifoldRow row = manifold_row(p, m);
    const double ux0 = require(row.upsilon_x, m == Manifold::ground ? "upsilon_x_g" : "upsilon_x_e", p.species);
    const double uy0 = require(row.upsilon_y, m == Manifold::ground ? "upsilon_y_g" : "upsilon_y_e", p.species);
    double d = 0.0;
    if (s.ex != 0.0 || s.eps_xy != 0.0)
        d = require(row.d, m == Manifold::ground ? "d_g" : "d_e", p.species);
    return {d * s.ex + ux0, 2.0 * d * s.eps_xy + uy0};
}

/// Static four-level Hamiltonian of one manifold: spin-orbit + Jahn-Teller +
/// strain + Zeeman, in the |x up>, |x dn>, |y up>, |y dn> basis. GHz.
inline Cmat build_static_hamiltonian(const SpeciesParams& p, ManifoldSelector m, const StrainConfig& s,
                                     const FieldVector& b_dc) {
    const ManifoldRow row = manifold_row(p, m.manifold);
    const OrbitalCouplings oc = orbital_couplings(p, m.manifold, s);
    Cmat h(4);

    // spin-orbit: lambda * sigma_y(orb) (x) sigma_z(spin)
    const double lam = row.lambda;
    h(0, 2) += cplx(0.0, -lam);
    h(2, 0) += cplx(0.0, lam);
    h(1, 3) += cplx(0.0, lam);
    h(3, 1) += cplx(0.0, -lam);

    // Jahn-Teller + strain (identical structure)
    detail::add_orbital(h, oc.upsilon_x, oc.upsilon_y);

    if (b_dc.magnitude > 0.0) {
        const double fq = require(row.f, "f", p.species);
        const auto B = b_dc.cartesian();
        // orbital Zeeman, quenched: -f*gamma_L*Bz * sigma_y(orb) (x) I
        for (int sp = 0; sp < 2; ++sp) {
            h(0 + sp, 2 + sp) += cplx(0.0, fq * kGammaL * B[2]);
            h(2 + sp, 0 + sp) += cplx(0.0, -fq * kGammaL * B[2]);
        }
        // spin Zeeman: gamma_S * I (x) (B . sigma)
        for (int orb = 0; orb < 2; ++orb) {
            const int u = 2 * orb, dn = 2 * orb + 1;
            h(u, u) += kGammaS * B[2];
            h(dn, dn) += -kGammaS * B[2];
            h(u, dn) += kGammaS * cplx(B[0], -B[1]);
            h(dn, u) += kGammaS * cplx(B[0], B[1]);
        }
    }
    return h;
}

/// Ground + excited manifolds, block diagonal, excited block offset by the
/// zero-phonon-line frequency. Ordering: ground 0..3, excited 4..7. GHz.
inline Cmat build_eight_level(const SpeciesParams& p, const StrainConfig& s, const FieldVector& b_dc,
                              double zpl_thz) {
    const Cmat hg = build_static_hamiltonian(p, {Manifold::ground}, s, b_dc);
    const Cmat he = build_static_hamiltonian(p, {Manifold::excited}, s, b_dc);
    Cmat h(8);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            h(i, j) = hg(i, j);
            h(4 + i, 4 + j) = he(i, j);
        }
    const double zpl_ghz = zpl_thz * 1e3;
    for (int i = 4; i < 8; ++i) h(i, i) += zpl_ghz;
    return h;
}

struct Splittings {
    double delta_g = 0.0;               // GHz, qubit splitting e2 - e1
    double branch_gap = 0.0;            // GHz, e3 - e2 of the ground block
    std::optional<double> delta_e;      // GHz, excited-block splitting (8x8 only)
};

/// Level splittings extracted numerically from a built Hamiltonian.
inline Splittings numeric_splittings(const Cmat& h) {
    if (h.dim() == 4) {
        const EigenSystem es = hermitian_eigensystem(h);
        return {es.energies[1] - es.energies[0], es.energies[2] - es.energies[1], std::nullopt};
    }
    if (h.dim() == 8) {
        Cmat hg(4), he(4);
        double off = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                hg(i, j) = h(i, j);
                he(i, j) = h(4 + i, 4 + j);
                off = std::max({off, std::abs(h(i, 4 + j)), std::abs(h(4 + i, j))});
            }
        if (off > 1e-9 * std::max(h.max_abs(), 1.0))
            throw Error("numeric_splittings: 8x8 input is not block diagonal");
        const EigenSystem eg = hermitian_eigensystem(hg);
        const EigenSystem ee = hermitian_eigensystem(he);
        return {eg.energies[1] - eg.energies[0], eg.energies[2] - eg.energies[1],
                ee.energies[1] - ee.energies[0]};
    }
    throw Error("numeric_splittings: expected a 4x4 or 8x8 operator");
}

}  // namespace g4v
