#pragma once

#include <map>
#include <utility>

#include "g4v/gates.hpp"

namespace g4v {

/// Physical constants for the spontaneous-emission rate formula (SI).
inline constexpr double kElementaryCharge = 1.602176634e-19;   // C
inline constexpr double kEpsilon0 = 8.8541878128e-12;          // F/m
inline constexpr double kHbar = 1.054571817e-34;               // J s
inline constexpr double kSpeedOfLight = 2.99792458e8;          // m/s
inline constexpr double kRefractiveIndex = 2.42;               // diamond

/// Transition-dipole structure on the eight-level basis (ground 0..3,
/// excited 4..7; each block in the |x up>,|x dn>,|y up>,|y dn> order).
/// Only the symmetry-allowed pattern is fixed; eta sets the magnitude.
struct DipoleSet {
    Cmat p_x{8}, p_y{8}, p_z{8};
    double eta = 8.67635e-10;
};

inline DipoleSet dipole_operators(double eta = 8.67635e-10) {
    DipoleSet d;
    d.eta = eta;
    d.p_x = Cmat(8);
    d.p_y = Cmat(8);
    d.p_z = Cmat(8);
    const double px[4] = {1, 1, -1, -1};
    for (int k = 0; k < 4; ++k) {
        d.p_x(k, 4 + k) = px[k];
        d.p_x(4 + k, k) = px[k];
        d.p_z(k, 4 + k) = 2.0;
        d.p_z(4 + k, k) = 2.0;
    }
    // p_y couples the two orbitals with sign -1, spin diagonal
    const int swap[4] = {2, 3, 0, 1};
    for (int k = 0; k < 4; ++k) {
        d.p_y(k, 4 + swap[k]) = -1.0;
        d.p_y(4 + swap[k], k) = -1.0;
    }
    return d;
}

/// Optical and phononic relaxation rates. All rates in GHz (= 1/ns).
struct RateSet {
    std::map<std::pair<int, int>, double> gamma_opt;     // (i,5) -> rate
    std::map<std::pair<int, int>, double> gamma_phonon;  // (i,j) ground pairs, i<j
    double gamma_init = 0.0;

    double opt(int i) const { return gamma_opt.at({i, 5}); }
    double ph(int i, int j) const { return gamma_phonon.at({i, j}); }
};

/// Eight-level eigensystem solved block by block (the Hamiltonian is block
/// diagonal and the manifolds must not mix through numerics).
inline EigenSystem eight_level_eigensystem(const Cmat& h8) {
    Cmat hg(4), he(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            hg(i, j) = h8(i, j);
            he(i, j) = h8(4 + i, 4 + j);
        }
    const EigenSystem eg = hermitian_eigensystem(hg);
    const EigenSystem ee = hermitian_eigensystem(he);
    EigenSystem out;
    out.energies.resize(8);
    out.vectors = Cmat(8);
    for (int k = 0; k < 4; ++k) {
        out.energies[k] = eg.energies[k];
        out.energies[4 + k] = ee.energies[k];
        for (int i = 0; i < 4; ++i) {
            out.vectors(i, k) = eg.vectors(i, k);
            out.vectors(4 + i, 4 + k) = ee.vectors(i, k);
        }
    }
    return out;
}

/// Spontaneous-emission rates gamma_i5 from the lowest excited eigenstate
/// into the four ground eigenstates. Frequencies are ordinary (nu^3), which
/// is the convention under which the tabulated eta reproduces the measured
/// lifetime. Returns rates in GHz.
inline RateSet radiative_rates(const SpeciesParams& p, const StrainConfig& s, const FieldVector& b_dc,
                               std::optional<double> zpl_thz = std::nullopt,
                               std::optional<double> eta_in = std::nullopt) {
    const double zpl = zpl_thz ? *zpl_thz : require(p.zpl_frequency, "zpl_frequency", p.species);
    const double eta = eta_in ? *eta_in : require(p.eta, "eta", p.species);

    const Cmat h8 = build_eight_level(p, s, b_dc, zpl);
    const EigenSystem es = eight_level_eigensystem(h8);
    const DipoleSet dip = dipole_operators(eta);

    RateSet r;
    const double pref = kRefractiveIndex * std::pow(kElementaryCharge * eta, 2) /
                        (3.0 * M_PI * kEpsilon0 * kHbar * std::pow(kSpeedOfLight, 3));
    for (int i = 0; i < 4; ++i) {
        double strength = 0.0;
        for (const Cmat* m : {&dip.p_x, &dip.p_y, &dip.p_z}) {
            const Cmat mt = es.vectors.adjoint() * (*m) * es.vectors;
            strength += std::norm(mt(i, 4));
        }
        const double nu_hz = (es.energies[4] - es.energies[i]) * 1e9;
        r.gamma_opt[{i + 1, 5}] = pref * std::pow(nu_hz, 3) * strength * 1e-9;  // 1/s -> GHz
    }
    return r;
}

/// Ground-manifold strain operators transformed into the H_dc eigenbasis:
/// L_Ex = |x><x| - |y><y|, L_exy = |x><y| + |y><x| (spin identity), then
/// Lt = P^dag L P.
struct PhononElements {
    Cmat l_ex_tilde{4};
    Cmat l_epsxy_tilde{4};
};

inline PhononElements phonon_coupling_elements(const SpeciesParams& p, const StrainConfig& s,
                                               const FieldVector& b_dc) {
    const Cmat h = build_static_hamiltonian(p, {Manifold::ground}, s, b_dc);
    const EigenSystem es = hermitian_eigensystem(h);
    Cmat lex(4), lxy(4);
    for (int sp = 0; sp < 2; ++sp) {
        lex(sp, sp) = 1.0;
        lex(2 + sp, 2 + sp) = -1.0;
        lxy(sp, 2 + sp) = 1.0;
        lxy(2 + sp, sp) = 1.0;
    }
    PhononElements out;
    out.l_ex_tilde = es.vectors.adjoint() * lex * es.vectors;
    out.l_epsxy_tilde = es.vectors.adjoint() * lxy * es.vectors;
    return out;
}

/// Golden-rule phonon rates gamma_ij = 2 pi rho |<i|Lt|j>|^2 summed over the
/// two strain modes. rho_dos is a single user-set scale (GHz); only rate
/// ratios enter the initialization model.
inline RateSet phonon_rates(const PhononElements& el, double rho_dos) {
    if (!(rho_dos >= 0.0)) throw ConfigError("phonon_rates: rho_dos must be supplied and non-negative");
    RateSet r;
    for (const auto& [i, j] : {std::pair{1, 3}, std::pair{2, 3}, std::pair{1, 4}, std::pair{2, 4}}) {
        const double w = std::norm(el.l_ex_tilde(i - 1, j - 1)) + std::norm(el.l_epsxy_tilde(i - 1, j - 1));
        r.gamma_phonon[{i, j}] = 2.0 * M_PI * rho_dos * w;
    }
    return r;
}

/// Closed-form initialization rate. Evaluated in the regularized form
/// g25/2 + (g35/2) g23/(g13+g23) + (g45/2) g24/(g14+g24), which equals the
/// printed expression wherever that one is defined and extends it by its
/// limits at vanishing spin-non-conserving rates.
inline double gamma_init_closed_form(const RateSet& r) {
    const double g25 = r.opt(2), g35 = r.opt(3), g45 = r.opt(4);
    const double g13 = r.ph(1, 3), g23 = r.ph(2, 3), g14 = r.ph(1, 4), g24 = r.ph(2, 4);
    for (double g : {g25, g35, g45, g13, g23, g14, g24})
        if (g < 0.0) throw Error("gamma_init_closed_form: negative rate");
    double acc = 0.5 * g25;
    if (g35 > 0.0) {
        if (g13 + g23 <= 0.0)
            throw Error("gamma_init_closed_form: branch |3> has feed but no drain (degenerate branching)");
        acc += 0.5 * g35 * g23 / (g13 + g23);
    }
    if (g45 > 0.0) {
        if (g14 + g24 <= 0.0)
            throw Error("gamma_init_closed_form: branch |4> has feed but no drain (degenerate branching)");
        acc += 0.5 * g45 * g24 / (g14 + g24);
    }
    return acc;
}

/// Density matrix with the physicality checks used along trajectories.
struct DensityMatrix {
    Cmat rho;

    explicit DensityMatrix(Cmat m) : rho(std::move(m)) {}

    double trace_error() const { return std::abs(rho.trace() - 1.0); }
    double hermiticity() const { return rho.hermiticity_error(); }
    double min_eigenvalue() const {
        Cmat h(rho.dim());
        for (int i = 0; i < rho.dim(); ++i)
            for (int j = 0; j < rho.dim(); ++j) h(i, j) = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
        return hermitian_eigensystem(h).energies.front();
    }
    void check(double trace_tol = 1e-9, double herm_tol = 1e-10, double pos_tol = -1e-9) const {
        if (trace_error() > trace_tol) throw Error("DensityMatrix: trace drift " + std::to_string(trace_error()));
        if (hermiticity() > herm_tol) throw Error("DensityMatrix: hermiticity violation");
        if (min_eigenvalue() < pos_tol) throw Error("DensityMatrix: negative eigenvalue");
    }
};

/// Lindblad master equation: drho/dt = -2 pi i [H, rho] + sum_k g_k (L rho
/// L^dag - 1/2 {L^dag L, rho}). H in GHz, rates in GHz = 1/ns, t in ns.
inline DensityMatrix evolve_master(const DensityMatrix& rho0, const Cmat& h,
                                   const std::vector<std::pair<double, Cmat>>& lindblads, double t, double tol = 1e-9) {
    const int n = rho0.rho.dim();
    for (const auto& [g, L] : lindblads)
        if (g < 0.0) throw Error("evolve_master: negative rate");

    std::vector<std::pair<double, Cmat>> ldl;  // precomputed L^dag L
    ldl.reserve(lindblads.size());
    for (const auto& [g, L] : lindblads) ldl.emplace_back(g, L.adjoint() * L);

    auto rhs = [&](double, const Cbuf& y, Cbuf& dy) {
        const Cmat r = y.to_mat(n);
        Cmat d = (h * r - r * h) * cplx(0.0, -2.0 * M_PI);
        for (size_t k = 0; k < lindblads.size(); ++k) {
            const double g = lindblads[k].first;
            if (g == 0.0) continue;
            const Cmat& L = lindblads[k].second;
            const Cmat& ll = ldl[k].second;
            d += (L * r * L.adjoint()) * cplx(g, 0.0);
            d += (ll * r + r * ll) * cplx(-0.5 * g, 0.0);
        }
        const Cbuf db = Cbuf::from_mat(d);
        for (int i = 0; i < n * n; ++i) dy[i] = db[i];
    };

    const Cbuf out = integrate_adaptive(rhs, Cbuf::from_mat(rho0.rho), 0.0, t, tol);
    DensityMatrix result(out.to_mat(n));
    if (result.trace_error() > 1e-7) throw Error("evolve_master: trace drift beyond 1e-7");
    return result;
}

/// Inputs of the five-level optical-pumping model (qubit + upper branch +
/// lowest excited state, resonantly driven 1 <-> 5).
struct InitializationModel {
    RateSet rates;            // optical gamma_i5 and phonon gamma_ij, GHz
    double omega_laser = 0.0;  // GHz, drive matrix element
};

inline InitializationModel make_initialization_model(const SpeciesParams& p, const StrainConfig& s,
                                                     const FieldVector& b_dc, double rho_dos,
                                                     double pump_factor = 10.0) {
    InitializationModel m;
    m.rates = radiative_rates(p, s, b_dc);
    const RateSet ph = phonon_rates(phonon_coupling_elements(p, s, b_dc), rho_dos);
    m.rates.gamma_phonon = ph.gamma_phonon;
    double tot = 0.0;
    for (auto& [k, v] : m.rates.gamma_opt) tot += v;
    m.omega_laser = pump_factor * tot;
    m.rates.gamma_init = gamma_init_closed_form(m.rates);
    return m;
}

/// Simulate the five-level Lindblad dynamics from the mixed qubit state and
/// fit the exponential initialization rate of rho_11. The Hamiltonian is
/// taken in the frame rotating with every level's static energy, where the
/// resonant drive is the only coherent term (jump operators of the form
/// |i><j| are frame-invariant), so populations are exact and the integration
/// is not stiff.
struct InitializationFit {
    double gamma_closed_form = 0.0;  // GHz
    double gamma_fitted = 0.0;       // GHz
    std::vector<double> times;       // ns
    std::vector<double> rho11;
    std::vector<double> rho22;
};

inline InitializationFit simulate_initialization(const InitializationModel& m, double hold_factor = 3.0,
                                                 int samples = 200, double tol = 1e-9) {
    InitializationFit fit;
    fit.gamma_closed_form = m.rates.gamma_init;
    const double gi = std::max(m.rates.gamma_init, 1e-9);
    const double t_end = hold_factor / gi;

    Cmat h(5);
    h(0, 4) = m.omega_laser;
    h(4, 0) = m.omega_laser;

    std::vector<std::pair<double, Cmat>> jumps;
    for (int i = 1; i <= 4; ++i) {
        Cmat L(5);
        L(i - 1, 4) = 1.0;
        jumps.emplace_back(m.rates.opt(i), L);
    }
    for (const auto& [ij, g] : m.rates.gamma_phonon) {
        Cmat L(5);
        L(ij.first - 1, ij.second - 1) = 1.0;
        jumps.emplace_back(g, L);
    }

    Cmat rho(5);
    rho(0, 0) = 0.5;
    rho(1, 1) = 0.5;
    DensityMatrix dm(rho);
    double t = 0.0;
    fit.times.push_back(0.0);
    fit.rho11.push_back(0.5);
    fit.rho22.push_back(0.5);
    for (int k = 1; k <= samples; ++k) {
        const double tk = t_end * k / samples;
        dm = evolve_master(dm, h, jumps, tk - t, tol);
        t = tk;
        dm.check(1e-8, 1e-9, -1e-8);
        fit.times.push_back(tk);
        fit.rho11.push_back(dm.rho(0, 0).real());
        fit.rho22.push_back(dm.rho(1, 1).real());
    }

    // log-linear least squares on rho11 after the pump/phonon transient
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (size_t k = 0; k < fit.times.size(); ++k) {
        if (fit.times[k] < 0.15 * t_end || fit.rho11[k] < 1e-4) continue;
        const double xx = fit.times[k], yy = std::log(fit.rho11[k]);
        sx += xx;
        sy += yy;
        sxx += xx * xx;
        sxy += xx * yy;
        ++cnt;
    }
    if (cnt < 8) throw Error("simulate_initialization: too few samples for the exponential fit");
    fit.gamma_fitted = -(cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    return fit;
}

/// Optical addressability: Delta = |Delta_e - Delta_g| against the larger of
/// the radiative linewidth 1/tau_rad and a user linewidth.
struct Addressability {
    bool pass = false;
    double margin_ghz = 0.0;
    double delta_ghz = 0.0;
    double threshold_ghz = 0.0;
};

inline Addressability addressability_check(const SpeciesParams& p, const StrainConfig& s, const FieldVector& b_dc,
                                           double linewidth_ghz = 0.0) {
    const double zpl = require(p.zpl_frequency, "zpl_frequency", p.species);
    const Splittings sp = numeric_splittings(build_eight_level(p, s, b_dc, zpl));
    const double gamma_rad = p.tau_rad ? 1.0 / *p.tau_rad : 0.0;
    Addressability a;
    a.delta_ghz = std::abs(*sp.delta_e - sp.delta_g);
    a.threshold_ghz = std::max(gamma_rad, linewidth_ghz);
    a.margin_ghz = a.delta_ghz - a.threshold_ghz;
    a.pass = a.margin_ghz > 0.0;
    return a;
}

/// gamma_init on a (strain, theta_dc) grid via the closed-form rate model.
struct InitRatePoint {
    double ex = 0.0;
    double theta_dc = 0.0;
    double gamma_init = 0.0;  // GHz
};

inline std::vector<InitRatePoint> initialization_sweep(const SpeciesParams& p, const std::vector<double>& ex_grid,
                                                       const std::vector<double>& theta_grid, double b_dc,
                                                       double rho_dos) {
    if (ex_grid.empty() || theta_grid.empty()) throw ConfigError("initialization_sweep: empty grid");
    std::vector<InitRatePoint> out;
    out.reserve(ex_grid.size() * theta_grid.size());
    for (double ex : ex_grid)
        for (double th : theta_grid) {
            const StrainConfig s(ex, 0.0);
            const FieldVector b(b_dc, th, 0.0);
            RateSet r = radiative_rates(p, s, b);
            r.gamma_phonon = phonon_rates(phonon_coupling_elements(p, s, b), rho_dos).gamma_phonon;
            out.push_back({ex, th, gamma_init_closed_form(r)});
        }
    return out;
}

}  // namespace g4v
