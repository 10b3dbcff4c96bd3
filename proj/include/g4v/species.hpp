#pragma once

#include <optional>
#include <string>
#include <vector>

#include "g4v/numerics/matrix.hpp"

namespace g4v {

/// Bohr magneton over Planck constant, GHz per tesla. Spin and orbital
/// gyromagnetic factors are kept as distinct symbols but are equal here.
inline constexpr double kGammaS = 9.2740100783e-24 / 6.62607015e-34 / 1e9;  // 13.9962... GHz/T
inline constexpr double kGammaL = kGammaS;

enum class Species { SiV, GeV, SnV, PbV };
enum class Manifold { ground, excited };

inline std::string to_string(Species s) {
    switch (s) {
        case Species::SiV: return "SiV";
        case Species::GeV: return "GeV";
        case Species::SnV: return "SnV";
        case Species::PbV: return "PbV";
    }
    return "?";
}

inline Species species_from_string(const std::string& s) {
    if (s == "SiV" || s == "siv") return Species::SiV;
    if (s == "GeV" || s == "gev") return Species::GeV;
    if (s == "SnV" || s == "snv") return Species::SnV;
    if (s == "PbV" || s == "pbv") return Species::PbV;
    throw ConfigError("unknown species '" + s + "' (expected SiV, GeV, SnV or PbV)");
}

/// Per-species constants. lambda_* is half the tabulated doublet splitting.
/// Entries the literature does not provide stay unset; builders refuse to
/// invent them.
struct SpeciesParams {
    Species species = Species::SnV;

    double lambda_g = 0.0;                    // GHz
    std::optional<double> upsilon_x_g;        // GHz
    std::optional<double> upsilon_y_g;        // GHz
    std::optional<double> f;                  // orbital-Zeeman quenching factor
    std::optional<double> d_g;                // GHz per unit strain

    double lambda_e = 0.0;                    // GHz
    std::optional<double> upsilon_x_e;        // GHz
    std::optional<double> upsilon_y_e;        // GHz
    std::optional<double> d_e;                // GHz per unit strain

    std::optional<double> tau_rad;            // ns
    std::optional<double> zpl_fraction;       // dimensionless
    std::optional<double> zpl_frequency;      // THz (external input, not a tabulated constant)
    std::optional<double> eta;                // dipole scale (dimensionless)
};

/// One manifold's worth of parameters, as the builders consume them.
struct ManifoldRow {
    double lambda = 0.0;
    std::optional<double> upsilon_x, upsilon_y, f, d;
};

inline ManifoldRow manifold_row(const SpeciesParams& p, Manifold m) {
    if (m == Manifold::ground) return {p.lambda_g, p.upsilon_x_g, p.upsilon_y_g, p.f, p.d_g};
    return {p.lambda_e, p.upsilon_x_e, p.upsilon_y_e, p.f, p.d_e};
}

/// The four vacancy species with tabulated constants. d is stored in GHz per
/// unit strain (tabulated PHz values times 1e6). ZPL frequencies are
/// literature values supplied for the radiative-rate model and can be
/// overridden in configuration.
inline std::vector<SpeciesParams> species_table() {
    std::vector<SpeciesParams> t;

    SpeciesParams siv;
    siv.species = Species::SiV;
    siv.lambda_g = 49.0 / 2;
    siv.upsilon_x_g = 2.0;
    siv.upsilon_y_g = 3.0;
    siv.f = 0.10;
    siv.d_g = 1.3e6;
    siv.lambda_e = 257.0 / 2;
    siv.upsilon_x_e = 12.0;
    siv.upsilon_y_e = 16.0;
    siv.d_e = 1.8e6;
    siv.tau_rad = 1.7;
    siv.zpl_frequency = 406.8;
    t.push_back(siv);

    SpeciesParams gev;
    gev.species = Species::GeV;
    gev.lambda_g = 207.0 / 2;
    gev.lambda_e = 989.0 / 2;
    gev.zpl_frequency = 497.2;
    t.push_back(gev);

    SpeciesParams snv;
    snv.species = Species::SnV;
    snv.lambda_g = 815.0 / 2;
    snv.upsilon_x_g = 65.0;
    snv.upsilon_y_g = 0.0;
    snv.f = 0.15;
    snv.d_g = 0.787e6;
    snv.lambda_e = 2355.0 / 2;
    snv.upsilon_x_e = 855.0;
    snv.upsilon_y_e = 0.0;
    snv.d_e = 0.956e6;
    snv.tau_rad = 4.5;
    snv.zpl_fraction = 0.60;
    snv.zpl_frequency = 484.3;
    snv.eta = 8.67635e-10;
    t.push_back(snv);

    SpeciesParams pbv;
    pbv.species = Species::PbV;
    pbv.lambda_g = 4385.0 / 2;
    pbv.lambda_e = 6920.0 / 2;
    pbv.zpl_frequency = 576.5;
    t.push_back(pbv);

    return t;
}

inline SpeciesParams species_params(Species s) {
    for (auto& p : species_table())
        if (p.species == s) return p;
    throw Error("species_params: unknown species");
}

inline double require(const std::optional<double>& v, const std::string& field, Species s) {
    if (!v) throw ConfigError("parameter '" + field + "' is unavailable for " + to_string(s) + "; supply it explicitly");
    return *v;
}

}  // namespace g4v
