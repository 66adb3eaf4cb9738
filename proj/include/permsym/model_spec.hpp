#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace permsym {

enum class ModelKind { tc, htc, three_level, vsc };

std::string_view kind_name(ModelKind kind) noexcept;
/// Accepts the config spellings tc, htc, three_level, vsc (case-insensitive).
std::optional<ModelKind> parse_kind(std::string_view text) noexcept;

/**
 * Declarative description of one built-in model. Energies and rates in eV,
 * times in fs. Fields that a model does not use are ignored by its builder.
 */
struct ModelSpec {
    ModelKind kind = ModelKind::tc;
    std::string name = "run";
    int n_emitters = 1;

    double omega_0 = 1.0;          // TC emitter splitting
    double omega_c = 1.0;          // cavity
    double omega_e = 1.0;          // HTC electronic gap / three-level spacing
    double omega_v = 0.182;        // vibrational quantum
    double lambda_v = 0.096;       // HTC vibronic coupling
    double g = 0.1;                // light-matter coupling
    double dipole_coupling = 0.1;  // three-level D
    double gamma_c = 0.0;          // cavity decay
    double gamma_down = 0.0;       // three-level collective emission

    int levels = 3;         // three-level d
    int n_vib_ground = 6;   // HTC
    int n_vib_excited = 4;  // HTC
    int n_vib = 3;          // VSC vibrational levels per molecule
    int n_cav = 2;
    std::optional<int> n_exc;  // VSC excitation limit
    int initial_photons = 1;   // VSC initial photon number

    double t_max_fs = 100.0;
    int n_samples = 101;
};

/// Paper-motivated defaults for a kind at a given emitter count.
ModelSpec default_spec(ModelKind kind, int n_emitters);

/// HTC cavity frequency on resonance with the emission peak.
double htc_resonant_cavity(double omega_e, double lambda_v, double omega_v) noexcept;

/// Throws std::invalid_argument describing the first violated constraint.
void validate(const ModelSpec& spec);

/// Number of emitter modes d.
int emitter_modes(const ModelSpec& spec);

/// Evenly spaced grid 0 .. t_max with n_samples points.
std::vector<double> time_grid(const ModelSpec& spec);

}  // namespace permsym
