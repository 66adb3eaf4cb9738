#include "permsym/model_spec.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace permsym {

std::string_view kind_name(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::tc:
            return "tc";
        case ModelKind::htc:
            return "htc";
        case ModelKind::three_level:
            return "three_level";
        case ModelKind::vsc:
            return "vsc";
    }
    return "?";
}

std::optional<ModelKind> parse_kind(std::string_view text) noexcept {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    for (auto k : {ModelKind::tc, ModelKind::htc, ModelKind::three_level, ModelKind::vsc}) {
        if (lower == kind_name(k)) {
            return k;
        }
    }
    return std::nullopt;
}

double htc_resonant_cavity(double omega_e, double lambda_v, double omega_v) noexcept {
    return omega_e - 2.0 * lambda_v * lambda_v / omega_v;
}

ModelSpec default_spec(ModelKind kind, int n_emitters) {
    ModelSpec s;
    s.kind = kind;
    s.n_emitters = n_emitters;
    s.name = std::string(kind_name(kind)) + "_n" + std::to_string(n_emitters);
    switch (kind) {
        case ModelKind::tc:
            s.omega_0 = 1.0;
            s.omega_c = 1.0;
            s.g = 0.1;
            s.gamma_c = 0.15;
            s.n_cav = n_emitters + 1;
            s.t_max_fs = 200.0;
            s.n_samples = 401;
            break;
        case ModelKind::htc:
            // anthracene-like molecule in a nanoplasmonic cavity
            s.omega_e = 3.5;
            s.omega_v = 0.182;
            s.lambda_v = 0.096;
            s.gamma_c = 0.2;
            s.g = 0.035;
            s.omega_c = htc_resonant_cavity(s.omega_e, s.lambda_v, s.omega_v);
            s.n_vib_ground = 6;
            s.n_vib_excited = 4;
            s.n_cav = n_emitters + 1;
            s.t_max_fs = 300.0;
            s.n_samples = 3001;
            break;
        case ModelKind::three_level:
            s.levels = 3;
            s.omega_e = 1.0;
            s.omega_c = 1.0;
            s.g = 0.15 / std::sqrt(static_cast<double>(std::max(n_emitters, 1)));
            s.dipole_coupling = 0.1;
            s.gamma_c = 0.15;
            s.gamma_down = 0.05;
            s.n_cav = n_emitters + 1;
            s.t_max_fs = 100.0;
            s.n_samples = 501;
            break;
        case ModelKind::vsc:
            s.omega_v = 0.2;
            s.omega_c = 0.2;
            s.g = 0.01;
            s.gamma_c = 0.0;
            s.n_vib = 3;
            s.n_exc = 1;
            s.n_cav = 2;
            s.initial_photons = 1;
            s.t_max_fs = 500.0;
            s.n_samples = 501;
            break;
    }
    return s;
}

void validate(const ModelSpec& s) {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("model spec: " + msg); };
    if (s.n_emitters < 1) {
        fail("n_emitters must be >= 1");
    }
    if (s.gamma_c < 0.0 || s.gamma_down < 0.0) {
        fail("rates gamma_c and gamma_down must be >= 0");
    }
    if (s.n_cav < 1) {
        fail("n_cav must be >= 1");
    }
    if (s.n_samples < 1) {
        fail("n_samples must be >= 1");
    }
    if (!(s.t_max_fs >= 0.0) || (s.n_samples > 1 && !(s.t_max_fs > 0.0))) {
        fail("t_max_fs must be > 0 when more than one sample is requested");
    }
    for (double v : {s.omega_0, s.omega_c, s.omega_e, s.omega_v, s.lambda_v, s.g, s.dipole_coupling, s.gamma_c,
                     s.gamma_down, s.t_max_fs}) {
        if (!std::isfinite(v)) {
            fail("all energies, rates and times must be finite");
        }
    }
    switch (s.kind) {
        case ModelKind::tc:
            break;
        case ModelKind::htc:
            if (s.n_vib_ground < 1 || s.n_vib_excited < 1) {
                fail("vibrational truncations must be >= 1");
            }
            if (!(s.omega_v > 0.0)) {
                fail("omega_v must be > 0");
            }
            break;
        case ModelKind::three_level:
            if (s.levels < 2) {
                fail("levels must be >= 2");
            }
            break;
        case ModelKind::vsc:
            if (s.n_vib < 1) {
                fail("n_vib must be >= 1");
            }
            if (s.n_exc && *s.n_exc < 0) {
                fail("n_exc must be >= 0");
            }
            if (s.initial_photons < 0 || s.initial_photons >= s.n_cav) {
                fail("initial_photons must lie in [0, n_cav)");
            }
            if (s.n_exc && s.initial_photons > *s.n_exc) {
                fail("initial_photons exceeds n_exc, the initial state would be projected out");
            }
            break;
    }
}

int emitter_modes(const ModelSpec& s) {
    switch (s.kind) {
        case ModelKind::tc:
            return 2;
        case ModelKind::htc:
            return s.n_vib_ground + s.n_vib_excited;
        case ModelKind::three_level:
            return s.levels;
        case ModelKind::vsc:
            return s.n_vib;
    }
    return 0;
}

std::vector<double> time_grid(const ModelSpec& s) {
    std::vector<double> t(static_cast<std::size_t>(s.n_samples));
    for (int i = 0; i < s.n_samples; ++i) {
        t[static_cast<std::size_t>(i)] =
            s.n_samples == 1 ? 0.0 : s.t_max_fs * static_cast<double>(i) / static_cast<double>(s.n_samples - 1);
    }
    return t;
}

}  // namespace permsym
