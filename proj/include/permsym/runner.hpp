#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "permsym/config.hpp"
#include "permsym/lindblad.hpp"
#include "permsym/models.hpp"
#include "permsym/trajectory.hpp"

namespace permsym {

/// Process exit codes of the command-line front end.
enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_numerical = 2, exit_guard = 3 };

struct RunFiles {
    std::filesystem::path trajectory;
    std::filesystem::path manifest;
    std::optional<std::filesystem::path> oracle;
    std::optional<std::filesystem::path> deviation;
};

struct ObservableDeviation {
    std::string name;
    double max_abs = 0.0;
    double at_time_fs = 0.0;
};

struct RunResult {
    Trajectory trajectory;
    std::optional<Trajectory> oracle;
    std::vector<ObservableDeviation> deviations;  // filled when the oracle ran
    double wall_seconds = 0.0;
    double oracle_wall_seconds = 0.0;
    RunFiles files;
};

/// Integrator and check settings of a run config, applied to one model.
EvolveOptions evolve_options(const RunConfig& run, const Model& model);

/// Observables of the model in declaration order, filtered by the config selection.
/// Throws ConfigError for a name the model does not define.
std::vector<NamedOperator> select_observables(const RunConfig& run, const Model& model);

/// Max |a - b| per shared observable over a common time grid.
std::vector<ObservableDeviation> compare(const Trajectory& a, const Trajectory& b);

/**
 * Builds the model, evolves it and, with run.oracle, repeats the evolution on
 * the full product space. Output files are written only after everything
 * succeeded, each via a temporary file and a rename.
 *
 * Throws ConfigError (bad observable selection), oracle::GuardViolation (oracle
 * out of range, checked before any work), NumericalError (integration failure,
 * or a leakage warning when run.strict).
 */
RunResult run(const RunConfig& run);

/// One resolved config per combination of the given `key=v1,v2,...` lists, with
/// the combination appended to the run name. Throws ConfigError.
std::vector<RunConfig> expand_sweep(const Config& base, const std::vector<std::string>& vary);

}  // namespace permsym
