#include "permsym/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "permsym/dims.hpp"
#include "permsym/dopri5.hpp"
#include "permsym/full_models.hpp"
#include "permsym/oracle.hpp"
#include "permsym/units.hpp"

namespace permsym {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Writes next to the target and renames, so a reader never sees a half-written file.
void write_atomic(const fs::path& path, const std::string& text) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out << text;
        out.flush();
        if (!out) {
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

std::size_t checked_full_dim(const ModelSpec& spec) {
    const auto d = static_cast<std::size_t>(emitter_modes(spec));
    std::size_t full = static_cast<std::size_t>(spec.n_cav);
    for (int i = 0; i < spec.n_emitters; ++i) {
        if (full > oracle::evolve_guard) {
            break;
        }
        full *= d;
    }
    if (full > oracle::evolve_guard) {
        std::ostringstream msg;
        msg << "oracle requested but d^N x N_c = " << d << "^" << spec.n_emitters << " x " << spec.n_cav
            << " exceeds the limit of " << oracle::evolve_guard;
        throw oracle::GuardViolation(msg.str());
    }
    return full;
}

json diagnostics_json(const Trajectory& t) {
    json d;
    d["max_trace_error"] = t.max_trace_error();
    d["max_hermiticity_error"] = t.max_hermiticity_error();
    d["min_sampled_eigenvalue"] = t.min_sampled_eigenvalue();
    d["positivity_samples"] = t.positivity.size();
    d["max_cavity_top_population"] = t.max_cavity_top_population();
    d["max_emitter_number_error"] = t.max_emitter_number_error();
    d["max_imaginary_residue"] = t.max_imaginary_residue;
    d["integrated_entries"] = t.integrated_entries;
    d["steps_accepted"] = t.stats.accepted;
    d["steps_rejected"] = t.stats.rejected;
    d["rhs_evaluations"] = t.stats.rhs_evaluations;
    if (t.stats.accepted > 0) {
        d["smallest_step_fs"] = t.stats.smallest_step * hbar_ev_fs;
        d["largest_step_fs"] = t.stats.largest_step * hbar_ev_fs;
    }
    d["warnings"] = t.warnings;
    return d;
}

std::string csv_text(const Trajectory& t) {
    std::ostringstream out;
    t.write_csv(out);
    return out.str();
}

std::string sanitize(std::string s) {
    for (char& c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_')) {
            c = '_';
        }
    }
    return s;
}

}  // namespace

EvolveOptions evolve_options(const RunConfig& run, const Model& model) {
    EvolveOptions o;
    o.rel_tol = run.rel_tol;
    o.abs_tol = run.abs_tol;
    o.positivity_samples = run.positivity_samples;
    o.leakage_probe = model.cavity_top;
    o.leakage_is_truncation = !model.truncation_exact;
    o.leakage_threshold = run.leakage_threshold;
    o.number_operator = model.number_operator;
    o.particles = model.spec.n_emitters;
    return o;
}

std::vector<NamedOperator> select_observables(const RunConfig& run, const Model& model) {
    if (run.observables.empty()) {
        return model.observables;
    }
    std::vector<NamedOperator> out;
    for (const auto& o : model.observables) {
        if (std::find(run.observables.begin(), run.observables.end(), o.name) != run.observables.end()) {
            out.push_back(o);
        }
    }
    for (const auto& name : run.observables) {
        const bool known = std::any_of(model.observables.begin(), model.observables.end(),
                                       [&](const NamedOperator& o) { return o.name == name; });
        if (!known) {
            std::string names;
            for (const auto& o : model.observables) {
                names += (names.empty() ? "" : ", ") + o.name;
            }
            throw ConfigError("observables", 0, "observables",
                              "model " + std::string(kind_name(model.spec.kind)) + " has no observable '" + name +
                                  "' (available: " + names + ")");
        }
    }
    return out;
}

std::vector<ObservableDeviation> compare(const Trajectory& a, const Trajectory& b) {
    if (a.times_fs != b.times_fs) {
        throw std::invalid_argument("compare: trajectories use different time grids");
    }
    std::vector<ObservableDeviation> out;
    for (std::size_t k = 0; k < a.names.size(); ++k) {
        const auto it = std::find(b.names.begin(), b.names.end(), a.names[k]);
        if (it == b.names.end()) {
            continue;
        }
        const auto& sb = b.series[static_cast<std::size_t>(it - b.names.begin())];
        ObservableDeviation d{a.names[k], 0.0, a.times_fs.empty() ? 0.0 : a.times_fs.front()};
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double diff = std::abs(a.series[k][i] - sb[i]);
            if (diff > d.max_abs) {
                d.max_abs = diff;
                d.at_time_fs = a.times_fs[i];
            }
        }
        out.push_back(d);
    }
    return out;
}

RunResult run(const RunConfig& cfg) {
    const auto& spec = cfg.spec;
    validate(spec);
    // refuse oracle runs out of range before spending time on the main run
    std::size_t full_dim = 0;
    if (cfg.oracle) {
        full_dim = checked_full_dim(spec);
    }

    RunResult result;
    const auto t0 = std::chrono::steady_clock::now();
    const Model model = build_model(spec);
    const auto observables = select_observables(cfg, model);
    const LindbladSystem system = make_system(model, cfg.center_blocks);
    const DensityMatrix rho0 = initial_state(model, system);
    const auto grid = time_grid(spec);
    result.trajectory = evolve(system, rho0, grid, observables, evolve_options(cfg, model));
    result.wall_seconds = seconds_since(t0);

    if (cfg.strict && !result.trajectory.warnings.empty()) {
        std::string all;
        for (const auto& w : result.trajectory.warnings) {
            all += (all.empty() ? "" : "; ") + w;
        }
        throw NumericalError("strict mode: " + all);
    }

    if (cfg.oracle) {
        const auto t1 = std::chrono::steady_clock::now();
        const FullModel full = build_full_model(spec);
        std::vector<NamedOperator> full_obs;
        for (const auto& o : observables) {
            for (const auto& f : full.observables) {
                if (f.name == o.name) {
                    full_obs.push_back(f);
                }
            }
        }
        const LindbladSystem full_system = make_full_system(full);
        const DensityMatrix full_rho0 = initial_state(full, full_system);
        EvolveOptions o = evolve_options(cfg, model);
        o.leakage_probe = full.cavity_top;
        o.number_operator = full.number_operator;
        result.oracle = oracle::evolve(full.basis, full.cavity_dim, full_system, full_rho0, grid, full_obs, o);
        result.oracle_wall_seconds = seconds_since(t1);
        result.deviations = compare(result.trajectory, *result.oracle);
    }

    // everything succeeded; write the files
    const fs::path dir = cfg.output_dir;
    fs::create_directories(dir);
    const std::string stem = sanitize(spec.name);
    result.files.trajectory = dir / (stem + ".csv");
    result.files.manifest = dir / (stem + ".manifest.json");

    json m;
    m["name"] = spec.name;
    json config;
    for (const auto& [k, v] : resolved_entries(cfg)) {
        config[k] = v;
    }
    m["config"] = config;
    m["hbar_ev_fs"] = hbar_ev_fs;

    const auto report = dims_report(spec);
    const auto& p = system.partition();
    json dims;
    dims["emitter_modes"] = emitter_modes(spec);
    dims["mode_labels"] = model.mode_labels;
    dims["emitters"] = spec.n_emitters;
    dims["cavity_dim"] = spec.n_cav;
    dims["emitter_dim"] = model.basis->emitters().size();
    dims["composite_dim"] = model.basis->size();
    dims["full_space_dim"] = static_cast<double>(report.full_axis);
    dims["symmetric_entries"] = static_cast<double>(report.symmetric_entries);
    dims["full_entries"] = static_cast<double>(report.full_entries);
    dims["liouville_entries"] = static_cast<double>(report.liouville_entries);
    dims["blocks"] = p.num_blocks();
    dims["largest_block"] = p.largest_block();
    dims["stored_entries"] = p.storage_size();
    dims["integrated_entries"] = result.trajectory.integrated_entries;
    m["dimensions"] = dims;

    m["wall_time_s"] = result.wall_seconds;
    json diag = diagnostics_json(result.trajectory);
    diag["truncation_exact"] = model.truncation_exact;
    if (spec.kind == ModelKind::htc) {
        diag["initial_state_loss"] = model.initial_state_loss;
    }
    m["diagnostics"] = diag;

    json files;
    files["trajectory"] = result.files.trajectory.filename().string();
    std::vector<std::pair<fs::path, std::string>> writes;
    writes.emplace_back(result.files.trajectory, csv_text(result.trajectory));

    if (result.oracle) {
        result.files.oracle = dir / (stem + ".oracle.csv");
        result.files.deviation = dir / (stem + ".deviation.txt");
        files["oracle"] = result.files.oracle->filename().string();
        files["deviation"] = result.files.deviation->filename().string();
        writes.emplace_back(*result.files.oracle, csv_text(*result.oracle));

        std::ostringstream dev;
        double worst = 0.0;
        dev << "# observable max_abs_deviation time_fs\n";
        for (const auto& d : result.deviations) {
            dev << d.name << " " << format_double(d.max_abs) << " " << format_double(d.at_time_fs) << "\n";
            worst = std::max(worst, d.max_abs);
        }
        dev << "max " << format_double(worst) << "\n";
        writes.emplace_back(*result.files.deviation, dev.str());

        json orc;
        orc["full_space_dim"] = full_dim;
        orc["wall_time_s"] = result.oracle_wall_seconds;
        orc["max_deviation"] = worst;
        json per;
        for (const auto& d : result.deviations) {
            per[d.name] = d.max_abs;
        }
        orc["deviation"] = per;
        orc["diagnostics"] = diagnostics_json(*result.oracle);
        m["oracle"] = orc;
    }
    m["files"] = files;
    writes.emplace_back(result.files.manifest, m.dump(2) + "\n");

    for (const auto& [path, text] : writes) {
        write_atomic(path, text);
    }
    return result;
}

std::vector<RunConfig> expand_sweep(const Config& base, const std::vector<std::string>& vary) {
    struct Axis {
        std::string key;
        std::vector<std::string> values;
    };
    std::vector<Axis> axes;
    for (const auto& item : vary) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
            throw ConfigError("--vary", 0, {}, "expected key=v1,v2,..., got '" + item + "'");
        }
        Axis a{item.substr(0, eq), {}};
        if (a.key == "name" || a.key == "output_dir") {
            throw ConfigError("--vary", 0, a.key, "cannot be swept");
        }
        std::stringstream list(item.substr(eq + 1));
        std::string v;
        while (std::getline(list, v, ',')) {
            if (v.empty()) {
                throw ConfigError("--vary", 0, a.key, "empty value in list");
            }
            a.values.push_back(v);
        }
        for (const auto& other : axes) {
            if (other.key == a.key) {
                throw ConfigError("--vary", 0, a.key, "varied twice");
            }
        }
        axes.push_back(std::move(a));
    }

    const std::string base_name = base.has("name") ? base.find("name")->value : resolve(base).spec.name;
    std::vector<RunConfig> out;
    std::vector<std::size_t> pick(axes.size(), 0);
    while (true) {
        Config c = base;
        std::string name = base_name;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const auto& value = axes[a].values[pick[a]];
            c.set(axes[a].key, value);
            name += "_" + axes[a].key + "-" + sanitize(value);
        }
        c.set("name", name);
        out.push_back(resolve(c));
        // odometer over the value lists, last axis fastest
        std::size_t a = axes.size();
        while (a > 0) {
            --a;
            if (++pick[a] < axes[a].values.size()) {
                break;
            }
            pick[a] = 0;
            if (a == 0) {
                return out;
            }
        }
        if (axes.empty()) {
            return out;
        }
    }
}

}  // namespace permsym
