// Command-line front end: run, dims, sweep.
#include <atomic>
#include <exception>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>

#include "permsym/config.hpp"
#include "permsym/dims.hpp"
#include "permsym/dopri5.hpp"
#include "permsym/oracle.hpp"
#include "permsym/runner.hpp"

namespace {

using namespace permsym;

// Maps an in-flight exception to an exit code and prints it.
int report_failure(std::exception_ptr e, std::ostream& err) {
    try {
        std::rethrow_exception(e);
    } catch (const ConfigError& ex) {
        err << "config error: " << ex.what() << "\n";
        return exit_usage;
    } catch (const oracle::GuardViolation& ex) {
        err << "guard violation: " << ex.what() << "\n";
        return exit_guard;
    } catch (const NumericalError& ex) {
        err << "numerical failure: " << ex.what() << "\n";
        return exit_numerical;
    } catch (const std::invalid_argument& ex) {
        err << "invalid input: " << ex.what() << "\n";
        return exit_usage;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return exit_numerical;
    }
}

void print_summary(const RunConfig& cfg, const RunResult& r, std::ostream& out) {
    const auto& t = r.trajectory;
    out << cfg.spec.name << ": " << t.size() << " samples to " << cfg.spec.t_max_fs << " fs in " << r.wall_seconds
        << " s (" << t.stats.accepted << " steps)\n"
        << "  trace drift " << t.max_trace_error() << ", hermiticity " << t.max_hermiticity_error()
        << ", min eigenvalue " << t.min_sampled_eigenvalue() << ", top cavity level " << t.max_cavity_top_population()
        << "\n";
    for (const auto& w : t.warnings) {
        out << "  warning: " << w << "\n";
    }
    if (r.oracle) {
        double worst = 0.0;
        for (const auto& d : r.deviations) {
            worst = std::max(worst, d.max_abs);
        }
        out << "  oracle: max deviation " << worst << " (" << r.oracle_wall_seconds << " s)\n";
        for (const auto& w : r.oracle->warnings) {
            out << "  oracle warning: " << w << "\n";
        }
    }
    out << "  wrote " << r.files.trajectory.string() << ", " << r.files.manifest.string() << "\n";
}

Config load_with_overrides(const std::string& path, const std::string& out_dir, bool oracle, bool strict) {
    Config c = Config::load(path);
    if (!out_dir.empty()) {
        c.set("output_dir", out_dir);
    }
    if (oracle) {
        c.set("oracle", "true");
    }
    if (strict) {
        c.set("strict", "true");
    }
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Permutation-symmetric Lindblad dynamics of N identical emitters in a cavity"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    bool oracle = false;
    bool strict = false;
    auto* run_cmd = app.add_subcommand("run", "Evolve one configuration and write CSV plus manifest");
    run_cmd->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--out", out_dir, "output directory (overrides output_dir)");
    run_cmd->add_flag("--oracle", oracle, "also run the full product-space oracle and report deviations");
    run_cmd->add_flag("--strict", strict, "treat leakage and positivity warnings as failures");

    std::string dims_path;
    auto* dims_cmd = app.add_subcommand("dims", "Print density-matrix entry counts without simulating");
    dims_cmd->add_option("config", dims_path, "config file")->required()->check(CLI::ExistingFile);

    std::string sweep_path;
    std::vector<std::string> vary;
    int jobs = 1;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run one configuration per combination of varied keys");
    sweep_cmd->add_option("config", sweep_path, "base config file")->required()->check(CLI::ExistingFile);
    sweep_cmd->add_option("--vary", vary, "key=v1,v2,... (repeatable)")->required();
    sweep_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--out", out_dir, "output directory (overrides output_dir)");
    sweep_cmd->add_flag("--oracle", oracle, "run the oracle for every point");
    sweep_cmd->add_flag("--strict", strict, "treat leakage and positivity warnings as failures");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    if (*run_cmd) {
        try {
            const RunConfig cfg = resolve(load_with_overrides(config_path, out_dir, oracle, strict));
            const RunResult r = run(cfg);
            print_summary(cfg, r, std::cout);
            return exit_ok;
        } catch (...) {
            return report_failure(std::current_exception(), std::cerr);
        }
    }

    if (*dims_cmd) {
        try {
            const RunConfig cfg = resolve(Config::load(dims_path));
            print_dims(dims_report(cfg.spec), cfg.spec, std::cout);
            return exit_ok;
        } catch (...) {
            return report_failure(std::current_exception(), std::cerr);
        }
    }

    // sweep
    std::vector<RunConfig> points;
    try {
        points = expand_sweep(load_with_overrides(sweep_path, out_dir, oracle, strict), vary);
    } catch (...) {
        return report_failure(std::current_exception(), std::cerr);
    }
    std::vector<int> codes(points.size(), exit_ok);
    std::atomic<std::size_t> next{0};
    std::mutex io;
    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            try {
                const RunResult r = run(points[i]);
                std::lock_guard lock(io);
                print_summary(points[i], r, std::cout);
            } catch (...) {
                std::lock_guard lock(io);
                std::cerr << points[i].spec.name << ": ";
                codes[i] = report_failure(std::current_exception(), std::cerr);
            }
        }
    };
    std::vector<std::thread> pool;
    const auto n_workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), points.size());
    for (std::size_t w = 0; w < n_workers; ++w) {
        pool.emplace_back(worker);
    }
    for (auto& t : pool) {
        t.join();
    }
    int worst = exit_ok;
    for (int c : codes) {
        worst = std::max(worst, c);
    }
    return worst;
}
