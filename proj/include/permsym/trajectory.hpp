#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "permsym/dopri5.hpp"

namespace permsym {

struct PositivitySample {
    double time_fs;
    double min_eigenvalue;
};

/**
 * Time grid plus named observable series and per-sample diagnostics.
 * Every series has one entry per grid time.
 */
struct Trajectory {
    std::vector<double> times_fs;
    std::vector<std::string> names;
    std::vector<std::vector<double>> series;  // series[k][i] = observable k at times_fs[i]

    std::vector<double> trace_error;           // |tr rho - 1|
    std::vector<double> hermiticity_error;     // max |rho - rho^dag|
    std::vector<double> cavity_top_population; // population of the highest cavity level, 0 if not probed
    std::vector<double> emitter_number_error;  // |<sum b^dag b> - N|, 0 if not probed

    std::vector<PositivitySample> positivity;
    double max_imaginary_residue = 0.0;
    Dopri5Stats stats;
    std::size_t integrated_entries = 0;  // density-matrix entries actually propagated
    std::vector<std::string> warnings;

    Trajectory() = default;
    Trajectory(std::vector<double> times, std::vector<std::string> observable_names);

    std::size_t size() const noexcept { return times_fs.size(); }
    /// Throws std::out_of_range for an unknown name.
    const std::vector<double>& operator[](const std::string& name) const;
    std::size_t index_of(const std::string& name) const;

    double max_trace_error() const;
    double max_hermiticity_error() const;
    double max_cavity_top_population() const;
    double max_emitter_number_error() const;
    double min_sampled_eigenvalue() const;

    /// Header: time_fs, observables in declaration order, then diagnostics columns.
    void write_csv(std::ostream& out) const;
};

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

}  // namespace permsym
