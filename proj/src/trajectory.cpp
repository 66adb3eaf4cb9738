#include "permsym/trajectory.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace permsym {

namespace {

double max_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, x);
    }
    return m;
}

}  // namespace

Trajectory::Trajectory(std::vector<double> times, std::vector<std::string> observable_names)
    : times_fs(std::move(times)), names(std::move(observable_names)) {
    const std::size_t n = times_fs.size();
    series.assign(names.size(), std::vector<double>(n, 0.0));
    trace_error.assign(n, 0.0);
    hermiticity_error.assign(n, 0.0);
    cavity_top_population.assign(n, 0.0);
    emitter_number_error.assign(n, 0.0);
}

std::size_t Trajectory::index_of(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
        throw std::out_of_range("Trajectory: no observable named '" + name + "'");
    }
    return static_cast<std::size_t>(it - names.begin());
}

const std::vector<double>& Trajectory::operator[](const std::string& name) const { return series[index_of(name)]; }

double Trajectory::max_trace_error() const { return max_of(trace_error); }
double Trajectory::max_hermiticity_error() const { return max_of(hermiticity_error); }
double Trajectory::max_cavity_top_population() const { return max_of(cavity_top_population); }
double Trajectory::max_emitter_number_error() const { return max_of(emitter_number_error); }

double Trajectory::min_sampled_eigenvalue() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : positivity) {
        m = std::min(m, s.min_eigenvalue);
    }
    return m;
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

void Trajectory::write_csv(std::ostream& out) const {
    out << "time_fs";
    for (const auto& n : names) {
        out << ',' << n;
    }
    out << ",trace_error,hermiticity_error,cavity_top_population,emitter_number_error\n";
    for (std::size_t i = 0; i < times_fs.size(); ++i) {
        out << format_double(times_fs[i]);
        for (const auto& s : series) {
            out << ',' << format_double(s[i]);
        }
        out << ',' << format_double(trace_error[i]) << ',' << format_double(hermiticity_error[i]) << ','
            << format_double(cavity_top_population[i]) << ',' << format_double(emitter_number_error[i]) << '\n';
    }
}

}  // namespace permsym
