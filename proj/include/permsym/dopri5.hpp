#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "permsym/csr_matrix.hpp"

namespace permsym {

/// Integration failure: step-size underflow, non-finite state, step budget exhausted.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Dopri5Options {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double initial_step = 0.0;  // 0 selects the step automatically
    double max_step = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 50'000'000;
    double safety = 0.9;
    double min_factor = 0.2;
    double max_factor = 10.0;
    double beta = 0.04;  // PI stabilisation exponent
};

struct Dopri5Stats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evaluations = 0;
    double smallest_step = std::numeric_limits<double>::infinity();
    double largest_step = 0.0;
};

/**
 * Embedded Runge-Kutta 5(4) of Dormand and Prince for complex state vectors,
 * with PI step-size control and the 4th-order continuous extension used to
 * report the solution at requested output times.
 */
class Dopri5 {
public:
    using Rhs = std::function<void(double t, std::span<const cplx> y, std::span<cplx> dydt)>;
    using Observer = std::function<void(std::size_t index, double t, std::span<const cplx> y)>;
    using StepHook = std::function<void(std::span<cplx> y)>;

    Dopri5(std::size_t size, Dopri5Options options = {});

    /**
     * Integrates from t0 with initial value y, calling observe(i, t_i, y(t_i))
     * for each output time (non-decreasing, >= t0). On return y holds the
     * solution at the last output time. after_step runs on every accepted step
     * before the step is used for output.
     */
    Dopri5Stats integrate(const Rhs& rhs, std::span<cplx> y, double t0, std::span<const double> output_times,
                          const Observer& observe, const StepHook& after_step = {});

private:
    double error_norm(std::span<const cplx> y_old, std::span<const cplx> y_new, double h) const;
    double initial_step(const Rhs& rhs, double t0, double direction_span, Dopri5Stats& stats);

    std::size_t n_;
    Dopri5Options opt_;
    std::vector<cplx> y_, ynew_, k1_, k2_, k3_, k4_, k5_, k6_, k7_;
};

}  // namespace permsym
