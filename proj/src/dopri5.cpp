#include "permsym/dopri5.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace permsym {

namespace {

constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;

constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                 a76 = 11.0 / 84.0;

constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

// continuous extension
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

inline double norm2(cplx z) noexcept { return z.real() * z.real() + z.imag() * z.imag(); }

}  // namespace

Dopri5::Dopri5(std::size_t size, Dopri5Options options)
    : n_(size), opt_(options), y_(size), ynew_(size), k1_(size), k2_(size), k3_(size), k4_(size), k5_(size),
      k6_(size), k7_(size) {
    if (!(opt_.rel_tol > 0.0) || !(opt_.abs_tol >= 0.0)) {
        throw std::invalid_argument("Dopri5: tolerances must be positive");
    }
}

double Dopri5::error_norm(std::span<const cplx> y_old, std::span<const cplx> y_new, double h) const {
    double sum = 0.0;
    const auto n = static_cast<std::ptrdiff_t>(n_);
#pragma omp parallel for reduction(+ : sum) schedule(static) if (n_ > 65536)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const cplx err = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] + e7 * k7_[i]);
        const double sc = opt_.abs_tol + opt_.rel_tol * std::max(std::abs(y_old[i]), std::abs(y_new[i]));
        sum += norm2(err) / (sc * sc);
    }
    return n_ == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(n_));
}

double Dopri5::initial_step(const Rhs& rhs, double t0, double span_length, Dopri5Stats& stats) {
    double dnf = 0.0;
    double dny = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        const double sk = opt_.abs_tol + opt_.rel_tol * std::abs(y_[i]);
        dnf += norm2(k1_[i]) / (sk * sk);
        dny += norm2(y_[i]) / (sk * sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
    h = std::min({h, opt_.max_step, span_length});
    for (std::size_t i = 0; i < n_; ++i) {
        ynew_[i] = y_[i] + h * k1_[i];
    }
    rhs(t0 + h, ynew_, k2_);
    ++stats.rhs_evaluations;
    double der2 = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        const double sk = opt_.abs_tol + opt_.rel_tol * std::abs(y_[i]);
        der2 += norm2(k2_[i] - k1_[i]) / (sk * sk);
    }
    const double scale = n_ == 0 ? 1.0 : static_cast<double>(n_);
    const double der12 = std::max(std::sqrt(der2 / scale) / h, std::sqrt(dnf / scale));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
    return std::min({100.0 * h, h1, opt_.max_step});
}

Dopri5Stats Dopri5::integrate(const Rhs& rhs, std::span<cplx> y, double t0, std::span<const double> output_times,
                              const Observer& observe, const StepHook& after_step) {
    if (y.size() != n_) {
        throw std::invalid_argument("Dopri5::integrate: state size mismatch");
    }
    for (std::size_t i = 0; i < output_times.size(); ++i) {
        if (output_times[i] < t0 || (i > 0 && output_times[i] < output_times[i - 1])) {
            throw std::invalid_argument("Dopri5::integrate: output times must be non-decreasing and >= t0");
        }
    }
    Dopri5Stats stats;
    std::copy(y.begin(), y.end(), y_.begin());

    std::size_t next = 0;
    while (next < output_times.size() && output_times[next] == t0) {
        observe(next, t0, y_);
        ++next;
    }
    if (next == output_times.size()) {
        std::copy(y_.begin(), y_.end(), y.begin());
        return stats;
    }

    const double t_end = output_times.back();
    double t = t0;
    rhs(t, y_, k1_);
    ++stats.rhs_evaluations;
    double h = opt_.initial_step > 0.0 ? opt_.initial_step : initial_step(rhs, t0, t_end - t0, stats);
    h = std::min({h, opt_.max_step, t_end - t0});

    const auto n = static_cast<std::ptrdiff_t>(n_);
    double facold = 1e-4;
    bool last_rejected = false;
    std::size_t steps = 0;

    while (true) {
        if (++steps > opt_.max_steps) {
            std::ostringstream msg;
            msg << "Dopri5: step budget of " << opt_.max_steps << " exhausted at t=" << t;
            throw NumericalError(msg.str());
        }
        bool last = false;
        if (t + 1.01 * h >= t_end) {
            h = t_end - t;
            last = true;
        }
        if (0.1 * std::abs(h) <= std::abs(t) * std::numeric_limits<double>::epsilon() || h <= 0.0) {
            std::ostringstream msg;
            msg << "Dopri5: step size underflow (h=" << h << " at t=" << t << "); the problem may be stiff";
            throw NumericalError(msg.str());
        }

        // stages; ynew_ doubles as the stage argument
#pragma omp parallel for simd schedule(static) if (n_ > 65536)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            ynew_[i] = y_[i] + h * (a21 * k1_[i]);
        }
        rhs(t + c2 * h, ynew_, k2_);
#pragma omp parallel for simd schedule(static) if (n_ > 65536)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            ynew_[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
        }
        rhs(t + c3 * h, ynew_, k3_);
#pragma omp parallel for simd schedule(static) if (n_ > 65536)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            ynew_[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
        }
        rhs(t + c4 * h, ynew_, k4_);
#pragma omp parallel for simd schedule(static) if (n_ > 65536)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            ynew_[i] = y_[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
        }
        rhs(t + c5 * h, ynew_, k5_);
#pragma omp parallel for simd schedule(static) if (n_ > 65536)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            ynew_[i] = y_[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] + a65 * k5_[i]);
        }
        rhs(t + h, ynew_, k6_);
#pragma omp parallel for simd schedule(static) if (n_ > 65536)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            ynew_[i] = y_[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] + a76 * k6_[i]);
        }
        rhs(t + h, ynew_, k7_);
        stats.rhs_evaluations += 6;

        const double err = error_norm(y_, ynew_, h);
        if (!std::isfinite(err)) {
            std::ostringstream msg;
            msg << "Dopri5: non-finite state or error estimate at t=" << t;
            throw NumericalError(msg.str());
        }

        const double fac11 = std::pow(err, 0.2 - opt_.beta * 0.75);
        if (err <= 1.0) {
            double fac = fac11 / std::pow(facold, opt_.beta);
            fac = std::clamp(fac / opt_.safety, 1.0 / opt_.max_factor, 1.0 / opt_.min_factor);
            double h_new = h / fac;
            facold = std::max(err, 1e-4);
            ++stats.accepted;
            stats.smallest_step = std::min(stats.smallest_step, h);
            stats.largest_step = std::max(stats.largest_step, h);

            if (after_step) {
                after_step(ynew_);
            }
            const double t_new = last ? t_end : t + h;
            while (next < output_times.size() && output_times[next] <= t_new) {
                const double ts = output_times[next];
                if (ts == t_new) {
                    observe(next, ts, ynew_);
                } else {
                    // k2_ is free until the next step; reuse it for the interpolant
                    const double theta = (ts - t) / h;
                    const double theta1 = 1.0 - theta;
#pragma omp parallel for simd schedule(static) if (n_ > 65536)
                    for (std::ptrdiff_t i = 0; i < n; ++i) {
                        const cplx r2 = ynew_[i] - y_[i];
                        const cplx r3 = h * k1_[i] - r2;
                        const cplx r4 = r2 - h * k7_[i] - r3;
                        const cplx r5 = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] + d6 * k6_[i] +
                                             d7 * k7_[i]);
                        k2_[i] = y_[i] + theta * (r2 + theta1 * (r3 + theta * (r4 + theta1 * r5)));
                    }
                    observe(next, ts, k2_);
                }
                ++next;
            }

            std::swap(y_, ynew_);
            std::swap(k1_, k7_);
            t = t_new;
            if (last || next == output_times.size()) {
                break;
            }
            if (last_rejected) {
                h_new = std::min(h_new, h);
            }
            last_rejected = false;
            h = std::min(h_new, opt_.max_step);
        } else {
            h = h / std::min(1.0 / opt_.min_factor, fac11 / opt_.safety);
            last_rejected = true;
            ++stats.rejected;
        }
    }

    std::copy(y_.begin(), y_.end(), y.begin());
    return stats;
}

}  // namespace permsym
