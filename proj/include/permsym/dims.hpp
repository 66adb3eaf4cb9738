#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>

#include "permsym/model_spec.hpp"

namespace permsym {

/**
 * Density-matrix size bookkeeping for one model configuration. Counts are
 * exact integers held in long double (all shipped cases are far below 2^64).
 */
struct DimsReport {
    int modes = 0;      // d
    int emitters = 0;   // N
    int cavity_dim = 0; // N_c
    long double emitter_axis = 0;    // C(N+d-1, N)
    long double symmetric_axis = 0;  // C(N+d-1, N) N_c
    std::optional<long double> restricted_axis;  // after the excitation restriction, if any
    long double full_axis = 0;       // d^N N_c
    long double symmetric_entries = 0;   // (C(N+d-1, N) N_c)^2
    long double full_entries = 0;        // d^(2N) N_c^2
    long double liouville_entries = 0;   // C(N+d^2-1, N) N_c^2

    long double full_over_symmetric() const { return full_entries / symmetric_entries; }
    long double liouville_over_symmetric() const { return liouville_entries / symmetric_entries; }
};

/// Exact binomial as long double via 128-bit integer arithmetic; throws std::overflow_error.
long double exact_binomial(unsigned n, unsigned k);

DimsReport dims_report(const ModelSpec& spec);
void print_dims(const DimsReport& report, const ModelSpec& spec, std::ostream& out);

}  // namespace permsym
