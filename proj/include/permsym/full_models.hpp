#pragma once

#include <vector>

#include <Eigen/Dense>

#include "permsym/lindblad.hpp"
#include "permsym/model_spec.hpp"
#include "permsym/models.hpp"
#include "permsym/oracle.hpp"

namespace permsym {

/**
 * First-quantized version of a built-in model on the full product space
 * (site 0 slowest, cavity fastest). Built directly from single-emitter
 * matrices and explicit site sums, without any Fock-space machinery.
 */
struct FullModel {
    oracle::FullBasis basis;
    int cavity_dim;
    SparseOperator hamiltonian;
    std::vector<SparseOperator> collapses;
    Eigen::VectorXcd psi0;
    std::vector<NamedOperator> observables;  // same names and order as the second-quantized model
    SparseOperator number_operator;
    SparseOperator cavity_top;
};

/// Throws oracle::GuardViolation when d^N is beyond the oracle limit.
FullModel build_full_model(const ModelSpec& spec);

LindbladSystem make_full_system(const FullModel& model);
DensityMatrix initial_state(const FullModel& model, const LindbladSystem& system);

/// Isometry from the model's (possibly restricted) composite basis into the full space.
CsrMatrix model_isometry(const Model& model, const FullModel& full);

}  // namespace permsym
