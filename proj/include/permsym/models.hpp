#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "permsym/fock_basis.hpp"
#include "permsym/lindblad.hpp"
#include "permsym/model_spec.hpp"
#include "permsym/second_quantization.hpp"

namespace permsym {

/**
 * A built model in the second-quantized picture: emitter Fock sector tensored
 * with a truncated cavity, Hamiltonian, collapse operators, pure initial
 * state and named observables in declaration order.
 */
struct Model {
    ModelSpec spec;
    std::shared_ptr<const CompositeBasis> basis;
    std::vector<std::string> mode_labels;
    SparseOperator hamiltonian;
    std::vector<SparseOperator> collapses;
    Eigen::VectorXcd psi0;
    std::vector<NamedOperator> observables;
    SparseOperator number_operator;  // sum_a b_a^dag b_a on the composite basis
    SparseOperator cavity_top;       // projector onto the highest cavity level
    /// True when the cavity truncation cannot be reached (excitation-bounded dynamics).
    bool truncation_exact = false;
    /// HTC: 1 - sum_nu F_{nu 0}^2 over the retained excited vibrational levels.
    double initial_state_loss = 0.0;
};

Model tavis_cummings(const ModelSpec& spec);
Model holstein_tavis_cummings(const ModelSpec& spec);
Model three_level(const ModelSpec& spec);
Model vsc(const ModelSpec& spec);
/// Dispatches on spec.kind after validate().
Model build_model(const ModelSpec& spec);

/// M=2 coefficients V = 2 D mu_{b1 a1} mu_{b2 a2}, so that second_quantize gives D sum_{i != j} mu_i mu_j.
MBodyCoefficients dipole_dipole_coefficients(int levels, double dipole_coupling);

/// Fock-space amplitudes of [sum_nu c_nu b_{e,nu}^dag]^N / sqrt(N!) |vac>, c over the excited modes.
Eigen::VectorXcd coherent_product_state(const FockBasis& basis, int first_mode, const Eigen::VectorXd& c);

/// Lindblad system whose block partition keeps the support of psi0 in one block.
LindbladSystem make_system(const Model& model, bool center_blocks = true, bool detect_blocks = true);
DensityMatrix initial_state(const Model& model, const LindbladSystem& system);

}  // namespace permsym
