#pragma once

#include <Eigen/Dense>

namespace permsym {

/**
 * Franck-Condon factor F_{nu nu'} = <nu_e|nu'_g>: overlap of eigenstate nu of
 * the excited-state oscillator, displaced by the dimensionless shift
 * d0 = lambda_v / omega_v, with eigenstate nu' of the ground-state oscillator.
 * Evaluated as <nu|D(-d0)|nu'>; the overall sign convention of d0 only flips
 * the sign of odd-parity factors.
 *
 * Throws std::invalid_argument for negative indices or omega_v <= 0.
 */
double franck_condon(double lambda_v, double omega_v, int nu, int nu_prime);

/// All factors with nu < rows (excited), nu' < cols (ground), from one recursion.
Eigen::MatrixXd franck_condon_table(double lambda_v, double omega_v, int rows, int cols);

}  // namespace permsym
