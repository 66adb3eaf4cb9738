#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "permsym/csr_matrix.hpp"
#include "permsym/sparse_operator.hpp"

// Dense/sparse kernels behind the Lindblad right-hand side. All dense operands
// are row-major with leading dimension equal to their column count.
namespace permsym::kernels {

/// Y = alpha * A * X (or Y += ... when accumulate), X has A.cols() rows and ncols columns.
/// Rows of Y are distributed over OpenMP threads.
void spmm(const CsrMatrix& a, const cplx* x, cplx* y, std::size_t ncols, cplx alpha, bool accumulate);

/// Single-threaded spmm, kept as the baseline for the benchmark and tests.
void spmm_serial(const CsrMatrix& a, const cplx* x, cplx* y, std::size_t ncols, cplx alpha, bool accumulate);

/// out += Z C^dagger, Z is rows x C.cols(), out is rows x C.rows(). Gathers along rows of C,
/// so no transposed copy of Z is formed.
void multiply_adjoint(const cplx* z, std::size_t rows, const CsrMatrix& c, cplx* out, bool parallel = true);

/// out = w + w^dagger for a square n x n block.
void add_with_adjoint(const cplx* w, std::size_t n, cplx* out, bool parallel = true);

void hermitize(cplx* a, std::size_t n);
double hermiticity_error(const cplx* a, std::size_t n);

}  // namespace permsym::kernels

namespace permsym::reference {

/**
 * Straight dense evaluation of
 *   -i[H, rho] + sum_k (C_k rho C_k^dag - 1/2 {C_k^dag C_k, rho})
 * in units hbar = 1, valid for any (not necessarily Hermitian) rho.
 */
Eigen::MatrixXcd lindblad_rhs(const SparseOperator& hamiltonian, const std::vector<SparseOperator>& collapses,
                              const Eigen::MatrixXcd& rho);

}  // namespace permsym::reference
