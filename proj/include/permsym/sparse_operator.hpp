#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "permsym/csr_matrix.hpp"

namespace permsym {

/**
 * Square complex operator on a named basis. Immutable once built: every
 * algebra helper returns a new operator.
 *
 * The basis tag is checked by binary helpers when both operands carry one;
 * an empty tag matches anything.
 */
class SparseOperator {
public:
    SparseOperator() = default;
    SparseOperator(CsrMatrix matrix, std::string basis_tag);

    static SparseOperator from_triplets(std::size_t dim, std::vector<Triplet> triplets, std::string basis_tag = {});
    static SparseOperator identity(std::size_t dim, std::string basis_tag = {});
    static SparseOperator zero(std::size_t dim, std::string basis_tag = {});
    static SparseOperator from_dense(const Eigen::MatrixXcd& dense, std::string basis_tag = {});

    std::size_t dim() const noexcept { return matrix_.rows(); }
    std::size_t nnz() const noexcept { return matrix_.nnz(); }
    const CsrMatrix& matrix() const noexcept { return matrix_; }
    const std::string& basis_tag() const noexcept { return tag_; }

    cplx at(std::size_t r, std::size_t c) const { return matrix_.at(r, c); }
    Eigen::MatrixXcd to_dense() const { return matrix_.to_dense(); }

private:
    CsrMatrix matrix_;
    std::string tag_;
};

SparseOperator add(const SparseOperator& a, const SparseOperator& b);
SparseOperator subtract(const SparseOperator& a, const SparseOperator& b);
SparseOperator scale(const SparseOperator& a, cplx factor);
SparseOperator adjoint(const SparseOperator& a);
SparseOperator matmul(const SparseOperator& a, const SparseOperator& b);
SparseOperator commutator(const SparseOperator& a, const SparseOperator& b);

inline SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) { return add(a, b); }
inline SparseOperator operator-(const SparseOperator& a, const SparseOperator& b) { return subtract(a, b); }
inline SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) { return matmul(a, b); }
inline SparseOperator operator*(cplx factor, const SparseOperator& a) { return scale(a, factor); }

/// max |A - B| elementwise.
double max_abs_diff(const SparseOperator& a, const SparseOperator& b);
double max_abs(const SparseOperator& a);

/// max |A - A^dagger| <= tol.
bool is_hermitian(const SparseOperator& a, double tol = 1e-12);

/// Plain tensor product, row index = i_a * dim(b) + i_b.
SparseOperator kron(const SparseOperator& a, const SparseOperator& b);

/// Text dump: header line "# dim <n> nnz <m> basis <tag>", then "row col re im" per entry.
void dump(const SparseOperator& a, std::ostream& out);

}  // namespace permsym
