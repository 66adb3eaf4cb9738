#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "permsym/fock_basis.hpp"
#include "permsym/sparse_operator.hpp"

namespace permsym {

/// One coefficient V^{beta_1..beta_M}_{alpha_1..alpha_M}; pair k acts on the same emitter.
struct MBodyTerm {
    std::vector<int> creations;      // beta_1 .. beta_M
    std::vector<int> annihilations;  // alpha_1 .. alpha_M
    cplx value;
};

/**
 * Coefficient tensor of a permutation-invariant M-body emitter operator,
 * stored sparsely. Mode indices are 0-based in [0, d). Order 0 denotes a
 * multiple of the identity.
 */
class MBodyCoefficients {
public:
    MBodyCoefficients(int order, int modes);

    int order() const noexcept { return order_; }
    int modes() const noexcept { return modes_; }

    /// Accumulates into an existing entry with the same index lists.
    MBodyCoefficients& add(std::vector<int> creations, std::vector<int> annihilations, cplx value);

    cplx at(const std::vector<int>& creations, const std::vector<int>& annihilations) const;
    std::vector<MBodyTerm> terms() const;
    std::size_t size() const noexcept { return entries_.size(); }

    /// V^{beta}_{alpha} == conj(V^{alpha}_{beta}) for every entry.
    bool is_hermitian_generating(double tol = 1e-12) const;

private:
    int order_;
    int modes_;
    std::map<std::pair<std::vector<int>, std::vector<int>>, cplx> entries_;
};

/**
 * Matrix of b^dag_{beta_1}..b^dag_{beta_M} b_{alpha_1}..b_{alpha_M} on a fixed-N
 * sector. Only balanced strings are accepted.
 */
SparseOperator normal_ordered_string(const FockBasis& basis, std::span<const int> creations,
                                     std::span<const int> annihilations);

/// (1/M!) sum V^{beta}_{alpha} b^dag_beta.. b_alpha.. on the sector.
SparseOperator second_quantize(const FockBasis& basis, const MBodyCoefficients& coeffs);

/// sum over alpha of b^dag_alpha b_alpha.
SparseOperator number_operator(const FockBasis& basis);

struct BosonMode {
    SparseOperator a;
    SparseOperator a_dag;
    SparseOperator n;
};

/// Truncated ladder operators on levels 0..dim-1.
BosonMode boson_mode(int dim);

/**
 * Emitter operator tensored with a cavity operator on a composite basis
 * (emitter index slowest). Rows and columns outside a restricted basis are
 * projected out.
 */
SparseOperator kron(const SparseOperator& emitter_op, const SparseOperator& cavity_op, const CompositeBasis& basis);

}  // namespace permsym
