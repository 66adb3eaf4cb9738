#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "permsym/fock_basis.hpp"
#include "permsym/lindblad.hpp"
#include "permsym/second_quantization.hpp"

// Brute-force first-quantized reference on the full d^N product space.
namespace permsym::oracle {

/// A desk-scale size limit was exceeded; the message carries the size arithmetic.
class GuardViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Largest full-space dimension (emitters times cavity) accepted by evolve().
inline constexpr std::size_t evolve_guard = 5000;
/// Largest d^N accepted for building any full-space operator.
inline constexpr std::size_t basis_guard = 1'000'000;
/// Largest N for which the N! permutations are enumerated.
inline constexpr int symmetrizer_guard = 8;

/**
 * Product basis of N sites with d levels each. Site 0 is the most
 * significant digit: index = sum_j s_j d^(N-1-j).
 */
class FullBasis {
public:
    FullBasis(int levels, int sites);

    int levels() const noexcept { return d_; }
    int sites() const noexcept { return n_; }
    std::size_t dim() const noexcept { return dim_; }

    std::vector<int> digits(std::size_t index) const;
    std::size_t index(std::span<const int> digits) const;
    std::string tag() const;

private:
    int d_;
    int n_;
    std::size_t dim_;
};

/**
 * P_pi moves the state of site j to site pi[j]:
 * P_pi |s_0 .. s_{N-1}> = |s'> with s'_{pi(j)} = s_j. Then P_pi P_rho = P_{pi o rho}.
 */
SparseOperator permutation_operator(const FullBasis& basis, std::span<const int> perm);

/// (1/N!) sum over all permutations; throws GuardViolation for N > symmetrizer_guard.
SparseOperator symmetrizer(const FullBasis& basis);

/// op (d x d) acting on one site (0-based), identity elsewhere.
SparseOperator lift_local(const FullBasis& basis, const Eigen::MatrixXcd& op, int site);
/// Sum of lift_local over all sites.
SparseOperator collective(const FullBasis& basis, const Eigen::MatrixXcd& op);

/**
 * (1/M!) sum over ordered tuples of distinct sites (j_1..j_M) of
 * V^{beta}_{alpha} sigma^{j_1}_{beta_1 alpha_1} .. sigma^{j_M}_{beta_M alpha_M},
 * with sigma_{beta alpha} = |beta><alpha|.
 */
SparseOperator mbody_first_quantized(const FullBasis& basis, const MBodyCoefficients& coeffs);

/**
 * Isometry from the Fock sector into the product space. The column of Fock
 * state (n_1..n_d) is the equal-weight sum over the N!/prod(n_a!) distinct
 * site assignments, normalized to one.
 */
struct Isometry {
    CsrMatrix t;  // full dim x Fock dim
};

Isometry build_isometry(const FullBasis& basis, const FockBasis& fock);

/// Isometry extended by the identity on a cavity of the composite basis, keeping only retained states.
CsrMatrix isometry_with_cavity(const Isometry& iso, const CompositeBasis& composite);

/// T^dag O T.
SparseOperator project(const CsrMatrix& t, const SparseOperator& full_op);

/// Throws std::invalid_argument unless rho is invariant under every site permutation (tolerance tol).
void require_symmetric(const FullBasis& basis, int cavity_dim, const DensityMatrix& rho, double tol = 1e-12);

/**
 * Lindblad evolution on the full product space (emitters times cavity), after
 * the size guard and a check that rho0 lies in the symmetric subspace.
 */
Trajectory evolve(const FullBasis& basis, int cavity_dim, const LindbladSystem& system, const DensityMatrix& rho0,
                  std::span<const double> t_grid_fs, std::span<const NamedOperator> observables,
                  const EvolveOptions& options = {});

}  // namespace permsym::oracle
