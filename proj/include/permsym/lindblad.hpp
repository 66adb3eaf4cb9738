#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "permsym/block_partition.hpp"
#include "permsym/density_matrix.hpp"
#include "permsym/dopri5.hpp"
#include "permsym/sparse_operator.hpp"
#include "permsym/trajectory.hpp"
#include "permsym/units.hpp"

namespace permsym {

struct NamedOperator {
    std::string name;
    SparseOperator op;
};

struct Expectation {
    double value;
    double imaginary;  // residue, ~0 for Hermitian operators
};

/// tr(O rho).
Expectation expectation(const SparseOperator& op, const DensityMatrix& rho);

/// Scratch buffers for one right-hand-side evaluation; one per concurrent caller.
struct RhsWorkspace {
    std::vector<cplx> w;
    std::vector<cplx> z;
};

/// Blocks an evolution can populate, packed contiguously in block order.
struct ActiveBlocks {
    static constexpr std::size_t inactive = static_cast<std::size_t>(-1);
    std::vector<std::size_t> blocks;  // ascending
    std::vector<std::size_t> offset;  // per partition block, `inactive` when skipped
    std::size_t storage = 0;
};

/**
 * Time-independent Lindblad generator
 *   drho/dt = -(i/hbar)[H, rho] + (1/hbar) sum_k (C_k rho C_k^dag - 1/2 {C_k^dag C_k, rho})
 * with H in eV and each C_k scaled so that C_k^dag C_k is in eV.
 *
 * The density matrix is held block diagonally over a BlockPartition (see
 * block_partition.hpp). Within each block H may be shifted by its mean
 * diagonal energy; a multiple of the identity inside a block commutes with
 * everything acting on that block, so rho(t) is unchanged while the size of
 * the cancelling terms drops.
 */
class LindbladSystem {
public:
    struct Options {
        bool detect_blocks = true;
        bool center_blocks = true;
        /// Index sets that must share a block, e.g. the support of the initial state.
        std::vector<std::vector<std::size_t>> coupled_groups;
    };

    LindbladSystem(SparseOperator hamiltonian, std::vector<SparseOperator> collapses);
    LindbladSystem(SparseOperator hamiltonian, std::vector<SparseOperator> collapses, Options options);

    std::size_t dim() const noexcept { return h_.dim(); }
    const SparseOperator& hamiltonian() const noexcept { return h_; }
    const std::vector<SparseOperator>& collapses() const noexcept { return c_; }
    /// C_k^dag C_k, precomputed.
    const SparseOperator& collapse_product(std::size_t k) const { return cdc_.at(k); }

    const BlockPartition& partition() const noexcept { return *partition_; }
    std::shared_ptr<const BlockPartition> partition_ptr() const noexcept { return partition_; }

    /// Energy subtracted from H inside block b (0 when centering is off).
    double block_shift(std::size_t b) const { return shift_.at(b); }

    /// drho/dt in 1/fs. rho must use this system's partition; it need not be Hermitian.
    DensityMatrix rhs(const DensityMatrix& rho) const;

    /**
     * drho/dtau in units hbar = 1 on block storage, assuming rho is Hermitian.
     * Only one triangle of rho's Hermitian part is effectively used, so the
     * result is the generator applied to (rho + rho^dag)/2.
     */
    void rhs_hermitian(std::span<const cplx> rho, std::span<cplx> out, RhsWorkspace& ws) const;

    /// Same as rhs_hermitian with every sparse product evaluated single-threaded.
    void rhs_hermitian_serial(std::span<const cplx> rho, std::span<cplx> out, RhsWorkspace& ws) const;

    /// Packed storage restricted to `active` (see reachable_blocks); blocks outside it are taken as zero.
    void rhs_hermitian(std::span<const cplx> rho, std::span<cplx> out, RhsWorkspace& ws,
                       const ActiveBlocks& active) const;

    RhsWorkspace make_workspace() const;

    const ActiveBlocks& all_blocks() const noexcept { return all_; }
    /// Blocks holding a nonzero entry of rho plus everything collapse jumps can reach from them.
    /// Every other block stays exactly zero for all times.
    ActiveBlocks reachable_blocks(const DensityMatrix& rho) const;

private:
    // C restricted to one source block, mapping into one target block
    struct CollapsePiece {
        std::size_t source;
        std::size_t target;
        CsrMatrix c;  // n_target x n_source, local indices
    };

    void build();
    void rhs_impl(std::span<const cplx> rho, std::span<cplx> out, RhsWorkspace& ws, bool serial,
                  const ActiveBlocks& active) const;

    SparseOperator h_;
    std::vector<SparseOperator> c_;
    std::vector<SparseOperator> cdc_;
    Options options_;
    std::shared_ptr<const BlockPartition> partition_;
    std::vector<double> shift_;
    std::vector<CsrMatrix> a_;  // per block: -i(H_b - shift_b) - 1/2 sum C^dag C restricted to b
    std::vector<CollapsePiece> pieces_;
    ActiveBlocks all_;
    std::size_t max_block_sq_ = 0;
    std::size_t max_piece_ = 0;
};

struct EvolveOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    std::size_t max_steps = 50'000'000;
    /// Grid times (evenly spaced over the grid) at which the smallest eigenvalue is computed.
    std::size_t positivity_samples = 10;
    /// Projector onto the highest cavity level; its expectation is the truncation leakage.
    std::optional<SparseOperator> leakage_probe;
    /// False when the truncation is exact (excitation-bounded), so leakage is only reported.
    bool leakage_is_truncation = true;
    double leakage_threshold = 1e-6;
    /// Emitter number operator and its expected value, for the conservation diagnostic.
    std::optional<SparseOperator> number_operator;
    double particles = 0.0;
    /// Called with every grid sample after observables are recorded.
    std::function<void(std::size_t index, const DensityMatrix& rho)> on_sample;
};

/**
 * Integrates rho0 over t_grid_fs (non-decreasing, starting at or after 0 with
 * rho0 taken at t_grid_fs[0]) using Dormand-Prince 5(4) with dense output,
 * re-Hermitizing after every accepted step.
 */
Trajectory evolve(const LindbladSystem& system, const DensityMatrix& rho0, std::span<const double> t_grid_fs,
                  std::span<const NamedOperator> observables, const EvolveOptions& options = {});

}  // namespace permsym
