#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "permsym/block_partition.hpp"
#include "permsym/csr_matrix.hpp"

namespace permsym {

/**
 * Dense density matrix stored block-diagonally over a BlockPartition. With a
 * single-block partition this is an ordinary dense matrix.
 */
class DensityMatrix {
public:
    using BlockMap = Eigen::Map<RowMatrix>;
    using ConstBlockMap = Eigen::Map<const RowMatrix>;

    explicit DensityMatrix(std::shared_ptr<const BlockPartition> partition);

    /// |psi><psi| / <psi|psi>; psi must be supported within a single block.
    static DensityMatrix from_pure(std::shared_ptr<const BlockPartition> partition, const Eigen::VectorXcd& psi);
    /// Entries outside the partition's blocks must be exactly zero.
    static DensityMatrix from_dense(std::shared_ptr<const BlockPartition> partition, const Eigen::MatrixXcd& rho);

    std::size_t dim() const noexcept { return partition_->dim(); }
    const BlockPartition& partition() const noexcept { return *partition_; }
    std::shared_ptr<const BlockPartition> partition_ptr() const noexcept { return partition_; }

    BlockMap block(std::size_t b);
    ConstBlockMap block(std::size_t b) const;

    std::span<cplx> data() noexcept { return data_; }
    std::span<const cplx> data() const noexcept { return data_; }

    cplx entry(std::size_t i, std::size_t j) const;

    double time_fs() const noexcept { return time_fs_; }
    void set_time_fs(double t) noexcept { time_fs_ = t; }

    cplx trace() const;
    /// max |rho - rho^dagger| elementwise.
    double hermiticity_error() const;
    /// Smallest eigenvalue of the Hermitian part.
    double min_eigenvalue() const;
    void hermitize();

    Eigen::MatrixXcd to_dense() const;

private:
    std::shared_ptr<const BlockPartition> partition_;
    std::vector<cplx> data_;
    double time_fs_ = 0.0;
};

}  // namespace permsym
