#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "permsym/sparse_operator.hpp"

namespace permsym {

/**
 * Partition of basis indices into blocks such that a density matrix that is
 * block diagonal stays block diagonal under the Lindblad equation.
 *
 * Sufficient conditions, enforced by detect():
 *   - H and every C^dag C connect indices within one block only;
 *   - each collapse operator maps any given block into a single block;
 *   - every coupled group (e.g. the support of the initial state) lies in one block.
 *
 * Blocks are ordered by their smallest member; members are ascending. Dense
 * block storage is row-major, blocks concatenated in order.
 */
class BlockPartition {
public:
    static BlockPartition single(std::size_t dim);
    static BlockPartition detect(const SparseOperator& hamiltonian, std::span<const SparseOperator> collapses,
                                 std::span<const std::vector<std::size_t>> coupled_groups = {});

    std::size_t dim() const noexcept { return block_of_.size(); }
    std::size_t num_blocks() const noexcept { return members_.size(); }
    std::size_t block_of(std::size_t i) const noexcept { return block_of_[i]; }
    std::size_t local_index(std::size_t i) const noexcept { return local_[i]; }
    std::span<const std::size_t> members(std::size_t b) const noexcept { return members_[b]; }
    std::size_t block_size(std::size_t b) const noexcept { return members_[b].size(); }
    std::size_t largest_block() const noexcept;

    std::size_t offset(std::size_t b) const noexcept { return offsets_[b]; }
    /// Sum of squared block sizes.
    std::size_t storage_size() const noexcept { return offsets_.back(); }

    bool operator==(const BlockPartition& other) const noexcept { return block_of_ == other.block_of_; }

private:
    explicit BlockPartition(std::vector<std::size_t> labels);

    std::vector<std::size_t> block_of_;
    std::vector<std::size_t> local_;
    std::vector<std::vector<std::size_t>> members_;
    std::vector<std::size_t> offsets_;
};

}  // namespace permsym
