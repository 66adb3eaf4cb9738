#include "permsym/block_partition.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace permsym {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) noexcept {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b) noexcept {
        a = find(a);
        b = find(b);
        if (a == b) {
            return false;
        }
        if (b < a) {
            std::swap(a, b);
        }
        parent_[b] = a;
        return true;
    }

private:
    std::vector<std::size_t> parent_;
};

void unite_pattern(DisjointSets& sets, const CsrMatrix& m) {
    auto rp = m.row_ptr();
    auto ci = m.col_idx();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) {
            sets.unite(r, ci[k]);
        }
    }
}

}  // namespace

BlockPartition::BlockPartition(std::vector<std::size_t> labels) : block_of_(std::move(labels)) {
    // relabel blocks by first appearance, i.e. by smallest member
    std::unordered_map<std::size_t, std::size_t> relabel;
    local_.resize(block_of_.size());
    for (std::size_t i = 0; i < block_of_.size(); ++i) {
        auto [it, inserted] = relabel.try_emplace(block_of_[i], members_.size());
        if (inserted) {
            members_.emplace_back();
        }
        block_of_[i] = it->second;
        local_[i] = members_[it->second].size();
        members_[it->second].push_back(i);
    }
    offsets_.assign(members_.size() + 1, 0);
    for (std::size_t b = 0; b < members_.size(); ++b) {
        offsets_[b + 1] = offsets_[b] + members_[b].size() * members_[b].size();
    }
}

BlockPartition BlockPartition::single(std::size_t dim) {
    return BlockPartition(std::vector<std::size_t>(dim, 0));
}

std::size_t BlockPartition::largest_block() const noexcept {
    std::size_t m = 0;
    for (const auto& b : members_) {
        m = std::max(m, b.size());
    }
    return m;
}

BlockPartition BlockPartition::detect(const SparseOperator& hamiltonian, std::span<const SparseOperator> collapses,
                                      std::span<const std::vector<std::size_t>> coupled_groups) {
    const std::size_t dim = hamiltonian.dim();
    DisjointSets sets(dim);
    unite_pattern(sets, hamiltonian.matrix());
    for (const auto& c : collapses) {
        if (c.dim() != dim) {
            throw std::invalid_argument("BlockPartition::detect: collapse operator dimension mismatch");
        }
        unite_pattern(sets, (c.matrix().adjoint() * c.matrix()));
    }
    for (const auto& group : coupled_groups) {
        for (std::size_t i : group) {
            if (i >= dim) {
                throw std::out_of_range("BlockPartition::detect: coupled index out of range");
            }
            sets.unite(group.front(), i);
        }
    }

    // Each collapse operator must send a source block into a single target block;
    // merge targets until that holds.
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& c : collapses) {
            std::unordered_map<std::size_t, std::size_t> target_of_source;
            auto rp = c.matrix().row_ptr();
            auto ci = c.matrix().col_idx();
            for (std::size_t r = 0; r < dim; ++r) {
                for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) {
                    const std::size_t src = sets.find(ci[k]);
                    const std::size_t dst = sets.find(r);
                    auto [it, inserted] = target_of_source.try_emplace(src, dst);
                    if (!inserted && sets.find(it->second) != dst) {
                        changed |= sets.unite(it->second, dst);
                    }
                }
            }
        }
    }

    std::vector<std::size_t> labels(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        labels[i] = sets.find(i);
    }
    return BlockPartition(std::move(labels));
}

}  // namespace permsym
