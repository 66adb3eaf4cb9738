#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace permsym {

/// Occupation numbers of d bosonic emitter modes.
struct FockState {
    std::vector<int> occ;

    int total() const noexcept;
    auto operator<=>(const FockState&) const = default;
};

/// Binomial coefficient C(n, k); throws std::overflow_error if it does not fit in std::size_t.
std::size_t binomial(std::size_t n, std::size_t k);

/// Number of weak compositions of N into d parts, C(N+d-1, N).
std::size_t sector_size(int modes, int particles);

/**
 * Fixed-particle-number sector of d bosonic modes.
 *
 * States are all weak compositions of N into d parts, ordered lexicographically
 * descending: (N,0,...,0) has index 0 and the fully inverted state (0,...,0,N)
 * is last. Ranking uses a combinadic formula, O(d) per lookup.
 */
class FockBasis {
public:
    FockBasis(int modes, int particles);

    int modes() const noexcept { return modes_; }
    int particles() const noexcept { return particles_; }
    std::size_t size() const noexcept { return size_; }

    std::span<const int> occupations(std::size_t index) const noexcept {
        return {occ_.data() + index * static_cast<std::size_t>(modes_), static_cast<std::size_t>(modes_)};
    }
    FockState unrank(std::size_t index) const;

    /// Throws std::domain_error when the state is not in this sector.
    std::size_t rank(const FockState& s) const;
    std::size_t rank(std::span<const int> occ) const;

    /// Non-throwing rank: nullopt when occ is outside the sector.
    std::optional<std::size_t> find(std::span<const int> occ) const noexcept;

    std::string tag() const;

private:
    int modes_;
    int particles_;
    std::size_t size_;
    std::vector<int> occ_;
    // choose_[n * stride_ + k] = C(n, k) for n <= particles + modes
    std::vector<std::size_t> choose_;
    std::size_t stride_;

    std::size_t rank_unchecked(std::span<const int> occ) const noexcept;
};

FockBasis enumerate(int modes, int particles);

/**
 * Emitter sector tensored with a truncated cavity, optionally restricted to
 * states whose weighted excitation sum(w_a n_a) + n_cav does not exceed a limit.
 *
 * Composite index ordering: emitter index slowest, cavity level fastest.
 * Restricted bases keep an explicit list of retained full indices.
 */
class CompositeBasis {
public:
    CompositeBasis(std::shared_ptr<const FockBasis> emitters, int cavity_dim);

    const FockBasis& emitters() const noexcept { return *emitters_; }
    std::shared_ptr<const FockBasis> emitters_ptr() const noexcept { return emitters_; }
    int cavity_dim() const noexcept { return cavity_dim_; }

    bool restricted() const noexcept { return max_excitation_.has_value(); }
    const std::vector<int>& excitation_weights() const noexcept { return weights_; }
    std::optional<int> max_excitation() const noexcept { return max_excitation_; }

    std::size_t size() const noexcept;
    std::size_t full_size() const noexcept { return emitters_->size() * static_cast<std::size_t>(cavity_dim_); }

    std::size_t full_index(std::size_t i) const noexcept { return restricted() ? retained_[i] : i; }
    std::optional<std::size_t> index_of_full(std::size_t full) const noexcept;
    std::size_t emitter_index(std::size_t i) const noexcept { return full_index(i) / static_cast<std::size_t>(cavity_dim_); }
    int cavity_level(std::size_t i) const noexcept { return static_cast<int>(full_index(i) % static_cast<std::size_t>(cavity_dim_)); }

    /// Weighted excitation of composite state i; requires weights.
    int excitation(std::size_t i) const;

    std::string tag() const;

private:
    friend CompositeBasis restrict_composite(const CompositeBasis&, std::vector<int>, std::optional<int>);

    int excitation_of_full(std::size_t full) const noexcept;

    std::shared_ptr<const FockBasis> emitters_;
    int cavity_dim_;
    std::vector<int> weights_;
    std::optional<int> max_excitation_;
    std::vector<std::size_t> retained_;
    std::vector<std::ptrdiff_t> full_to_retained_;
};

/**
 * Keep only composite states with sum(w_a n_a) + n_cav <= max_excitation.
 * A nullopt limit returns the basis unchanged. Restricting an already
 * restricted basis intersects the two retained sets.
 */
CompositeBasis restrict_composite(const CompositeBasis& basis, std::vector<int> weights,
                                  std::optional<int> max_excitation);

}  // namespace permsym
