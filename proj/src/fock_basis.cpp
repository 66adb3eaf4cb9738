#include "permsym/fock_basis.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace permsym {

int FockState::total() const noexcept {
    return std::accumulate(occ.begin(), occ.end(), 0);
}

std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    unsigned __int128 result = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        // result * (n - k + i) / i stays integral at every step
        result = result * (n - k + i) / i;
        if (result > std::numeric_limits<std::size_t>::max()) {
            std::ostringstream msg;
            msg << "binomial C(" << n << ", " << k << ") exceeds the index type";
            throw std::overflow_error(msg.str());
        }
    }
    return static_cast<std::size_t>(result);
}

std::size_t sector_size(int modes, int particles) {
    if (modes < 1 || particles < 0) {
        throw std::invalid_argument("sector_size: need modes >= 1 and particles >= 0");
    }
    return binomial(static_cast<std::size_t>(particles + modes - 1), static_cast<std::size_t>(particles));
}

namespace {

void fill_compositions(int pos, int remaining, std::vector<int>& current, std::vector<int>& out) {
    const int d = static_cast<int>(current.size());
    if (pos == d - 1) {
        current[pos] = remaining;
        out.insert(out.end(), current.begin(), current.end());
        return;
    }
    for (int v = remaining; v >= 0; --v) {
        current[pos] = v;
        fill_compositions(pos + 1, remaining - v, current, out);
    }
}

}  // namespace

FockBasis::FockBasis(int modes, int particles) : modes_(modes), particles_(particles) {
    size_ = sector_size(modes, particles);
    const std::size_t entries = size_ * static_cast<std::size_t>(modes);
    if (entries / static_cast<std::size_t>(modes) != size_) {
        throw std::overflow_error("FockBasis: occupation table size exceeds the index type");
    }
    occ_.reserve(entries);
    std::vector<int> current(static_cast<std::size_t>(modes), 0);
    fill_compositions(0, particles, current, occ_);

    stride_ = static_cast<std::size_t>(particles + modes) + 1;
    choose_.assign(stride_ * stride_, 0);
    for (std::size_t n = 0; n < stride_; ++n) {
        choose_[n * stride_] = 1;
        for (std::size_t k = 1; k <= n; ++k) {
            choose_[n * stride_ + k] = choose_[(n - 1) * stride_ + k - 1] + choose_[(n - 1) * stride_ + k];
        }
    }
}

FockState FockBasis::unrank(std::size_t index) const {
    if (index >= size_) {
        throw std::out_of_range("FockBasis::unrank: index out of range");
    }
    auto s = occupations(index);
    return FockState{std::vector<int>(s.begin(), s.end())};
}

std::size_t FockBasis::rank_unchecked(std::span<const int> occ) const noexcept {
    // Number of states preceding occ: at position a with r particles left,
    // every larger first entry v > occ[a] contributes C(r - v + k - 1, k - 1)
    // states (k = remaining modes); summed over v this is C(r - occ[a] - 1 + k, k).
    std::size_t index = 0;
    int remaining = particles_;
    for (int a = 0; a + 1 < modes_; ++a) {
        const int k = modes_ - a - 1;
        if (occ[a] < remaining) {
            index += choose_[static_cast<std::size_t>(remaining - occ[a] - 1 + k) * stride_ + static_cast<std::size_t>(k)];
        }
        remaining -= occ[a];
    }
    return index;
}

std::optional<std::size_t> FockBasis::find(std::span<const int> occ) const noexcept {
    if (occ.size() != static_cast<std::size_t>(modes_)) {
        return std::nullopt;
    }
    int total = 0;
    for (int n : occ) {
        if (n < 0) {
            return std::nullopt;
        }
        total += n;
    }
    if (total != particles_) {
        return std::nullopt;
    }
    return rank_unchecked(occ);
}

std::size_t FockBasis::rank(std::span<const int> occ) const {
    auto idx = find(occ);
    if (!idx) {
        std::ostringstream msg;
        msg << "FockBasis::rank: state is not in the sector d=" << modes_ << ", N=" << particles_;
        throw std::domain_error(msg.str());
    }
    return *idx;
}

std::size_t FockBasis::rank(const FockState& s) const {
    return rank(std::span<const int>(s.occ));
}

std::string FockBasis::tag() const {
    std::ostringstream out;
    out << "fock(d=" << modes_ << ",N=" << particles_ << ")";
    return out.str();
}

FockBasis enumerate(int modes, int particles) {
    return FockBasis(modes, particles);
}

CompositeBasis::CompositeBasis(std::shared_ptr<const FockBasis> emitters, int cavity_dim)
    : emitters_(std::move(emitters)), cavity_dim_(cavity_dim) {
    if (!emitters_) {
        throw std::invalid_argument("CompositeBasis: null emitter basis");
    }
    if (cavity_dim_ < 1) {
        throw std::invalid_argument("CompositeBasis: cavity dimension must be >= 1");
    }
}

std::size_t CompositeBasis::size() const noexcept {
    return restricted() ? retained_.size() : full_size();
}

std::optional<std::size_t> CompositeBasis::index_of_full(std::size_t full) const noexcept {
    if (full >= full_size()) {
        return std::nullopt;
    }
    if (!restricted()) {
        return full;
    }
    const auto r = full_to_retained_[full];
    if (r < 0) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(r);
}

int CompositeBasis::excitation(std::size_t i) const {
    if (weights_.empty()) {
        throw std::logic_error("CompositeBasis::excitation: no excitation weights set");
    }
    return excitation_of_full(full_index(i));
}

int CompositeBasis::excitation_of_full(std::size_t full) const noexcept {
    auto occ = emitters_->occupations(full / static_cast<std::size_t>(cavity_dim_));
    int total = static_cast<int>(full % static_cast<std::size_t>(cavity_dim_));
    for (std::size_t a = 0; a < occ.size(); ++a) {
        total += weights_[a] * occ[a];
    }
    return total;
}

std::string CompositeBasis::tag() const {
    std::ostringstream out;
    out << emitters_->tag() << "xcav(" << cavity_dim_ << ")";
    if (restricted()) {
        out << "|exc<=" << *max_excitation_;
    }
    return out.str();
}

CompositeBasis restrict_composite(const CompositeBasis& basis, std::vector<int> weights,
                                  std::optional<int> max_excitation) {
    if (!max_excitation) {
        return basis;
    }
    if (weights.size() != static_cast<std::size_t>(basis.emitters().modes())) {
        throw std::invalid_argument("restrict_composite: one excitation weight per emitter mode required");
    }
    if (std::any_of(weights.begin(), weights.end(), [](int w) { return w < 0; })) {
        throw std::invalid_argument("restrict_composite: excitation weights must be non-negative");
    }
    if (basis.restricted() && basis.weights_ != weights) {
        throw std::invalid_argument("restrict_composite: basis already restricted with different weights");
    }

    CompositeBasis out(basis.emitters_, basis.cavity_dim_);
    out.weights_ = std::move(weights);
    out.max_excitation_ = basis.restricted() ? std::min(*basis.max_excitation_, *max_excitation) : *max_excitation;
    out.full_to_retained_.assign(out.full_size(), -1);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (out.excitation_of_full(basis.full_index(i)) <= *out.max_excitation_) {
            out.full_to_retained_[basis.full_index(i)] = static_cast<std::ptrdiff_t>(out.retained_.size());
            out.retained_.push_back(basis.full_index(i));
        }
    }
    return out;
}

}  // namespace permsym
