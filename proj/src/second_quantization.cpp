#include "permsym/second_quantization.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace permsym {

MBodyCoefficients::MBodyCoefficients(int order, int modes) : order_(order), modes_(modes) {
    if (order < 0 || modes < 1) {
        throw std::invalid_argument("MBodyCoefficients: need order >= 0 and modes >= 1");
    }
}

MBodyCoefficients& MBodyCoefficients::add(std::vector<int> creations, std::vector<int> annihilations, cplx value) {
    if (creations.size() != static_cast<std::size_t>(order_) || annihilations.size() != static_cast<std::size_t>(order_)) {
        throw std::invalid_argument("MBodyCoefficients::add: index lists must have length M");
    }
    for (int m : creations) {
        if (m < 0 || m >= modes_) {
            throw std::out_of_range("MBodyCoefficients::add: creation mode out of range");
        }
    }
    for (int m : annihilations) {
        if (m < 0 || m >= modes_) {
            throw std::out_of_range("MBodyCoefficients::add: annihilation mode out of range");
        }
    }
    entries_[{std::move(creations), std::move(annihilations)}] += value;
    return *this;
}

cplx MBodyCoefficients::at(const std::vector<int>& creations, const std::vector<int>& annihilations) const {
    auto it = entries_.find({creations, annihilations});
    return it == entries_.end() ? cplx(0.0) : it->second;
}

std::vector<MBodyTerm> MBodyCoefficients::terms() const {
    std::vector<MBodyTerm> out;
    out.reserve(entries_.size());
    for (const auto& [key, value] : entries_) {
        if (value != cplx(0.0)) {
            out.push_back({key.first, key.second, value});
        }
    }
    return out;
}

bool MBodyCoefficients::is_hermitian_generating(double tol) const {
    for (const auto& [key, value] : entries_) {
        if (std::abs(value - std::conj(at(key.second, key.first))) > tol) {
            return false;
        }
    }
    return true;
}

namespace {

// Applies b_alpha (right to left) then b^dag_beta (right to left) in place.
// Returns the amplitude, or 0 when the state is annihilated.
double apply_string(std::vector<int>& occ, std::span<const int> creations, std::span<const int> annihilations) {
    double amp = 1.0;
    for (auto it = annihilations.rbegin(); it != annihilations.rend(); ++it) {
        int& n = occ[static_cast<std::size_t>(*it)];
        if (n == 0) {
            return 0.0;
        }
        amp *= std::sqrt(static_cast<double>(n));
        --n;
    }
    for (auto it = creations.rbegin(); it != creations.rend(); ++it) {
        int& n = occ[static_cast<std::size_t>(*it)];
        ++n;
        amp *= std::sqrt(static_cast<double>(n));
    }
    return amp;
}

void check_string(const FockBasis& basis, std::span<const int> creations, std::span<const int> annihilations) {
    if (creations.size() != annihilations.size()) {
        throw std::invalid_argument("normal_ordered_string: only particle-number conserving strings are supported");
    }
    for (int m : creations) {
        if (m < 0 || m >= basis.modes()) {
            throw std::out_of_range("normal_ordered_string: creation mode out of range");
        }
    }
    for (int m : annihilations) {
        if (m < 0 || m >= basis.modes()) {
            throw std::out_of_range("normal_ordered_string: annihilation mode out of range");
        }
    }
}

double factorial(int m) {
    return std::tgamma(static_cast<double>(m) + 1.0);
}

}  // namespace

SparseOperator normal_ordered_string(const FockBasis& basis, std::span<const int> creations,
                                     std::span<const int> annihilations) {
    check_string(basis, creations, annihilations);
    std::vector<Triplet> t;
    std::vector<int> occ;
    for (std::size_t col = 0; col < basis.size(); ++col) {
        auto src = basis.occupations(col);
        occ.assign(src.begin(), src.end());
        const double amp = apply_string(occ, creations, annihilations);
        if (amp != 0.0) {
            t.push_back({basis.rank(occ), col, amp});
        }
    }
    return SparseOperator::from_triplets(basis.size(), std::move(t), basis.tag());
}

SparseOperator second_quantize(const FockBasis& basis, const MBodyCoefficients& coeffs) {
    if (coeffs.modes() != basis.modes()) {
        throw std::invalid_argument("second_quantize: coefficient modes do not match the basis");
    }
    const auto terms = coeffs.terms();
    const double norm = 1.0 / factorial(coeffs.order());
    const std::size_t dim = basis.size();

    std::vector<std::vector<Triplet>> per_thread;
#pragma omp parallel
    {
#ifdef _OPENMP
#pragma omp single
        per_thread.resize(static_cast<std::size_t>(omp_get_num_threads()));
        auto& local = per_thread[static_cast<std::size_t>(omp_get_thread_num())];
#else
        per_thread.resize(1);
        auto& local = per_thread[0];
#endif
        std::vector<int> occ;
#pragma omp for schedule(static)
        for (std::size_t col = 0; col < dim; ++col) {
            auto src = basis.occupations(col);
            for (const auto& term : terms) {
                occ.assign(src.begin(), src.end());
                const double amp = apply_string(occ, term.creations, term.annihilations);
                if (amp != 0.0) {
                    local.push_back({*basis.find(occ), col, norm * amp * term.value});
                }
            }
        }
    }

    std::vector<Triplet> all;
    for (auto& part : per_thread) {
        all.insert(all.end(), part.begin(), part.end());
    }
    return SparseOperator::from_triplets(dim, std::move(all), basis.tag());
}

SparseOperator number_operator(const FockBasis& basis) {
    MBodyCoefficients v(1, basis.modes());
    for (int a = 0; a < basis.modes(); ++a) {
        v.add({a}, {a}, 1.0);
    }
    return second_quantize(basis, v);
}

BosonMode boson_mode(int dim) {
    if (dim < 1) {
        throw std::invalid_argument("boson_mode: dimension must be >= 1");
    }
    const auto n = static_cast<std::size_t>(dim);
    const std::string tag = "boson(" + std::to_string(dim) + ")";
    std::vector<Triplet> ta;
    std::vector<Triplet> tn;
    for (std::size_t k = 1; k < n; ++k) {
        ta.push_back({k - 1, k, std::sqrt(static_cast<double>(k))});
        tn.push_back({k, k, static_cast<double>(k)});
    }
    auto a = SparseOperator::from_triplets(n, std::move(ta), tag);
    auto a_dag = adjoint(a);
    return {std::move(a), std::move(a_dag), SparseOperator::from_triplets(n, std::move(tn), tag)};
}

SparseOperator kron(const SparseOperator& emitter_op, const SparseOperator& cavity_op, const CompositeBasis& basis) {
    if (emitter_op.dim() != basis.emitters().size() ||
        cavity_op.dim() != static_cast<std::size_t>(basis.cavity_dim())) {
        throw std::invalid_argument("kron: operator dimensions do not match the composite basis");
    }
    const std::size_t nc = cavity_op.dim();
    const auto cav = cavity_op.matrix().triplets();
    std::vector<Triplet> t;
    t.reserve(emitter_op.nnz() * cav.size());
    for (const auto& e : emitter_op.matrix().triplets()) {
        for (const auto& c : cav) {
            const auto row = basis.index_of_full(e.row * nc + c.row);
            const auto col = basis.index_of_full(e.col * nc + c.col);
            if (row && col) {
                t.push_back({*row, *col, e.value * c.value});
            }
        }
    }
    return SparseOperator::from_triplets(basis.size(), std::move(t), basis.tag());
}

}  // namespace permsym
