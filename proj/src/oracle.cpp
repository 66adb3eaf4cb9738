#include "permsym/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace permsym::oracle {

namespace {

// all ordered tuples of `m` distinct sites out of n
void distinct_tuples(int n, int m, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == m) {
        out.push_back(cur);
        return;
    }
    for (int j = 0; j < n; ++j) {
        if (std::find(cur.begin(), cur.end(), j) != cur.end()) {
            continue;
        }
        cur.push_back(j);
        distinct_tuples(n, m, cur, out);
        cur.pop_back();
    }
}

}  // namespace

FullBasis::FullBasis(int levels, int sites) : d_(levels), n_(sites), dim_(1) {
    if (levels < 1 || sites < 1) {
        throw std::invalid_argument("FullBasis: need at least one level and one site");
    }
    for (int j = 0; j < sites; ++j) {
        if (dim_ > basis_guard / static_cast<std::size_t>(levels)) {
            std::ostringstream msg;
            msg << "full product space d^N = " << levels << "^" << sites << " exceeds the oracle limit of "
                << basis_guard << " states";
            throw GuardViolation(msg.str());
        }
        dim_ *= static_cast<std::size_t>(levels);
    }
}

std::vector<int> FullBasis::digits(std::size_t index) const {
    std::vector<int> s(static_cast<std::size_t>(n_));
    for (int j = n_ - 1; j >= 0; --j) {
        s[static_cast<std::size_t>(j)] = static_cast<int>(index % static_cast<std::size_t>(d_));
        index /= static_cast<std::size_t>(d_);
    }
    return s;
}

std::size_t FullBasis::index(std::span<const int> digits) const {
    if (digits.size() != static_cast<std::size_t>(n_)) {
        throw std::invalid_argument("FullBasis::index: wrong number of sites");
    }
    std::size_t idx = 0;
    for (int s : digits) {
        if (s < 0 || s >= d_) {
            throw std::out_of_range("FullBasis::index: level out of range");
        }
        idx = idx * static_cast<std::size_t>(d_) + static_cast<std::size_t>(s);
    }
    return idx;
}

std::string FullBasis::tag() const { return "full(d=" + std::to_string(d_) + ",N=" + std::to_string(n_) + ")"; }

SparseOperator permutation_operator(const FullBasis& basis, std::span<const int> perm) {
    const auto n = static_cast<std::size_t>(basis.sites());
    if (perm.size() != n) {
        throw std::invalid_argument("permutation_operator: permutation length differs from site count");
    }
    std::vector<int> check(perm.begin(), perm.end());
    std::sort(check.begin(), check.end());
    for (std::size_t j = 0; j < n; ++j) {
        if (check[j] != static_cast<int>(j)) {
            throw std::invalid_argument("permutation_operator: not a permutation of 0..N-1");
        }
    }
    std::vector<Triplet> trip;
    trip.reserve(basis.dim());
    std::vector<int> moved(n);
    for (std::size_t x = 0; x < basis.dim(); ++x) {
        const auto s = basis.digits(x);
        for (std::size_t j = 0; j < n; ++j) {
            moved[static_cast<std::size_t>(perm[j])] = s[j];
        }
        trip.push_back({basis.index(moved), x, cplx(1.0)});
    }
    return SparseOperator::from_triplets(basis.dim(), std::move(trip), basis.tag());
}

SparseOperator symmetrizer(const FullBasis& basis) {
    if (basis.sites() > symmetrizer_guard) {
        std::ostringstream msg;
        msg << "symmetrizer: N = " << basis.sites() << " needs N! permutations; limit is N <= " << symmetrizer_guard;
        throw GuardViolation(msg.str());
    }
    const auto n = static_cast<std::size_t>(basis.sites());
    std::vector<std::vector<int>> perms;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    const double weight = 1.0 / static_cast<double>(perms.size());

    std::vector<Triplet> trip;
    std::vector<int> moved(n);
    std::map<std::size_t, double> column;
    for (std::size_t x = 0; x < basis.dim(); ++x) {
        const auto s = basis.digits(x);
        column.clear();
        for (const auto& pi : perms) {
            for (std::size_t j = 0; j < n; ++j) {
                moved[static_cast<std::size_t>(pi[j])] = s[j];
            }
            column[basis.index(moved)] += weight;
        }
        for (const auto& [y, v] : column) {
            trip.push_back({y, x, cplx(v)});
        }
    }
    return SparseOperator::from_triplets(basis.dim(), std::move(trip), basis.tag());
}

SparseOperator lift_local(const FullBasis& basis, const Eigen::MatrixXcd& op, int site) {
    const int d = basis.levels();
    if (op.rows() != d || op.cols() != d) {
        throw std::invalid_argument("lift_local: single-site operator must be d x d");
    }
    if (site < 0 || site >= basis.sites()) {
        throw std::out_of_range("lift_local: site out of range");
    }
    std::vector<Triplet> trip;
    for (std::size_t x = 0; x < basis.dim(); ++x) {
        auto s = basis.digits(x);
        const int alpha = s[static_cast<std::size_t>(site)];
        for (int beta = 0; beta < d; ++beta) {
            const cplx v = op(beta, alpha);
            if (v == cplx(0.0)) {
                continue;
            }
            s[static_cast<std::size_t>(site)] = beta;
            trip.push_back({basis.index(s), x, v});
        }
    }
    return SparseOperator::from_triplets(basis.dim(), std::move(trip), basis.tag());
}

SparseOperator collective(const FullBasis& basis, const Eigen::MatrixXcd& op) {
    SparseOperator sum = SparseOperator::zero(basis.dim(), basis.tag());
    for (int j = 0; j < basis.sites(); ++j) {
        sum = sum + lift_local(basis, op, j);
    }
    return sum;
}

SparseOperator mbody_first_quantized(const FullBasis& basis, const MBodyCoefficients& coeffs) {
    if (coeffs.modes() != basis.levels()) {
        throw std::invalid_argument("mbody_first_quantized: coefficient mode count differs from site levels");
    }
    const int m = coeffs.order();
    if (m > basis.sites()) {
        return SparseOperator::zero(basis.dim(), basis.tag());
    }
    const auto terms = coeffs.terms();
    if (m == 0) {
        cplx v(0.0);
        for (const auto& t : terms) {
            v += t.value;
        }
        return scale(SparseOperator::identity(basis.dim(), basis.tag()), v);
    }
    double m_fact = 1.0;
    for (int k = 2; k <= m; ++k) {
        m_fact *= k;
    }
    std::vector<std::vector<int>> tuples;
    std::vector<int> cur;
    distinct_tuples(basis.sites(), m, cur, tuples);

    std::vector<Triplet> trip;
    for (std::size_t x = 0; x < basis.dim(); ++x) {
        const auto s = basis.digits(x);
        for (const auto& sites : tuples) {
            for (const auto& t : terms) {
                bool match = true;
                for (int k = 0; k < m && match; ++k) {
                    match = s[static_cast<std::size_t>(sites[static_cast<std::size_t>(k)])] ==
                            t.annihilations[static_cast<std::size_t>(k)];
                }
                if (!match) {
                    continue;
                }
                auto target = s;
                for (int k = 0; k < m; ++k) {
                    target[static_cast<std::size_t>(sites[static_cast<std::size_t>(k)])] =
                        t.creations[static_cast<std::size_t>(k)];
                }
                trip.push_back({basis.index(target), x, t.value / m_fact});
            }
        }
    }
    return SparseOperator::from_triplets(basis.dim(), std::move(trip), basis.tag());
}

Isometry build_isometry(const FullBasis& basis, const FockBasis& fock) {
    if (fock.modes() != basis.levels() || fock.particles() != basis.sites()) {
        throw std::invalid_argument("build_isometry: Fock sector does not match the product space");
    }
    std::vector<Triplet> trip;
    for (std::size_t k = 0; k < fock.size(); ++k) {
        const auto occ = fock.occupations(k);
        std::vector<int> assignment;
        for (int a = 0; a < fock.modes(); ++a) {
            assignment.insert(assignment.end(), static_cast<std::size_t>(occ[static_cast<std::size_t>(a)]), a);
        }
        // sorted ascending, so next_permutation visits each distinct assignment once
        std::vector<std::size_t> rows;
        do {
            rows.push_back(basis.index(assignment));
        } while (std::next_permutation(assignment.begin(), assignment.end()));
        const double amp = 1.0 / std::sqrt(static_cast<double>(rows.size()));
        for (std::size_t r : rows) {
            trip.push_back({r, k, cplx(amp)});
        }
    }
    return {CsrMatrix::from_triplets(basis.dim(), fock.size(), std::move(trip))};
}

CsrMatrix isometry_with_cavity(const Isometry& iso, const CompositeBasis& composite) {
    if (iso.t.cols() != composite.emitters().size()) {
        throw std::invalid_argument("isometry_with_cavity: isometry and composite basis disagree on the Fock sector");
    }
    const auto nc = static_cast<std::size_t>(composite.cavity_dim());
    const CsrMatrix tt = iso.t.adjoint();  // rows = Fock states
    auto rp = tt.row_ptr();
    auto ci = tt.col_idx();
    auto v = tt.values();
    std::vector<Triplet> trip;
    for (std::size_t i = 0; i < composite.size(); ++i) {
        const std::size_t e = composite.emitter_index(i);
        const auto n = static_cast<std::size_t>(composite.cavity_level(i));
        for (std::size_t k = rp[e]; k < rp[e + 1]; ++k) {
            trip.push_back({ci[k] * nc + n, i, std::conj(v[k])});
        }
    }
    return CsrMatrix::from_triplets(iso.t.rows() * nc, composite.size(), std::move(trip));
}

SparseOperator project(const CsrMatrix& t, const SparseOperator& full_op) {
    if (t.rows() != full_op.dim()) {
        throw std::invalid_argument("project: isometry rows differ from operator dimension");
    }
    return SparseOperator(t.adjoint() * (full_op.matrix() * t), {});
}

void require_symmetric(const FullBasis& basis, int cavity_dim, const DensityMatrix& rho, double tol) {
    const auto nc = static_cast<std::size_t>(cavity_dim);
    if (rho.dim() != basis.dim() * nc) {
        throw std::invalid_argument("require_symmetric: density matrix dimension mismatch");
    }
    const auto& p = rho.partition();
    // adjacent transpositions generate the symmetric group
    for (int k = 0; k + 1 < basis.sites(); ++k) {
        std::vector<std::size_t> swapped(rho.dim());
        for (std::size_t i = 0; i < rho.dim(); ++i) {
            auto s = basis.digits(i / nc);
            std::swap(s[static_cast<std::size_t>(k)], s[static_cast<std::size_t>(k) + 1]);
            swapped[i] = basis.index(s) * nc + i % nc;
        }
        for (std::size_t b = 0; b < p.num_blocks(); ++b) {
            const auto members = p.members(b);
            const auto blk = rho.block(b);
            for (std::size_t r = 0; r < members.size(); ++r) {
                for (std::size_t c = 0; c < members.size(); ++c) {
                    const cplx here = blk(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
                    const cplx there = rho.entry(swapped[members[r]], members[c]);
                    if (std::abs(here - there) > tol) {
                        throw std::invalid_argument(
                            "oracle: initial state is not in the totally symmetric subspace");
                    }
                }
            }
        }
    }
}

Trajectory evolve(const FullBasis& basis, int cavity_dim, const LindbladSystem& system, const DensityMatrix& rho0,
                  std::span<const double> t_grid_fs, std::span<const NamedOperator> observables,
                  const EvolveOptions& options) {
    const std::size_t full = basis.dim() * static_cast<std::size_t>(cavity_dim);
    if (full > evolve_guard) {
        std::ostringstream msg;
        msg << "oracle evolution: d^N x N_c = " << basis.levels() << "^" << basis.sites() << " x " << cavity_dim
            << " = " << full << " exceeds the limit of " << evolve_guard;
        throw GuardViolation(msg.str());
    }
    if (system.dim() != full) {
        throw std::invalid_argument("oracle evolution: system dimension is not d^N x N_c");
    }
    require_symmetric(basis, cavity_dim, rho0);
    return permsym::evolve(system, rho0, t_grid_fs, observables, options);
}

}  // namespace permsym::oracle
