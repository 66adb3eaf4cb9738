#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "permsym/fock_basis.hpp"
#include "permsym/oracle.hpp"
#include "permsym/second_quantization.hpp"

using namespace permsym;

namespace {

// Dense matrix of b^dag_{c1}..b^dag_{cM} b_{a1}..b_{aM} built by applying single
// ladder operators to occupation vectors one at a time.
Eigen::MatrixXcd ladder_string(const FockBasis& b, const std::vector<int>& cre, const std::vector<int>& ann) {
    const auto n = static_cast<Eigen::Index>(b.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t col = 0; col < b.size(); ++col) {
        auto occ = b.unrank(col).occ;
        double amp = 1.0;
        // rightmost annihilator acts first
        for (auto it = ann.rbegin(); it != ann.rend() && amp != 0.0; ++it) {
            amp *= std::sqrt(static_cast<double>(occ[static_cast<std::size_t>(*it)]));
            occ[static_cast<std::size_t>(*it)] -= 1;
            if (occ[static_cast<std::size_t>(*it)] < 0) {
                amp = 0.0;
            }
        }
        if (amp == 0.0) {
            continue;
        }
        for (auto it = cre.rbegin(); it != cre.rend(); ++it) {
            occ[static_cast<std::size_t>(*it)] += 1;
            amp *= std::sqrt(static_cast<double>(occ[static_cast<std::size_t>(*it)]));
        }
        m(static_cast<Eigen::Index>(b.rank(FockState{occ})), static_cast<Eigen::Index>(col)) += amp;
    }
    return m;
}

}  // namespace

TEST_CASE("normal-ordered strings agree with ladder-by-ladder application") {
    const FockBasis b(3, 4);
    const std::vector<std::pair<std::vector<int>, std::vector<int>>> cases = {
        {{0}, {0}}, {{0}, {2}}, {{2}, {1}}, {{0, 1}, {2, 2}}, {{1, 1}, {0, 2}}, {{2, 0, 1}, {1, 1, 0}}};
    for (const auto& [cre, ann] : cases) {
        const auto op = normal_ordered_string(b, cre, ann);
        CHECK(testing::max_diff(op.to_dense(), ladder_string(b, cre, ann)) < 1e-13);
    }
    const std::vector<int> two{0, 1};
    const std::vector<int> one{0};
    CHECK_THROWS(normal_ordered_string(b, two, one));
}

TEST_CASE("Dicke ladder elements follow the angular-momentum formula") {
    // two modes g = 0, e = 1, spin s = N/2, m = (n_e - n_g)/2
    for (int n = 2; n <= 20; ++n) {
        const FockBasis b(2, n);
        const std::vector<int> g{0};
        const std::vector<int> e{1};
        const auto lower = normal_ordered_string(b, g, e);
        const double s = 0.5 * n;
        int nonzero = 0;
        for (std::size_t col = 0; col < b.size(); ++col) {
            const auto occ = b.occupations(col);
            if (occ[1] == 0) {
                continue;
            }
            const double m = 0.5 * (occ[1] - occ[0]);
            const std::vector<int> target{occ[0] + 1, occ[1] - 1};
            const cplx v = lower.at(b.rank(target), col);
            CHECK(std::abs(v - std::sqrt(s * (s + 1) - m * (m - 1))) < 1e-12);
            ++nonzero;
        }
        CHECK(lower.nnz() == static_cast<std::size_t>(nonzero));
    }
}

TEST_CASE("number operator is N times identity") {
    const FockBasis b(4, 3);
    const auto n = number_operator(b);
    CHECK(max_abs_diff(n, scale(SparseOperator::identity(b.size()), 3.0)) < 1e-14);
}

TEST_CASE("one-body generators satisfy the gl(d) commutation relations") {
    const FockBasis b(3, 3);
    auto e = [&](int i, int j) {
        const std::vector<int> c{i};
        const std::vector<int> a{j};
        return normal_ordered_string(b, c, a);
    };
    const auto zero = SparseOperator::zero(b.size());
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) {
                for (int l = 0; l < 3; ++l) {
                    // [E_ij, E_kl] = delta_jk E_il - delta_il E_kj
                    auto expected = zero;
                    if (j == k) {
                        expected = expected + e(i, l);
                    }
                    if (i == l) {
                        expected = expected - e(k, j);
                    }
                    CHECK(max_abs_diff(commutator(e(i, j), e(k, l)), expected) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("second quantization matches projection of the site sum") {
    std::mt19937 rng(7);
    for (auto [d, n] : {std::pair{2, 4}, std::pair{3, 3}, std::pair{4, 2}}) {
        const FockBasis fock(d, n);
        const oracle::FullBasis full(d, n);
        const auto t = oracle::build_isometry(full, fock).t;
        for (int order = 1; order <= 2; ++order) {
            MBodyCoefficients v(order, d);
            // random Hermitian-generating coefficients
            const int count = order == 1 ? d * d : d * d * d * d;
            for (int flat = 0; flat < count; ++flat) {
                std::vector<int> idx;
                int x = flat;
                for (int k = 0; k < 2 * order; ++k) {
                    idx.push_back(x % d);
                    x /= d;
                }
                std::vector<int> cre(idx.begin(), idx.begin() + order);
                std::vector<int> ann(idx.begin() + order, idx.end());
                if (cre > ann) {
                    continue;
                }
                const cplx c = testing::random_cplx(rng);
                if (cre == ann) {
                    v.add(cre, ann, c.real());
                } else {
                    v.add(cre, ann, c);
                    v.add(ann, cre, std::conj(c));
                }
            }
            REQUIRE(v.is_hermitian_generating());
            const auto sq = second_quantize(fock, v);
            const auto fq = oracle::project(t, oracle::mbody_first_quantized(full, v));
            CHECK(max_abs_diff(sq, fq) < 1e-12);
            CHECK(is_hermitian(sq));
        }
    }
}

TEST_CASE("bosonic mode truncation") {
    const auto m = boson_mode(5);
    const auto c = commutator(m.a, m.a_dag).to_dense();
    for (int k = 0; k < 4; ++k) {
        CHECK(std::abs(c(k, k) - 1.0) < 1e-14);
    }
    // the truncation shows up only on the top level
    CHECK(std::abs(c(4, 4) + 4.0) < 1e-14);
    CHECK(max_abs_diff(m.n, m.a_dag * m.a) < 1e-14);
}

TEST_CASE("composite kron equals the plain tensor product when unrestricted") {
    std::mt19937 rng(3);
    auto f = std::make_shared<const FockBasis>(2, 3);
    const CompositeBasis basis(f, 3);
    const auto e = SparseOperator::from_dense(testing::random_matrix(rng, 4, 4));
    const auto c = SparseOperator::from_dense(testing::random_matrix(rng, 3, 3));
    CHECK(max_abs_diff(kron(e, c, basis), kron(e, c)) < 1e-14);
}

TEST_CASE("operator algebra helpers") {
    std::mt19937 rng(11);
    const Eigen::MatrixXcd a = testing::sparsify(rng, testing::random_matrix(rng, 6, 6), 0.4, false);
    const Eigen::MatrixXcd b = testing::sparsify(rng, testing::random_matrix(rng, 6, 6), 0.4, false);
    const auto sa = SparseOperator::from_dense(a);
    const auto sb = SparseOperator::from_dense(b);
    CHECK(testing::max_diff((sa * sb).to_dense(), a * b) < 1e-12);
    CHECK(testing::max_diff((sa + sb).to_dense(), a + b) < 1e-14);
    CHECK(testing::max_diff(adjoint(sa).to_dense(), a.adjoint()) < 1e-14);
    CHECK(testing::max_diff(commutator(sa, sb).to_dense(), a * b - b * a) < 1e-12);
    const auto tagged = SparseOperator(sa.matrix(), "x");
    const auto other = SparseOperator(sb.matrix(), "y");
    CHECK_THROWS(tagged + other);
}
