#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "permsym/fock_basis.hpp"

using namespace permsym;

namespace {

// every occupation vector of d modes with total N, by recursion
void compositions(int modes, int left, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == modes - 1) {
        cur.push_back(left);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int k = left; k >= 0; --k) {
        cur.push_back(k);
        compositions(modes, left - k, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<int>> all_compositions(int modes, int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    compositions(modes, n, cur, out);
    return out;
}

}  // namespace

TEST_CASE("sector size matches brute-force enumeration") {
    for (int d = 1; d <= 5; ++d) {
        for (int n = 0; n <= 7; ++n) {
            const auto all = all_compositions(d, n);
            CHECK(sector_size(d, n) == all.size());
            CHECK(FockBasis(d, n).size() == all.size());
        }
    }
}

TEST_CASE("sector sizes quoted for the vibronic and three-level examples") {
    // 6 ground + 4 excited vibrational modes
    CHECK(sector_size(10, 3) == 220);
    CHECK(sector_size(10, 5) == 2002);
    CHECK(sector_size(3, 17) == 171);
}

TEST_CASE("ordering is lexicographically descending") {
    const FockBasis b(3, 4);
    const auto all = all_compositions(3, 4);  // recursion emits descending order
    REQUIRE(all.size() == b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        const auto occ = b.occupations(i);
        CHECK(std::vector<int>(occ.begin(), occ.end()) == all[i]);
    }
    CHECK(b.unrank(0).occ == std::vector<int>{4, 0, 0});
    CHECK(b.unrank(b.size() - 1).occ == std::vector<int>{0, 0, 4});
}

TEST_CASE("rank and unrank are inverse") {
    for (int d : {2, 4, 6}) {
        const FockBasis b(d, 5);
        for (std::size_t i = 0; i < b.size(); ++i) {
            const auto s = b.unrank(i);
            CHECK(s.total() == 5);
            CHECK(b.rank(s) == i);
            CHECK(b.rank(b.occupations(i)) == i);
        }
    }
}

TEST_CASE("states outside the sector are rejected") {
    const FockBasis b(3, 2);
    CHECK_THROWS_AS(b.rank(FockState{{1, 1, 1}}), std::domain_error);
    CHECK_THROWS_AS(b.rank(FockState{{2, 0}}), std::domain_error);
    CHECK_THROWS_AS(b.rank(FockState{{3, -1, 0}}), std::domain_error);
    const std::vector<int> bad{0, 0, 3};
    CHECK_FALSE(b.find(bad).has_value());
    CHECK_THROWS(FockBasis(0, 2));
    CHECK_THROWS(FockBasis(2, -1));
}

TEST_CASE("binomial overflow is detected") {
    CHECK(binomial(10, 3) == 120);
    CHECK(binomial(5, 7) == 0);
    CHECK_THROWS_AS(binomial(200, 100), std::overflow_error);
}

TEST_CASE("composite basis orders emitter slowest") {
    auto f = std::make_shared<const FockBasis>(2, 2);
    const CompositeBasis c(f, 3);
    REQUIRE(c.size() == 9);
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(c.emitter_index(i) == i / 3);
        CHECK(c.cavity_level(i) == static_cast<int>(i % 3));
    }
}

TEST_CASE("excitation restriction keeps exactly the states under the limit") {
    auto f = std::make_shared<const FockBasis>(4, 3);
    const CompositeBasis c(f, 4);
    const std::vector<int> w{0, 1, 2, 3};
    for (int limit : {0, 1, 2, 4, 7, 20}) {
        const auto r = restrict_composite(c, w, limit);
        std::set<std::size_t> expected;
        for (std::size_t i = 0; i < c.full_size(); ++i) {
            const auto occ = f->occupations(i / 4);
            int e = static_cast<int>(i % 4);
            for (int a = 0; a < 4; ++a) {
                e += w[static_cast<std::size_t>(a)] * occ[static_cast<std::size_t>(a)];
            }
            if (e <= limit) {
                expected.insert(i);
            }
        }
        REQUIRE(r.size() == expected.size());
        std::size_t k = 0;
        for (std::size_t full : expected) {
            CHECK(r.full_index(k) == full);
            CHECK(r.index_of_full(full) == k);
            CHECK(r.excitation(k) <= limit);
            ++k;
        }
    }
    CHECK(restrict_composite(c, w, std::nullopt).size() == c.size());
}
