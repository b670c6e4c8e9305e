#include "doctest.h"

#include "topocube/bits.hpp"
#include "topocube/f2.hpp"

#include <vector>

using namespace topocube;

namespace {

// Independent column-pivot elimination: operates on columns instead of rows.
// Kept test-side so the production kernel has a cross-check oracle.
int rank_by_column_ops(const F2Matrix& in) {
    int rows = in.rows(), cols = in.cols();
    std::vector<std::vector<std::uint8_t>> a(rows, std::vector<std::uint8_t>(cols, 0));
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) a[r][c] = in.get(r, c);
    int rank = 0;
    for (int r = 0; r < rows && rank < cols; ++r) {
        int piv = -1;
        for (int c = rank; c < cols; ++c)
            if (a[r][c]) {
                piv = c;
                break;
            }
        if (piv < 0) continue;
        for (int i = 0; i < rows; ++i) std::swap(a[i][piv], a[i][rank]);
        for (int c = 0; c < cols; ++c) {
            if (c == rank || !a[r][c]) continue;
            for (int i = 0; i < rows; ++i) a[i][c] ^= a[i][rank];
        }
        ++rank;
    }
    return rank;
}

F2Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
    Rng rng(seed);
    F2Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (rng.coin()) m.set(r, c, true);
    return m;
}

}  // namespace

TEST_SUITE("f2") {

TEST_CASE("identity rank") {
    F2Matrix id(4, 4);
    for (int i = 0; i < 4; ++i) id.set(i, i, true);
    CHECK(f2_rank(id) == 4);
    CHECK(f2_nullity(id) == 0);
}

TEST_CASE("rank cross-check against column-pivot elimination") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        int rows = 1 + static_cast<int>(seed % 13);
        int cols = 1 + static_cast<int>((3 * seed) % 17);
        F2Matrix m = random_matrix(rows, cols, seed);
        CHECK(f2_rank(m) == rank_by_column_ops(m));
    }
}

TEST_CASE("rank does not modify its argument") {
    F2Matrix m = random_matrix(6, 6, 99);
    F2Matrix copy = m;
    f2_rank(m);
    CHECK(m == copy);
}

TEST_CASE("solve returns canonical witness with free variables zero") {
    // x1 + x2 = 1 over two variables: canonical solution sets the free var 0
    F2Matrix m(1, 2);
    m.set(0, 0, true);
    m.set(0, 1, true);
    auto x = f2_solve(m, {1});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == 1);
    CHECK((*x)[1] == 0);
}

TEST_CASE("solve detects inconsistency") {
    F2Matrix m(2, 1);
    m.set(0, 0, true);
    m.set(1, 0, true);
    CHECK(f2_solve(m, {1, 0}) == std::nullopt);
    CHECK(f2_solve(m, {1, 1}).has_value());
}

TEST_CASE("nullspace spans the kernel") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        F2Matrix m = random_matrix(5, 9, seed * 7);
        auto basis = f2_nullspace(m);
        CHECK(static_cast<int>(basis.size()) == f2_nullity(m));
        for (const auto& v : basis) {
            auto img = m.apply(v);
            for (auto b : img) CHECK(b == 0);
        }
    }
}

TEST_CASE("dump format round shape") {
    F2Matrix m(2, 5);
    m.set(0, 0, true);
    m.set(1, 4, true);
    CHECK(m.dump() == "2 5\n10\n01\n");
}

}  // TEST_SUITE
