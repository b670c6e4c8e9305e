#include "doctest.h"

#include "topocube/complex.hpp"
#include "topocube/formula.hpp"

#include <set>

using namespace topocube;

namespace {

const char* kCircle = "p cnf 3 2\n1 2 3 0\n-1 -2 -3 0\n";

// Naive face generator: test every candidate subcube's corners directly.
CubicalComplex build_complex_naive(const SolutionSet& s, int max_dim) {
    CubicalComplex k;
    k.n = s.n;
    k.max_dim = std::min(max_dim, s.n);
    k.faces_by_dim.assign(k.max_dim + 1, {});
    std::vector<std::uint64_t> masks;
    for (std::uint64_t fm = 0; fm < (std::uint64_t{1} << s.n); ++fm)
        if (popcount64(fm) <= k.max_dim) masks.push_back(fm);
    for (std::uint64_t fm : masks) {
        int dim = popcount64(fm);
        std::vector<int> free_list;
        for (int c = 0; c < s.n; ++c)
            if (fm & bit(c)) free_list.push_back(c);
        for (std::uint64_t fixed = 0; fixed < (std::uint64_t{1} << s.n); ++fixed) {
            if (fixed & fm) continue;  // fixed bits only on non-free coords
            bool all_in = true;
            for (std::uint64_t corner = 0; corner < (std::uint64_t{1} << dim) && all_in; ++corner) {
                std::uint64_t x = fixed;
                for (int i = 0; i < dim; ++i)
                    if ((corner >> i) & 1) x |= bit(free_list[i]);
                if (!s.contains(x)) all_in = false;
            }
            if (all_in) k.faces_by_dim[dim].push_back(Face{fm, fixed});
        }
    }
    for (auto& v : k.faces_by_dim) std::sort(v.begin(), v.end());
    return k;
}

long long choose(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

}  // namespace

TEST_SUITE("complex") {

TEST_CASE("enumerate_solutions circle formula") {
    SolutionSet s = enumerate_solutions(parse_dimacs(kCircle));
    // assignments are packed with variable i at bit i-1, so 010 means x2=1
    std::vector<std::uint64_t> expect{0b001, 0b010, 0b011, 0b100, 0b101, 0b110};
    CHECK(s.members == expect);
}

TEST_CASE("enumerate_solutions unsat and full cube") {
    CnfFormula contradiction;
    contradiction.num_vars = 1;
    contradiction.clauses.push_back(Clause{{1}});
    contradiction.clauses.push_back(Clause{{-1}});
    CHECK(enumerate_solutions(contradiction).members.empty());

    CnfFormula empty;
    empty.num_vars = 3;
    CHECK(enumerate_solutions(empty).size() == 8);
}

TEST_CASE("enumeration cap guards blowups") {
    CnfFormula f;
    f.num_vars = 30;
    CHECK_THROWS_AS(enumerate_solutions(f), CapExceeded);
    CHECK_THROWS_AS(enumerate_solutions(f, 28), CapExceeded);
}

TEST_CASE("circle complex is the hexagon") {
    CubicalComplex k = build_complex(parse_dimacs(kCircle), 3);
    CHECK(k.face_count(0) == 6);
    CHECK(k.face_count(1) == 6);
    CHECK(k.face_count(2) == 0);
    CHECK(k.complete());
    CHECK(verify_closure(k));
}

TEST_CASE("full 2-cube has one square") {
    CnfFormula empty;
    empty.num_vars = 2;
    CubicalComplex k = build_complex(empty, 2);
    CHECK(k.face_count(0) == 4);
    CHECK(k.face_count(1) == 4);
    CHECK(k.face_count(2) == 1);
}

TEST_CASE("gadget B local complex: 6 vertices, 6 edges, no squares") {
    CnfFormula f;
    f.num_vars = 3;
    f.clauses.push_back(Clause{{1, 2, 3}});
    f.clauses.push_back(Clause{{-1, -2, -3}});
    CubicalComplex k = build_complex(f, 2);
    CHECK(k.face_count(0) == 6);
    CHECK(k.face_count(1) == 6);
    CHECK(k.face_count(2) == 0);
}

TEST_CASE("empty formula face counts match C(n,k) 2^(n-k)") {
    for (int n = 1; n <= 6; ++n) {
        CnfFormula empty;
        empty.num_vars = n;
        CubicalComplex k = build_complex(empty, n);
        for (int d = 0; d <= n; ++d)
            CHECK(k.face_count(d) == choose(n, d) * (1LL << (n - d)));
    }
}

TEST_CASE("extension generator agrees with the naive generator") {
    auto crosscheck = [](const CnfFormula& f, int n) {
        SolutionSet s = enumerate_solutions(f);
        CubicalComplex fast = build_complex(s, n);
        CubicalComplex naive = build_complex_naive(s, n);
        for (int d = 0; d <= n; ++d) {
            REQUIRE(fast.face_count(d) == naive.face_count(d));
            if (d < static_cast<int>(fast.faces_by_dim.size()) &&
                d < static_cast<int>(naive.faces_by_dim.size()))
                CHECK(fast.faces_by_dim[d] == naive.faces_by_dim[d]);
        }
        CHECK(verify_closure(fast));
    };
    Rng rng(17);
    for (int trial = 0; trial < 12; ++trial) {
        int n = 3 + static_cast<int>(rng.below(4));  // breadth at small n
        crosscheck(random_ksat(n, 1 + static_cast<int>(rng.below(8)), std::min(3, n), rng.next()),
                   n);
    }
    crosscheck(random_ksat(10, 25, 3, 5150), 10);  // one instance at the stated bound
}

TEST_CASE("components of the circle formula form one cluster") {
    CubicalComplex k = build_complex(parse_dimacs(kCircle), 1);
    ClusterPartition p = components(k);
    CHECK(p.count() == 1);
}

TEST_CASE("xor-like formula shatters into two clusters at separation 2") {
    CnfFormula f;
    f.num_vars = 2;
    f.clauses.push_back(Clause{{1, 2}});
    f.clauses.push_back(Clause{{-1, -2}});
    ClusterPartition p = components(build_complex(f, 1));
    REQUIRE(p.count() == 2);
    CHECK(p.separations[0][1] == 2);
    CHECK(p.separations[1][0] == 2);
    CHECK(p.separations[0][0] == 0);
    CHECK(p.min_separation() == 2);
}

TEST_CASE("components requires the 1-skeleton") {
    CnfFormula empty;
    empty.num_vars = 4;
    CubicalComplex k = build_complex(empty, 0);  // vertices only
    CHECK_THROWS_WITH_AS(components(k), doctest::Contains("1-skeleton"), ValidationError);
}

TEST_CASE("empty solution set has zero clusters") {
    CnfFormula f;
    f.num_vars = 2;
    f.clauses.push_back(Clause{{1}});
    f.clauses.push_back(Clause{{-1}});
    CHECK(components(build_complex(f, 1)).count() == 0);
}

TEST_CASE("cluster invariants: partition, symmetry, separation >= 2") {
    Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        CnfFormula f = random_ksat(8, 20, 3, rng.next());
        SolutionSet s = enumerate_solutions(f);
        ClusterPartition p = components(build_complex(s, 1));
        std::size_t total = 0;
        for (const auto& c : p.clusters) total += c.size();
        CHECK(total == s.size());
        for (int i = 0; i < p.count(); ++i)
            for (int j = i + 1; j < p.count(); ++j) {
                CHECK(p.separations[i][j] == p.separations[j][i]);
                CHECK(p.separations[i][j] >= 2);
            }
    }
}

TEST_CASE("restrict_to_coords projects and dedupes") {
    CnfFormula f;
    f.num_vars = 3;
    f.clauses.push_back(Clause{{1, 2, 3}});
    f.clauses.push_back(Clause{{-1, -2, -3}});
    SolutionSet s = enumerate_solutions(f);

    SolutionSet all = restrict_to_coords(s, {1, 2, 3});
    CHECK(all.members == s.members);

    SolutionSet third = restrict_to_coords(s, {3});
    CHECK(third.members == std::vector<std::uint64_t>{0, 1});

    CHECK_THROWS_AS(restrict_to_coords(s, {4}), ValidationError);
}

TEST_CASE("json dump is stable") {
    CnfFormula f;
    f.num_vars = 2;
    f.clauses.push_back(Clause{{1}});
    CubicalComplex k = build_complex(f, 2);
    std::string dump = dump_complex_json(k);
    CHECK(dump == dump_complex_json(build_complex(f, 2)));
    // golden: solutions are 01 and 11 (variable 1 true), joined by one edge
    CHECK(dump == "{\"n\":2,\"faces\":[[0,[],\"0x1\"],[0,[],\"0x3\"],[1,[2],\"0x1\"]]}");
}

}  // TEST_SUITE
