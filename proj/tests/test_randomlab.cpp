#include "doctest.h"

#include "topocube/homology.hpp"
#include "topocube/randomlab.hpp"

#include <cmath>

using namespace topocube;

namespace {

const char* kCircle = "p cnf 3 2\n1 2 3 0\n-1 -2 -3 0\n";

// per-clause counting oracle for the exact forbid probability: enumerate all
// 8*C(n,3) clauses and count those whose falsifying pattern fits the cube
// with free coordinates 1..k.
double forbid_prob_oracle(int n, int k) {
    long total = 0, forbidding = 0;
    std::vector<int> vars(3);
    for (int a = 1; a <= n; ++a)
        for (int b = a + 1; b <= n; ++b)
            for (int c = b + 1; c <= n; ++c) {
                vars = {a, b, c};
                for (int signs = 0; signs < 8; ++signs) {
                    ++total;
                    // the clause's unique falsifying assignment sets literal i
                    // false; on free coords (1..k) any value is reachable, on
                    // fixed coords it must match the cube's fixed bits (all 0)
                    bool fits = true;
                    for (int i = 0; i < 3; ++i) {
                        bool positive = (signs >> i) & 1;
                        bool falsifying_value = !positive;
                        if (vars[i] > k && falsifying_value != false) fits = false;
                    }
                    if (fits) ++forbidding;
                }
            }
    return static_cast<double>(forbidding) / total;
}

}  // namespace

TEST_SUITE("randomlab") {

TEST_CASE("clause_forbid_prob exact endpoints") {
    CHECK(clause_forbid_exact(3, 0) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(clause_forbid_exact(3, 3) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(clause_forbid_exact(2, 0), ValidationError);
    CHECK_THROWS_AS(clause_forbid_exact(5, 6), ValidationError);
}

TEST_CASE("clause_forbid_prob limit endpoints") {
    CHECK(clause_forbid_limit(0.0) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(clause_forbid_limit(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(clause_forbid_limit(-0.1), ValidationError);
    CHECK_THROWS_AS(clause_forbid_limit(1.1), ValidationError);
}

TEST_CASE("exact forbid probability matches the counting oracle") {
    for (int n = 3; n <= 8; ++n)
        for (int k = 0; k <= n; ++k)
            CHECK(clause_forbid_exact(n, k) == doctest::Approx(forbid_prob_oracle(n, k)).epsilon(1e-12));
}

TEST_CASE("forbid probability is monotone in k and within [0,1]") {
    for (int n = 3; n <= 30; ++n) {
        double prev = -1;
        for (int k = 0; k <= n; ++k) {
            double q = clause_forbid_exact(n, k);
            CHECK(q >= 0.0);
            CHECK(q <= 1.0 + 1e-15);
            CHECK(q >= prev - 1e-15);
            prev = q;
        }
    }
}

TEST_CASE("exact converges to the limit at rate 5/n") {
    for (int n = 50; n <= 200; n += 50)
        for (double gamma = 0.1; gamma < 0.95; gamma += 0.1) {
            int k = static_cast<int>(std::ceil(gamma * n));
            CHECK(std::abs(clause_forbid_exact(n, k) - clause_forbid_limit(gamma)) <= 5.0 / n);
        }
}

TEST_CASE("expected_faces closed form") {
    CHECK(expected_faces(10, 0, 10) ==
          doctest::Approx(1024.0 * std::pow(7.0 / 8.0, 10)).epsilon(1e-12));
    CHECK(expected_faces(10, 0, 10) == doctest::Approx(269.39).epsilon(1e-4));
    CHECK(expected_faces(7, 2, 0) == doctest::Approx(binomial(7, 2) * 32).epsilon(1e-12));
    CHECK(expected_faces(10, 10, 1) == doctest::Approx(0.0));
}

TEST_CASE("phi endpoints and threshold") {
    double ln2 = std::log(2.0);
    CHECK(phi(0.0, 8 * ln2) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(std::abs(phi(0.0, 8 * ln2)) <= 1e-12);
    CHECK(phi(0.0, 2.0) == doctest::Approx(ln2 - 0.25).epsilon(1e-12));
    // alpha = 0: strictly positive on [0, 1)
    for (double g = 0.0; g < 0.999; g += 0.05) CHECK(phi(g, 0.0) > 0.0);
    CHECK_THROWS_AS(phi(-0.01, 1.0), ValidationError);
}

TEST_CASE("phi_root brackets a sign change and is consistent") {
    double r = phi_root(2.0);
    CHECK(r > 0.0);
    CHECK(r < 1.0);
    CHECK(phi(r - 1e-8, 2.0) > 0.0);
    CHECK(phi(r + 1e-8, 2.0) < 0.0);
    // dense grid scan agrees
    double grid_root = -1;
    for (int i = 1; i <= 100000; ++i) {
        double g = i / 100000.0;
        if (phi(g, 2.0) <= 0) {
            grid_root = g;
            break;
        }
    }
    CHECK(std::abs(r - grid_root) <= 2e-5);
    CHECK_THROWS_AS(phi_root(0.0), ValidationError);
    // past the vanishing density (~5.93) the survival region is empty
    CHECK_THROWS_AS(phi_root(6.0), ValidationError);
    CHECK(phi_root(5.9) > 0.0);
}

TEST_CASE("mc fixed-vertex survival matches the closed form") {
    McEstimate est = mc_face_survival_fixed(12, 0, 12, 20000, 11);
    double expect = std::pow(1.0 - 0.125, 12);
    CHECK(std::abs(est.mean - expect) <= 3 * est.stderr_ + 1e-12);
}

TEST_CASE("mc exhaustive vertex survival matches expected_faces") {
    McEstimate est = mc_face_survival_exhaustive(8, 0, 8, 400, 5);
    double expect = expected_faces(8, 0, 8);
    CHECK(std::abs(est.mean - expect) <= 3 * est.stderr_);
}

TEST_CASE("mc rejects zero trials and oversize instances") {
    CHECK_THROWS_AS(mc_face_survival_exhaustive(8, 0, 8, 0, 1), ValidationError);
    CHECK_THROWS_AS(mc_face_survival_exhaustive(15, 0, 8, 10, 1), CapExceeded);
}

TEST_CASE("mcmc_sample stays inside the solution set") {
    CnfFormula f = parse_dimacs(kCircle);
    auto sample = mcmc_sample(f, 100, 50, 21);
    REQUIRE(sample.size() == 100);
    SolutionSet s = enumerate_solutions(f);
    for (const auto& x : sample) CHECK(s.contains(x.word0()));
}

TEST_CASE("mcmc_sample fails loudly on unsatisfiable input") {
    CnfFormula f;
    f.num_vars = 1;
    f.clauses.push_back(Clause{{1}});
    f.clauses.push_back(Clause{{-1}});
    CHECK_THROWS_WITH_AS(mcmc_sample(f, 1, 0, 3, 2000), doctest::Contains("no solution"), Error);
}

TEST_CASE("mcmc_sample on the empty formula is a uniformity smoke test") {
    CnfFormula f;
    f.num_vars = 8;
    auto sample = mcmc_sample(f, 10000, 0, 9);
    for (int c = 0; c < 8; ++c) {
        double mean = 0;
        for (const auto& x : sample) mean += x.get(c);
        mean /= sample.size();
        CHECK(mean >= 0.45);
        CHECK(mean <= 0.55);
    }
}

TEST_CASE("vr: two points at Hamming distance 3") {
    std::vector<Assignment> pts{Assignment(3, 0b000), Assignment(3, 0b111)};
    auto barcodes = vr_persistence(pts, {1, 2, 3}, 1);
    const Barcode& b0 = barcodes[0];
    REQUIRE(b0.intervals.size() == 2);
    CHECK(b0.intervals[0].birth == 0.0);
    REQUIRE(b0.intervals[0].death.has_value());
    CHECK(*b0.intervals[0].death == 3.0);
    CHECK_FALSE(b0.intervals[1].death.has_value());
}

TEST_CASE("vr: circle solutions carry a beta1 bar born at 1") {
    SolutionSet s = enumerate_solutions(parse_dimacs(kCircle));
    std::vector<Assignment> pts;
    for (auto w : s.members) pts.push_back(Assignment(3, w));
    auto barcodes = vr_persistence(pts, {1, 2, 3}, 2);
    const Barcode& b1 = barcodes[1];
    REQUIRE(b1.intervals.size() >= 1);
    CHECK(b1.intervals[0].birth == 1.0);
    REQUIRE(b1.intervals[0].death.has_value());
    CHECK(*b1.intervals[0].death == 2.0);  // the octahedral clique complex fills it
    // beta0: six bars at scale 0 collapsing to one at scale 1
    const Barcode& b0 = barcodes[0];
    int infinite = 0, dying_at_1 = 0;
    for (const auto& iv : b0.intervals) {
        if (!iv.death) ++infinite;
        else if (*iv.death == 1.0) ++dying_at_1;
    }
    CHECK(infinite == 1);
    CHECK(dying_at_1 == 5);
}

TEST_CASE("vr: single point yields one infinite bar") {
    std::vector<Assignment> pts{Assignment(4, 0b0101)};
    auto barcodes = vr_persistence(pts, {1, 2}, 1);
    REQUIRE(barcodes[0].intervals.size() == 1);
    CHECK_FALSE(barcodes[0].intervals[0].death.has_value());
    CHECK(barcodes[1].intervals.empty());
}

TEST_CASE("vr beta0 at scale 1 equals the cluster count") {
    Rng rng(66);
    for (int trial = 0; trial < 5; ++trial) {
        CnfFormula f = random_ksat(7, 16, 3, rng.next());
        SolutionSet s = enumerate_solutions(f);
        if (s.members.empty() || s.size() > 60) continue;
        std::vector<Assignment> pts;
        for (auto w : s.members) pts.push_back(Assignment(7, w));
        auto barcodes = vr_persistence(pts, {1}, 0);
        long alive_at_1 = 0;
        for (const auto& iv : barcodes[0].intervals)
            if (!iv.death) ++alive_at_1;
        ClusterPartition p = components(build_complex(s, 1));
        CHECK(alive_at_1 == p.count());
    }
}

TEST_CASE("vr bars agree with direct clique-complex homology at every scale") {
    // independent oracle: enumerate the clique complex at one scale by brute
    // force and hand its boundary matrices to the homology kernel
    auto betti_at_scale = [](const std::vector<Assignment>& pts, int scale, int dim) {
        int np = static_cast<int>(pts.size());
        std::vector<std::vector<std::vector<int>>> simp(dim + 2);
        for (int i = 0; i < np; ++i) simp[0].push_back({i});
        for (int d = 1; d <= dim + 1; ++d) {
            for (const auto& s : simp[d - 1])
                for (int v = s.back() + 1; v < np; ++v) {
                    bool ok = true;
                    for (int u : s)
                        if (pts[u].hamming(pts[v]) > scale) ok = false;
                    if (!ok) continue;
                    auto e = s;
                    e.push_back(v);
                    simp[d].push_back(e);
                }
        }
        CellComplex cc;
        cc.cells.resize(dim + 2);
        cc.boundaries.resize(dim + 2);
        for (int d = 0; d <= dim + 1; ++d) cc.cells[d] = static_cast<int>(simp[d].size());
        for (int d = 1; d <= dim + 1; ++d) {
            F2Matrix bd(cc.cells[d - 1], cc.cells[d]);
            for (int c = 0; c < cc.cells[d]; ++c)
                for (std::size_t drop = 0; drop < simp[d][c].size(); ++drop) {
                    std::vector<int> facet;
                    for (std::size_t i = 0; i < simp[d][c].size(); ++i)
                        if (i != drop) facet.push_back(simp[d][c][i]);
                    auto it = std::find(simp[d - 1].begin(), simp[d - 1].end(), facet);
                    bd.set(static_cast<int>(it - simp[d - 1].begin()), c, true);
                }
            cc.boundaries[d] = bd;
        }
        return betti_numbers(cc, dim)[dim];
    };

    Rng rng(424);
    for (int trial = 0; trial < 6; ++trial) {
        int n = 5 + static_cast<int>(rng.below(3));
        std::vector<Assignment> pts;
        for (int i = 0; i < 8; ++i) {
            Assignment a(n);
            for (int c = 0; c < n; ++c) a.set(c, rng.coin());
            bool dup = false;
            for (const auto& q : pts)
                if (q == a) dup = true;
            if (!dup) pts.push_back(a);
        }
        std::vector<double> grid{1, 2, 3, 4};
        auto barcodes = vr_persistence(pts, grid, 1);
        for (int dim = 0; dim <= 1; ++dim) {
            for (double s : grid) {
                long alive = 0;
                for (const auto& iv : barcodes[dim].intervals)
                    if (iv.birth <= s && (!iv.death || *iv.death > s)) ++alive;
                CHECK(alive == betti_at_scale(pts, static_cast<int>(s), dim));
            }
        }
    }
}

TEST_CASE("vr caps points and dimension") {
    std::vector<Assignment> many;
    for (int i = 0; i < 201; ++i) many.push_back(Assignment(10, static_cast<std::uint64_t>(i)));
    CHECK_THROWS_AS(vr_persistence(many, {1}, 1), CapExceeded);
    std::vector<Assignment> two{Assignment(3, 1), Assignment(3, 2)};
    CHECK_THROWS_AS(vr_persistence(two, {1}, 3), CapExceeded);
}

TEST_CASE("shattering sweep rows and determinism") {
    std::vector<double> alphas{0.0, 1.0, 3.0, 4.2};
    auto rows = shattering_sweep(12, alphas, 30, 77);
    REQUIRE(rows.size() == 4);
    // alpha = 0: the full cube, one cluster, no separations
    CHECK(rows[0].mean_beta0 == doctest::Approx(1.0));
    CHECK(rows[0].mean_solution_count == doctest::Approx(4096.0));
    CHECK(rows[0].mean_min_separation == doctest::Approx(0.0));
    // mean solution count decreases with density
    CHECK(rows[1].mean_solution_count > rows[2].mean_solution_count);
    CHECK(rows[2].mean_solution_count > rows[3].mean_solution_count);
    // byte-identical CSV on re-run, and independent of the thread count
    CHECK(sweep_csv(rows) == sweep_csv(shattering_sweep(12, alphas, 30, 77)));
    CHECK(sweep_csv(rows) ==
          sweep_csv(shattering_sweep(12, alphas, 30, 77, kDefaultEnumerationCap, 3)));
    CHECK(sweep_csv(rows).rfind("alpha,trials,", 0) == 0);
}

}  // TEST_SUITE
