#ifndef TOPOCUBE_RANDOMLAB_HPP
#define TOPOCUBE_RANDOMLAB_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "topocube/bits.hpp"
#include "topocube/complex.hpp"
#include "topocube/errors.hpp"
#include "topocube/f2.hpp"
#include "topocube/formula.hpp"

namespace topocube {

// ---------------------------------------------------------------------------
// Face-survival statistics for random 3-SAT
// ---------------------------------------------------------------------------

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

enum class ProbMode { exact, limit };

/// Probability that one uniformly random 3-clause forbids a fixed k-face.
/// Exact finite-n form: sum over t (clause variables landing on fixed
/// coordinates) of C(n-k,t) C(k,3-t) / C(n,3) * 2^-t. Limit form in
/// gamma = k/n: sum over t of C(3,t) (1-gamma)^t gamma^(3-t) 2^-t.
inline double clause_forbid_prob(int n, int k, ProbMode mode, double gamma = -1.0) {
    if (mode == ProbMode::exact) {
        if (n < 3) throw ValidationError("exact mode needs n >= 3");
        if (k < 0 || k > n) throw ValidationError("k out of range [0,n]");
        double q = 0.0;
        for (int t = 0; t <= 3; ++t)
            q += binomial(n - k, t) * binomial(k, 3 - t) / binomial(n, 3) * std::pow(0.5, t);
        return q;
    }
    if (gamma < 0.0 || gamma > 1.0) throw ValidationError("gamma out of range [0,1]");
    double q = 0.0;
    for (int t = 0; t <= 3; ++t)
        q += binomial(3, t) * std::pow(1.0 - gamma, t) * std::pow(gamma, 3 - t) * std::pow(0.5, t);
    return q;
}

inline double clause_forbid_exact(int n, int k) {
    return clause_forbid_prob(n, k, ProbMode::exact);
}
inline double clause_forbid_limit(double gamma) {
    return clause_forbid_prob(0, 0, ProbMode::limit, gamma);
}

/// E[X_k] = C(n,k) 2^(n-k) (1 - q_{k,n})^m.
inline double expected_faces(int n, int k, int m) {
    if (m < 0) throw ValidationError("negative clause count");
    double q = clause_forbid_exact(n, k);
    return binomial(n, k) * std::pow(2.0, n - k) * std::pow(1.0 - q, m);
}

/// Phi(gamma; alpha) = H(gamma) + (1-gamma) ln 2 - alpha q(gamma), natural
/// logs, H(0) = H(1) = 0 by continuity. Its sign controls whether the
/// expected surviving k-cube count at k = gamma n is exponentially large.
inline double phi(double gamma, double alpha) {
    if (gamma < 0.0 || gamma > 1.0) throw ValidationError("gamma out of range [0,1]");
    double h = 0.0;
    if (gamma > 0.0 && gamma < 1.0)
        h = -gamma * std::log(gamma) - (1.0 - gamma) * std::log(1.0 - gamma);
    return h + (1.0 - gamma) * std::log(2.0) - alpha * clause_forbid_limit(gamma);
}

/// Smallest root of Phi(.; alpha) in (0,1) by bisection to 1e-10. Scans a
/// probe grid for the first sign change; throws when no bracket exists.
inline double phi_root(double alpha, int probe_points = 1000) {
    double prev_g = 0.0;
    double prev_v = phi(0.0, alpha);
    for (int i = 1; i <= probe_points; ++i) {
        double g = static_cast<double>(i) / probe_points;
        double v = phi(g, alpha);
        if (v == 0.0 && g < 1.0) return g;  // exact interior root
        bool change = (prev_v > 0 && v < 0) || (prev_v < 0 && v > 0);
        if (change) {
            double lo = prev_g, hi = g, flo = prev_v;
            while (hi - lo >= 1e-10) {
                double mid = 0.5 * (lo + hi);
                double fm = phi(mid, alpha);
                if ((flo > 0 && fm <= 0) || (flo < 0 && fm >= 0))
                    hi = mid;
                else {
                    lo = mid;
                    flo = fm;
                }
            }
            return 0.5 * (lo + hi);
        }
        prev_g = g;
        prev_v = v;
    }
    throw ValidationError("phi has no sign change on the probe grid for alpha=" +
                          std::to_string(alpha));
}

// ---------------------------------------------------------------------------
// Monte-Carlo validation
// ---------------------------------------------------------------------------

struct McEstimate {
    double mean = 0;
    double stderr_ = 0;
    long trials = 0;
};

inline constexpr int kMcExhaustiveCap = 14;

/// Mean surviving k-face count over random 3-SAT formulas (exhaustive
/// variant, n <= 14), with standard error.
inline McEstimate mc_face_survival_exhaustive(int n, int k, int m, long trials,
                                              std::uint64_t seed) {
    if (trials <= 0) throw ValidationError("trials must be positive");
    if (n > kMcExhaustiveCap)
        throw CapExceeded("exhaustive face survival capped at n=" +
                          std::to_string(kMcExhaustiveCap));
    double sum = 0, sumsq = 0;
    for (long t = 0; t < trials; ++t) {
        CnfFormula f = random_ksat(n, m, 3, derive_seed(seed, static_cast<std::uint64_t>(t)));
        SolutionSet s = enumerate_solutions(f, kMcExhaustiveCap);
        double count;
        if (k == 0) {
            count = static_cast<double>(s.size());
        } else {
            CubicalComplex cx = build_complex(s, k);
            count = static_cast<double>(cx.face_count(k));
        }
        sum += count;
        sumsq += count * count;
    }
    McEstimate est;
    est.trials = trials;
    est.mean = sum / trials;
    double var = (sumsq - sum * sum / trials) / std::max<long>(1, trials - 1);
    est.stderr_ = std::sqrt(std::max(0.0, var) / trials);
    return est;
}

/// Survival frequency of one fixed k-face (free coordinates 1..k, fixed bits
/// zero) over random 3-SAT formulas; works at any n.
inline McEstimate mc_face_survival_fixed(int n, int k, int m, long trials, std::uint64_t seed) {
    if (trials <= 0) throw ValidationError("trials must be positive");
    if (k < 0 || k > n) throw ValidationError("k out of range");
    if (k > 20) throw CapExceeded("fixed-face corner enumeration capped at k=20");
    long hits = 0;
    for (long t = 0; t < trials; ++t) {
        CnfFormula f = random_ksat(n, m, 3, derive_seed(seed, static_cast<std::uint64_t>(t)));
        bool survives = true;
        Assignment x(n);
        for (std::uint64_t corner = 0; corner < (std::uint64_t{1} << k) && survives; ++corner) {
            for (int i = 0; i < k; ++i) x.set(i, (corner >> i) & 1);
            if (!evaluate(f, x)) survives = false;
        }
        if (survives) ++hits;
    }
    McEstimate est;
    est.trials = trials;
    est.mean = static_cast<double>(hits) / trials;
    est.stderr_ = std::sqrt(est.mean * (1.0 - est.mean) / trials);
    return est;
}

// ---------------------------------------------------------------------------
// WalkSAT sampling
// ---------------------------------------------------------------------------

/// WalkSAT with noise 0.5, restarting from a fresh random assignment after
/// each recorded solution. burn_in chain steps run before recording starts.
/// The sampled measure is NOT uniform over S(F); it suffices for the topology
/// of the support, which is all the persistence pipeline uses. Deterministic
/// under a fixed seed.
inline std::vector<Assignment> mcmc_sample(const CnfFormula& f, int count, long burn_in,
                                           std::uint64_t seed, long step_budget = 10000000) {
    if (count < 0) throw ValidationError("negative sample count");
    if (burn_in < 0) throw ValidationError("negative burn-in");
    Rng rng(seed);
    std::vector<Assignment> out;
    out.reserve(count);
    const int n = f.num_vars;
    const int m = f.num_clauses();
    long steps = 0;

    auto walk_step = [&](Assignment& x) -> bool {  // true when x satisfies f
        std::vector<int> unsat;
        for (int ci = 0; ci < m; ++ci)
            if (!clause_satisfied(f.clauses[ci], x)) unsat.push_back(ci);
        if (unsat.empty()) return true;
        const Clause& c = f.clauses[unsat[rng.below(unsat.size())]];
        int flip_var;
        if (rng.coin()) {
            flip_var = std::abs(c.literals[rng.below(c.literals.size())]);
        } else {
            // greedy: flip the literal variable minimizing the break count
            // TODO: incremental break counts via occurrence lists; the full
            // rescan per candidate flip dominates once m grows past ~10^3
            int best_break = -1;
            flip_var = std::abs(c.literals[0]);
            for (int lit : c.literals) {
                int v = std::abs(lit);
                x.flip(v - 1);
                int breaks = 0;
                for (int ci = 0; ci < m; ++ci)
                    if (!clause_satisfied(f.clauses[ci], x)) ++breaks;
                x.flip(v - 1);
                if (best_break < 0 || breaks < best_break) {
                    best_break = breaks;
                    flip_var = v;
                }
            }
        }
        x.flip(flip_var - 1);
        return false;
    };

    Assignment x(n);
    for (int i = 0; i < n; ++i) x.set(i, rng.coin());
    for (long b = 0; b < burn_in; ++b) walk_step(x);

    while (static_cast<int>(out.size()) < count) {
        while (true) {
            if (steps++ > step_budget)
                throw Error("no solution found within the step budget (" +
                            std::to_string(step_budget) + " steps)");
            if (walk_step(x)) {
                out.push_back(x);
                // restart so repeated records are not forced to coincide
                for (int i = 0; i < n; ++i) x.set(i, rng.coin());
                break;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Vietoris-Rips persistence under Hamming distance
// ---------------------------------------------------------------------------

struct BarcodeInterval {
    double birth = 0;
    std::optional<double> death;  // nullopt = infinite bar
};

struct Barcode {
    int dim = 0;
    std::vector<BarcodeInterval> intervals;  // sorted by (birth, death)
};

inline constexpr int kVrPointCap = 200;
inline constexpr int kVrMaxDim = 2;

namespace detail {

struct VrFiltration {
    // simplices[d] = list of vertex-index tuples, sorted by (appearance scale, lex)
    std::vector<std::vector<std::vector<int>>> simplices;
    std::vector<std::vector<double>> scales;        // appearance scale per simplex
    std::vector<std::vector<F2Matrix>> boundaries;  // boundaries[s][d] at scale index s
    std::vector<std::vector<int>> counts;           // counts[s][d] = #d-simplices present
};

}  // namespace detail

/// Barcodes for dimensions 0..max_dim of the Vietoris-Rips filtration on the
/// sample points under Hamming distance, evaluated at the given scales (an
/// implicit vertices-only complex at scale 0 starts the filtration).
/// Persistence is computed by per-scale rank identities, trading speed for
/// auditability against the rest of the homology machinery.
inline std::vector<Barcode> vr_persistence(const std::vector<Assignment>& points,
                                           std::vector<double> eps_grid, int max_dim) {
    if (max_dim < 0 || max_dim > kVrMaxDim)
        throw CapExceeded("vr max_dim capped at " + std::to_string(kVrMaxDim));
    std::sort(eps_grid.begin(), eps_grid.end());
    eps_grid.erase(std::unique(eps_grid.begin(), eps_grid.end()), eps_grid.end());

    // dedupe points
    std::vector<Assignment> pts;
    for (const auto& p : points) {
        bool dup = false;
        for (const auto& q : pts)
            if (p == q) {
                dup = true;
                break;
            }
        if (!dup) pts.push_back(p);
    }
    const int np = static_cast<int>(pts.size());
    if (np > kVrPointCap) throw CapExceeded("vr point cap exceeded: " + std::to_string(np));
    if (np == 0) return {};

    std::vector<std::vector<int>> dist(np, std::vector<int>(np, 0));
    for (int i = 0; i < np; ++i)
        for (int j = i + 1; j < np; ++j) dist[i][j] = dist[j][i] = pts[i].hamming(pts[j]);

    // appearance scale of a simplex = max pairwise distance (vertices: 0)
    const int top_needed = std::min(max_dim + 1, np - 1);
    std::vector<std::vector<std::vector<int>>> simplices(top_needed + 1);
    std::vector<std::vector<double>> scale(top_needed + 1);
    const double last = eps_grid.empty() ? -1.0 : eps_grid.back();
    for (int i = 0; i < np; ++i) {
        simplices[0].push_back({i});
        scale[0].push_back(0.0);
    }
    for (int d = 1; d <= top_needed; ++d) {
        for (std::size_t si = 0; si < simplices[d - 1].size(); ++si) {
            const auto& s = simplices[d - 1][si];
            for (int v = s.back() + 1; v < np; ++v) {
                double sc = scale[d - 1][si];
                bool ok = true;
                for (int u : s) {
                    if (dist[u][v] > last) {
                        ok = false;
                        break;
                    }
                    sc = std::max(sc, static_cast<double>(dist[u][v]));
                }
                if (!ok) continue;
                auto ext = s;
                ext.push_back(v);
                simplices[d].push_back(std::move(ext));
                scale[d].push_back(sc);
            }
        }
    }
    // sort each dimension by (scale, lex) so scale-sublists are prefixes
    for (int d = 0; d <= top_needed; ++d) {
        std::vector<std::size_t> order(simplices[d].size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (scale[d][a] != scale[d][b]) return scale[d][a] < scale[d][b];
            return simplices[d][a] < simplices[d][b];
        });
        std::vector<std::vector<int>> ns(order.size());
        std::vector<double> sc(order.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            ns[i] = simplices[d][order[i]];
            sc[i] = scale[d][order[i]];
        }
        simplices[d] = std::move(ns);
        scale[d] = std::move(sc);
    }

    // index map for boundary construction
    std::vector<std::map<std::vector<int>, int>> index(top_needed + 1);
    for (int d = 0; d <= top_needed; ++d)
        for (std::size_t i = 0; i < simplices[d].size(); ++i)
            index[d][simplices[d][i]] = static_cast<int>(i);

    std::vector<F2Matrix> full_bd(top_needed + 1);
    for (int d = 1; d <= top_needed; ++d) {
        full_bd[d] = F2Matrix(static_cast<int>(simplices[d - 1].size()),
                              static_cast<int>(simplices[d].size()));
        for (std::size_t c = 0; c < simplices[d].size(); ++c) {
            const auto& s = simplices[d][c];
            for (std::size_t drop = 0; drop < s.size(); ++drop) {
                std::vector<int> facet;
                for (std::size_t i = 0; i < s.size(); ++i)
                    if (i != drop) facet.push_back(s[i]);
                full_bd[d].set(index[d - 1][facet], static_cast<int>(c), true);
            }
        }
    }

    // counts per scale index (0 = vertices-only complex at scale 0)
    const int ns = static_cast<int>(eps_grid.size());
    auto count_at = [&](int d, double eps) {
        const auto& sc = scale[d];
        int lo = 0, hi = static_cast<int>(sc.size());
        while (lo < hi) {
            int mid = (lo + hi) / 2;
            if (sc[mid] <= eps)
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo;
    };
    std::vector<std::vector<int>> counts(ns + 1, std::vector<int>(top_needed + 1, 0));
    for (int d = 0; d <= top_needed; ++d) {
        counts[0][d] = d == 0 ? np : 0;
        for (int s = 1; s <= ns; ++s) counts[s][d] = count_at(d, eps_grid[s - 1]);
    }

    auto sub_matrix = [&](int d, int rows, int cols) {
        F2Matrix m(rows, cols);
        for (int c = 0; c < cols; ++c)
            for (int r = 0; r < rows; ++r)
                if (d <= top_needed && full_bd[d].rows() > r && full_bd[d].cols() > c &&
                    full_bd[d].get(r, c))
                    m.set(r, c, true);
        return m;
    };

    // persistent Betti beta^{i,j}_d = dim Z_d(K_i) - dim(Z_d(K_i) cap B_d(K_j))
    auto persistent_betti = [&](int d, int i, int j) {
        int n_d_i = counts[i][d];
        if (n_d_i == 0) return 0;
        int rows_below = d >= 1 ? counts[i][d - 1] : 0;
        F2Matrix bd_i = d >= 1 ? sub_matrix(d, rows_below, n_d_i) : F2Matrix(0, n_d_i);
        int dim_z = n_d_i - f2_rank(bd_i);
        if (dim_z == 0) return 0;
        int n_d1_j = d + 1 <= top_needed ? counts[j][d + 1] : 0;
        if (n_d1_j == 0) return dim_z;
        // B_d(K_j) intersected with chains supported on K_i's d-simplices:
        // rank computations on [Z-basis | bd_{d+1}^j] rows restricted to K_j
        F2Matrix bd_j = sub_matrix(d + 1, counts[j][d], n_d1_j);
        auto zbasis = f2_nullspace(bd_i);
        F2Matrix zcols(counts[j][d], static_cast<int>(zbasis.size()));
        for (std::size_t c = 0; c < zbasis.size(); ++c)
            for (int r = 0; r < n_d_i; ++r)
                if (zbasis[c][r]) zcols.set(r, static_cast<int>(c), true);
        int rank_b = f2_rank(bd_j);
        int rank_joint = f2_rank(f2_hstack(zcols, bd_j));
        int dim_intersection = dim_z + rank_b - rank_joint;
        return dim_z - dim_intersection;
    };

    std::vector<Barcode> out;
    for (int d = 0; d <= max_dim; ++d) {
        Barcode bc;
        bc.dim = d;
        if (d > top_needed) {
            out.push_back(bc);
            continue;
        }
        // beta[i][j] for 0 <= i <= j <= ns
        std::vector<std::vector<int>> beta(ns + 1, std::vector<int>(ns + 1, 0));
        for (int i = 0; i <= ns; ++i)
            for (int j = i; j <= ns; ++j) beta[i][j] = persistent_betti(d, i, j);
        auto scale_of = [&](int idx) { return idx == 0 ? 0.0 : eps_grid[idx - 1]; };
        for (int i = 0; i <= ns; ++i) {
            for (int j = i; j <= ns; ++j) {
                // bars born entering K_i and dying entering K_{j+1}
                int born_i_alive_j = beta[i][j] - (i > 0 ? beta[i - 1][j] : 0);
                int born_i_alive_j1 =
                    j + 1 <= ns ? beta[i][j + 1] - (i > 0 ? beta[i - 1][j + 1] : 0) : 0;
                int dying = j + 1 <= ns ? born_i_alive_j - born_i_alive_j1 : 0;
                for (int t = 0; t < dying; ++t)
                    bc.intervals.push_back({scale_of(i), scale_of(j + 1)});
                if (j == ns)
                    for (int t = 0; t < born_i_alive_j; ++t)
                        bc.intervals.push_back({scale_of(i), std::nullopt});
            }
        }
        std::sort(bc.intervals.begin(), bc.intervals.end(), [](const auto& a, const auto& b) {
            if (a.birth != b.birth) return a.birth < b.birth;
            double da = a.death.value_or(1e300), db = b.death.value_or(1e300);
            return da < db;
        });
        out.push_back(bc);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Clause-density sweeps
// ---------------------------------------------------------------------------

struct SweepRow {
    double alpha = 0;
    long trials = 0;
    long sat_trials = 0;
    long unsat_trials = 0;
    double mean_solution_count = 0;
    double mean_beta0 = 0;
    double mean_min_separation = 0;  // over satisfiable multi-cluster draws; 0 if none
    std::uint64_t seed = 0;
};

/// Per alpha: mean solution count, mean cluster count, and mean minimal
/// inter-cluster separation over satisfiable instances; unsatisfiable draws
/// are counted separately. Trials run on `threads` workers with per-trial
/// derived seeds, so results are independent of scheduling order.
inline std::vector<SweepRow> shattering_sweep(int n, const std::vector<double>& alpha_grid,
                                              long trials, std::uint64_t seed,
                                              int cap = kDefaultEnumerationCap, int threads = 1) {
    if (n > cap) throw CapExceeded("sweep n exceeds enumeration cap");
    if (trials < 1) throw ValidationError("trials must be >= 1");
    if (threads < 1) threads = 1;
    std::vector<SweepRow> rows;
    struct TrialResult {
        bool sat = false;
        double solutions = 0;
        int beta0 = 0;
        int min_sep = -1;
    };
    for (std::size_t ai = 0; ai < alpha_grid.size(); ++ai) {
        SweepRow row;
        row.alpha = alpha_grid[ai];
        row.trials = trials;
        row.seed = seed;
        int m = static_cast<int>(std::lround(alpha_grid[ai] * n));
        std::vector<TrialResult> results(trials);
        auto work = [&](long begin, long end) {
            for (long t = begin; t < end; ++t) {
                std::uint64_t s =
                    derive_seed(seed, ai * 1000003ULL + static_cast<std::uint64_t>(t));
                CnfFormula f = random_ksat(n, m, 3, s);
                SolutionSet sol = enumerate_solutions(f, cap);
                if (sol.members.empty()) continue;
                TrialResult& r = results[t];
                r.sat = true;
                r.solutions = static_cast<double>(sol.size());
                ClusterPartition part = components(build_complex(sol, 1));
                r.beta0 = part.count();
                r.min_sep = part.min_separation();
            }
        };
        if (threads == 1 || trials < 2 * threads) {
            work(0, trials);
        } else {
            std::vector<std::thread> pool;
            long chunk = (trials + threads - 1) / threads;
            for (int w = 0; w < threads; ++w)
                pool.emplace_back(work, w * chunk, std::min<long>(trials, (w + 1) * chunk));
            for (auto& th : pool) th.join();
        }
        double sum_solutions = 0, sum_beta0 = 0, sum_sep = 0;
        long sep_samples = 0;
        for (const TrialResult& r : results) {
            if (!r.sat) {
                ++row.unsat_trials;
                continue;
            }
            ++row.sat_trials;
            sum_solutions += r.solutions;
            sum_beta0 += r.beta0;
            if (r.min_sep > 0) {
                sum_sep += r.min_sep;
                ++sep_samples;
            }
        }
        if (row.sat_trials > 0) {
            row.mean_solution_count = sum_solutions / row.sat_trials;
            row.mean_beta0 = sum_beta0 / row.sat_trials;
        }
        if (sep_samples > 0) row.mean_min_separation = sum_sep / sep_samples;
        rows.push_back(row);
    }
    return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "alpha,trials,sat_trials,unsat_trials,mean_solution_count,mean_beta0,"
          "mean_min_separation,seed\n";
    os.precision(17);
    for (const auto& r : rows)
        os << r.alpha << ',' << r.trials << ',' << r.sat_trials << ',' << r.unsat_trials << ','
           << r.mean_solution_count << ',' << r.mean_beta0 << ',' << r.mean_min_separation << ','
           << r.seed << '\n';
    return os.str();
}

}  // namespace topocube

#endif
