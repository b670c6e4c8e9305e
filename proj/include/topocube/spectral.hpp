#ifndef TOPOCUBE_SPECTRAL_HPP
#define TOPOCUBE_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "topocube/complex.hpp"
#include "topocube/eigen.hpp"
#include "topocube/errors.hpp"
#include "topocube/formula.hpp"

namespace topocube {

inline constexpr double kSpectralZeroTol = 1e-9;
inline constexpr int kExactCheegerCap = 20;

/// Configuration graph on the solution set: symmetric nonnegative weights,
/// zero diagonal, degrees are row sums.
struct WeightedGraph {
    int n_coords = 0;                       // ambient hypercube dimension
    std::vector<std::uint64_t> vertices;    // solution assignments
    std::vector<std::vector<std::pair<int, double>>> adj;
    std::vector<double> degree;

    int size() const { return static_cast<int>(vertices.size()); }
    double total_volume() const {
        double s = 0;
        for (double d : degree) s += d;
        return s;
    }
};

/// Vertices are S(F); weight g joins solution pairs at Hamming distance 1.
inline WeightedGraph config_graph(const CnfFormula& f, double coupling,
                                  int cap = kDefaultEnumerationCap) {
    SolutionSet s = enumerate_solutions(f, cap);
    WeightedGraph g;
    g.n_coords = s.n;
    g.vertices = s.members;
    g.adj.resize(s.members.size());
    g.degree.assign(s.members.size(), 0.0);
    for (std::size_t i = 0; i < s.members.size(); ++i) {
        for (int c = 0; c < s.n; ++c) {
            std::uint64_t nb = s.members[i] ^ bit(c);
            if (nb < s.members[i]) continue;  // count each pair once
            auto it = std::lower_bound(s.members.begin(), s.members.end(), nb);
            if (it == s.members.end() || *it != nb) continue;
            int j = static_cast<int>(it - s.members.begin());
            g.adj[i].emplace_back(j, coupling);
            g.adj[j].emplace_back(static_cast<int>(i), coupling);
            g.degree[i] += coupling;
            g.degree[j] += coupling;
        }
    }
    return g;
}

struct SpectralReport {
    double lambda1_combinatorial = 0;
    double lambda1_normalized = 0;
    int kernel_dim = 0;
    double cheeger_value = 0;
    std::string cheeger_method;               // "exact" or "cluster_bound"
    std::vector<std::uint64_t> cheeger_witness;
    std::size_t ground_state_degeneracy = 0;  // |S(F)|
};

/// Smallest nonzero eigenvalues and kernel dimension of the combinatorial and
/// normalized Laplacians. Zero detection at 1e-9.
inline void laplacian_spectrum(const WeightedGraph& g, SpectralReport& rep) {
    const int n = g.size();
    if (n == 0) throw ValidationError("empty graph");
    // combinatorial L = D - W
    std::vector<std::vector<double>> lc(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        lc[i][i] = g.degree[i];
        for (auto [j, w] : g.adj[i]) lc[i][j] -= w;
    }
    auto evc = jacobi_eigenvalues(lc);
    rep.kernel_dim = 0;
    rep.lambda1_combinatorial = 0;
    for (double e : evc) {
        if (std::abs(e) < kSpectralZeroTol)
            ++rep.kernel_dim;
        else if (rep.lambda1_combinatorial == 0) {
            rep.lambda1_combinatorial = e;
            break;
        }
    }
    // normalized L = I - D^-1/2 W D^-1/2; isolated vertices contribute 0 rows
    std::vector<std::vector<double>> ln(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        if (g.degree[i] <= 0) continue;
        ln[i][i] = 1.0;
        for (auto [j, w] : g.adj[i])
            if (g.degree[j] > 0) ln[i][j] -= w / std::sqrt(g.degree[i] * g.degree[j]);
    }
    auto evn = jacobi_eigenvalues(ln);
    rep.lambda1_normalized = 0;
    for (double e : evn)
        if (std::abs(e) >= kSpectralZeroTol) {
            rep.lambda1_normalized = e;
            break;
        }
}

/// Conductance h = cut weight / min(vol, vol-complement). Exact by gray-code
/// subset scan for |V| <= 20; for larger graphs evaluates only the hinted
/// cluster cuts and reports an upper bound, explicitly labeled. Disconnected
/// graphs return exactly 0 with a component witness.
inline void cheeger(const WeightedGraph& g, SpectralReport& rep,
                    const ClusterPartition* hint = nullptr) {
    const int n = g.size();
    if (n < 2) throw ValidationError("cheeger requires at least two vertices (no proper cut)");

    // connected components via the weighted adjacency
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<int> stack{s};
        comp[s] = ncomp;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (auto [v, w] : g.adj[u])
                if (comp[v] < 0) {
                    comp[v] = ncomp;
                    stack.push_back(v);
                }
        }
        ++ncomp;
    }
    if (ncomp > 1) {
        rep.cheeger_value = 0.0;
        rep.cheeger_method = "exact";
        for (int i = 0; i < n; ++i)
            if (comp[i] == 0) rep.cheeger_witness.push_back(g.vertices[i]);
        return;
    }

    if (n > kExactCheegerCap) {
        if (!hint)
            throw ValidationError("graph too large for exact conductance (" + std::to_string(n) +
                                  " > " + std::to_string(kExactCheegerCap) +
                                  " vertices) and no cluster hint supplied");
        // upper bound from the hinted cuts only
        double best = -1;
        std::vector<std::uint64_t> witness;
        double total = g.total_volume();
        for (const auto& cluster : hint->clusters) {
            double vol = 0, cut = 0;
            std::vector<char> inside(n, 0);
            for (std::uint64_t x : cluster) {
                auto it = std::lower_bound(g.vertices.begin(), g.vertices.end(), x);
                if (it == g.vertices.end() || *it != x) continue;
                inside[it - g.vertices.begin()] = 1;
            }
            for (int i = 0; i < n; ++i) {
                if (!inside[i]) continue;
                vol += g.degree[i];
                for (auto [j, w] : g.adj[i])
                    if (!inside[j]) cut += w;
            }
            double denom = std::min(vol, total - vol);
            if (denom <= 0) continue;
            double h = cut / denom;
            if (best < 0 || h < best) {
                best = h;
                witness.assign(cluster.begin(), cluster.end());
            }
        }
        if (best < 0) throw ValidationError("cluster hint produced no proper cut");
        rep.cheeger_value = best;
        rep.cheeger_method = "cluster_bound";
        rep.cheeger_witness = std::move(witness);
        return;
    }

    // exact: gray-code walk over subsets containing vertex 0 (each cut once)
    double total = g.total_volume();
    std::vector<char> inside(n, 0);
    inside[0] = 1;
    double vol = g.degree[0];
    double cut = 0;
    for (auto [j, w] : g.adj[0]) cut += w;
    double best = cut / std::min(vol, total - vol);
    std::uint64_t best_code = 0;
    const std::uint64_t steps = std::uint64_t{1} << (n - 1);
    std::uint64_t code = 0;
    for (std::uint64_t it = 1; it < steps; ++it) {
        std::uint64_t next = it ^ (it >> 1);
        int flip = std::countr_zero(code ^ next) + 1;  // vertex to toggle (1..n-1)
        code = next;
        bool entering = !inside[flip];
        inside[flip] = entering;
        vol += entering ? g.degree[flip] : -g.degree[flip];
        for (auto [j, w] : g.adj[flip]) {
            bool j_in = inside[j];
            // edge (flip, j): if j inside, the edge crosses iff flip leaves
            if (entering)
                cut += j_in ? -w : w;
            else
                cut += j_in ? w : -w;
        }
        double denom = std::min(vol, total - vol);
        if (denom > kSpectralZeroTol) {
            double h = cut / denom;
            if (h < best) {
                best = h;
                best_code = code;
            }
        }
    }
    rep.cheeger_value = best;
    rep.cheeger_method = "exact";
    rep.cheeger_witness.push_back(g.vertices[0]);
    for (int v = 1; v < n; ++v)
        if (best_code & bit(v - 1)) rep.cheeger_witness.push_back(g.vertices[v]);
    std::sort(rep.cheeger_witness.begin(), rep.cheeger_witness.end());
}

/// Full spectral analysis of a formula's configuration graph.
inline SpectralReport spectral_report(const CnfFormula& f, double coupling,
                                      int cap = kDefaultEnumerationCap,
                                      const ClusterPartition* hint = nullptr) {
    WeightedGraph g = config_graph(f, coupling, cap);
    SpectralReport rep;
    rep.ground_state_degeneracy = g.vertices.size();
    if (g.size() == 0) return rep;
    laplacian_spectrum(g, rep);
    if (g.size() >= 2) cheeger(g, rep, hint);
    return rep;
}

/// Weighted edge-list export: "c vertex <index> <assignment bits>" comment
/// lines, then one "i j w" line per edge (i < j, vertex indices).
inline std::string export_weighted_edge_list(const WeightedGraph& g) {
    std::ostringstream os;
    os.precision(17);
    for (int i = 0; i < g.size(); ++i) {
        os << "c vertex " << i << ' ';
        for (int c = g.n_coords - 1; c >= 0; --c) os << ((g.vertices[i] >> c) & 1);
        os << '\n';
    }
    for (int i = 0; i < g.size(); ++i)
        for (auto [j, w] : g.adj[i])
            if (i < j) os << i << ' ' << j << ' ' << w << '\n';
    return os.str();
}

/// Perturbative bound on the effective coupling between clusters at Hamming
/// separation w: g * (n*g/Delta)^(w-1). Strictly decreasing in w when
/// n*g < Delta.
inline double effective_coupling_bound(int n, int w, double driver, double penalty_gap) {
    if (w < 1) throw ValidationError("separation w must be >= 1");
    if (penalty_gap <= 0) throw ValidationError("penalty gap must be positive");
    if (n < 1) throw ValidationError("n must be positive");
    return driver * std::pow(n * driver / penalty_gap, w - 1);
}

}  // namespace topocube

#endif
