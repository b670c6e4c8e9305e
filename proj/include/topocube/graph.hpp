#ifndef TOPOCUBE_GRAPH_HPP
#define TOPOCUBE_GRAPH_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "topocube/eigen.hpp"
#include "topocube/errors.hpp"
#include "topocube/formula.hpp"

namespace topocube {

inline bool is_connected(const SimpleGraph& g) {
    if (g.n == 0) return true;
    auto adj = g.adjacency();
    std::vector<char> seen(g.n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                ++reached;
                q.push(v);
            }
    }
    return reached == g.n;
}

/// One cycle per non-tree edge: the BFS-tree path between its endpoints plus
/// the edge itself. Edges are listed as (u,v) pairs with u < v; the non-tree
/// edge is first. Deterministic given BFS order from vertex 0.
inline std::vector<std::vector<std::pair<int, int>>> fundamental_cycle_basis(const SimpleGraph& g) {
    if (!is_connected(g)) throw ValidationError("graph is disconnected");
    auto adj = g.adjacency();
    std::vector<int> parent(g.n, -1), depth(g.n, 0);
    std::vector<char> seen(g.n, 0);
    if (g.n > 0) {
        std::queue<int> q;
        q.push(0);
        seen[0] = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int v : adj[u])
                if (!seen[v]) {
                    seen[v] = 1;
                    parent[v] = u;
                    depth[v] = depth[u] + 1;
                    q.push(v);
                }
        }
    }
    auto norm = [](int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); };
    std::vector<std::pair<int, int>> tree_edges;
    for (int v = 0; v < g.n; ++v)
        if (parent[v] >= 0) tree_edges.push_back(norm(v, parent[v]));
    std::sort(tree_edges.begin(), tree_edges.end());
    auto is_tree_edge = [&](std::pair<int, int> e) {
        return std::binary_search(tree_edges.begin(), tree_edges.end(), e);
    };

    std::vector<std::vector<std::pair<int, int>>> cycles;
    for (auto e : g.edges) {
        if (is_tree_edge(e)) continue;
        std::vector<std::pair<int, int>> cyc{e};
        int a = e.first, b = e.second;
        while (a != b) {
            if (depth[a] < depth[b]) std::swap(a, b);
            cyc.push_back(norm(a, parent[a]));
            a = parent[a];
        }
        cycles.push_back(std::move(cyc));
    }
    return cycles;
}

/// Shortest cycle length, or -1 for forests. BFS from every vertex.
inline int girth(const SimpleGraph& g) {
    auto adj = g.adjacency();
    int best = std::numeric_limits<int>::max();
    for (int s = 0; s < g.n; ++s) {
        std::vector<int> dist(g.n, -1), parent(g.n, -1);
        std::queue<int> q;
        dist[s] = 0;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int v : adj[u]) {
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    q.push(v);
                } else if (v != parent[u]) {
                    best = std::min(best, dist[u] + dist[v] + 1);
                }
            }
        }
    }
    return best == std::numeric_limits<int>::max() ? -1 : best;
}

struct GraphStats {
    int vertices = 0;
    int edges = 0;
    int min_degree = 0;
    int max_degree = 0;
    int girth = -1;           // -1 when acyclic
    int cycle_rank = 0;       // |E| - |V| + components
    double spectral_gap = 0;  // smallest nonzero eigenvalue of the normalized Laplacian
    bool connected = false;
};

/// Degrees, girth, cycle rank, and the measured spectral gap. Expansion is
/// always reported from the graph itself, never assumed.
inline GraphStats graph_stats(const SimpleGraph& g) {
    GraphStats s;
    s.vertices = g.n;
    s.edges = static_cast<int>(g.edges.size());
    auto adj = g.adjacency();
    s.min_degree = g.n ? static_cast<int>(adj[0].size()) : 0;
    for (const auto& row : adj) {
        s.min_degree = std::min<int>(s.min_degree, static_cast<int>(row.size()));
        s.max_degree = std::max<int>(s.max_degree, static_cast<int>(row.size()));
    }
    s.girth = girth(g);
    s.connected = is_connected(g);
    if (g.n > 0) {
        std::vector<std::vector<double>> lap(g.n, std::vector<double>(g.n, 0.0));
        for (int u = 0; u < g.n; ++u) {
            if (adj[u].empty()) continue;
            lap[u][u] = 1.0;
            for (int v : adj[u])
                lap[u][v] -= 1.0 / std::sqrt(static_cast<double>(adj[u].size()) * adj[v].size());
        }
        for (double e : jacobi_eigenvalues(lap))
            if (e > 1e-9) {
                s.spectral_gap = e;
                break;
            }
    }
    int comps = 0;
    std::vector<char> seen(g.n, 0);
    for (int v = 0; v < g.n; ++v) {
        if (seen[v]) continue;
        ++comps;
        std::queue<int> q;
        q.push(v);
        seen[v] = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int w : adj[u])
                if (!seen[w]) {
                    seen[w] = 1;
                    q.push(w);
                }
        }
    }
    s.cycle_rank = s.edges - s.vertices + comps;
    return s;
}

}  // namespace topocube

#endif
