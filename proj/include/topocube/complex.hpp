#ifndef TOPOCUBE_COMPLEX_HPP
#define TOPOCUBE_COMPLEX_HPP

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "topocube/errors.hpp"
#include "topocube/formula.hpp"

namespace topocube {

inline constexpr int kDefaultEnumerationCap = 26;

/// Set of satisfying assignments of a formula, bit-packed, sorted ascending.
struct SolutionSet {
    int n = 0;
    std::vector<std::uint64_t> members;

    bool contains(std::uint64_t x) const {
        return std::binary_search(members.begin(), members.end(), x);
    }
    std::size_t size() const { return members.size(); }
};

/// Exact enumeration of S(F) over all 2^n assignments. The cap guards against
/// accidental blowups; raise it explicitly when you mean it.
inline SolutionSet enumerate_solutions(const CnfFormula& f, int cap = kDefaultEnumerationCap) {
    if (f.num_vars > cap)
        throw CapExceeded("enumeration cap exceeded: n=" + std::to_string(f.num_vars) + " > cap=" +
                          std::to_string(cap));
    if (f.num_vars > 62)
        throw CapExceeded("bit-packed enumeration supports at most 62 variables");
    SolutionSet s;
    s.n = f.num_vars;
    const int m = f.num_clauses();
    std::vector<std::uint64_t> pos(m, 0), neg(m, 0);
    for (int ci = 0; ci < m; ++ci)
        for (int lit : f.clauses[ci].literals) {
            int v = (lit > 0 ? lit : -lit) - 1;
            (lit > 0 ? pos[ci] : neg[ci]) |= bit(v);
        }
    const std::uint64_t total = std::uint64_t{1} << f.num_vars;
    for (std::uint64_t x = 0; x < total; ++x) {
        bool ok = true;
        for (int ci = 0; ci < m; ++ci) {
            if ((x & pos[ci]) == 0 && ((~x) & neg[ci]) == 0) {
                ok = false;
                break;
            }
        }
        if (ok) s.members.push_back(x);
    }
    return s;
}

/// Axis-aligned subcube of {0,1}^n: free coordinates vary, the rest are fixed.
/// Canonical key = (free coordinate mask, fixed bits); fixed_bits has zeros on
/// free coordinates.
struct Face {
    std::uint64_t free_mask = 0;
    std::uint64_t fixed_bits = 0;

    int dim() const { return popcount64(free_mask); }

    bool operator==(const Face& o) const {
        return free_mask == o.free_mask && fixed_bits == o.fixed_bits;
    }
    bool operator<(const Face& o) const {
        return free_mask != o.free_mask ? free_mask < o.free_mask : fixed_bits < o.fixed_bits;
    }

    std::vector<int> free_coords() const {
        std::vector<int> out;
        for (int i = 0; i < 64; ++i)
            if (free_mask & bit(i)) out.push_back(i + 1);  // 1-based, matching variable indices
        return out;
    }
};

struct FaceHash {
    std::size_t operator()(const Face& f) const {
        std::uint64_t h = f.free_mask * 0x9e3779b97f4a7c15ULL ^ f.fixed_bits;
        h ^= h >> 33;
        h *= 0xff51afd7ed558ccdULL;
        h ^= h >> 33;
        return static_cast<std::size_t>(h);
    }
};

/// The cubical solution complex: for each k up to max_dim, all subcubes whose
/// 2^k corners are solutions. Faces are kept in canonical sorted order, so
/// face indices are stable and dumps diff cleanly.
struct CubicalComplex {
    int n = 0;
    int max_dim = 0;  // dimension through which faces were generated
    std::vector<std::vector<Face>> faces_by_dim;

    int face_count(int k) const {
        if (k < 0 || k >= static_cast<int>(faces_by_dim.size())) return 0;
        return static_cast<int>(faces_by_dim[k].size());
    }

    /// Index of a face within its dimension's canonical order, or -1.
    int face_index(const Face& f) const {
        int k = f.dim();
        if (k >= static_cast<int>(faces_by_dim.size())) return -1;
        const auto& v = faces_by_dim[k];
        auto it = std::lower_bound(v.begin(), v.end(), f);
        if (it == v.end() || !(*it == f)) return -1;
        return static_cast<int>(it - v.begin());
    }

    /// True when every dimension the ambient cube could support was generated.
    bool complete() const { return max_dim >= n; }
};

/// Build the complex from the solution set, generating dimensions 0..max_dim.
/// k-faces are produced by axis-extending (k-1)-faces, which is correct by
/// closure and much cheaper than scanning all candidate subcubes. Generation
/// stops early at the first empty dimension (closure implies nothing above).
inline CubicalComplex build_complex(const SolutionSet& s, int max_dim) {
    CubicalComplex k;
    k.n = s.n;
    if (max_dim > s.n) max_dim = s.n;
    if (max_dim < 0) max_dim = 0;
    k.max_dim = max_dim;
    k.faces_by_dim.assign(max_dim + 1, {});

    auto& verts = k.faces_by_dim[0];
    verts.reserve(s.members.size());
    for (std::uint64_t x : s.members) verts.push_back(Face{0, x});

    std::unordered_set<Face, FaceHash> prev(verts.begin(), verts.end());
    for (int dim = 1; dim <= max_dim; ++dim) {
        std::unordered_set<Face, FaceHash> cur;
        for (const Face& f : k.faces_by_dim[dim - 1]) {
            for (int c = 0; c < s.n; ++c) {
                std::uint64_t cb = bit(c);
                if (f.free_mask & cb) continue;
                Face sibling{f.free_mask, f.fixed_bits ^ cb};
                if (!prev.count(sibling)) continue;
                cur.insert(Face{f.free_mask | cb, f.fixed_bits & ~cb});
            }
        }
        auto& out = k.faces_by_dim[dim];
        out.assign(cur.begin(), cur.end());
        std::sort(out.begin(), out.end());
        if (out.empty()) {
            k.max_dim = s.n;  // nothing above an empty dimension; complex is complete
            break;
        }
        prev = std::move(cur);
    }
    return k;
}

inline CubicalComplex build_complex(const CnfFormula& f, int max_dim,
                                    int cap = kDefaultEnumerationCap) {
    return build_complex(enumerate_solutions(f, cap), max_dim);
}

/// Independent re-scan used by tests and certification: every facet of every
/// face must itself be present, and every face's corners must be vertices.
inline bool verify_closure(const CubicalComplex& k) {
    std::unordered_set<Face, FaceHash> all;
    for (const auto& dim_faces : k.faces_by_dim) all.insert(dim_faces.begin(), dim_faces.end());
    for (int dim = 1; dim <= k.max_dim && dim < static_cast<int>(k.faces_by_dim.size()); ++dim) {
        for (const Face& f : k.faces_by_dim[dim]) {
            for (int c = 0; c < k.n; ++c) {
                std::uint64_t cb = bit(c);
                if (!(f.free_mask & cb)) continue;
                Face lo{f.free_mask & ~cb, f.fixed_bits};
                Face hi{f.free_mask & ~cb, f.fixed_bits | cb};
                if (!all.count(lo) || !all.count(hi)) return false;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Clusters
// ---------------------------------------------------------------------------

/// Connected components of the 1-skeleton plus pairwise minimal Hamming
/// separations. Separation entries are exact; pairs whose product of sizes
/// exceeds the scan cutoff are recorded as -1 (never silently approximated).
struct ClusterPartition {
    std::vector<std::vector<std::uint64_t>> clusters;
    std::vector<std::vector<int>> separations;

    int count() const { return static_cast<int>(clusters.size()); }

    int min_separation() const {
        int best = -1;
        for (std::size_t i = 0; i < separations.size(); ++i)
            for (std::size_t j = i + 1; j < separations.size(); ++j)
                if (separations[i][j] >= 0 && (best < 0 || separations[i][j] < best))
                    best = separations[i][j];
        return best;
    }
};

inline constexpr std::uint64_t kSeparationPairCutoff = 100000000;  // 1e4 x 1e4 vertices

inline ClusterPartition components(const CubicalComplex& k) {
    ClusterPartition part;
    if (k.faces_by_dim.empty()) return part;
    const std::vector<Face>& verts = k.faces_by_dim[0];
    const int nv = static_cast<int>(verts.size());
    if (nv == 0) return part;
    if (k.max_dim < 1 && k.n > 0 && nv > 1 && k.faces_by_dim.size() < 2)
        throw ValidationError("components requires the 1-skeleton to be built");

    std::vector<int> parent(nv);
    for (int i = 0; i < nv; ++i) parent[i] = i;
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    if (k.faces_by_dim.size() > 1) {
        for (const Face& e : k.faces_by_dim[1]) {
            int c = std::countr_zero(e.free_mask);
            Face lo{0, e.fixed_bits};
            Face hi{0, e.fixed_bits | bit(c)};
            int a = k.face_index(lo), b = k.face_index(hi);
            int ra = find(a), rb = find(b);
            if (ra != rb) parent[ra] = rb;
        }
    }
    std::vector<int> root_to_cluster(nv, -1);
    for (int i = 0; i < nv; ++i) {
        int r = find(i);
        if (root_to_cluster[r] < 0) {
            root_to_cluster[r] = part.count();
            part.clusters.emplace_back();
        }
        part.clusters[root_to_cluster[r]].push_back(verts[i].fixed_bits);
    }
    const int nc = part.count();
    part.separations.assign(nc, std::vector<int>(nc, 0));
    for (int i = 0; i < nc; ++i) {
        for (int j = i + 1; j < nc; ++j) {
            std::uint64_t pairs = static_cast<std::uint64_t>(part.clusters[i].size()) *
                                  part.clusters[j].size();
            int best = -1;
            if (pairs <= kSeparationPairCutoff) {
                for (std::uint64_t a : part.clusters[i])
                    for (std::uint64_t b : part.clusters[j]) {
                        int d = hamming64(a, b);
                        if (best < 0 || d < best) best = d;
                    }
            }
            part.separations[i][j] = part.separations[j][i] = best;
        }
    }
    return part;
}

/// Projection image of the solution set on the chosen coordinates (1-based),
/// deduplicated. Coordinate order in the output follows the sorted coords.
inline SolutionSet restrict_to_coords(const SolutionSet& s, std::vector<int> coords) {
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    for (int c : coords)
        if (c < 1 || c > s.n)
            throw ValidationError("coordinate " + std::to_string(c) + " out of range [1," +
                                  std::to_string(s.n) + "]");
    SolutionSet out;
    out.n = static_cast<int>(coords.size());
    out.members.reserve(s.members.size());
    for (std::uint64_t x : s.members) {
        std::uint64_t y = 0;
        for (std::size_t i = 0; i < coords.size(); ++i)
            if (x & bit(coords[i] - 1)) y |= bit(static_cast<int>(i));
        out.members.push_back(y);
    }
    std::sort(out.members.begin(), out.members.end());
    out.members.erase(std::unique(out.members.begin(), out.members.end()), out.members.end());
    return out;
}

/// Stable JSON dump: {"n":., "faces":[[dim,[free coords],"fixed bits hex"],..]}.
inline std::string dump_complex_json(const CubicalComplex& k) {
    std::ostringstream os;
    os << "{\"n\":" << k.n << ",\"faces\":[";
    bool first = true;
    for (int dim = 0; dim < static_cast<int>(k.faces_by_dim.size()); ++dim) {
        for (const Face& f : k.faces_by_dim[dim]) {
            if (!first) os << ',';
            first = false;
            os << '[' << dim << ",[";
            auto fc = f.free_coords();
            for (std::size_t i = 0; i < fc.size(); ++i) os << (i ? "," : "") << fc[i];
            os << "],\"0x" << std::hex << f.fixed_bits << std::dec << "\"]";
        }
    }
    os << "]}";
    return os.str();
}

}  // namespace topocube

#endif
