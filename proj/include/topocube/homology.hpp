#ifndef TOPOCUBE_HOMOLOGY_HPP
#define TOPOCUBE_HOMOLOGY_HPP

#include <bit>
#include <optional>
#include <string>
#include <vector>

#include "topocube/complex.hpp"
#include "topocube/errors.hpp"
#include "topocube/f2.hpp"

namespace topocube {

/// Chain over F2 in degree dim; coefficients follow the complex's canonical
/// face order for that dimension.
struct F2Chain {
    int dim = 0;
    std::vector<std::uint8_t> coeffs;

    bool is_zero() const {
        for (auto c : coeffs)
            if (c) return false;
        return true;
    }
};

struct BettiVector {
    std::vector<int> betti;

    int operator[](std::size_t k) const { return k < betti.size() ? betti[k] : 0; }
    bool operator==(const BettiVector& o) const { return betti == o.betti; }
};

/// Boundary operator of a cubical complex in degree k: rows are (k-1)-faces,
/// columns k-faces, entry 1 iff incidence. Every column has weight 2k.
inline F2Matrix boundary_matrix(const CubicalComplex& cx, int k) {
    if (k < 1)
        throw ValidationError("boundary dimension must be >= 1");
    int rows = cx.face_count(k - 1);
    int cols = cx.face_count(k);
    F2Matrix m(rows, cols);
    if (cols == 0) return m;
    const auto& faces = cx.faces_by_dim[k];
    for (int c = 0; c < cols; ++c) {
        const Face& f = faces[c];
        std::uint64_t fm = f.free_mask;
        while (fm) {
            int coord = std::countr_zero(fm);
            fm &= fm - 1;
            Face lo{f.free_mask & ~bit(coord), f.fixed_bits};
            Face hi{f.free_mask & ~bit(coord), f.fixed_bits | bit(coord)};
            int ri = cx.face_index(lo);
            int rj = cx.face_index(hi);
            if (ri < 0 || rj < 0) throw Error("complex violates closure: missing facet");
            m.set(ri, c, true);
            m.set(rj, c, true);
        }
    }
    return m;
}

/// Explicit chain complex given by cell counts and boundary matrices; used for
/// gadget-local cell structures and as the common homology substrate.
struct CellComplex {
    std::vector<int> cells;              // cells[k] = number of k-cells
    std::vector<F2Matrix> boundaries;    // boundaries[k] : cells[k-1] x cells[k], k >= 1

    int top_dim() const { return static_cast<int>(cells.size()) - 1; }

    int cell_count(int k) const {
        if (k < 0 || k > top_dim()) return 0;
        return cells[k];
    }

    const F2Matrix& boundary(int k) const {
        static const F2Matrix empty;
        if (k < 1 || k > top_dim()) return empty;
        return boundaries[k];
    }

    /// ∂_{k-1} ∘ ∂_k = 0 for every degree.
    bool boundary_squares_to_zero() const {
        for (int k = 2; k <= top_dim(); ++k) {
            if (cell_count(k) == 0 || cell_count(k - 1) == 0) continue;
            F2Matrix prod = f2_mul(boundaries[k - 1], boundaries[k]);
            for (int r = 0; r < prod.rows(); ++r)
                if (!prod.row_empty(r)) return false;
        }
        return true;
    }

    /// Block direct sum: cells and boundaries of `o` appended after ours.
    CellComplex direct_sum(const CellComplex& o) const {
        CellComplex out;
        int top = std::max(top_dim(), o.top_dim());
        out.cells.resize(top + 1, 0);
        out.boundaries.resize(top + 1);
        for (int k = 0; k <= top; ++k) out.cells[k] = cell_count(k) + o.cell_count(k);
        for (int k = 1; k <= top; ++k) {
            F2Matrix a = k <= top_dim() ? boundary(k) : F2Matrix(0, 0);
            F2Matrix b = k <= o.top_dim() ? o.boundary(k) : F2Matrix(0, 0);
            if (a.rows() == 0 && a.cols() == 0) a = F2Matrix(cell_count(k - 1), cell_count(k));
            if (b.rows() == 0 && b.cols() == 0) b = F2Matrix(o.cell_count(k - 1), o.cell_count(k));
            out.boundaries[k] = f2_direct_sum(a, b);
        }
        return out;
    }
};

/// Materialize the boundary matrices of a cubical complex through `up_to`.
inline CellComplex chain_complex(const CubicalComplex& cx, int up_to) {
    CellComplex cc;
    int top = std::min<int>(up_to, static_cast<int>(cx.faces_by_dim.size()) - 1);
    if (top < 0) top = 0;
    cc.cells.resize(top + 1);
    cc.boundaries.resize(top + 1);
    for (int k = 0; k <= top; ++k) cc.cells[k] = cx.face_count(k);
    for (int k = 1; k <= top; ++k) cc.boundaries[k] = boundary_matrix(cx, k);
    return cc;
}

/// beta_k = |C_k| - rank d_k - rank d_{k+1}, verified against d o d = 0.
inline BettiVector betti_numbers(const CellComplex& cc, int up_to) {
    if (!cc.boundary_squares_to_zero()) throw Error("boundary operator does not square to zero");
    BettiVector out;
    std::vector<int> rank(up_to + 2, 0);
    for (int k = 1; k <= up_to + 1; ++k)
        if (k <= cc.top_dim()) rank[k] = f2_rank(cc.boundary(k));
    for (int k = 0; k <= up_to; ++k) out.betti.push_back(cc.cell_count(k) - rank[k] - rank[k + 1]);
    return out;
}

/// Exact Betti numbers of a cubical complex over F2. The complex must have
/// been generated through dimension up_to+1 (or be complete); pass
/// allow_truncated to accept an upper bound in the top degree instead.
inline BettiVector betti_numbers(const CubicalComplex& cx, int up_to, bool allow_truncated = false) {
    if (!cx.complete() && cx.max_dim < up_to + 1 && !allow_truncated)
        throw ValidationError("complex truncated at dimension " + std::to_string(cx.max_dim) +
                              "; need " + std::to_string(up_to + 1) +
                              " (pass allow_truncated to accept an upper bound)");
    return betti_numbers(chain_complex(cx, up_to + 1), up_to);
}

struct ChainClass {
    bool is_cycle = false;
    bool is_boundary = false;
    std::optional<F2Chain> witness;  // beta with d(beta) = chain, when bounding
};

/// Classify against explicit boundary operators: d_k for the cycle test,
/// d_{k+1} for the bounding test. The witness is the canonical particular
/// solution of the linear system (free variables zero).
inline ChainClass classify_chain(const F2Matrix& bd_k, const F2Matrix& bd_k1, const F2Chain& c) {
    ChainClass out;
    if (bd_k.cols() != static_cast<int>(c.coeffs.size()) && bd_k.cols() != 0)
        throw ValidationError("chain length does not match face count");
    if (bd_k.cols() == 0) {
        out.is_cycle = true;  // degree 0, or empty degree: boundary map is zero
    } else {
        auto img = bd_k.apply(c.coeffs);
        out.is_cycle = std::all_of(img.begin(), img.end(), [](std::uint8_t b) { return !b; });
    }
    if (bd_k1.cols() == 0) {
        out.is_boundary = c.coeffs.empty() ||
                          std::all_of(c.coeffs.begin(), c.coeffs.end(), [](std::uint8_t b) { return !b; });
        if (out.is_boundary) out.witness = F2Chain{c.dim + 1, std::vector<std::uint8_t>(bd_k1.cols(), 0)};
        return out;
    }
    auto sol = f2_solve(bd_k1, c.coeffs);
    if (sol) {
        out.is_boundary = true;
        out.witness = F2Chain{c.dim + 1, *sol};
    }
    return out;
}

inline ChainClass classify_chain(const CubicalComplex& cx, const F2Chain& c) {
    if (c.dim > cx.max_dim && cx.face_count(c.dim) == 0 && !c.coeffs.empty())
        throw ValidationError("chain dimension exceeds built complex");
    if (static_cast<int>(c.coeffs.size()) != cx.face_count(c.dim))
        throw ValidationError("chain length " + std::to_string(c.coeffs.size()) +
                              " does not match face count " + std::to_string(cx.face_count(c.dim)));
    F2Matrix bd_k = c.dim >= 1 ? boundary_matrix(cx, c.dim) : F2Matrix(0, cx.face_count(0));
    bool have_above = cx.complete() || cx.max_dim >= c.dim + 1;
    if (!have_above)
        throw ValidationError("bounding test needs the complex built through dimension " +
                              std::to_string(c.dim + 1));
    F2Matrix bd_k1 = boundary_matrix(cx, c.dim + 1);
    // degree 0 boundary map is the zero map with one row per nothing; encode
    // as 0 x |C_0| so the cycle test passes for every 0-chain.
    if (c.dim == 0) bd_k = F2Matrix(0, cx.face_count(0));
    return classify_chain(bd_k, bd_k1, c);
}

inline ChainClass classify_chain(const CellComplex& cc, const F2Chain& c) {
    F2Matrix bd_k = c.dim >= 1 ? cc.boundary(c.dim) : F2Matrix(0, cc.cell_count(0));
    F2Matrix bd_k1 = cc.boundary(c.dim + 1);
    if (bd_k1.rows() == 0 && bd_k1.cols() == 0) bd_k1 = F2Matrix(cc.cell_count(c.dim), 0);
    if (bd_k.rows() == 0 && bd_k.cols() == 0 && c.dim >= 1)
        bd_k = F2Matrix(cc.cell_count(c.dim - 1), cc.cell_count(c.dim));
    return classify_chain(bd_k, bd_k1, c);
}

struct IndependenceResult {
    bool independent = false;
    int class_rank = 0;
};

/// Homological independence of k-cycles: no nonzero F2 combination bounds.
/// Implemented as rank([chains | d_{k+1}]) - rank(d_{k+1}) == #chains.
/// Throws when some input is not a cycle, naming the offending index.
inline IndependenceResult homology_independence(const F2Matrix& bd_k, const F2Matrix& bd_k1,
                                                const std::vector<F2Chain>& chains) {
    if (chains.empty()) return {true, 0};
    int len = static_cast<int>(chains[0].coeffs.size());
    for (std::size_t i = 0; i < chains.size(); ++i) {
        if (static_cast<int>(chains[i].coeffs.size()) != len)
            throw ValidationError("chain " + std::to_string(i) + " has mismatched length");
        if (bd_k.cols() == len && bd_k.rows() > 0) {
            auto img = bd_k.apply(chains[i].coeffs);
            if (!std::all_of(img.begin(), img.end(), [](std::uint8_t b) { return !b; }))
                throw ValidationError("chain " + std::to_string(i) + " is not a cycle");
        }
    }
    F2Matrix chain_cols(len, static_cast<int>(chains.size()));
    for (std::size_t i = 0; i < chains.size(); ++i)
        for (int r = 0; r < len; ++r)
            if (chains[i].coeffs[r]) chain_cols.set(r, static_cast<int>(i), true);
    F2Matrix bd = bd_k1;
    if (bd.rows() != len) bd = F2Matrix(len, 0);
    int rank_bd = f2_rank(bd);
    int rank_joint = f2_rank(f2_hstack(chain_cols, bd));
    IndependenceResult res;
    res.class_rank = rank_joint - rank_bd;
    res.independent = res.class_rank == static_cast<int>(chains.size());
    return res;
}

inline IndependenceResult homology_independence(const CubicalComplex& cx,
                                                const std::vector<F2Chain>& chains) {
    if (chains.empty()) return {true, 0};
    int dim = chains[0].dim;
    F2Matrix bd_k = dim >= 1 ? boundary_matrix(cx, dim) : F2Matrix(0, cx.face_count(0));
    if (!cx.complete() && cx.max_dim < dim + 1)
        throw ValidationError("independence test needs the complex built through dimension " +
                              std::to_string(dim + 1));
    F2Matrix bd_k1 = boundary_matrix(cx, dim + 1);
    return homology_independence(bd_k, bd_k1, chains);
}

inline IndependenceResult homology_independence(const CellComplex& cc,
                                                const std::vector<F2Chain>& chains) {
    if (chains.empty()) return {true, 0};
    int dim = chains[0].dim;
    F2Matrix bd_k = dim >= 1 ? cc.boundary(dim) : F2Matrix(0, cc.cell_count(0));
    if (bd_k.rows() == 0 && bd_k.cols() == 0 && dim >= 1)
        bd_k = F2Matrix(cc.cell_count(dim - 1), cc.cell_count(dim));
    F2Matrix bd_k1 = cc.boundary(dim + 1);
    if (bd_k1.rows() == 0 && bd_k1.cols() == 0) bd_k1 = F2Matrix(cc.cell_count(dim), 0);
    return homology_independence(bd_k, bd_k1, chains);
}

/// Betti comparison report for a formula and its reduction.
struct HomologyComparison {
    BettiVector before;
    BettiVector after;
    bool equal = false;
};

/// Compare Betti vectors of Sol(F) and Sol(F') for k in [0, up_to]. Both
/// formulas must fit the enumeration cap.
inline HomologyComparison compare_homology(const CnfFormula& f, const CnfFormula& g, int up_to,
                                           int cap = kDefaultEnumerationCap) {
    HomologyComparison rep;
    rep.before = betti_numbers(build_complex(f, up_to + 1, cap), up_to);
    rep.after = betti_numbers(build_complex(g, up_to + 1, cap), up_to);
    rep.equal = rep.before == rep.after;
    return rep;
}

/// Euler characteristic from face counts (alternating sum).
inline long long euler_characteristic_faces(const CubicalComplex& cx) {
    long long chi = 0;
    for (int k = 0; k < static_cast<int>(cx.faces_by_dim.size()); ++k)
        chi += (k % 2 == 0 ? 1 : -1) * static_cast<long long>(cx.face_count(k));
    return chi;
}

inline long long euler_characteristic_betti(const BettiVector& b) {
    long long chi = 0;
    for (std::size_t k = 0; k < b.betti.size(); ++k)
        chi += (k % 2 == 0 ? 1 : -1) * static_cast<long long>(b.betti[k]);
    return chi;
}

}  // namespace topocube

#endif
