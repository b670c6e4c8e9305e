#ifndef TOPOCUBE_GADGETS_HPP
#define TOPOCUBE_GADGETS_HPP

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "topocube/complex.hpp"
#include "topocube/errors.hpp"
#include "topocube/formula.hpp"
#include "topocube/graph.hpp"
#include "topocube/homology.hpp"

namespace topocube {

/// Hands out fresh 1-based variable indices.
class VarAllocator {
  public:
    explicit VarAllocator(int already_used = 0) : next_(already_used + 1) {}
    int fresh() { return next_++; }
    int used() const { return next_ - 1; }

  private:
    int next_;
};

enum class GadgetKind { gadget_b, ring, xor_cycle };

inline const char* to_string(GadgetKind k) {
    switch (k) {
        case GadgetKind::gadget_b: return "gadget_b";
        case GadgetKind::ring: return "ring";
        default: return "xor_cycle";
    }
}

/// One constructed gadget: its clauses, the variables it owns, the designated
/// chain certifying its homology contribution, and the local cell complex the
/// chain lives in. For gadget_b the local complex is the literal cubical
/// projection (a hexagon); for ring/xor_cycle gadgets it is the square-ring
/// cell structure with the fixed incidence pattern, since those squares are
/// cells of the gadget's chain model rather than subcubes of the ambient
/// solution complex.
struct GadgetInstance {
    GadgetKind kind = GadgetKind::ring;
    int id = 0;
    CnfFormula fragment;              // clauses over the full variable space
    std::vector<int> support;         // variables owned by this gadget (1-based)
    std::vector<int> cycle_support;   // variables the designated cycle varies
    CellComplex local_complex;
    F2Chain canonical_cycle;          // chain in local_complex
    std::vector<std::string> cell_labels;  // labels of top cells, for reports
    int enable_var = 0;               // ring gadgets: the b bit; 0 otherwise
};

// ---------------------------------------------------------------------------
// Gadget B: 3 variables, 2 clauses, local hexagon 1-cycle
// ---------------------------------------------------------------------------

inline GadgetInstance make_gadget_b(int id, VarAllocator& alloc, int total_vars_hint = 0) {
    GadgetInstance g;
    g.kind = GadgetKind::gadget_b;
    g.id = id;
    int u = alloc.fresh(), v = alloc.fresh(), w = alloc.fresh();
    g.support = {u, v, w};
    g.cycle_support = {u, v, w};
    g.fragment.num_vars = std::max(total_vars_hint, alloc.used());
    g.fragment.origin = Origin::gadget;
    g.fragment.clauses.push_back(Clause{{u, v, w}});
    g.fragment.clauses.push_back(Clause{{-u, -v, -w}});

    // Local complex: the projection to {u,v,w} is the 3-cube minus two
    // antipodal vertices, a hexagon. Its six edges form the canonical cycle.
    CnfFormula local;
    local.num_vars = 3;
    local.clauses.push_back(Clause{{1, 2, 3}});
    local.clauses.push_back(Clause{{-1, -2, -3}});
    CubicalComplex cx = build_complex(local, 2);
    g.local_complex = chain_complex(cx, 2);
    g.canonical_cycle = F2Chain{1, std::vector<std::uint8_t>(cx.face_count(1), 1)};
    for (const Face& e : cx.faces_by_dim[1]) {
        std::ostringstream os;
        os << "edge free=" << e.free_coords()[0] << " fixed=0x" << std::hex << e.fixed_bits;
        g.cell_labels.push_back(os.str());
    }
    return g;
}

// ---------------------------------------------------------------------------
// Ring gadget: 9 variables, 8 clauses, 4-square ring with the 8x4 incidence
// ---------------------------------------------------------------------------

/// The fixed 8x4 incidence of the four ring squares against the eight
/// y-edges: square j is incident to edge pair {2j-1, 2j} and the cyclically
/// next pair. Rank 3, nullity 1; the all-ones column combination vanishes.
inline F2Matrix ring_boundary_matrix() {
    // sigma_1 meets e1..e4, sigma_2 meets e3..e6, sigma_3 meets e5..e8,
    // sigma_4 meets e7,e8,e1,e2.
    F2Matrix m(8, 4);
    for (int j = 0; j < 4; ++j) {
        int own_pair = 2 * j;
        int next_pair = 2 * ((j + 1) % 4);
        m.set(own_pair, j, true);
        m.set(own_pair + 1, j, true);
        m.set(next_pair, j, true);
        m.set(next_pair + 1, j, true);
    }
    return m;
}

/// Cell structure of the square ring: 4 vertices, 8 edges (two parallel edges
/// between consecutive vertices), 4 squares, no 3-cells. This is the chain
/// complex in which the canonical 2-cycle sigma_1+...+sigma_4 is certified.
inline CellComplex ring_cell_complex() {
    CellComplex cc;
    cc.cells = {4, 8, 4};
    cc.boundaries.resize(3);
    F2Matrix d1(4, 8);
    for (int j = 0; j < 4; ++j) {
        // edges e_{2j+1}, e_{2j+2} both join vertex j to vertex j+1 (mod 4)
        d1.set(j, 2 * j, true);
        d1.set((j + 1) % 4, 2 * j, true);
        d1.set(j, 2 * j + 1, true);
        d1.set((j + 1) % 4, 2 * j + 1, true);
    }
    cc.boundaries[1] = d1;
    cc.boundaries[2] = ring_boundary_matrix();
    return cc;
}

/// The concrete 9-variable gadget: four enable clauses on (b, y1, u) and four
/// clauses encoding u = v through the auxiliary bits a and c. b = 0 disables
/// the square structure (the enable group becomes unsatisfiable).
inline GadgetInstance make_ring_gadget(int id, VarAllocator& alloc, int total_vars_hint = 0) {
    GadgetInstance g;
    g.kind = GadgetKind::ring;
    g.id = id;
    int y1 = alloc.fresh(), y2 = alloc.fresh(), y3 = alloc.fresh(), y4 = alloc.fresh();
    int u = alloc.fresh(), v = alloc.fresh();
    int b = alloc.fresh(), a = alloc.fresh(), c = alloc.fresh();
    g.support = {y1, y2, y3, y4, u, v, b, a, c};
    g.cycle_support = {y1, y2, y3, y4, u, v};
    g.enable_var = b;
    g.fragment.num_vars = std::max(total_vars_hint, alloc.used());
    g.fragment.origin = Origin::gadget;
    auto add = [&](std::vector<int> lits) { g.fragment.clauses.push_back(Clause{std::move(lits)}); };
    add({b, y1, u});
    add({b, -y1, u});
    add({b, y1, -u});
    add({b, -y1, -u});
    add({u, -v, a});
    add({u, -v, -a});
    add({-u, v, c});
    add({-u, v, -c});

    g.local_complex = ring_cell_complex();
    g.canonical_cycle = F2Chain{2, {1, 1, 1, 1}};
    g.cell_labels = {"sigma_1 (y1,u)", "sigma_2 (y2,u)", "sigma_3 (y3,u)", "sigma_4 (y4,u)"};
    return g;
}

/// Length-L generalization used for the cycles of an expander embedding: L
/// squares, 2L y-edges, consecutive squares sharing an edge pair. Rank L-1,
/// nullity 1 for L >= 2.
inline CellComplex cycle_ring_cell_complex(int length) {
    CellComplex cc;
    cc.cells = {length, 2 * length, length};
    cc.boundaries.resize(3);
    F2Matrix d1(length, 2 * length), d2(2 * length, length);
    for (int j = 0; j < length; ++j) {
        d1.set(j, 2 * j, true);
        d1.set((j + 1) % length, 2 * j, true);
        d1.set(j, 2 * j + 1, true);
        d1.set((j + 1) % length, 2 * j + 1, true);
        int prev_pair = 2 * j;
        int next_pair = 2 * ((j + 1) % length);
        d2.set(prev_pair, j, true);
        d2.set(prev_pair + 1, j, true);
        d2.set(next_pair, j, true);
        d2.set(next_pair + 1, j, true);
    }
    cc.boundaries[1] = d1;
    cc.boundaries[2] = d2;
    return cc;
}

// ---------------------------------------------------------------------------
// Corner table
// ---------------------------------------------------------------------------

struct CornerRow {
    int bits[3];
    bool equality_holds;       // second and third coordinate agree
    bool all_clauses_satisfied;
};

struct CornerTable {
    int triple[3];             // 1-based variable indices
    std::vector<CornerRow> rows;  // exactly 8, bit patterns 000..111 in order

    /// 1-based indices of satisfying rows, e.g. {1,4,5,8}.
    std::vector<int> satisfying_rows() const {
        std::vector<int> out;
        for (int i = 0; i < 8; ++i)
            if (rows[i].all_clauses_satisfied) out.push_back(i + 1);
        return out;
    }
};

/// Partial assignment as (assigned mask, values).
struct PartialAssignment {
    Assignment values;
    std::vector<char> assigned;

    explicit PartialAssignment(int n) : values(n), assigned(n, 0) {}
    void assign(int var, bool val) {
        values.set(var - 1, val);
        assigned[var - 1] = 1;
    }
    bool is_assigned(int var) const { return assigned[var - 1]; }
};

/// Evaluate the formula on all 8 corners of the 3-cube spanned by `triple`,
/// holding every other variable at its context value (unassigned context
/// variables default to 0). Mirrors the 8-corner check that rules out 3-cube
/// fillers.
inline CornerTable corner_table(const CnfFormula& f, const std::array<int, 3>& triple,
                                const PartialAssignment& context) {
    for (int t : triple) {
        if (t < 1 || t > f.num_vars)
            throw ValidationError("triple coordinate " + std::to_string(t) + " out of range");
        if (context.is_assigned(t))
            throw ValidationError("triple coordinate " + std::to_string(t) +
                                  " is already assigned in the context");
    }
    CornerTable table;
    for (int i = 0; i < 3; ++i) table.triple[i] = triple[i];
    Assignment x = context.values;
    for (int pattern = 0; pattern < 8; ++pattern) {
        CornerRow row{};
        for (int i = 0; i < 3; ++i) {
            row.bits[i] = (pattern >> (2 - i)) & 1;
            x.set(triple[i] - 1, row.bits[i]);
        }
        row.equality_holds = row.bits[1] == row.bits[2];
        row.all_clauses_satisfied = evaluate(f, x);
        table.rows.push_back(row);
    }
    return table;
}

// ---------------------------------------------------------------------------
// Expander cycle embedding
// ---------------------------------------------------------------------------

struct ExpanderEmbedding {
    CnfFormula formula;
    VarMap color_vars;
    std::vector<GadgetInstance> gadgets;
    GraphStats stats;
    // per-cycle clause group sizes, for count audits
    int group1_clauses = 0;  // vertex coloring
    int group2_clauses = 0;  // edge constraints
    int group3_clauses = 0;  // xor gadgets
    int group4_clauses = 0;  // edge coupling
};

/// 3-COLOR encoding plus, per fundamental cycle C_i, parity variables u_i,v_i
/// with XOR clauses and edge selectors y_e^(i) with coupling clauses. The
/// coupling group has 2 + 3|C_i| clauses per cycle: the two 2-literal clauses
/// attach to the cycle's defining non-tree edge, and each cycle edge carries
/// three selector/color exclusions. Variable count: 3|V| + 2B + sum |C_i|.
inline ExpanderEmbedding expander_embed(const SimpleGraph& g) {
    if (!is_connected(g)) throw ValidationError("graph is disconnected");
    ExpanderEmbedding out;
    out.stats = graph_stats(g);
    ThreeColorResult color = encode_three_color(g);
    out.color_vars = color.vars;
    out.formula = color.formula;
    out.formula.origin = Origin::reduced;
    out.group1_clauses = 4 * g.n;
    out.group2_clauses = 3 * static_cast<int>(g.edges.size());

    auto cycles = fundamental_cycle_basis(g);
    VarAllocator alloc(out.formula.num_vars);

    // Allocate all gadget variables first so the clause groups stay contiguous.
    struct CycleVars {
        int u, v;
        std::vector<int> y;  // aligned with the cycle's edge list
    };
    std::vector<CycleVars> cv(cycles.size());
    for (std::size_t i = 0; i < cycles.size(); ++i) {
        cv[i].u = alloc.fresh();
        cv[i].v = alloc.fresh();
        for (std::size_t e = 0; e < cycles[i].size(); ++e) cv[i].y.push_back(alloc.fresh());
    }
    out.formula.num_vars = alloc.used();

    for (std::size_t i = 0; i < cycles.size(); ++i) {
        out.formula.clauses.push_back(Clause{{cv[i].u, -cv[i].v}});
        out.formula.clauses.push_back(Clause{{-cv[i].u, cv[i].v}});
        out.group3_clauses += 2;
    }
    for (std::size_t i = 0; i < cycles.size(); ++i) {
        // coupling to the defining non-tree edge (the first edge of the cycle)
        out.formula.clauses.push_back(Clause{{cv[i].y[0], -cv[i].u}});
        out.formula.clauses.push_back(Clause{{cv[i].y[0], -cv[i].v}});
        out.group4_clauses += 2;
        for (std::size_t e = 0; e < cycles[i].size(); ++e) {
            auto [a, b] = cycles[i][e];
            for (int c = 1; c <= 3; ++c) {
                out.formula.clauses.push_back(
                    Clause{{-cv[i].y[e], -color.vars.at(a, c), -color.vars.at(b, c)}});
                ++out.group4_clauses;
            }
        }
    }

    for (std::size_t i = 0; i < cycles.size(); ++i) {
        GadgetInstance inst;
        inst.kind = GadgetKind::xor_cycle;
        inst.id = static_cast<int>(i);
        inst.support = {cv[i].u, cv[i].v};
        inst.support.insert(inst.support.end(), cv[i].y.begin(), cv[i].y.end());
        std::sort(inst.support.begin(), inst.support.end());
        inst.cycle_support = inst.support;
        inst.fragment.num_vars = out.formula.num_vars;
        inst.fragment.origin = Origin::gadget;
        inst.fragment.clauses.push_back(Clause{{cv[i].u, -cv[i].v}});
        inst.fragment.clauses.push_back(Clause{{-cv[i].u, cv[i].v}});
        inst.fragment.clauses.push_back(Clause{{cv[i].y[0], -cv[i].u}});
        inst.fragment.clauses.push_back(Clause{{cv[i].y[0], -cv[i].v}});
        int len = static_cast<int>(cycles[i].size());
        inst.local_complex = cycle_ring_cell_complex(len);
        inst.canonical_cycle = F2Chain{2, std::vector<std::uint8_t>(len, 1)};
        for (int e = 0; e < len; ++e) {
            std::ostringstream os;
            os << "sigma_" << (e + 1) << " (y_e" << (e + 1) << ",u_" << i << ")";
            inst.cell_labels.push_back(os.str());
        }
        out.gadgets.push_back(std::move(inst));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Gadget family certification
// ---------------------------------------------------------------------------

struct GadgetCertificate {
    int gadget_id = 0;
    std::string kind;
    bool cycle_ok = false;          // designated chain is a cycle
    bool nonbounding_ok = false;    // not a boundary in the gadget-local complex
    bool corner_check_ok = false;   // no 3-cube filler survives the corner scan
    int local_rank = 0;             // rank of the local top boundary matrix
    int local_nullity = 0;
    std::vector<std::string> witness_cells;  // cells of the certified chain
};

struct CertificateReport {
    std::vector<GadgetCertificate> per_gadget;
    bool supports_disjoint = false;
    bool independence_ok = false;
    int independence_rank = 0;
    int family_beta_top = 0;        // Betti of the certified degree on the family complex
    int cycle_dim = 0;
    std::string mode;               // "family-complex" or "full-complex"
    bool all_ok = false;
};

/// Direct sum of the gadgets' local complexes; beta_k of this complex is the
/// block-diagonal count the certification works on.
inline CellComplex family_complex(const std::vector<GadgetInstance>& gadgets) {
    CellComplex cc;
    bool first = true;
    for (const auto& g : gadgets) {
        cc = first ? g.local_complex : cc.direct_sum(g.local_complex);
        first = false;
    }
    return cc;
}

/// Lift each gadget's canonical cycle into the family complex (block offsets).
/// All gadgets must certify in the same degree.
inline std::vector<F2Chain> family_cycles(const std::vector<GadgetInstance>& gadgets) {
    std::vector<F2Chain> chains;
    if (gadgets.empty()) return chains;
    int dim = gadgets[0].canonical_cycle.dim;
    for (const auto& g : gadgets)
        if (g.canonical_cycle.dim != dim)
            throw ValidationError("gadget family mixes cycle dimensions " + std::to_string(dim) +
                                  " and " + std::to_string(g.canonical_cycle.dim));
    int total = 0;
    for (const auto& g : gadgets) total += g.local_complex.cell_count(dim);
    int offset = 0;
    for (const auto& g : gadgets) {
        F2Chain c{dim, std::vector<std::uint8_t>(total, 0)};
        for (std::size_t i = 0; i < g.canonical_cycle.coeffs.size(); ++i)
            c.coeffs[offset + i] = g.canonical_cycle.coeffs[i];
        chains.push_back(std::move(c));
        offset += g.local_complex.cell_count(dim);
    }
    return chains;
}

/// Scan for 3-cube fillers: for each square of the ring (pair y_j, u) and each
/// other gadget variable w, the 8 corners of the (y_j, u, w) cube must not all
/// satisfy the fragment while the equality clauses are active. Context fixes
/// b = 1 and every remaining gadget variable to 0.
inline bool ring_corner_scan(const GadgetInstance& g) {
    if (g.kind == GadgetKind::gadget_b) {
        // the local projection has no 2-faces at all; nothing to scan
        return true;
    }
    std::vector<int> ys(g.support.begin(), g.support.end() - 5);  // y block comes first
    int u = g.support[g.support.size() - 5];
    // ring support order: y1..y4, u, v, b, a, c ; xor_cycle: u, v, y... sorted
    if (g.kind == GadgetKind::xor_cycle) {
        u = g.support[0];
        ys.assign(g.support.begin() + 2, g.support.end());
    }
    for (int y : ys) {
        for (int w : g.support) {
            if (w == y || w == u) continue;
            PartialAssignment ctx(g.fragment.num_vars);
            for (int s : g.support)
                if (s != y && s != u && s != w) ctx.assign(s, s == g.enable_var);
            CornerTable t = corner_table(g.fragment, {y, u, w}, ctx);
            if (t.satisfying_rows().size() == 8) return false;
        }
    }
    return true;
}

/// Machine-check the topological claims of a gadget family: per-gadget cycle
/// and non-bounding certificates in the gadget-local complexes, pairwise
/// support disjointness, and joint homological independence on the family
/// complex (the direct sum of the local complexes).
inline CertificateReport verify_gadget_family(const std::vector<GadgetInstance>& gadgets) {
    CertificateReport rep;
    if (gadgets.empty()) {
        rep.supports_disjoint = true;
        rep.independence_ok = true;
        rep.all_ok = true;
        rep.mode = "family-complex";
        return rep;
    }
    std::map<int, int> owner;
    for (const auto& g : gadgets)
        for (int v : g.support) {
            auto [it, fresh] = owner.emplace(v, g.id);
            if (!fresh)
                throw ValidationError("overlapping supports: variable " + std::to_string(v) +
                                      " appears in gadgets " + std::to_string(it->second) + " and " +
                                      std::to_string(g.id));
        }
    rep.supports_disjoint = true;

    for (const auto& g : gadgets) {
        GadgetCertificate cert;
        cert.gadget_id = g.id;
        cert.kind = to_string(g.kind);
        ChainClass cls = classify_chain(g.local_complex, g.canonical_cycle);
        cert.cycle_ok = cls.is_cycle;
        cert.nonbounding_ok = !cls.is_boundary;
        cert.corner_check_ok = ring_corner_scan(g);
        int top = g.canonical_cycle.dim;
        cert.local_rank = f2_rank(g.local_complex.boundary(top));
        cert.local_nullity = g.local_complex.cell_count(top) - cert.local_rank;
        for (std::size_t i = 0; i < g.canonical_cycle.coeffs.size(); ++i)
            if (g.canonical_cycle.coeffs[i] && i < g.cell_labels.size())
                cert.witness_cells.push_back(g.cell_labels[i]);
        rep.per_gadget.push_back(cert);
    }

    rep.cycle_dim = gadgets[0].canonical_cycle.dim;
    CellComplex fam = family_complex(gadgets);
    auto chains = family_cycles(gadgets);
    IndependenceResult ind = homology_independence(fam, chains);
    rep.independence_ok = ind.independent;
    rep.independence_rank = ind.class_rank;
    rep.family_beta_top = betti_numbers(fam, rep.cycle_dim)[rep.cycle_dim];
    rep.mode = "family-complex";

    rep.all_ok = rep.supports_disjoint && rep.independence_ok;
    for (const auto& c : rep.per_gadget)
        rep.all_ok = rep.all_ok && c.cycle_ok && c.nonbounding_ok && c.corner_check_ok;
    return rep;
}

/// Conjunction of the gadget fragments over a shared variable space.
inline CnfFormula combine_gadgets(const std::vector<GadgetInstance>& gadgets, int num_vars) {
    CnfFormula f;
    f.num_vars = num_vars;
    f.origin = Origin::gadget;
    for (const auto& g : gadgets)
        for (const Clause& c : g.fragment.clauses) f.clauses.push_back(c);
    return f;
}

}  // namespace topocube

#endif
