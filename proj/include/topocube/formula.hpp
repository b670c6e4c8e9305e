#ifndef TOPOCUBE_FORMULA_HPP
#define TOPOCUBE_FORMULA_HPP

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "topocube/bits.hpp"
#include "topocube/errors.hpp"

namespace topocube {

/// A disjunction of literals; positive index = plain variable, negative = negated.
/// Invariants: nonempty, distinct underlying variables (so no tautologies).
struct Clause {
    std::vector<int> literals;

    int width() const { return static_cast<int>(literals.size()); }

    void validate(int num_vars) const {
        if (literals.empty()) throw ValidationError("empty clause");
        std::set<int> vars;
        for (int lit : literals) {
            int v = lit > 0 ? lit : -lit;
            if (v < 1 || v > num_vars)
                throw ValidationError("literal " + std::to_string(lit) + " out of range [1," +
                                      std::to_string(num_vars) + "]");
            if (!vars.insert(v).second)
                throw ValidationError("repeated variable " + std::to_string(v) + " in clause");
        }
    }
};

enum class Origin { parsed, generated, reduced, gadget };

using Assignment = BitVec;

/// CNF formula over variables 1..num_vars.
struct CnfFormula {
    int num_vars = 0;
    std::vector<Clause> clauses;
    Origin origin = Origin::generated;

    void validate() const {
        if (num_vars < 0) throw ValidationError("negative variable count");
        for (const Clause& c : clauses) c.validate(num_vars);
    }

    int num_clauses() const { return static_cast<int>(clauses.size()); }
};

inline bool clause_satisfied(const Clause& c, const Assignment& x) {
    for (int lit : c.literals) {
        int v = (lit > 0 ? lit : -lit) - 1;
        if (x.get(v) == (lit > 0)) return true;
    }
    return false;
}

/// True iff every clause has at least one satisfied literal (vacuously true
/// for the empty formula).
inline bool evaluate(const CnfFormula& f, const Assignment& x) {
    if (x.size() != f.num_vars)
        throw ValidationError("assignment length " + std::to_string(x.size()) +
                              " does not match variable count " + std::to_string(f.num_vars));
    for (const Clause& c : f.clauses)
        if (!clause_satisfied(c, x)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// DIMACS
// ---------------------------------------------------------------------------

inline CnfFormula parse_dimacs(std::istream& in) {
    CnfFormula f;
    f.origin = Origin::parsed;
    bool have_header = false;
    int declared_clauses = 0;
    std::vector<int> current;
    int current_line = 0;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "c") continue;
        if (tok == "p") {
            if (have_header) throw ParseError("duplicate header", line_no);
            std::string fmt;
            if (!(ls >> fmt) || fmt != "cnf") throw ParseError("malformed header: expected 'p cnf'", line_no);
            if (!(ls >> f.num_vars >> declared_clauses) || f.num_vars < 0 || declared_clauses < 0)
                throw ParseError("malformed header: bad counts", line_no);
            have_header = true;
            continue;
        }
        if (!have_header) throw ParseError("malformed header: clause before 'p cnf'", line_no);
        ls.clear();
        ls.str(line);
        int lit;
        while (ls >> lit) {
            if (lit == 0) {
                Clause c{current};
                if (c.literals.empty()) throw ParseError("empty clause", line_no);
                std::set<int> vars;
                for (int l : c.literals) {
                    int v = l > 0 ? l : -l;
                    if (v < 1 || v > f.num_vars)
                        throw ParseError("literal " + std::to_string(l) + " out of range", current_line ? current_line : line_no);
                    if (!vars.insert(v).second)
                        throw ParseError("repeated variable " + std::to_string(v) + " in clause",
                                         current_line ? current_line : line_no);
                }
                f.clauses.push_back(std::move(c));
                current.clear();
                current_line = 0;
            } else {
                if (current.empty()) current_line = line_no;
                current.push_back(lit);
            }
        }
        if (!ls.eof()) throw ParseError("unexpected token in clause data", line_no);
    }
    if (!have_header) throw ParseError("malformed header: missing 'p cnf'", line_no ? line_no : 1);
    if (!current.empty()) throw ParseError("unterminated clause (missing trailing 0)", current_line);
    if (f.num_clauses() != declared_clauses)
        throw ParseError("clause count mismatch: header declares " + std::to_string(declared_clauses) +
                             ", found " + std::to_string(f.num_clauses()),
                         line_no ? line_no : 1);
    return f;
}

inline CnfFormula parse_dimacs(const std::string& text) {
    std::istringstream in(text);
    return parse_dimacs(in);
}

/// Canonical emission; parse(write(F)) round-trips byte-exactly.
inline std::string write_dimacs(const CnfFormula& f) {
    std::ostringstream os;
    os << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
    for (const Clause& c : f.clauses) {
        for (int lit : c.literals) os << lit << ' ';
        os << "0\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Random k-SAT
// ---------------------------------------------------------------------------

/// m clauses, each over k distinct variables chosen uniformly, every literal
/// negated with probability 1/2; clauses sampled with replacement across the
/// formula. Identical (n,m,k,seed) gives identical formulas.
inline CnfFormula random_ksat(int n, int m, int k, std::uint64_t seed) {
    if (k < 1) throw ValidationError("clause width must be positive");
    if (k > n)
        throw ValidationError("width exceeds variable count (k=" + std::to_string(k) +
                              " > n=" + std::to_string(n) + ")");
    Rng rng(seed);
    CnfFormula f;
    f.num_vars = n;
    f.origin = Origin::generated;
    f.clauses.reserve(m);
    std::vector<int> pool(n);
    for (int ci = 0; ci < m; ++ci) {
        for (int i = 0; i < n; ++i) pool[i] = i + 1;
        Clause c;
        c.literals.reserve(k);
        for (int j = 0; j < k; ++j) {
            int pick = j + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - j)));
            std::swap(pool[j], pool[pick]);
            c.literals.push_back(pool[j]);
        }
        std::sort(c.literals.begin(), c.literals.end());
        for (int& lit : c.literals)
            if (rng.coin()) lit = -lit;
        f.clauses.push_back(std::move(c));
    }
    return f;
}

// ---------------------------------------------------------------------------
// Clause splitting (SAT -> 3-SAT)
// ---------------------------------------------------------------------------

/// Per original clause index, the auxiliary variable indices its chain uses.
using AuxMap = std::map<int, std::vector<int>>;

struct SplitResult {
    CnfFormula formula;
    AuxMap aux;
};

/// Standard clause-splitting reduction. Clauses of width <= 3 pass through;
/// a clause (l1 v ... v lm) with m >= 4 becomes the chain
///   (l1 v l2 v a1), (~a1 v l3 v a2), ..., (~a_{m-4} v l_{m-2} v a_{m-3}),
///   (~a_{m-3} v l_{m-1} v lm)
/// with m-3 fresh auxiliaries. Auxiliaries are allocated in one ascending
/// block after the original variables, in clause order, and never shared
/// between chains.
inline SplitResult split_to_3cnf(const CnfFormula& f) {
    SplitResult out;
    out.formula.num_vars = f.num_vars;
    out.formula.origin = Origin::reduced;
    int next_aux = f.num_vars + 1;
    for (int ci = 0; ci < f.num_clauses(); ++ci) {
        const Clause& c = f.clauses[ci];
        int m = c.width();
        if (m <= 3) {
            out.formula.clauses.push_back(c);
            continue;
        }
        int k = m - 3;
        std::vector<int> aux(k);
        for (int j = 0; j < k; ++j) aux[j] = next_aux++;
        out.aux[ci] = aux;
        out.formula.clauses.push_back(Clause{{c.literals[0], c.literals[1], aux[0]}});
        for (int j = 0; j + 1 < k; ++j)
            out.formula.clauses.push_back(Clause{{-aux[j], c.literals[j + 2], aux[j + 1]}});
        out.formula.clauses.push_back(Clause{{-aux[k - 1], c.literals[m - 2], c.literals[m - 1]}});
    }
    out.formula.num_vars = next_aux - 1;
    return out;
}

/// Canonical auxiliary completion for a base assignment: a_j = 1 exactly when
/// none of the first j+1 literals of its chain is already true. When the base
/// assignment satisfies the original formula, the extended assignment
/// satisfies the split formula.
inline Assignment extend_assignment(const CnfFormula& original, const SplitResult& split,
                                    const Assignment& x) {
    Assignment y(split.formula.num_vars);
    for (int i = 0; i < original.num_vars; ++i) y.set(i, x.get(i));
    for (const auto& [ci, aux] : split.aux) {
        const Clause& c = original.clauses[ci];
        bool seen_true = false;
        for (std::size_t j = 0; j < aux.size(); ++j) {
            // aux[j] guards literals l_{j+3}..lm; it must be 1 until a true
            // literal among l1..l_{j+2} discharges the chain.
            for (int t = (j == 0 ? 0 : static_cast<int>(j) + 1); t <= static_cast<int>(j) + 1; ++t) {
                int lit = c.literals[t];
                int v = (lit > 0 ? lit : -lit) - 1;
                if (x.get(v) == (lit > 0)) seen_true = true;
            }
            y.set(aux[j] - 1, !seen_true);
        }
    }
    return y;
}

// ---------------------------------------------------------------------------
// Graph 3-coloring encoding
// ---------------------------------------------------------------------------

/// Simple undirected graph on vertices 0..n-1.
struct SimpleGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // u < v

    void add_edge(int u, int v) {
        if (u == v) throw ValidationError("self loop at vertex " + std::to_string(u));
        if (u > v) std::swap(u, v);
        edges.emplace_back(u, v);
        if (v >= n) n = v + 1;
    }

    std::vector<std::vector<int>> adjacency() const {
        std::vector<std::vector<int>> adj(n);
        for (auto [u, v] : edges) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
        for (auto& row : adj) std::sort(row.begin(), row.end());
        return adj;
    }
};

/// Edge-list format: one "u v" pair per line, 0-indexed; 'c' lines are comments.
inline SimpleGraph parse_edge_list(std::istream& in, int min_vertices = 0) {
    SimpleGraph g;
    g.n = min_vertices;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "c") continue;
        int u, v;
        std::istringstream ls2(line);
        if (!(ls2 >> u >> v) || u < 0 || v < 0) throw ParseError("expected 'u v' edge pair", line_no);
        if (u == v) throw ParseError("self loop at vertex " + std::to_string(u), line_no);
        g.add_edge(u, v);
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

/// (vertex, color) -> variable index; colors are 1..3.
struct VarMap {
    std::map<std::pair<int, int>, int> index;

    int at(int v, int c) const { return index.at({v, c}); }
};

struct ThreeColorResult {
    CnfFormula formula;
    VarMap vars;
};

/// Vertex coloring: per vertex one at-least-one clause and three at-most-one
/// binary clauses (4|V| total); per edge and color one exclusion clause (3|E|).
inline ThreeColorResult encode_three_color(const SimpleGraph& g) {
    ThreeColorResult out;
    out.formula.num_vars = 3 * g.n;
    out.formula.origin = Origin::reduced;
    auto var = [&](int v, int c) { return 3 * v + c; };  // c in 1..3 -> 1-based index
    for (int v = 0; v < g.n; ++v)
        for (int c = 1; c <= 3; ++c) out.vars.index[{v, c}] = var(v, c);
    for (int v = 0; v < g.n; ++v) {
        out.formula.clauses.push_back(Clause{{var(v, 1), var(v, 2), var(v, 3)}});
        out.formula.clauses.push_back(Clause{{-var(v, 1), -var(v, 2)}});
        out.formula.clauses.push_back(Clause{{-var(v, 1), -var(v, 3)}});
        out.formula.clauses.push_back(Clause{{-var(v, 2), -var(v, 3)}});
    }
    for (auto [u, v] : g.edges) {
        if (u == v) throw ValidationError("self loop at vertex " + std::to_string(u));
        for (int c = 1; c <= 3; ++c)
            out.formula.clauses.push_back(Clause{{-var(u, c), -var(v, c)}});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Auxiliary localization (variable duplication)
// ---------------------------------------------------------------------------

/// For each base variable occurring in clauses of more than one gadget,
/// substitute a fresh per-gadget copy inside every gadget that uses it and
/// append the equality clauses (x v ~x') and (~x v x'). The projected
/// solution set on the original variables is preserved exactly.
inline CnfFormula localize_auxiliaries(const CnfFormula& f, const std::map<int, int>& gadget_of_clause) {
    for (int ci = 0; ci < f.num_clauses(); ++ci)
        if (!gadget_of_clause.count(ci))
            throw ValidationError("partition does not cover clause " + std::to_string(ci));

    // Gadget ids touching each variable, in first-seen clause order.
    std::map<int, std::vector<int>> gadgets_of_var;
    for (int ci = 0; ci < f.num_clauses(); ++ci) {
        int g = gadget_of_clause.at(ci);
        for (int lit : f.clauses[ci].literals) {
            int v = lit > 0 ? lit : -lit;
            auto& lst = gadgets_of_var[v];
            if (std::find(lst.begin(), lst.end(), g) == lst.end()) lst.push_back(g);
        }
    }

    CnfFormula out;
    out.num_vars = f.num_vars;
    out.origin = Origin::reduced;
    int next_copy = f.num_vars + 1;
    // copy_of[(v, g)] = fresh index of v's copy inside gadget g
    std::map<std::pair<int, int>, int> copy_of;
    for (auto& [v, glist] : gadgets_of_var) {
        if (glist.size() < 2) continue;
        std::vector<int> sorted = glist;
        std::sort(sorted.begin(), sorted.end());
        for (int g : sorted) copy_of[{v, g}] = next_copy++;
    }
    out.num_vars = next_copy - 1;
    for (int ci = 0; ci < f.num_clauses(); ++ci) {
        int g = gadget_of_clause.at(ci);
        Clause c = f.clauses[ci];
        for (int& lit : c.literals) {
            int v = lit > 0 ? lit : -lit;
            auto it = copy_of.find({v, g});
            if (it != copy_of.end()) lit = lit > 0 ? it->second : -it->second;
        }
        out.clauses.push_back(std::move(c));
    }
    for (auto& [key, copy] : copy_of) {
        int v = key.first;
        out.clauses.push_back(Clause{{v, -copy}});
        out.clauses.push_back(Clause{{-v, copy}});
    }
    return out;
}

/// Pad width-1 and width-2 clauses up to width 3 with fresh selector pairs;
/// clauses already at width 3 (or longer) are untouched.
inline CnfFormula pad_to_width3(const CnfFormula& f) {
    CnfFormula out;
    out.num_vars = f.num_vars;
    out.origin = Origin::reduced;
    int next = f.num_vars + 1;
    for (const Clause& c : f.clauses) {
        if (c.width() >= 3) {
            out.clauses.push_back(c);
        } else if (c.width() == 2) {
            int p = next++;
            out.clauses.push_back(Clause{{c.literals[0], c.literals[1], p}});
            out.clauses.push_back(Clause{{c.literals[0], c.literals[1], -p}});
        } else {
            int p = next++, q = next++;
            out.clauses.push_back(Clause{{c.literals[0], p, q}});
            out.clauses.push_back(Clause{{c.literals[0], p, -q}});
            out.clauses.push_back(Clause{{c.literals[0], -p, q}});
            out.clauses.push_back(Clause{{c.literals[0], -p, -q}});
        }
    }
    out.num_vars = next - 1;
    return out;
}

}  // namespace topocube

#endif
