#ifndef TOPOCUBE_QUERYMODEL_HPP
#define TOPOCUBE_QUERYMODEL_HPP

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "topocube/complex.hpp"
#include "topocube/errors.hpp"
#include "topocube/formula.hpp"
#include "topocube/gadgets.hpp"

namespace topocube {

/// Axis-aligned subcube question: "do all assignments in this subcube
/// satisfy F?". free_vars are 1-based; fixed_values covers every other
/// variable (missing entries default to 0).
struct SubcubeQuery {
    std::vector<int> free_vars;
    std::vector<std::pair<int, bool>> fixed_values;
};

/// Counting oracle over a fixed formula. Answers are pure functions of
/// (formula, query); the counter just tallies calls.
class SubcubeOracle {
  public:
    explicit SubcubeOracle(const CnfFormula& f) : f_(f) {}

    bool query(const SubcubeQuery& q) {
        ++count_;
        return subcube_all_satisfying(f_, q);
    }

    long count() const { return count_; }

    static bool subcube_all_satisfying(const CnfFormula& f, const SubcubeQuery& q) {
        std::set<int> free_set;
        for (int v : q.free_vars) {
            if (v < 1 || v > f.num_vars)
                throw ValidationError("query coordinate " + std::to_string(v) + " out of range");
            if (!free_set.insert(v).second)
                throw ValidationError("query repeats coordinate " + std::to_string(v));
        }
        if (free_set.size() > 26) throw CapExceeded("query dimension capped at 26");
        Assignment x(f.num_vars);
        for (auto [v, val] : q.fixed_values) {
            if (v < 1 || v > f.num_vars)
                throw ValidationError("query coordinate " + std::to_string(v) + " out of range");
            if (free_set.count(v))
                throw ValidationError("query fixes free coordinate " + std::to_string(v));
            x.set(v - 1, val);
        }
        std::vector<int> free_list(free_set.begin(), free_set.end());
        const std::uint64_t corners = std::uint64_t{1} << free_list.size();
        for (std::uint64_t c = 0; c < corners; ++c) {
            for (std::size_t i = 0; i < free_list.size(); ++i)
                x.set(free_list[i] - 1, (c >> i) & 1);
            if (!evaluate(f, x)) return false;
        }
        return true;
    }

  private:
    const CnfFormula& f_;
    long count_ = 0;
};

// ---------------------------------------------------------------------------
// Adversary game
// ---------------------------------------------------------------------------

/// A strategy receives only past answers and produces the next query, or
/// nothing to stop. This enforces the information-theoretic access model.
using Strategy = std::function<std::optional<SubcubeQuery>(const std::vector<bool>& answers)>;

struct TranscriptEntry {
    SubcubeQuery query;
    bool answer;
    int removed_gadget;  // -1 when the query covered no active support
};

struct AdversaryOutcome {
    int planted_cycles = 0;
    long queries_issued = 0;
    long distinguishing_queries = 0;
    bool refuted = false;                 // a consistent SAT/UNSAT pair exists
    int witness_gadget = -1;              // the still-active gadget used
    CnfFormula completion_sat;            // cycle filled, satisfiable
    CnfFormula completion_unsat;          // cycle unfilled, unsatisfiable
    bool replay_consistent = false;       // both completions reproduce the transcript
    std::vector<TranscriptEntry> transcript;
};

/// The synthesized instance family: m ring gadgets on disjoint 9-variable
/// blocks plus one planted-solution variable z. Per-gadget "filled" state
/// drops the equality clauses (the local cycle becomes bounded); the planted
/// block carries global satisfiability: (z) in the SAT completion,
/// (z) and (~z) in the UNSAT completion. The game itself needs only the
/// gadget bookkeeping; the z block is the plumbing that lets satisfiability
/// flip while every recorded answer stays literally correct on both
/// completions.
struct AdversaryFamily {
    std::vector<GadgetInstance> gadgets;
    int z_var = 0;
    int num_vars = 0;

    CnfFormula realize(const std::vector<bool>& filled, bool satisfiable) const {
        CnfFormula f;
        f.num_vars = num_vars;
        f.origin = Origin::gadget;
        for (std::size_t i = 0; i < gadgets.size(); ++i) {
            const auto& frag = gadgets[i].fragment.clauses;
            // clauses 0..3 = enable group, 4..7 = equality group
            for (std::size_t ci = 0; ci < frag.size(); ++ci) {
                if (filled[i] && ci >= 4) continue;  // filled: equality dropped
                f.clauses.push_back(frag[ci]);
            }
        }
        f.clauses.push_back(Clause{{z_var}});
        if (!satisfiable) f.clauses.push_back(Clause{{-z_var}});
        return f;
    }
};

inline AdversaryFamily make_adversary_family(int m) {
    if (m < 1) throw ValidationError("need at least one planted cycle");
    AdversaryFamily fam;
    VarAllocator alloc;
    for (int i = 0; i < m; ++i) fam.gadgets.push_back(make_ring_gadget(i, alloc));
    fam.z_var = alloc.fresh();
    fam.num_vars = alloc.used();
    for (auto& g : fam.gadgets) g.fragment.num_vars = fam.num_vars;
    return fam;
}

/// Run the adversary game: maintain the active cycle set; a query whose free
/// coordinates cover an active gadget's support is answered "no" and retires
/// that gadget (one per query, lowest index); covering queries of retired
/// gadgets stay "no" (replay purity); everything else is answered "yes".
/// After the strategy stops with q distinguishing queries:
///   q <  m: refutation succeeds -- a still-active gadget yields a filled/
///           satisfiable and an unfilled/unsatisfiable completion, both
///           replay-consistent with the transcript;
///   q >= m: refutation fails (every cycle was pinned down).
inline AdversaryOutcome adversary_run(const AdversaryFamily& fam, const Strategy& strategy,
                                      long budget) {
    const int m = static_cast<int>(fam.gadgets.size());
    AdversaryOutcome out;
    out.planted_cycles = m;

    std::vector<bool> active(m, true);
    std::vector<bool> answers;
    auto covers = [&](const SubcubeQuery& q, const GadgetInstance& g) {
        std::set<int> fs(q.free_vars.begin(), q.free_vars.end());
        for (int v : g.support)
            if (!fs.count(v)) return false;
        return true;
    };
    while (true) {
        auto next = strategy(answers);
        if (!next) break;
        if (out.queries_issued >= budget)
            throw Error("query budget exhausted after " + std::to_string(budget) + " queries");
        ++out.queries_issued;
        TranscriptEntry entry;
        entry.query = *next;
        entry.removed_gadget = -1;
        bool covered_retired = false;
        for (int i = 0; i < m; ++i) {
            if (covers(*next, fam.gadgets[i])) {
                if (active[i]) {
                    entry.removed_gadget = i;
                    break;
                }
                covered_retired = true;
            }
        }
        if (entry.removed_gadget >= 0) {
            active[entry.removed_gadget] = false;
            ++out.distinguishing_queries;
            entry.answer = false;
        } else {
            entry.answer = !covered_retired;
        }
        answers.push_back(entry.answer);
        out.transcript.push_back(std::move(entry));
    }

    int witness = -1;
    for (int i = 0; i < m; ++i)
        if (active[i]) {
            witness = i;
            break;
        }
    if (witness < 0) {
        out.refuted = false;
        return out;
    }
    out.witness_gadget = witness;
    std::vector<bool> filled_sat(m, false), filled_unsat(m, false);
    filled_sat[witness] = true;  // SAT case: the remaining cycle is filled
    out.completion_sat = fam.realize(filled_sat, true);
    out.completion_unsat = fam.realize(filled_unsat, false);

    // Replay: both completions must reproduce every recorded answer through
    // the honest oracle. Covering queries free the enable bit, so they answer
    // "no" on either completion; "yes" answers need corner checks.
    out.replay_consistent = true;
    for (const auto& e : out.transcript) {
        bool a_sat = SubcubeOracle::subcube_all_satisfying(out.completion_sat, e.query);
        bool a_unsat = SubcubeOracle::subcube_all_satisfying(out.completion_unsat, e.query);
        if (a_sat != e.answer || a_unsat != e.answer) {
            out.replay_consistent = false;
            break;
        }
    }
    out.refuted = out.replay_consistent;
    return out;
}

inline AdversaryOutcome adversary_run(int m, const Strategy& strategy, long budget) {
    AdversaryFamily fam = make_adversary_family(m);
    return adversary_run(fam, strategy, budget);
}

/// The canonical covering probe for gadget g: free its whole support, fix
/// every other variable to the reference satisfying pattern (enable bits 1,
/// z = 1, everything else 0).
inline SubcubeQuery support_probe(const AdversaryFamily& fam, int gadget) {
    SubcubeQuery q;
    const auto& g = fam.gadgets[gadget];
    q.free_vars = g.support;
    for (const auto& other : fam.gadgets) {
        if (other.id == g.id) continue;
        for (int v : other.support) q.fixed_values.emplace_back(v, v == other.enable_var);
    }
    q.fixed_values.emplace_back(fam.z_var, true);
    return q;
}

/// Strategy that probes a fixed sequence of gadget supports, then stops.
inline Strategy probe_sequence_strategy(const AdversaryFamily& fam, const std::vector<int>& order) {
    std::vector<SubcubeQuery> probes;
    probes.reserve(order.size());
    for (int g : order) probes.push_back(support_probe(fam, g));
    return [probes](const std::vector<bool>& answers) -> std::optional<SubcubeQuery> {
        if (answers.size() >= probes.size()) return std::nullopt;
        return probes[answers.size()];
    };
}

inline std::string transcript_jsonl(const AdversaryOutcome& out) {
    std::ostringstream os;
    for (const auto& e : out.transcript) {
        os << "{\"free\":[";
        for (std::size_t i = 0; i < e.query.free_vars.size(); ++i)
            os << (i ? "," : "") << e.query.free_vars[i];
        os << "],\"answer\":" << (e.answer ? "true" : "false")
           << ",\"removed\":" << e.removed_gadget << "}\n";
    }
    return os.str();
}

}  // namespace topocube

#endif
