// topocube: command-line front end for the cubical SAT-topology toolkit.
// One subcommand per module; all randomness is seeded and every report embeds
// tool version, seed, and an input digest so runs are reproducible bit for bit.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "topocube/complex.hpp"
#include "topocube/errors.hpp"
#include "topocube/formula.hpp"
#include "topocube/gadgets.hpp"
#include "topocube/graph.hpp"
#include "topocube/homology.hpp"
#include "topocube/querymodel.hpp"
#include "topocube/randomlab.hpp"
#include "topocube/spectral.hpp"
#include "topocube/version.hpp"

using json = nlohmann::json;
using namespace topocube;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open input file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_output(const std::string& path, const std::string& data) {
    if (path.empty() || path == "-") {
        std::cout << data;
        if (data.empty() || data.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file: " + path);
    out << data;
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

json provenance(std::uint64_t seed, const std::string& input_bytes) {
    return json{{"tool", "topocube"},
                {"version", TOPOCUBE_VERSION},
                {"seed", seed},
                {"input_digest", input_bytes.empty() ? "none" : fnv1a_hex(input_bytes)}};
}

json betti_json(const BettiVector& b) { return json(b.betti); }

json barcode_json(const std::vector<Barcode>& barcodes) {
    json out = json::array();
    for (const auto& bc : barcodes) {
        json intervals = json::array();
        for (const auto& iv : bc.intervals) {
            json pair = json::array();
            pair.push_back(iv.birth);
            if (iv.death)
                pair.push_back(*iv.death);
            else
                pair.push_back(nullptr);
            intervals.push_back(pair);
        }
        out.push_back(json{{"dim", bc.dim}, {"intervals", intervals}});
    }
    return out;
}

json certificate_json(const CertificateReport& rep) {
    json per = json::array();
    for (const auto& c : rep.per_gadget)
        per.push_back(json{{"gadget", c.gadget_id},
                           {"kind", c.kind},
                           {"cycle", c.cycle_ok},
                           {"nonbounding", c.nonbounding_ok},
                           {"corner_check", c.corner_check_ok},
                           {"rank", c.local_rank},
                           {"nullity", c.local_nullity},
                           {"witness_cells", c.witness_cells}});
    return json{{"per_gadget", per},
                {"supports_disjoint", rep.supports_disjoint},
                {"independence", rep.independence_ok},
                {"independence_rank", rep.independence_rank},
                {"family_betti", rep.family_beta_top},
                {"cycle_dim", rep.cycle_dim},
                {"mode", rep.mode},
                {"pass", rep.all_ok}};
}

json spectral_json(const SpectralReport& rep, bool cheeger_available) {
    json j{{"lambda1_combinatorial", rep.lambda1_combinatorial},
           {"lambda1_normalized", rep.lambda1_normalized},
           {"kernel_dim", rep.kernel_dim},
           {"ground_state_degeneracy", rep.ground_state_degeneracy}};
    if (cheeger_available) {
        j["cheeger_value"] = rep.cheeger_value;
        j["cheeger_method"] = rep.cheeger_method;
        json w = json::array();
        for (auto x : rep.cheeger_witness) w.push_back(x);
        j["cheeger_witness"] = w;
    } else {
        j["cheeger_value"] = nullptr;
        j["cheeger_method"] = "unavailable";
    }
    return j;
}

struct CommonOpts {
    std::string out;
    std::uint64_t seed = 0;
    int cap = kDefaultEnumerationCap;
    int threads = 1;
};

int run(int argc, char** argv) {
    CLI::App app{"cubical solution-space topology toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    CommonOpts common;
    app.add_option("--out", common.out, "output path (default stdout)");
    app.add_option("--seed", common.seed, "seed for randomized subcommands");
    app.add_option("--cap", common.cap, "solution enumeration cap (variables)");
    app.add_option("--threads", common.threads, "worker threads for trial loops");

    // homology
    auto* cmd_hom = app.add_subcommand("homology", "Betti numbers of a formula's solution complex");
    std::string hom_cnf;
    int hom_maxdim = 2;
    cmd_hom->add_option("--cnf", hom_cnf, "DIMACS input")->required();
    cmd_hom->add_option("--max-dim", hom_maxdim, "top homology degree");

    // complex
    auto* cmd_cx = app.add_subcommand("complex", "materialize the cubical solution complex");
    std::string cx_cnf;
    int cx_maxdim = 2;
    bool cx_components = false;
    cmd_cx->add_option("--cnf", cx_cnf, "DIMACS input")->required();
    cmd_cx->add_option("--max-dim", cx_maxdim, "largest face dimension to generate");
    cmd_cx->add_flag("--components", cx_components, "include cluster partition");

    // reduce
    auto* cmd_red = app.add_subcommand("reduce", "clause-splitting reduction to 3-CNF");
    std::string red_cnf, red_out_cnf;
    bool red_compare = false, red_strict3 = false;
    cmd_red->add_option("--cnf", red_cnf, "DIMACS input")->required();
    cmd_red->add_option("--out-cnf", red_out_cnf, "write the reduced formula here");
    cmd_red->add_flag("--compare", red_compare, "compare Betti numbers before/after");
    cmd_red->add_flag("--strict3", red_strict3, "pad width-1/2 clauses to pure 3-CNF");

    // gadget
    auto* cmd_gad = app.add_subcommand("gadget", "construct and certify gadget families");
    std::string gad_kind = "ring";
    int gad_count = 1;
    bool gad_verify = false;
    std::string gad_out_cnf;
    bool gad_dump_matrix = false;
    cmd_gad->add_option("kind", gad_kind, "ring | b")->check(CLI::IsMember({"ring", "b"}));
    cmd_gad->add_option("--count", gad_count, "number of disjoint gadget copies");
    cmd_gad->add_flag("--verify", gad_verify, "emit the certification report");
    cmd_gad->add_flag("--dump-matrix", gad_dump_matrix, "include the local boundary matrix dump");
    cmd_gad->add_option("--out-cnf", gad_out_cnf, "write the combined formula here");

    // expander
    auto* cmd_exp = app.add_subcommand("expander", "3-COLOR + cycle gadget embedding");
    std::string exp_graph, exp_out_cnf;
    bool exp_strict3 = false, exp_verify = false;
    cmd_exp->add_option("--graph", exp_graph, "edge list input (u v per line)")->required();
    cmd_exp->add_option("--out-cnf", exp_out_cnf, "write the embedded formula here");
    cmd_exp->add_flag("--strict3", exp_strict3, "split/pad the output to pure 3-CNF");
    cmd_exp->add_flag("--verify", exp_verify, "certify the cycle gadget family");

    // randomlab
    auto* cmd_rl = app.add_subcommand("randomlab", "random 3-SAT statistics and sampling");
    cmd_rl->require_subcommand(1);
    auto* rl_phi = cmd_rl->add_subcommand("phi", "threshold function and its root");
    double phi_alpha = 0.0, phi_gamma = 0.0;
    bool phi_want_root = false;
    rl_phi->add_option("--alpha", phi_alpha, "clause density")->required();
    rl_phi->add_option("--gamma", phi_gamma, "face-density ratio");
    rl_phi->add_flag("--root", phi_want_root, "bisect for the smallest root in (0,1)");

    auto* rl_faces = cmd_rl->add_subcommand("faces", "survival probability and expected counts");
    int rf_n = 10, rf_k = 0, rf_m = 0;
    rl_faces->add_option("--n", rf_n, "variables")->required();
    rl_faces->add_option("--k", rf_k, "face dimension");
    rl_faces->add_option("--m", rf_m, "clauses");

    auto* rl_mc = cmd_rl->add_subcommand("mc", "Monte-Carlo face survival");
    int mc_n = 10, mc_k = 0;
    double mc_alpha = 1.0;
    long mc_trials = 1000;
    bool mc_fixed = false;
    rl_mc->add_option("--n", mc_n, "variables")->required();
    rl_mc->add_option("--k", mc_k, "face dimension");
    rl_mc->add_option("--alpha", mc_alpha, "clause density (m = round(alpha n))");
    rl_mc->add_option("--trials", mc_trials, "trials");
    rl_mc->add_flag("--fixed", mc_fixed, "fixed-face variant (any n)");

    auto* rl_sample = cmd_rl->add_subcommand("sample", "WalkSAT solution sampling");
    std::string smp_cnf;
    int smp_count = 100;
    long smp_burn = 0;
    rl_sample->add_option("--cnf", smp_cnf, "DIMACS input")->required();
    rl_sample->add_option("--count", smp_count, "samples to record");
    rl_sample->add_option("--burn-in", smp_burn, "chain steps before recording");

    auto* rl_vr = cmd_rl->add_subcommand("vr", "Vietoris-Rips persistence of a sample");
    std::string vr_cnf;
    int vr_count = 50, vr_maxdim = 2;
    long vr_burn = 0;
    bool vr_paper_eps = false;
    std::vector<double> vr_grid{1, 2, 3, 4};
    rl_vr->add_option("--cnf", vr_cnf, "DIMACS input")->required();
    rl_vr->add_option("--count", vr_count, "sample size");
    rl_vr->add_option("--burn-in", vr_burn, "chain steps before recording");
    rl_vr->add_option("--eps-grid", vr_grid, "filtration scales");
    rl_vr->add_flag("--paper-eps", vr_paper_eps,
                    "use the single scale 3 ln(n)/n instead of the grid");
    rl_vr->add_option("--max-dim", vr_maxdim, "top barcode dimension");

    auto* rl_sweep = cmd_rl->add_subcommand("sweep", "clause-density shattering sweep (CSV)");
    int sw_n = 12;
    std::vector<double> sw_alphas{1.0, 2.0, 3.0, 4.2};
    long sw_trials = 50;
    rl_sweep->add_option("--n", sw_n, "variables")->required();
    rl_sweep->add_option("--alpha", sw_alphas, "density grid");
    rl_sweep->add_option("--trials", sw_trials, "trials per density");

    // spectral
    auto* cmd_sp = app.add_subcommand("spectral", "Laplacian spectrum and Cheeger constant");
    std::string sp_cnf, sp_export;
    double sp_coupling = 1.0;
    cmd_sp->add_option("--cnf", sp_cnf, "DIMACS input");
    cmd_sp->add_option("--coupling", sp_coupling, "driver strength g");
    cmd_sp->add_option("--export-graph", sp_export, "write the weighted configuration graph here");
    auto* cmd_cb = cmd_sp->add_subcommand("bound", "effective inter-cluster coupling bound");
    int cb_n = 10, cb_w = 1;
    double cb_g = 0.1, cb_delta = 10.0;
    cmd_cb->add_option("--n", cb_n, "variables")->required();
    cmd_cb->add_option("--w", cb_w, "Hamming separation")->required();
    cmd_cb->add_option("--g", cb_g, "driver strength");
    cmd_cb->add_option("--delta", cb_delta, "penalty gap");

    // adversary
    auto* cmd_adv = app.add_subcommand("adversary", "subcube-query adversary game");
    int adv_m = 4;
    long adv_budget = 10000;
    std::vector<int> adv_probes;
    std::string adv_transcript;
    cmd_adv->add_option("--m", adv_m, "planted cycle count")->required();
    cmd_adv->add_option("--probe", adv_probes, "gadget indices to probe, in order");
    cmd_adv->add_option("--budget", adv_budget, "query budget");
    cmd_adv->add_option("--transcript", adv_transcript, "write the transcript (JSON lines) here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the message
        return 2;     // unknown subcommand, missing input, bad flags: validation
    }

    if (cmd_hom->parsed()) {
        std::string bytes = read_file(hom_cnf);
        CnfFormula f = parse_dimacs(bytes);
        CubicalComplex cx = build_complex(f, hom_maxdim + 1, common.cap);
        BettiVector b = betti_numbers(cx, hom_maxdim);
        json faces = json::array();
        for (int d = 0; d < static_cast<int>(cx.faces_by_dim.size()); ++d)
            faces.push_back(cx.face_count(d));
        json out{{"provenance", provenance(common.seed, bytes)},
                 {"betti", betti_json(b)},
                 {"face_counts", faces},
                 {"num_vars", f.num_vars},
                 {"num_clauses", f.num_clauses()}};
        write_output(common.out, out.dump(2));
        return 0;
    }

    if (cmd_cx->parsed()) {
        std::string bytes = read_file(cx_cnf);
        CnfFormula f = parse_dimacs(bytes);
        SolutionSet s = enumerate_solutions(f, common.cap);
        CubicalComplex cx = build_complex(s, cx_maxdim);
        json out{{"provenance", provenance(common.seed, bytes)},
                 {"complex", json::parse(dump_complex_json(cx))},
                 {"solutions", s.size()}};
        if (cx_components) {
            ClusterPartition p = components(cx);
            json clusters = json::array();
            for (const auto& c : p.clusters) clusters.push_back(c.size());
            out["clusters"] = clusters;
            out["separations"] = p.separations;
        }
        write_output(common.out, out.dump(2));
        return 0;
    }

    if (cmd_red->parsed()) {
        std::string bytes = read_file(red_cnf);
        CnfFormula f = parse_dimacs(bytes);
        SplitResult r = split_to_3cnf(f);
        CnfFormula reduced = red_strict3 ? pad_to_width3(r.formula) : r.formula;
        if (!red_out_cnf.empty()) write_output(red_out_cnf, write_dimacs(reduced));
        json auxmap = json::object();
        for (const auto& [ci, aux] : r.aux) auxmap[std::to_string(ci)] = aux;
        json out{{"provenance", provenance(common.seed, bytes)},
                 {"vars_before", f.num_vars},
                 {"vars_after", reduced.num_vars},
                 {"clauses_before", f.num_clauses()},
                 {"clauses_after", reduced.num_clauses()},
                 {"aux_map", auxmap}};
        if (red_compare) {
            HomologyComparison cmp = compare_homology(f, r.formula, 2, common.cap);
            out["betti_before"] = betti_json(cmp.before);
            out["betti_after"] = betti_json(cmp.after);
            out["equal"] = cmp.equal;
        }
        write_output(common.out, out.dump(2));
        return 0;
    }

    if (cmd_gad->parsed()) {
        VarAllocator alloc;
        std::vector<GadgetInstance> gs;
        for (int i = 0; i < gad_count; ++i)
            gs.push_back(gad_kind == "ring" ? make_ring_gadget(i, alloc)
                                            : make_gadget_b(i, alloc));
        CnfFormula f = combine_gadgets(gs, alloc.used());
        if (!gad_out_cnf.empty()) write_output(gad_out_cnf, write_dimacs(f));
        json out{{"provenance", provenance(common.seed, "")},
                 {"kind", gad_kind},
                 {"count", gad_count},
                 {"num_vars", f.num_vars},
                 {"num_clauses", f.num_clauses()}};
        if (gad_verify) out["certificate"] = certificate_json(verify_gadget_family(gs));
        if (gad_dump_matrix) {
            int top = gs[0].canonical_cycle.dim;
            out["boundary_matrix"] = gs[0].local_complex.boundary(top).dump();
        }
        write_output(common.out, out.dump(2));
        return 0;
    }

    if (cmd_exp->parsed()) {
        std::string bytes = read_file(exp_graph);
        std::istringstream in(bytes);
        SimpleGraph g = parse_edge_list(in);
        ExpanderEmbedding emb = expander_embed(g);
        CnfFormula out_formula = emb.formula;
        if (exp_strict3) out_formula = pad_to_width3(split_to_3cnf(out_formula).formula);
        if (!exp_out_cnf.empty()) write_output(exp_out_cnf, write_dimacs(out_formula));
        json out{{"provenance", provenance(common.seed, bytes)},
                 {"num_vars", out_formula.num_vars},
                 {"num_clauses", out_formula.num_clauses()},
                 {"clause_groups",
                  {{"vertex_coloring", emb.group1_clauses},
                   {"edge_constraints", emb.group2_clauses},
                   {"xor_gadgets", emb.group3_clauses},
                   {"edge_coupling", emb.group4_clauses}}},
                 {"cycles", emb.gadgets.size()},
                 {"graph",
                  {{"vertices", emb.stats.vertices},
                   {"edges", emb.stats.edges},
                   {"min_degree", emb.stats.min_degree},
                   {"max_degree", emb.stats.max_degree},
                   {"girth", emb.stats.girth},
                   {"cycle_rank", emb.stats.cycle_rank},
                   {"spectral_gap", emb.stats.spectral_gap}}}};
        if (exp_verify && !emb.gadgets.empty())
            out["certificate"] = certificate_json(verify_gadget_family(emb.gadgets));
        write_output(common.out, out.dump(2));
        return 0;
    }

    if (rl_phi->parsed()) {
        json out{{"provenance", provenance(common.seed, "")},
                 {"alpha", phi_alpha},
                 {"gamma", phi_gamma},
                 {"phi", phi(phi_gamma, phi_alpha)}};
        if (phi_want_root) out["root"] = phi_root(phi_alpha);
        write_output(common.out, out.dump(2));
        return 0;
    }

    if (rl_faces->parsed()) {
        json out{{"provenance", provenance(common.seed, "")},
                 {"n", rf_n},
                 {"k", rf_k},
                 {"m", rf_m},
                 {"q_exact", clause_forbid_exact(rf_n, rf_k)},
                 {"q_limit", clause_forbid_limit(static_cast<double>(rf_k) / rf_n)},
                 {"expected_faces", expected_faces(rf_n, rf_k, rf_m)}};
        write_output(common.out, out.dump(2));
        return 0;
    }

    if (rl_mc->parsed()) {
        int m = static_cast<int>(std::lround(mc_alpha * mc_n));
        McEstimate est = mc_fixed ? mc_face_survival_fixed(mc_n, mc_k, m, mc_trials, common.seed)
                                  : mc_face_survival_exhaustive(mc_n, mc_k, m, mc_trials,
                                                                common.seed);
        json out{{"provenance", provenance(common.seed, "")},
                 {"n", mc_n},
                 {"k", mc_k},
                 {"m", m},
                 {"variant", mc_fixed ? "fixed" : "exhaustive"},
                 {"mean", est.mean},
                 {"stderr", est.stderr_},
                 {"trials", est.trials},
                 {"closed_form", mc_fixed ? std::pow(1.0 - clause_forbid_exact(mc_n, mc_k), m)
                                          : expected_faces(mc_n, mc_k, m)}};
        write_output(common.out, out.dump(2));
        return 0;
    }

    if (rl_sample->parsed()) {
        std::string bytes = read_file(smp_cnf);
        CnfFormula f = parse_dimacs(bytes);
        auto sample = mcmc_sample(f, smp_count, smp_burn, common.seed);
        json arr = json::array();
        for (const auto& x : sample) {
            std::string s(f.num_vars, '0');
            for (int i = 0; i < f.num_vars; ++i)
                if (x.get(i)) s[i] = '1';
            arr.push_back(s);
        }
        json out{{"provenance", provenance(common.seed, bytes)},
                 {"count", sample.size()},
                 {"samples", arr}};
        write_output(common.out, out.dump(2));
        return 0;
    }

    if (rl_vr->parsed()) {
        std::string bytes = read_file(vr_cnf);
        CnfFormula f = parse_dimacs(bytes);
        auto sample = mcmc_sample(f, vr_count, vr_burn, common.seed);
        if (vr_paper_eps && f.num_vars > 0)
            vr_grid = {3.0 * std::log(static_cast<double>(f.num_vars)) / f.num_vars};
        auto barcodes = vr_persistence(sample, vr_grid, vr_maxdim);
        json out{{"provenance", provenance(common.seed, bytes)},
                 {"points", sample.size()},
                 {"eps_grid", vr_grid},
                 {"barcodes", barcode_json(barcodes)}};
        write_output(common.out, out.dump(2));
        return 0;
    }

    if (rl_sweep->parsed()) {
        auto rows = shattering_sweep(sw_n, sw_alphas, sw_trials, common.seed, common.cap,
                                     common.threads);
        write_output(common.out, sweep_csv(rows));
        return 0;
    }

    if (cmd_cb->parsed()) {
        json out{{"provenance", provenance(common.seed, "")},
                 {"n", cb_n},
                 {"w", cb_w},
                 {"g", cb_g},
                 {"delta", cb_delta},
                 {"bound", effective_coupling_bound(cb_n, cb_w, cb_g, cb_delta)}};
        write_output(common.out, out.dump(2));
        return 0;
    }

    if (cmd_sp->parsed()) {
        if (sp_cnf.empty()) throw ValidationError("spectral requires --cnf (or the bound subcommand)");
        std::string bytes = read_file(sp_cnf);
        CnfFormula f = parse_dimacs(bytes);
        WeightedGraph g = config_graph(f, sp_coupling, common.cap);
        if (!sp_export.empty()) write_output(sp_export, export_weighted_edge_list(g));
        SpectralReport rep;
        rep.ground_state_degeneracy = g.vertices.size();
        bool cheeger_ok = false;
        if (g.size() > 0) {
            laplacian_spectrum(g, rep);
            try {
                if (g.size() >= 2 && g.size() > kExactCheegerCap) {
                    SolutionSet s;
                    s.n = f.num_vars;
                    s.members = g.vertices;
                    ClusterPartition hint = components(build_complex(s, 1));
                    cheeger(g, rep, &hint);
                } else if (g.size() >= 2) {
                    cheeger(g, rep);
                }
                cheeger_ok = g.size() >= 2;
            } catch (const ValidationError&) {
                cheeger_ok = false;  // e.g. connected beyond the exact cap
            }
        }
        json out{{"provenance", provenance(common.seed, bytes)},
                 {"coupling", sp_coupling},
                 {"report", spectral_json(rep, cheeger_ok)}};
        write_output(common.out, out.dump(2));
        return 0;
    }

    if (cmd_adv->parsed()) {
        AdversaryFamily fam = make_adversary_family(adv_m);
        for (int p : adv_probes)
            if (p < 0 || p >= adv_m)
                throw ValidationError("probe index " + std::to_string(p) + " out of range");
        AdversaryOutcome res =
            adversary_run(fam, probe_sequence_strategy(fam, adv_probes), adv_budget);
        if (!adv_transcript.empty()) write_output(adv_transcript, transcript_jsonl(res));
        json out{{"provenance", provenance(common.seed, "")},
                 {"planted_cycles", res.planted_cycles},
                 {"queries", res.queries_issued},
                 {"distinguishing_queries", res.distinguishing_queries},
                 {"refuted", res.refuted},
                 {"witness_gadget", res.witness_gadget},
                 {"replay_consistent", res.replay_consistent}};
        if (res.refuted) {
            out["completion_sat"] = write_dimacs(res.completion_sat);
            out["completion_unsat"] = write_dimacs(res.completion_unsat);
        }
        write_output(common.out, out.dump(2));
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}
