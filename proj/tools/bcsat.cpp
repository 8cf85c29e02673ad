// bcsat: recognize CNF formulas that are satisfiable by structure alone.
// Subcommands generate random instances, test matchedness, search for
// bounded biclique covers, encode cover existence to SAT, and run the
// phase-transition experiment sweeps.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "bcsat/biclique.hpp"
#include "bcsat/bipartite_graph.hpp"
#include "bcsat/cnf.hpp"
#include "bcsat/cover.hpp"
#include "bcsat/encoder.hpp"
#include "bcsat/harness.hpp"
#include "bcsat/io.hpp"
#include "bcsat/matching.hpp"
#include "bcsat/oracle.hpp"
#include "bcsat/rng.hpp"
#include "bcsat/solve.hpp"

namespace {

enum class InputKind { Graph, Cnf };

InputKind sniff_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path + " for reading");
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string tok;
        if (!(ss >> tok) || tok == "c") continue;
        if (tok == "p") {
            std::string kind;
            if (ss >> kind) {
                if (kind == "bigraph") return InputKind::Graph;
                if (kind == "cnf") return InputKind::Cnf;
            }
            throw std::runtime_error(path + ": unrecognized header kind");
        }
        throw std::runtime_error(path + ": not a graph or DIMACS file");
    }
    throw std::runtime_error(path + ": missing header");
}

void print_assignment(std::ostream& out, const bcsat::Assignment& a) {
    out << 'v';
    for (std::size_t i = 0; i < a.size(); ++i)
        out << ' ' << (a[i] ? static_cast<int>(i) + 1 : -(static_cast<int>(i) + 1));
    out << " 0\n";
}

struct SweepFlags {
    bcsat::SweepConfig cfg;
    std::string csv_path;
    std::string pgm_path;
    std::string thresholds_axis;
    std::string solver_cmd;
    double timeout = 0;
};

void add_grid_options(CLI::App* cmd, SweepFlags& f, bool cover_flags) {
    cmd->add_option("--n", f.cfg.n, "left side size (variables)")->required();
    cmd->add_option("--k-from", f.cfg.k_from, "smallest clause width k");
    cmd->add_option("--k-to", f.cfg.k_to, "largest clause width k");
    cmd->add_option("--k", [&f](const std::vector<std::string>& vals) {
        f.cfg.k_from = f.cfg.k_to = std::stoi(vals.at(0));
        return true;
    }, "single clause width (shorthand for --k-from/--k-to)");
    cmd->add_option("--ratio-from", f.cfg.ratios.from, "smallest m/n ratio");
    cmd->add_option("--ratio-to", f.cfg.ratios.to, "largest m/n ratio");
    cmd->add_option("--ratio-step", f.cfg.ratios.step, "ratio grid step");
    cmd->add_option("--ratio", [&f](const std::vector<std::string>& vals) {
        f.cfg.ratios.from = f.cfg.ratios.to = std::stod(vals.at(0));
        return true;
    }, "single ratio (shorthand for --ratio-from/--ratio-to)");
    cmd->add_option("--trials", f.cfg.trials, "trials per cell");
    cmd->add_option("--seed", f.cfg.seed, "master RNG seed");
    cmd->add_option("--workers", f.cfg.workers, "worker threads");
    cmd->add_option("--csv", f.csv_path, "write CSV here instead of stdout");
    cmd->add_option("--pgm", f.pgm_path, "write success-rate heat map (ASCII PGM)");
    cmd->add_option("--thresholds", f.thresholds_axis,
                    "print threshold intervals to stderr along this axis")
        ->check(CLI::IsMember({"ratio", "degree"}));
    if (cover_flags) {
        cmd->add_option("--t", [&f](const std::vector<std::string>& vals) {
            int t = std::stoi(vals.at(0));
            f.cfg.t = t == 0 ? std::nullopt : std::optional<int>(t);
            return true;
        }, "biclique size bound, 0 = unbounded (default 2)");
        cmd->add_option("--strategy", [&f](const std::vector<std::string>& vals) {
            f.cfg.strategy = bcsat::strategy_from_string(vals.at(0));
            return true;
        }, "seed choice strategy: min|rand|max (default rand)");
    }
}

void emit_sweep_outputs(const bcsat::SweepResult& result, const SweepFlags& f) {
    std::string csv = bcsat::to_csv(result);
    if (f.csv_path.empty())
        std::cout << csv;
    else
        bcsat::write_text_file(f.csv_path, csv);
    if (!f.pgm_path.empty()) bcsat::write_text_file(f.pgm_path, bcsat::to_pgm(result));
    if (!f.thresholds_axis.empty()) {
        auto axis = f.thresholds_axis == "ratio" ? bcsat::ThresholdAxis::Ratio
                                                 : bcsat::ThresholdAxis::Degree;
        const char* fixed_name = axis == bcsat::ThresholdAxis::Ratio ? "k" : "ratio";
        for (const auto& row : bcsat::thresholds(result, axis)) {
            std::cerr << "thresholds " << fixed_name << '=' << row.fixed << ": low=";
            if (row.interval.low)
                std::cerr << *row.interval.low;
            else
                std::cerr << "undefined";
            std::cerr << " high=";
            if (row.interval.high)
                std::cerr << *row.interval.high;
            else
                std::cerr << "undefined";
            if (row.interval.warning) std::cerr << " (warning: non-monotone rates)";
            std::cerr << '\n';
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"satisfiable-by-structure toolkit: matched formulas and bounded biclique covers"};
    app.require_subcommand(1);
    int rc = 0;

    // gen
    struct {
        int n = 0, k = 3;
        std::optional<int> m;
        std::optional<double> ratio;
        std::uint64_t seed = 1;
        std::string graph_path, cnf_path;
    } gen;
    auto* cmd_gen = app.add_subcommand("gen", "generate a random instance");
    cmd_gen->add_option("--n", gen.n, "left side size (variables)")->required();
    auto* gen_m = cmd_gen->add_option("--m", gen.m, "right side size (clauses)");
    auto* gen_ratio =
        cmd_gen->add_option("--ratio", gen.ratio, "clauses per variable, m = round(ratio*n)");
    gen_m->excludes(gen_ratio);
    cmd_gen->add_option("--k", gen.k, "clause width");
    cmd_gen->add_option("--seed", gen.seed, "RNG seed");
    cmd_gen->add_option("--graph", gen.graph_path, "write incidence graph here");
    cmd_gen->add_option("--cnf", gen.cnf_path, "write DIMACS CNF here");
    cmd_gen->callback([&] {
        if (!gen.m && !gen.ratio) throw CLI::ValidationError("gen", "need --m or --ratio");
        if (gen.graph_path.empty() && gen.cnf_path.empty())
            throw CLI::ValidationError("gen", "need --graph and/or --cnf");
        int m = gen.m ? *gen.m : static_cast<int>(std::llround(*gen.ratio * gen.n));
        bcsat::Rng master(gen.seed);
        bcsat::Rng graph_rng = master.derive(0);
        bcsat::BipartiteGraph g = bcsat::random_graph(gen.n, m, gen.k, graph_rng);
        if (!gen.graph_path.empty()) bcsat::write_graph_file(gen.graph_path, g);
        if (!gen.cnf_path.empty()) {
            bcsat::Rng formula_rng = master.derive(1);
            bcsat::write_cnf_file(gen.cnf_path, bcsat::random_formula(g, formula_rng));
        }
    });

    // match
    struct {
        std::string input;
    } match;
    auto* cmd_match = app.add_subcommand("match", "test whether the instance is matched");
    cmd_match->add_option("input", match.input, "graph or DIMACS file")->required();
    cmd_match->callback([&] {
        InputKind kind = sniff_input(match.input);
        if (kind == InputKind::Graph) {
            bcsat::BipartiteGraph g = bcsat::read_graph_file(match.input);
            bcsat::Matching matching = bcsat::maximum_matching(g);
            if (matching.cardinality == g.m_right()) {
                std::cout << "MATCHED\n";
                for (int c = 0; c < g.m_right(); ++c)
                    std::cout << "m " << matching.right_to_left[c] + 1 << ' ' << c + 1 << '\n';
            } else {
                std::cout << "NOT MATCHED\n";
                rc = 1;
            }
        } else {
            bcsat::CnfFormula f = bcsat::read_cnf_file(match.input);
            bcsat::BipartiteGraph g = bcsat::incidence_graph(f);
            bcsat::Matching matching = bcsat::maximum_matching(g);
            if (matching.cardinality == g.m_right()) {
                std::cout << "MATCHED\n";
                print_assignment(std::cout, bcsat::assignment_from_matching(f, matching));
            } else {
                std::cout << "NOT MATCHED\n";
                rc = 1;
            }
        }
    });

    // cover
    struct {
        std::string input;
        int t = 2;
        std::string strategy = "rand";
        std::uint64_t seed = 1;
    } cover;
    auto* cmd_cover = app.add_subcommand("cover", "greedy bounded biclique cover search");
    cmd_cover->add_option("input", cover.input, "graph or DIMACS file")->required();
    cmd_cover->add_option("--t", cover.t, "biclique size bound, 0 = unbounded");
    cmd_cover->add_option("--strategy", cover.strategy, "seed choice strategy: min|rand|max");
    cmd_cover->add_option("--seed", cover.seed, "RNG seed");
    cmd_cover->callback([&] {
        InputKind kind = sniff_input(cover.input);
        std::optional<bcsat::CnfFormula> f;
        bcsat::BipartiteGraph g;
        if (kind == InputKind::Graph) {
            g = bcsat::read_graph_file(cover.input);
        } else {
            f = bcsat::read_cnf_file(cover.input);
            g = bcsat::incidence_graph(*f);
        }
        std::optional<int> t;
        if (cover.t != 0) t = cover.t;
        bcsat::Rng rng(cover.seed);
        auto found = bcsat::find_cover(g, t, bcsat::strategy_from_string(cover.strategy), rng);
        if (!found) {
            std::cout << "FAIL\n";
            rc = 1;
            return;
        }
        bcsat::write_cover(std::cout, *found);
        if (f) print_assignment(std::cout, bcsat::assignment_from_cover(*f, *found));
    });

    // encode
    struct {
        std::string input, out_path, catalog_path;
        int t = 2;
        std::string mode = "canonical";
    } enc;
    auto* cmd_encode = app.add_subcommand("encode", "encode bounded cover existence as CNF");
    cmd_encode->add_option("input", enc.input, "graph or DIMACS file")->required();
    cmd_encode->add_option("--t", enc.t, "biclique size bound (>= 1)");
    cmd_encode->add_option("--mode", enc.mode, "biclique enumeration: canonical|full")
        ->check(CLI::IsMember({"canonical", "full"}));
    cmd_encode->add_option("--out", enc.out_path, "write DIMACS here instead of stdout");
    cmd_encode->add_option("--catalog", enc.catalog_path,
                           "write the catalog (one biclique per line, entry i = variable i+1)");
    cmd_encode->callback([&] {
        InputKind kind = sniff_input(enc.input);
        bcsat::BipartiteGraph g = kind == InputKind::Graph
                                      ? bcsat::read_graph_file(enc.input)
                                      : bcsat::incidence_graph(bcsat::read_cnf_file(enc.input));
        auto mode = enc.mode == "canonical" ? bcsat::EnumerationMode::Canonical
                                            : bcsat::EnumerationMode::Full;
        bcsat::BicliqueCatalog cat = bcsat::enumerate_bicliques(g, enc.t, mode);
        bcsat::CoverEncoding encoding = bcsat::encode_cover(g, cat);
        if (enc.out_path.empty())
            bcsat::write_cnf(std::cout, encoding.cnf);
        else
            bcsat::write_cnf_file(enc.out_path, encoding.cnf);
        if (!enc.catalog_path.empty()) {
            std::ofstream out(enc.catalog_path);
            if (!out) throw std::runtime_error("cannot open " + enc.catalog_path + " for writing");
            bcsat::write_cover(out, cat.entries);
        }
        for (int c : encoding.uncoverable_rights)
            std::cerr << "warning: right vertex " << c + 1
                      << " is in no candidate biclique; encoding is trivially unsatisfiable\n";
    });

    // solve
    struct {
        std::string input, solver_cmd;
        int t = 2;
        double timeout = 0;
    } solve;
    auto* cmd_solve =
        app.add_subcommand("solve", "decide bounded cover existence exactly via SAT");
    cmd_solve->add_option("input", solve.input, "graph or DIMACS file")->required();
    cmd_solve->add_option("--t", solve.t, "biclique size bound (>= 1)");
    cmd_solve->add_option("--solver-cmd", solve.solver_cmd,
                          "external solver command with {cnf} placeholder "
                          "(default: $BCSAT_SOLVER, else built-in CDCL)");
    cmd_solve->add_option("--timeout", solve.timeout, "wall clock limit in seconds, 0 = none");
    cmd_solve->callback([&] {
        InputKind kind = sniff_input(solve.input);
        std::optional<bcsat::CnfFormula> f;
        bcsat::BipartiteGraph g;
        if (kind == InputKind::Graph) {
            g = bcsat::read_graph_file(solve.input);
        } else {
            f = bcsat::read_cnf_file(solve.input);
            g = bcsat::incidence_graph(*f);
        }
        bcsat::BicliqueCatalog cat =
            bcsat::enumerate_bicliques(g, solve.t, bcsat::EnumerationMode::Canonical);
        bcsat::CoverEncoding encoding = bcsat::encode_cover(g, cat);
        bcsat::SolverConfig scfg;
        scfg.timeout_s = solve.timeout;
        if (!solve.solver_cmd.empty())
            scfg.command = solve.solver_cmd;
        else
            scfg.command = bcsat::env_solver_command();
        bcsat::SolveOutcome outcome = bcsat::solve_cnf(encoding.cnf, scfg);
        std::cout << bcsat::to_string(outcome.status) << '\n';
        switch (outcome.status) {
        case bcsat::SolveStatus::Sat: {
            bcsat::BicliqueCover decoded = bcsat::decode_model(cat, *outcome.model);
            bcsat::write_cover(std::cout, decoded);
            if (f) print_assignment(std::cout, bcsat::assignment_from_cover(*f, decoded));
            break;
        }
        case bcsat::SolveStatus::Unsat: rc = 1; break;
        case bcsat::SolveStatus::Timeout: rc = 3; break;
        case bcsat::SolveStatus::SolverError:
            std::cerr << outcome.detail << '\n';
            rc = 3;
            break;
        }
    });

    // sat: plain DIMACS solving with the built-in CDCL solver
    struct {
        std::string input;
        double timeout = 0;
    } sat;
    auto* cmd_sat = app.add_subcommand(
        "sat", "solve a DIMACS file with the built-in CDCL solver (exit 10/20)");
    cmd_sat->add_option("input", sat.input, "DIMACS file")->required();
    cmd_sat->add_option("--timeout", sat.timeout, "wall clock limit in seconds, 0 = none");
    cmd_sat->callback([&] {
        bcsat::CnfFormula f = bcsat::read_cnf_file(sat.input);
        bcsat::SolveOutcome outcome = bcsat::solve_internal(f, sat.timeout);
        switch (outcome.status) {
        case bcsat::SolveStatus::Sat:
            std::cout << "s SATISFIABLE\n";
            print_assignment(std::cout, *outcome.model);
            rc = 10;
            break;
        case bcsat::SolveStatus::Unsat:
            std::cout << "s UNSATISFIABLE\n";
            rc = 20;
            break;
        default:
            std::cout << "s UNKNOWN\n";
            rc = 0;
            break;
        }
    });

    // sweeps
    SweepFlags sm;
    auto* cmd_sm = app.add_subcommand("sweep-matched", "matched-formula rate over a (k, ratio) grid");
    add_grid_options(cmd_sm, sm, false);
    cmd_sm->callback([&] { emit_sweep_outputs(bcsat::sweep_matched(sm.cfg), sm); });

    SweepFlags sc;
    auto* cmd_sc =
        app.add_subcommand("sweep-cover", "cover-search success rate over a (k, ratio) grid");
    add_grid_options(cmd_sc, sc, true);
    cmd_sc->callback([&] { emit_sweep_outputs(bcsat::sweep_cover(sc.cfg), sc); });

    SweepFlags cp;
    auto* cmd_cp = app.add_subcommand("compare",
                                      "heuristic vs exact SAT decision on identical instances");
    add_grid_options(cmd_cp, cp, true);
    cmd_cp->add_option("--solver-cmd", cp.solver_cmd,
                       "external solver command with {cnf} placeholder "
                       "(default: $BCSAT_SOLVER, else built-in CDCL)");
    cmd_cp->add_option("--timeout", cp.timeout, "per-instance solver limit in seconds, 0 = none");
    cmd_cp->callback([&] {
        if (!cp.solver_cmd.empty())
            cp.cfg.solver.command = cp.solver_cmd;
        else
            cp.cfg.solver.command = bcsat::env_solver_command();
        cp.cfg.solver.timeout_s = cp.timeout;
        bcsat::CompareResult result = bcsat::compare_sat(cp.cfg);
        std::string csv = bcsat::to_csv(result);
        if (cp.csv_path.empty())
            std::cout << csv;
        else
            bcsat::write_text_file(cp.csv_path, csv);
        for (const auto& row : result.rows) {
            if (row.contradictions > 0 || row.decode_failures > 0)
                std::cerr << "warning: consistency breach in cell k=" << row.k
                          << " ratio=" << row.ratio << " (contradictions=" << row.contradictions
                          << ", decode_failures=" << row.decode_failures << ")\n";
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const bcsat::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return rc;
}
