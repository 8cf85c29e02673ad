#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcsat/bipartite_graph.hpp"
#include "bcsat/cnf.hpp"

namespace bcsat {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

namespace detail {

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path + " for reading");
    return in;
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

} // namespace detail

// Text format for bipartite graphs, DIMACS-flavoured:
//   c <comment>
//   p bigraph <n_left> <m_right> <edge_count>
//   e <left> <right>            (1-based, one per edge)
inline BipartiteGraph read_graph(std::istream& in) {
    BipartiteGraph g;
    bool have_header = false;
    long long declared_edges = 0, seen_edges = 0;
    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        std::istringstream ss(line);
        std::string tok;
        if (!(ss >> tok)) continue; // blank line
        if (tok == "c") continue;
        if (tok == "p") {
            if (have_header) throw ParseError(ln, "duplicate header");
            std::string kind;
            long long n = 0, m = 0, l = 0;
            if (!(ss >> kind) || kind != "bigraph" || !(ss >> n >> m >> l) || n < 0 || m < 0 ||
                l < 0)
                throw ParseError(ln, "malformed header, expected 'p bigraph <n> <m> <edges>'");
            std::string extra;
            if (ss >> extra) throw ParseError(ln, "trailing tokens after header");
            g = BipartiteGraph(static_cast<int>(n), static_cast<int>(m));
            declared_edges = l;
            have_header = true;
        } else if (tok == "e") {
            if (!have_header) throw ParseError(ln, "edge before header");
            long long v = 0, c = 0;
            if (!(ss >> v >> c)) throw ParseError(ln, "malformed edge line");
            std::string extra;
            if (ss >> extra) throw ParseError(ln, "trailing tokens after edge");
            if (v < 1 || v > g.n_left()) throw ParseError(ln, "left vertex out of range");
            if (c < 1 || c > g.m_right()) throw ParseError(ln, "right vertex out of range");
            try {
                g.add_edge(static_cast<int>(v - 1), static_cast<int>(c - 1));
            } catch (const std::invalid_argument&) {
                throw ParseError(ln, "duplicate edge");
            }
            ++seen_edges;
        } else {
            throw ParseError(ln, "unknown line type '" + tok + "'");
        }
    }
    if (!have_header) throw ParseError(ln, "missing header");
    if (seen_edges != declared_edges)
        throw ParseError(ln, "edge count mismatch: header says " +
                                 std::to_string(declared_edges) + ", found " +
                                 std::to_string(seen_edges));
    return g;
}

// Canonical writer: edges sorted by right vertex, then left. Only pristine
// graphs are serializable; liveness state has no representation in the format.
inline void write_graph(std::ostream& out, const BipartiteGraph& g) {
    if (g.alive_left_count() != g.n_left() || g.alive_right_count() != g.m_right())
        throw std::logic_error("write_graph: graph has killed vertices");
    out << "p bigraph " << g.n_left() << ' ' << g.m_right() << ' ' << g.edge_count() << '\n';
    for (int c = 0; c < g.m_right(); ++c)
        for (int v : g.right_neighbors(c)) out << "e " << v + 1 << ' ' << c + 1 << '\n';
}

// DIMACS CNF. Literals may span lines; every clause ends with 0.
inline CnfFormula read_cnf(std::istream& in) {
    CnfFormula f;
    bool have_header = false;
    long long declared_clauses = 0;
    std::vector<int> current;
    bool in_clause = false;
    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        std::istringstream ss(line);
        std::string tok;
        if (!(ss >> tok)) continue;
        if (tok == "c") continue;
        if (tok == "p") {
            if (have_header) throw ParseError(ln, "duplicate header");
            std::string kind;
            long long n = 0, m = 0;
            if (!(ss >> kind) || kind != "cnf" || !(ss >> n >> m) || n < 0 || m < 0)
                throw ParseError(ln, "malformed header, expected 'p cnf <vars> <clauses>'");
            std::string extra;
            if (ss >> extra) throw ParseError(ln, "trailing tokens after header");
            f.n_vars = static_cast<int>(n);
            declared_clauses = m;
            have_header = true;
            continue;
        }
        if (!have_header) throw ParseError(ln, "literals before header");
        // first token is part of the literal stream; rewind the line
        std::istringstream lits(line);
        long long l = 0;
        while (lits >> l) {
            if (l == 0) {
                try {
                    f.add_clause(std::move(current));
                } catch (const std::invalid_argument& e) {
                    throw ParseError(ln, e.what());
                }
                current.clear();
                in_clause = false;
            } else {
                if (l < -f.n_vars || l > f.n_vars)
                    throw ParseError(ln, "literal " + std::to_string(l) + " out of range");
                current.push_back(static_cast<int>(l));
                in_clause = true;
            }
        }
        if (!lits.eof()) throw ParseError(ln, "malformed literal");
    }
    if (!have_header) throw ParseError(ln, "missing header");
    if (in_clause) throw ParseError(ln, "unterminated clause at end of input");
    if (static_cast<long long>(f.clauses.size()) != declared_clauses)
        throw ParseError(ln, "clause count mismatch: header says " +
                                 std::to_string(declared_clauses) + ", found " +
                                 std::to_string(f.clauses.size()));
    return f;
}

inline void write_cnf(std::ostream& out, const CnfFormula& f) {
    out << "p cnf " << f.n_vars << ' ' << f.clauses.size() << '\n';
    for (const auto& cl : f.clauses) {
        for (int l : cl) out << l << ' ';
        out << "0\n";
    }
}

inline BipartiteGraph read_graph_file(const std::string& path) {
    auto in = detail::open_input(path);
    return read_graph(in);
}

inline void write_graph_file(const std::string& path, const BipartiteGraph& g) {
    auto out = detail::open_output(path);
    write_graph(out, g);
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline CnfFormula read_cnf_file(const std::string& path) {
    auto in = detail::open_input(path);
    return read_cnf(in);
}

inline void write_cnf_file(const std::string& path, const CnfFormula& f) {
    auto out = detail::open_output(path);
    write_cnf(out, f);
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace bcsat
