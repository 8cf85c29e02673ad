#pragma once

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcsat/bipartite_graph.hpp"
#include "bcsat/rng.hpp"

namespace bcsat {

// assignment[i] is the value of variable i+1.
using Assignment = std::vector<bool>;

// CNF formula over variables 1..n_vars. Literals are signed 1-based ints.
// Clauses keep their insertion order; within a clause literals are stored
// sorted by variable, which is the canonical on-disk order too.
struct CnfFormula {
    int n_vars = 0;
    std::vector<std::vector<int>> clauses;

    void add_clause(std::vector<int> lits) {
        for (int l : lits) {
            if (l == 0) throw std::invalid_argument("clause: zero literal");
            if (std::abs(l) > n_vars)
                throw std::invalid_argument("clause: variable " + std::to_string(std::abs(l)) +
                                            " out of range");
        }
        std::sort(lits.begin(), lits.end(),
                  [](int a, int b) { return std::abs(a) < std::abs(b); });
        for (std::size_t i = 1; i < lits.size(); ++i) {
            if (std::abs(lits[i]) == std::abs(lits[i - 1]))
                throw std::invalid_argument(
                    "clause: variable " + std::to_string(std::abs(lits[i])) +
                    (lits[i] == lits[i - 1] ? " repeated" : " appears with both polarities"));
        }
        clauses.push_back(std::move(lits));
    }

    bool operator==(const CnfFormula&) const = default;
};

inline bool satisfies(const CnfFormula& f, const Assignment& a) {
    if (static_cast<int>(a.size()) != f.n_vars)
        throw std::invalid_argument("satisfies: assignment size mismatch");
    for (const auto& cl : f.clauses) {
        bool sat = false;
        for (int l : cl) {
            if (a[static_cast<std::size_t>(std::abs(l)) - 1] == (l > 0)) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

// Incidence graph: left vertex i-1 per variable i, right vertex j per clause j,
// edge iff the variable occurs in the clause (either polarity).
inline BipartiteGraph incidence_graph(const CnfFormula& f) {
    std::vector<std::vector<int>> adj(f.clauses.size());
    for (std::size_t c = 0; c < f.clauses.size(); ++c) {
        adj[c].reserve(f.clauses[c].size());
        for (int l : f.clauses[c]) adj[c].push_back(std::abs(l) - 1);
        // literal order is by variable already, so the list is sorted
    }
    return graph_from_neighborhoods(f.n_vars, adj);
}

// Formula whose incidence graph is exactly g, polarities drawn uniformly.
// Requires a pristine graph (no killed vertices); clause j comes from right
// vertex j, variable i+1 from left vertex i.
inline CnfFormula random_formula(const BipartiteGraph& g, Rng& rng) {
    if (g.alive_left_count() != g.n_left() || g.alive_right_count() != g.m_right())
        throw std::invalid_argument("random_formula: graph has killed vertices");
    CnfFormula f;
    f.n_vars = g.n_left();
    f.clauses.reserve(static_cast<std::size_t>(g.m_right()));
    for (int c = 0; c < g.m_right(); ++c) {
        std::vector<int> cl;
        cl.reserve(g.right_neighbors(c).size());
        for (int v : g.right_neighbors(c)) cl.push_back(rng.next_bool() ? (v + 1) : -(v + 1));
        f.clauses.push_back(std::move(cl));
    }
    return f;
}

// Same clauses, every literal's polarity re-drawn uniformly. Preserves the
// incidence graph, so structure-based satisfiability arguments carry over.
inline CnfFormula random_polarity_variant(const CnfFormula& f, Rng& rng) {
    CnfFormula out;
    out.n_vars = f.n_vars;
    out.clauses.reserve(f.clauses.size());
    for (const auto& cl : f.clauses) {
        std::vector<int> lits;
        lits.reserve(cl.size());
        for (int l : cl) {
            int v = std::abs(l);
            lits.push_back(rng.next_bool() ? v : -v);
        }
        out.clauses.push_back(std::move(lits));
    }
    return out;
}

} // namespace bcsat
