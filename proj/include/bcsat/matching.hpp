#pragma once

#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bcsat/bipartite_graph.hpp"
#include "bcsat/cnf.hpp"

namespace bcsat {

struct Matching {
    // right vertex -> matched left vertex, -1 if unmatched (or dead).
    std::vector<int> right_to_left;
    int cardinality = 0;
};

// Hopcroft-Karp over the alive subgraph, O(edges * sqrt(vertices)).
// Fully deterministic: BFS layers and DFS both scan vertices and sorted
// adjacency lists in ascending order.
inline Matching maximum_matching(const BipartiteGraph& g) {
    const int n = g.n_left(), m = g.m_right();
    constexpr int INF = std::numeric_limits<int>::max();
    std::vector<int> match_l(n, -1), match_r(m, -1), dist(n);
    std::vector<int> queue;
    queue.reserve(static_cast<std::size_t>(n));

    auto bfs = [&]() -> bool {
        queue.clear();
        for (int v = 0; v < n; ++v) {
            if (!g.left_alive(v)) {
                dist[v] = INF;
            } else if (match_l[v] == -1) {
                dist[v] = 0;
                queue.push_back(v);
            } else {
                dist[v] = INF;
            }
        }
        bool found_free = false;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            int v = queue[head];
            for (int c : g.left_neighbors(v)) {
                if (!g.right_alive(c)) continue;
                int w = match_r[c];
                if (w == -1) {
                    found_free = true;
                } else if (dist[w] == INF) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        return found_free;
    };

    // Recursive augmenting DFS; depth is bounded by the layer count (O(sqrt)).
    auto dfs = [&](auto&& self, int v) -> bool {
        for (int c : g.left_neighbors(v)) {
            if (!g.right_alive(c)) continue;
            int w = match_r[c];
            if (w == -1 || (dist[w] == dist[v] + 1 && self(self, w))) {
                match_l[v] = c;
                match_r[c] = v;
                return true;
            }
        }
        dist[v] = INF;
        return false;
    };

    int size = 0;
    while (bfs()) {
        for (int v = 0; v < n; ++v)
            if (g.left_alive(v) && match_l[v] == -1 && dfs(dfs, v)) ++size;
    }
    return Matching{std::move(match_r), size};
}

// A formula/graph is matched when some matching saturates all (alive) right
// vertices. Shortcut: more alive rights than lefts can never be saturated.
inline bool is_matched(const BipartiteGraph& g) {
    if (g.alive_right_count() > g.alive_left_count()) return false;
    return maximum_matching(g).cardinality == g.alive_right_count();
}

// Satisfying assignment from a clause-saturating matching: the variable
// matched to each clause is set to satisfy its literal there, everything
// else defaults to false.
inline Assignment assignment_from_matching(const CnfFormula& f, const Matching& matching) {
    if (matching.right_to_left.size() != f.clauses.size())
        throw std::invalid_argument("assignment_from_matching: matching size mismatch");
    Assignment a(static_cast<std::size_t>(f.n_vars), false);
    for (std::size_t c = 0; c < f.clauses.size(); ++c) {
        int v = matching.right_to_left[c];
        if (v == -1)
            throw std::invalid_argument("assignment_from_matching: clause " + std::to_string(c) +
                                        " unmatched");
        bool found = false;
        for (int l : f.clauses[c]) {
            if (std::abs(l) == v + 1) {
                a[static_cast<std::size_t>(v)] = l > 0;
                found = true;
                break;
            }
        }
        if (!found)
            throw std::invalid_argument(
                "assignment_from_matching: matched variable not in clause " + std::to_string(c));
    }
    return a;
}

} // namespace bcsat
