#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcsat/rng.hpp"

namespace bcsat {

// Bipartite graph with a fixed vertex set and kill-style deletion. Left
// vertices play the role of variables, right vertices the role of clauses.
// Adjacency lists are sorted and duplicate-free; killed vertices stay in the
// lists and are masked by liveness flags, so indices are stable for the whole
// lifetime of the graph. Right degrees count alive left neighbours only and
// are maintained incrementally.
class BipartiteGraph {
public:
    BipartiteGraph() = default;

    BipartiteGraph(int n_left, int m_right) {
        if (n_left < 0 || m_right < 0)
            throw std::invalid_argument("bipartite graph: negative side size");
        left_adj_.resize(static_cast<std::size_t>(n_left));
        right_adj_.resize(static_cast<std::size_t>(m_right));
        left_alive_.assign(static_cast<std::size_t>(n_left), 1);
        right_alive_.assign(static_cast<std::size_t>(m_right), 1);
        right_degree_.assign(static_cast<std::size_t>(m_right), 0);
        alive_left_ = n_left;
        alive_right_ = m_right;
    }

    int n_left() const { return static_cast<int>(left_adj_.size()); }
    int m_right() const { return static_cast<int>(right_adj_.size()); }
    int alive_left_count() const { return alive_left_; }
    int alive_right_count() const { return alive_right_; }
    long long edge_count() const { return edges_; }

    bool left_alive(int v) const { return left_alive_[check_left(v)] != 0; }
    bool right_alive(int c) const { return right_alive_[check_right(c)] != 0; }

    // Alive left neighbours of an alive right vertex.
    int right_degree(int c) const {
        check_right(c);
        if (!right_alive_[c]) throw std::invalid_argument("right_degree: dead vertex");
        return right_degree_[c];
    }

    // Full construction-time lists, dead entries included; callers filter.
    const std::vector<int>& left_neighbors(int v) const { return left_adj_[check_left(v)]; }
    const std::vector<int>& right_neighbors(int c) const { return right_adj_[check_right(c)]; }

    void add_edge(int v, int c) {
        check_left(v);
        check_right(c);
        if (!left_alive_[v] || !right_alive_[c])
            throw std::invalid_argument("add_edge: dead endpoint");
        auto& rn = right_adj_[c];
        auto it = std::lower_bound(rn.begin(), rn.end(), v);
        if (it != rn.end() && *it == v)
            throw std::invalid_argument("add_edge: duplicate edge (" + std::to_string(v) + "," +
                                        std::to_string(c) + ")");
        rn.insert(it, v);
        auto& ln = left_adj_[v];
        ln.insert(std::lower_bound(ln.begin(), ln.end(), c), c);
        ++right_degree_[c];
        ++edges_;
    }

    void kill_left(int v) {
        check_left(v);
        if (!left_alive_[v]) throw std::invalid_argument("kill_left: already dead");
        left_alive_[v] = 0;
        --alive_left_;
        for (int c : left_adj_[v]) {
            if (right_alive_[c]) {
                --right_degree_[c];
                --edges_;
            }
        }
    }

    void kill_right(int c) {
        check_right(c);
        if (!right_alive_[c]) throw std::invalid_argument("kill_right: already dead");
        edges_ -= right_degree_[c];
        right_degree_[c] = 0;
        right_alive_[c] = 0;
        --alive_right_;
    }

    bool has_edge(int v, int c) const {
        check_left(v);
        const auto& rn = right_adj_[check_right(c)];
        return std::binary_search(rn.begin(), rn.end(), v);
    }

    bool operator==(const BipartiteGraph&) const = default;

private:
    int check_left(int v) const {
        if (v < 0 || v >= n_left()) throw std::out_of_range("left vertex out of range");
        return v;
    }
    int check_right(int c) const {
        if (c < 0 || c >= m_right()) throw std::out_of_range("right vertex out of range");
        return c;
    }

    std::vector<std::vector<int>> left_adj_;
    std::vector<std::vector<int>> right_adj_;
    std::vector<std::uint8_t> left_alive_;
    std::vector<std::uint8_t> right_alive_;
    std::vector<int> right_degree_;
    int alive_left_ = 0;
    int alive_right_ = 0;
    long long edges_ = 0;
};

inline BipartiteGraph graph_from_neighborhoods(int n_left,
                                               const std::vector<std::vector<int>>& right_adj) {
    BipartiteGraph g(n_left, static_cast<int>(right_adj.size()));
    for (int c = 0; c < static_cast<int>(right_adj.size()); ++c)
        for (int v : right_adj[c]) g.add_edge(v, c);
    return g;
}

// Alive common neighbourhood of a set of alive left vertices, sorted ascending.
inline std::vector<int> common_neighborhood(const BipartiteGraph& g, std::span<const int> left_set) {
    if (left_set.empty()) throw std::invalid_argument("common_neighborhood: empty left set");
    for (int v : left_set)
        if (!g.left_alive(v)) throw std::invalid_argument("common_neighborhood: dead left vertex");
    std::vector<int> acc;
    for (int c : g.left_neighbors(left_set[0]))
        if (g.right_alive(c)) acc.push_back(c);
    std::vector<int> next;
    for (std::size_t i = 1; i < left_set.size() && !acc.empty(); ++i) {
        const auto& nb = g.left_neighbors(left_set[i]);
        next.clear();
        std::set_intersection(acc.begin(), acc.end(), nb.begin(), nb.end(),
                              std::back_inserter(next));
        acc.swap(next);
    }
    return acc;
}

// Random graph in the G^k model: m right vertices, each adjacent to a uniform
// k-subset of the n left vertices, drawn independently per right vertex.
// Partial Fisher-Yates with swap undo keeps each draw exactly uniform at O(k)
// per right vertex after O(n) setup.
inline BipartiteGraph random_graph(int n, int m, int k, Rng& rng) {
    if (n < 0 || m < 0) throw std::invalid_argument("random_graph: negative size");
    if (k < 0 || k > n) throw std::invalid_argument("random_graph: k out of range");
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(m));
    std::vector<int> pool(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pool[i] = i;
    std::vector<std::size_t> picks(static_cast<std::size_t>(k));
    for (int c = 0; c < m; ++c) {
        auto& nb = adj[c];
        nb.resize(static_cast<std::size_t>(k));
        for (int j = 0; j < k; ++j) {
            std::size_t pos = j + rng.index(static_cast<std::size_t>(n - j));
            picks[j] = pos;
            std::swap(pool[j], pool[pos]);
            nb[j] = pool[j];
        }
        for (int j = k - 1; j >= 0; --j) std::swap(pool[j], pool[picks[j]]);
        std::sort(nb.begin(), nb.end());
    }
    return graph_from_neighborhoods(n, adj);
}

} // namespace bcsat
