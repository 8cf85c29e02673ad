#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bcsat/biclique.hpp"
#include "bcsat/bipartite_graph.hpp"
#include "bcsat/cnf.hpp"

namespace bcsat {

enum class EnumerationMode {
    // One entry per left set S: (S, N(S)) when |N(S)| <= 2^|S| - 1, otherwise
    // all (2^|S| - 1)-subsets of N(S). Any bounded biclique on S is a
    // subgraph of one of these maximal entries, so covers lose nothing.
    Canonical,
    // Every bounded biclique: all nonempty right subsets up to 2^|S| - 1.
    // Exponentially larger; exists as the ground truth for Canonical.
    Full,
};

// Catalog of candidate bicliques for the cover encoding. Entry i corresponds
// to SAT variable i+1. by_left/by_right index entries by the vertices they
// contain.
struct BicliqueCatalog {
    std::vector<Biclique> entries;
    std::vector<std::vector<int>> by_left;
    std::vector<std::vector<int>> by_right;
};

namespace detail {

inline void catalog_emit(BicliqueCatalog& cat, std::vector<int> left, std::vector<int> right) {
    int id = static_cast<int>(cat.entries.size());
    for (int v : left) cat.by_left[static_cast<std::size_t>(v)].push_back(id);
    for (int c : right) cat.by_right[static_cast<std::size_t>(c)].push_back(id);
    cat.entries.push_back(Biclique{std::move(left), std::move(right)});
}

// All size-`want` subsets of `pool` in lexicographic order.
template <typename Fn>
inline void for_each_subset(const std::vector<int>& pool, std::size_t want, Fn&& fn) {
    std::vector<std::size_t> idx(want);
    for (std::size_t i = 0; i < want; ++i) idx[i] = i;
    std::vector<int> subset(want);
    while (true) {
        for (std::size_t i = 0; i < want; ++i) subset[i] = pool[idx[i]];
        fn(subset);
        std::size_t i = want;
        while (i > 0 && idx[i - 1] == pool.size() - (want - i) - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < want; ++j) idx[j] = idx[j - 1] + 1;
    }
}

inline void catalog_grow(const BipartiteGraph& g, int k, EnumerationMode mode,
                         std::vector<int>& left, std::vector<int>& nbhd, BicliqueCatalog& cat) {
    const std::size_t bound =
        left.size() >= 64 ? ~std::size_t{0} : (std::size_t{1} << left.size()) - 1;
    if (mode == EnumerationMode::Canonical) {
        if (nbhd.size() <= bound) {
            catalog_emit(cat, left, nbhd);
        } else {
            for_each_subset(nbhd, bound,
                            [&](const std::vector<int>& sub) { catalog_emit(cat, left, sub); });
        }
    } else {
        for (std::size_t sz = 1; sz <= nbhd.size() && sz <= bound; ++sz)
            for_each_subset(nbhd, sz,
                            [&](const std::vector<int>& sub) { catalog_emit(cat, left, sub); });
    }
    if (static_cast<int>(left.size()) >= k) return;
    for (int v = left.back() + 1; v < g.n_left(); ++v) {
        if (!g.left_alive(v)) continue;
        const auto& nb = g.left_neighbors(v);
        std::vector<int> next;
        std::set_intersection(nbhd.begin(), nbhd.end(), nb.begin(), nb.end(),
                              std::back_inserter(next));
        if (next.empty()) continue;
        left.push_back(v);
        catalog_grow(g, k, mode, left, next, cat);
        left.pop_back();
    }
}

} // namespace detail

// Every biclique of the alive subgraph with |left| <= k, right side
// nonempty, per the enumeration mode. k >= 1; values above n_left are
// clamped (larger left sides cannot exist).
inline BicliqueCatalog enumerate_bicliques(const BipartiteGraph& g, int k, EnumerationMode mode) {
    if (k < 1) throw std::invalid_argument("enumerate_bicliques: k must be >= 1");
    k = std::min(k, g.n_left());
    BicliqueCatalog cat;
    cat.by_left.resize(static_cast<std::size_t>(g.n_left()));
    cat.by_right.resize(static_cast<std::size_t>(g.m_right()));
    std::vector<int> left;
    for (int v = 0; v < g.n_left(); ++v) {
        if (!g.left_alive(v)) continue;
        std::vector<int> nbhd;
        for (int c : g.left_neighbors(v))
            if (g.right_alive(c)) nbhd.push_back(c);
        if (nbhd.empty()) continue;
        left.assign(1, v);
        detail::catalog_grow(g, k, mode, left, nbhd, cat);
    }
    return cat;
}

struct CoverEncoding {
    CnfFormula cnf;
    // Alive right vertices no catalog entry covers. Each contributes an empty
    // clause, so the encoding is trivially unsatisfiable; flagged here so
    // callers can tell this apart from a genuine search failure.
    std::vector<int> uncoverable_rights;
};

// Cover existence as CNF: variable per catalog entry, pairwise at-most-one
// per left vertex (disjointness), at-least-one per alive right vertex
// (coverage). Satisfying assignments decode to valid bounded covers.
inline CoverEncoding encode_cover(const BipartiteGraph& g, const BicliqueCatalog& cat) {
    CoverEncoding out;
    out.cnf.n_vars = static_cast<int>(cat.entries.size());
    for (int v = 0; v < g.n_left(); ++v) {
        const auto& ids = cat.by_left[static_cast<std::size_t>(v)];
        for (std::size_t i = 0; i < ids.size(); ++i)
            for (std::size_t j = i + 1; j < ids.size(); ++j)
                out.cnf.add_clause({-(ids[i] + 1), -(ids[j] + 1)});
    }
    for (int c = 0; c < g.m_right(); ++c) {
        if (!g.right_alive(c)) continue;
        const auto& ids = cat.by_right[static_cast<std::size_t>(c)];
        if (ids.empty()) out.uncoverable_rights.push_back(c);
        std::vector<int> clause;
        clause.reserve(ids.size());
        for (int id : ids) clause.push_back(id + 1);
        out.cnf.add_clause(std::move(clause));
    }
    return out;
}

// Cover selected by a model of the encoding (entry i taken iff variable i+1
// is true), in catalog order.
inline BicliqueCover decode_model(const BicliqueCatalog& cat, const Assignment& model) {
    if (model.size() != cat.entries.size())
        throw std::invalid_argument("decode_model: model size mismatch");
    BicliqueCover cover;
    for (std::size_t i = 0; i < cat.entries.size(); ++i)
        if (model[i]) cover.push_back(cat.entries[i]);
    return cover;
}

} // namespace bcsat
