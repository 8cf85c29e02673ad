#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "bcsat/biclique.hpp"
#include "bcsat/bipartite_graph.hpp"
#include "bcsat/cnf.hpp"
#include "bcsat/matching.hpp"
#include "bcsat/rng.hpp"

namespace bcsat {

enum class Strategy { Min, Rand, Max };

inline Strategy strategy_from_string(const std::string& s) {
    if (s == "min") return Strategy::Min;
    if (s == "rand") return Strategy::Rand;
    if (s == "max") return Strategy::Max;
    throw std::invalid_argument("unknown strategy '" + s + "' (expected min|rand|max)");
}

// Seed: a pair of left vertices together with their common neighbourhood.
struct Seed {
    std::array<int, 2> left;
    std::vector<int> right;

    bool operator==(const Seed&) const = default;
};

// Strips degree-1 right vertices as K_{1,1} bicliques, FIFO. Killing the
// partner left vertex lowers other right degrees; a right vertex at degree 0
// means no cover can include it, so the whole attempt fails (returns false,
// graph left mid-propagation). Extracted bicliques are appended to cover.
inline bool unit_g_propagation(BipartiteGraph& g, BicliqueCover& cover) {
    std::deque<int> pending;
    for (int c = 0; c < g.m_right(); ++c) {
        if (!g.right_alive(c)) continue;
        int d = g.right_degree(c);
        if (d == 0) return false;
        if (d == 1) pending.push_back(c);
    }
    while (!pending.empty()) {
        int c = pending.front();
        pending.pop_front();
        if (!g.right_alive(c)) continue; // processed earlier in this run
        int v = -1;
        for (int u : g.right_neighbors(c)) {
            if (g.left_alive(u)) {
                v = u;
                break;
            }
        }
        cover.push_back(Biclique{{v}, {c}});
        g.kill_right(c);
        std::vector<int> affected;
        for (int c2 : g.left_neighbors(v))
            if (g.right_alive(c2)) affected.push_back(c2);
        g.kill_left(v);
        for (int c2 : affected) {
            int d = g.right_degree(c2);
            if (d == 0) return false;
            if (d == 1) pending.push_back(c2);
        }
    }
    return true;
}

// All seeds of the alive graph: every pair of alive left vertices with a
// nonempty common neighbourhood, pairs in lexicographic order.
inline std::vector<Seed> generate_seeds(const BipartiteGraph& g) {
    std::vector<Seed> seeds;
    std::vector<std::vector<int>> alive_nb(static_cast<std::size_t>(g.n_left()));
    std::vector<int> alive_lefts;
    for (int v = 0; v < g.n_left(); ++v) {
        if (!g.left_alive(v)) continue;
        alive_lefts.push_back(v);
        for (int c : g.left_neighbors(v))
            if (g.right_alive(c)) alive_nb[static_cast<std::size_t>(v)].push_back(c);
    }
    std::vector<int> common;
    for (std::size_t i = 0; i < alive_lefts.size(); ++i) {
        for (std::size_t j = i + 1; j < alive_lefts.size(); ++j) {
            int u = alive_lefts[i], w = alive_lefts[j];
            const auto& a = alive_nb[static_cast<std::size_t>(u)];
            const auto& b = alive_nb[static_cast<std::size_t>(w)];
            common.clear();
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(common));
            if (!common.empty()) seeds.push_back(Seed{{u, w}, common});
        }
    }
    return seeds;
}

// MIN/MAX pick the seed with the smallest/largest common neighbourhood,
// RAND ignores size; ties (the whole list, for RAND) are broken uniformly.
inline const Seed& choose_seed(const std::vector<Seed>& seeds, Strategy strategy, Rng& rng) {
    if (seeds.empty()) throw std::invalid_argument("choose_seed: no seeds");
    if (strategy == Strategy::Rand) return seeds[rng.index(seeds.size())];
    std::size_t best_size = seeds[0].right.size();
    for (const Seed& s : seeds) {
        if (strategy == Strategy::Min ? s.right.size() < best_size : s.right.size() > best_size)
            best_size = s.right.size();
    }
    std::vector<std::size_t> ties;
    for (std::size_t i = 0; i < seeds.size(); ++i)
        if (seeds[i].right.size() == best_size) ties.push_back(i);
    return seeds[ties[rng.index(ties.size())]];
}

// One growth step: add the alive left vertex outside b.left whose
// neighbourhood keeps the most of b.right, ties uniform. Returns false and
// leaves b untouched when every candidate would empty the right side (halt).
// Precondition: b is not bounded yet (growth is only meaningful then).
inline bool expand_seed(const BipartiteGraph& g, Biclique& b, Rng& rng) {
    if (is_bounded(b)) throw std::invalid_argument("expand_seed: biclique already bounded");
    std::vector<std::uint8_t> in_right(static_cast<std::size_t>(g.m_right()), 0);
    for (int c : b.right) in_right[static_cast<std::size_t>(c)] = 1;
    std::vector<std::uint8_t> in_left(static_cast<std::size_t>(g.n_left()), 0);
    for (int v : b.left) in_left[static_cast<std::size_t>(v)] = 1;
    std::size_t best = 0;
    std::vector<int> ties;
    for (int v = 0; v < g.n_left(); ++v) {
        if (!g.left_alive(v) || in_left[static_cast<std::size_t>(v)]) continue;
        std::size_t keep = 0;
        for (int c : g.left_neighbors(v))
            if (g.right_alive(c) && in_right[static_cast<std::size_t>(c)]) ++keep;
        if (keep > best) {
            best = keep;
            ties.assign(1, v);
        } else if (keep == best && keep > 0) {
            ties.push_back(v);
        }
    }
    if (best == 0) return false;
    int v = ties[rng.index(ties.size())];
    std::vector<int> kept;
    kept.reserve(best);
    const auto& nb = g.left_neighbors(v);
    for (int c : b.right)
        if (std::binary_search(nb.begin(), nb.end(), c)) kept.push_back(c);
    b.right = std::move(kept);
    b.left.insert(std::lower_bound(b.left.begin(), b.left.end(), v), v);
    return true;
}

// Uniformly removes right vertices until the biclique is bounded with the
// maximum possible right side, 2^|left| - 1. Precondition: not bounded.
inline Biclique restrict_seed(Biclique b, Rng& rng) {
    if (is_bounded(b)) throw std::invalid_argument("restrict_seed: biclique already bounded");
    const std::size_t target = (std::size_t{1} << b.left.size()) - 1;
    while (b.right.size() > target) {
        std::size_t i = rng.index(b.right.size());
        b.right.erase(b.right.begin() + static_cast<std::ptrdiff_t>(i));
    }
    return b;
}

// Kills the biclique's vertices. Vertices must all be alive.
inline void remove_biclique(BipartiteGraph& g, const Biclique& b) {
    for (int c : b.right)
        if (!g.right_alive(c)) throw std::invalid_argument("remove_biclique: dead right vertex");
    for (int v : b.left)
        if (!g.left_alive(v)) throw std::invalid_argument("remove_biclique: dead left vertex");
    for (int c : b.right) g.kill_right(c);
    for (int v : b.left) g.kill_left(v);
}

// Keeps only seeds that survive the removal of `removed`: both left vertices
// alive and outside removed.left, right side re-filtered to alive vertices
// and still nonempty.
inline std::vector<Seed> remove_invalid_seeds(std::vector<Seed> seeds, const BipartiteGraph& g,
                                              const Biclique& removed) {
    std::vector<Seed> kept;
    kept.reserve(seeds.size());
    for (Seed& s : seeds) {
        bool left_ok = true;
        for (int v : s.left) {
            if (!g.left_alive(v) ||
                std::binary_search(removed.left.begin(), removed.left.end(), v)) {
                left_ok = false;
                break;
            }
        }
        if (!left_ok) continue;
        std::vector<int> right;
        right.reserve(s.right.size());
        for (int c : s.right)
            if (g.right_alive(c)) right.push_back(c);
        if (right.empty()) continue;
        kept.push_back(Seed{s.left, std::move(right)});
    }
    return kept;
}

// Success test: if a matching saturates the alive right vertices, the rest of
// the graph is coverable by K_{1,1} bicliques, which get appended to cover.
inline bool test_matched(const BipartiteGraph& g, BicliqueCover& cover) {
    if (g.alive_right_count() > g.alive_left_count()) return false;
    Matching matching = maximum_matching(g);
    if (matching.cardinality != g.alive_right_count()) return false;
    for (int c = 0; c < g.m_right(); ++c)
        if (g.right_alive(c)) cover.push_back(Biclique{{matching.right_to_left[c]}, {c}});
    return true;
}

// Greedy bounded-cover search. Works on a private copy of g; the input graph
// is never mutated. t bounds biclique left sides (nullopt = unbounded, t >= 2
// otherwise). Returns a cover valid for g, or nullopt when the heuristic gets
// stuck (which proves nothing about coverability).
inline std::optional<BicliqueCover> find_cover(const BipartiteGraph& g, std::optional<int> t,
                                               Strategy strategy, Rng& rng) {
    if (t && *t < 2) throw std::invalid_argument("find_cover: t must be >= 2 or unbounded");
    BipartiteGraph work = g;
    BicliqueCover cover;
    if (!unit_g_propagation(work, cover)) return std::nullopt;
    std::vector<Seed> seeds = generate_seeds(work);
    bool matched = false;
    while (!seeds.empty()) {
        if (test_matched(work, cover)) {
            matched = true;
            break;
        }
        Biclique b;
        {
            const Seed& s = choose_seed(seeds, strategy, rng);
            b.left.assign(s.left.begin(), s.left.end());
            b.right = s.right;
        }
        while ((!t || static_cast<int>(b.left.size()) < *t) && !is_bounded(b)) {
            if (!expand_seed(work, b, rng)) break;
        }
        if (!is_bounded(b)) b = restrict_seed(std::move(b), rng);
        remove_biclique(work, b);
        cover.push_back(b);
        if (!unit_g_propagation(work, cover)) return std::nullopt;
        seeds = remove_invalid_seeds(std::move(seeds), work, b);
    }
    // Seeds can run out exactly when the leftover graph becomes matched, so
    // the exhaustion exit gets one final matched test before giving up.
    if (!matched && !test_matched(work, cover)) return std::nullopt;
    return cover;
}

// Satisfying assignment from a bounded biclique cover of the formula's
// incidence graph. Each clause whose vertex lies in biclique B rules out the
// single assignment of B's variables that falsifies its literals there;
// boundedness leaves at least one free pattern, found by scanning upward from
// zero (at most |right| patterns are ruled out, so the scan stays short no
// matter how large the left side is). Variables outside the cover get false.
inline Assignment assignment_from_cover(const CnfFormula& f, const BicliqueCover& cover) {
    BipartiteGraph g = incidence_graph(f);
    CoverValidation validation = validate_cover(g, cover);
    if (!validation.ok())
        throw std::invalid_argument("assignment_from_cover: invalid cover: " +
                                    validation.to_string());
    Assignment a(static_cast<std::size_t>(f.n_vars), false);
    for (const Biclique& b : cover) {
        std::unordered_set<std::uint64_t> forbidden;
        for (int c : b.right) {
            const auto& clause = f.clauses[static_cast<std::size_t>(c)];
            std::uint64_t mask = 0;
            for (std::size_t i = 0; i < b.left.size(); ++i) {
                int var = b.left[i] + 1;
                for (int l : clause) {
                    if (std::abs(l) == var) {
                        // pattern falsifying the literal: positive literal
                        // falsified by false (bit 0), negative by true (bit 1)
                        if (l < 0 && i < 64) mask |= std::uint64_t{1} << i;
                        break;
                    }
                }
            }
            forbidden.insert(mask);
        }
        std::uint64_t pick = 0;
        while (forbidden.count(pick)) ++pick;
        for (std::size_t i = 0; i < b.left.size() && i < 64; ++i)
            a[static_cast<std::size_t>(b.left[i])] = ((pick >> i) & 1) != 0;
    }
    return a;
}

} // namespace bcsat
