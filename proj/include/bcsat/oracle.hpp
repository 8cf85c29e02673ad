#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "bcsat/bipartite_graph.hpp"
#include "bcsat/cnf.hpp"
#include "bcsat/encoder.hpp"

namespace bcsat {
namespace oracle {

// Oracles exist to check the fast paths, so they take the slowest defensible
// route and refuse inputs big enough to hang. Guards throw this.
class GuardError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Maximum matching cardinality by exhaustive branching over right vertices.
// Guard: alive_left + alive_right <= 20.
inline int brute_force_matching(const BipartiteGraph& g) {
    if (g.alive_left_count() + g.alive_right_count() > 20)
        throw GuardError("brute_force_matching: graph too large (alive vertices > 20)");
    std::vector<int> rights;
    for (int c = 0; c < g.m_right(); ++c)
        if (g.right_alive(c)) rights.push_back(c);
    int best = 0;
    auto rec = [&](auto&& self, std::size_t idx, std::uint32_t used, int size) -> void {
        if (size + static_cast<int>(rights.size() - idx) <= best) return;
        if (idx == rights.size()) {
            best = size;
            return;
        }
        for (int v : g.right_neighbors(rights[idx])) {
            if (!g.left_alive(v) || (used & (std::uint32_t{1} << v))) continue;
            self(self, idx + 1, used | (std::uint32_t{1} << v), size + 1);
        }
        self(self, idx + 1, used, size);
    };
    rec(rec, 0, 0, 0);
    return best;
}

// Bounded t-biclique cover existence by exhaustive search over the FULL
// biclique enumeration (every bounded biclique, straight from the
// definition; independent of the canonicalized search and encoding paths).
// Guard: alive_left + alive_right <= 14.
inline bool exact_cover_exists(const BipartiteGraph& g, std::optional<int> t = std::nullopt) {
    if (g.alive_left_count() + g.alive_right_count() > 14)
        throw GuardError("exact_cover_exists: graph too large (alive vertices > 14)");
    if (t && *t < 1) throw std::invalid_argument("exact_cover_exists: t must be >= 1");
    const int n = g.n_left(), m = g.m_right();
    BicliqueCatalog cat = enumerate_bicliques(g, t ? *t : std::max(1, n), EnumerationMode::Full);
    std::vector<std::uint32_t> left_mask(cat.entries.size(), 0), right_mask(cat.entries.size(), 0);
    for (std::size_t i = 0; i < cat.entries.size(); ++i) {
        for (int v : cat.entries[i].left) left_mask[i] |= std::uint32_t{1} << v;
        for (int c : cat.entries[i].right) right_mask[i] |= std::uint32_t{1} << c;
    }
    std::uint32_t all_rights = 0;
    for (int c = 0; c < m; ++c)
        if (g.right_alive(c)) all_rights |= std::uint32_t{1} << c;
    std::unordered_map<std::uint64_t, bool> memo;
    auto rec = [&](auto&& self, std::uint32_t used_left, std::uint32_t covered) -> bool {
        if ((covered & all_rights) == all_rights) return true;
        std::uint64_t key = (static_cast<std::uint64_t>(used_left) << 32) | covered;
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        int c = 0;
        while ((covered >> c) & 1 || !((all_rights >> c) & 1)) ++c; // first uncovered alive right
        bool found = false;
        for (int id : cat.by_right[static_cast<std::size_t>(c)]) {
            if (left_mask[static_cast<std::size_t>(id)] & used_left) continue;
            if (self(self, used_left | left_mask[static_cast<std::size_t>(id)],
                     covered | right_mask[static_cast<std::size_t>(id)])) {
                found = true;
                break;
            }
        }
        memo.emplace(key, found);
        return found;
    };
    return rec(rec, 0, 0);
}

// Exhaustive SAT with unit propagation and chronological backtracking; no
// learning, no heuristics. Guard: n_vars <= 2048, sized so that cover
// encodings of every small graph the test sweeps visit stay admissible.
inline std::optional<Assignment> brute_force_sat(const CnfFormula& f) {
    if (f.n_vars > 2048) throw GuardError("brute_force_sat: too many variables (> 2048)");
    for (const auto& cl : f.clauses)
        if (cl.empty()) return std::nullopt;
    std::vector<std::int8_t> value(static_cast<std::size_t>(f.n_vars), -1);
    auto rec = [&](auto&& self) -> bool {
        std::vector<int> assigned_here;
        auto undo = [&]() {
            for (int v : assigned_here) value[static_cast<std::size_t>(v)] = -1;
        };
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& cl : f.clauses) {
                bool sat = false;
                int unassigned = 0, last = 0;
                for (int l : cl) {
                    std::int8_t v = value[static_cast<std::size_t>(std::abs(l)) - 1];
                    if (v == -1) {
                        ++unassigned;
                        last = l;
                    } else if (v == (l > 0 ? 1 : 0)) {
                        sat = true;
                        break;
                    }
                }
                if (sat) continue;
                if (unassigned == 0) {
                    undo();
                    return false;
                }
                if (unassigned == 1) {
                    value[static_cast<std::size_t>(std::abs(last)) - 1] = last > 0 ? 1 : 0;
                    assigned_here.push_back(std::abs(last) - 1);
                    changed = true;
                }
            }
        }
        int pick = -1;
        for (int v = 0; v < f.n_vars; ++v) {
            if (value[static_cast<std::size_t>(v)] == -1) {
                pick = v;
                break;
            }
        }
        if (pick == -1) return true;
        for (std::int8_t val : {std::int8_t{1}, std::int8_t{0}}) {
            value[static_cast<std::size_t>(pick)] = val;
            if (self(self)) return true;
        }
        value[static_cast<std::size_t>(pick)] = -1;
        undo();
        return false;
    };
    if (!rec(rec)) return std::nullopt;
    Assignment a(static_cast<std::size_t>(f.n_vars), false);
    for (int v = 0; v < f.n_vars; ++v) a[static_cast<std::size_t>(v)] = value[v] == 1;
    return a;
}

} // namespace oracle
} // namespace bcsat
