#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bcsat/bipartite_graph.hpp"

namespace bcsat {

// Complete bipartite subgraph, both sides sorted ascending.
struct Biclique {
    std::vector<int> left;
    std::vector<int> right;

    bool operator==(const Biclique&) const = default;
};

// Cover = list of bicliques; validity rules live in validate_cover.
using BicliqueCover = std::vector<Biclique>;

// Bounded: fewer right vertices than assignments of the left side,
// |right| < 2^|left|. Left sides of 64+ vertices are always bounded
// (no realizable right side reaches 2^64).
inline bool is_bounded(std::size_t left_size, std::size_t right_size) {
    if (left_size >= 64) return true;
    return right_size < (std::uint64_t{1} << left_size);
}

inline bool is_bounded(const Biclique& b) { return is_bounded(b.left.size(), b.right.size()); }

enum class CoverDefect {
    Malformed,      // unsorted/duplicate entries or vertex out of range
    DeadVertex,     // biclique uses a killed vertex
    NotComplete,    // missing edge between the two sides
    NotBounded,     // |right| >= 2^|left|
    LeftTooLarge,   // |left| exceeds the size bound t
    LeftOverlap,    // left sides of two bicliques intersect
    RightUncovered, // alive right vertex missing from every biclique
};

struct CoverIssue {
    CoverDefect kind;
    int biclique; // index into the cover, -1 for coverage issues
    int vertex;   // offending vertex (side implied by the defect), -1 if n/a

    std::string to_string() const {
        std::ostringstream out;
        switch (kind) {
        case CoverDefect::Malformed: out << "malformed biclique"; break;
        case CoverDefect::DeadVertex: out << "dead vertex"; break;
        case CoverDefect::NotComplete: out << "missing edge"; break;
        case CoverDefect::NotBounded: out << "unbounded biclique"; break;
        case CoverDefect::LeftTooLarge: out << "left side exceeds bound"; break;
        case CoverDefect::LeftOverlap: out << "overlapping left sides"; break;
        case CoverDefect::RightUncovered: out << "uncovered right vertex"; break;
        }
        if (biclique >= 0) out << " (biclique " << biclique << ")";
        if (vertex >= 0) out << " (vertex " << vertex + 1 << ")";
        return out.str();
    }
};

struct CoverValidation {
    std::vector<CoverIssue> issues;

    bool ok() const { return issues.empty(); }
    explicit operator bool() const { return ok(); }

    std::string to_string() const {
        if (ok()) return "valid";
        std::string s;
        for (const auto& i : issues) {
            if (!s.empty()) s += "; ";
            s += i.to_string();
        }
        return s;
    }
};

// Checks that cover is a bounded t-biclique cover of the alive part of g:
// every biclique complete, bounded, with |left| <= t (if t is given), left
// sides pairwise disjoint, and every alive right vertex covered. Collects
// all defects instead of stopping at the first.
inline CoverValidation validate_cover(const BipartiteGraph& g, const BicliqueCover& cover,
                                      std::optional<int> t = std::nullopt) {
    CoverValidation result;
    auto issue = [&](CoverDefect kind, int b, int vertex) {
        result.issues.push_back(CoverIssue{kind, b, vertex});
    };
    std::vector<std::uint8_t> left_used(static_cast<std::size_t>(g.n_left()), 0);
    std::vector<std::uint8_t> right_covered(static_cast<std::size_t>(g.m_right()), 0);
    for (int bi = 0; bi < static_cast<int>(cover.size()); ++bi) {
        const Biclique& b = cover[static_cast<std::size_t>(bi)];
        bool shape_ok = true;
        auto check_side = [&](const std::vector<int>& side, int bound) {
            for (std::size_t i = 0; i < side.size(); ++i) {
                if (side[i] < 0 || side[i] >= bound) {
                    issue(CoverDefect::Malformed, bi, -1);
                    shape_ok = false;
                    return;
                }
                if (i > 0 && side[i] <= side[i - 1]) {
                    issue(CoverDefect::Malformed, bi, -1);
                    shape_ok = false;
                    return;
                }
            }
        };
        check_side(b.left, g.n_left());
        check_side(b.right, g.m_right());
        if (!shape_ok) continue;
        for (int v : b.left)
            if (!g.left_alive(v)) issue(CoverDefect::DeadVertex, bi, v);
        for (int c : b.right) {
            if (!g.right_alive(c)) {
                issue(CoverDefect::DeadVertex, bi, c);
            } else {
                right_covered[static_cast<std::size_t>(c)] = 1;
            }
        }
        for (int v : b.left)
            for (int c : b.right)
                if (!g.has_edge(v, c)) issue(CoverDefect::NotComplete, bi, c);
        if (!is_bounded(b)) issue(CoverDefect::NotBounded, bi, -1);
        if (t && static_cast<int>(b.left.size()) > *t) issue(CoverDefect::LeftTooLarge, bi, -1);
        for (int v : b.left) {
            if (left_used[static_cast<std::size_t>(v)])
                issue(CoverDefect::LeftOverlap, bi, v);
            else
                left_used[static_cast<std::size_t>(v)] = 1;
        }
    }
    for (int c = 0; c < g.m_right(); ++c)
        if (g.right_alive(c) && !right_covered[static_cast<std::size_t>(c)])
            issue(CoverDefect::RightUncovered, -1, c);
    return result;
}

// One line per biclique: "b <left...> | <right...>", 1-based.
inline void write_cover(std::ostream& out, const BicliqueCover& cover) {
    for (const Biclique& b : cover) {
        out << 'b';
        for (int v : b.left) out << ' ' << v + 1;
        out << " |";
        for (int c : b.right) out << ' ' << c + 1;
        out << '\n';
    }
}

} // namespace bcsat
