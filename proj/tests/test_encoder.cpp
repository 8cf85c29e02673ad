#include <catch_amalgamated.hpp>

#include <set>

#include "bcsat/bipartite_graph.hpp"
#include "bcsat/encoder.hpp"
#include "bcsat/oracle.hpp"
#include "bcsat/rng.hpp"

using namespace bcsat;

namespace {

// all graphs with n left and m right vertices, enumerated by edge bitmask
BipartiteGraph nth_graph(int n, int m, unsigned mask) {
    BipartiteGraph g(n, m);
    for (int c = 0; c < m; ++c)
        for (int v = 0; v < n; ++v)
            if (mask & (1u << (c * n + v))) g.add_edge(v, c);
    return g;
}

}  // namespace

TEST_CASE("full enumeration lists every bounded biclique of K2,3") {
    BipartiteGraph k23 = graph_from_neighborhoods(2, {{0, 1}, {0, 1}, {0, 1}});
    auto full = enumerate_bicliques(k23, 2, EnumerationMode::Full);
    // per single left: rights {0},{1},{2} (not all pairs or the triple: 3 > 2^1 - 1)
    // per the pair {0,1}: any nonempty subset of {0,1,2} of size <= 3
    REQUIRE(full.entries.size() == 13);
    std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
    for (const auto& b : full.entries) {
        REQUIRE(is_bounded(b));
        REQUIRE(b.right.size() <= (std::size_t{1} << b.left.size()) - 1);
        seen.insert({b.left, b.right});
    }
    REQUIRE(seen.size() == 13);
    REQUIRE(seen.count({{0}, {1}}));
    REQUIRE(seen.count({{0, 1}, {0, 2}}));
    REQUIRE(seen.count({{0, 1}, {0, 1, 2}}));
    REQUIRE(!seen.count({{0}, {0, 1}}));
}

TEST_CASE("canonical enumeration keeps one entry per left set when possible") {
    BipartiteGraph k23 = graph_from_neighborhoods(2, {{0, 1}, {0, 1}, {0, 1}});
    auto canon = enumerate_bicliques(k23, 2, EnumerationMode::Canonical);
    // {0} and {1} each overflow the single-left bound, so their 3 singletons stay;
    // the pair fits and collapses to its full neighbourhood
    REQUIRE(canon.entries.size() == 7);
    int pair_entries = 0;
    for (const auto& b : canon.entries)
        if (b.left.size() == 2) {
            ++pair_entries;
            REQUIRE(b.right == std::vector<int>{0, 1, 2});
        }
    REQUIRE(pair_entries == 1);
}

TEST_CASE("canonical enumeration splits oversized neighbourhoods") {
    // K1,3: N({0}) = {0,1,2} exceeds 2^1 - 1, so all size-1 subsets appear
    BipartiteGraph g = graph_from_neighborhoods(1, {{0}, {0}, {0}});
    auto canon = enumerate_bicliques(g, 2, EnumerationMode::Canonical);
    REQUIRE(canon.entries.size() == 3);
    for (const auto& b : canon.entries) REQUIRE(b.right.size() == 1);
}

TEST_CASE("enumeration respects the left size bound and aliveness") {
    BipartiteGraph g = graph_from_neighborhoods(3, {{0, 1, 2}, {0, 1, 2}});
    auto t1 = enumerate_bicliques(g, 1, EnumerationMode::Full);
    for (const auto& b : t1.entries) REQUIRE(b.left.size() == 1);
    auto t3 = enumerate_bicliques(g, 3, EnumerationMode::Full);
    bool saw_triple = false;
    for (const auto& b : t3.entries) saw_triple |= b.left.size() == 3;
    REQUIRE(saw_triple);
    // k larger than the left side is clamped, not an error
    auto big = enumerate_bicliques(g, 50, EnumerationMode::Full);
    REQUIRE(big.entries.size() == t3.entries.size());
    REQUIRE_THROWS_AS(enumerate_bicliques(g, 0, EnumerationMode::Full), std::invalid_argument);
    g.kill_left(0);
    g.kill_right(1);
    auto alive = enumerate_bicliques(g, 3, EnumerationMode::Full);
    for (const auto& b : alive.entries) {
        for (int v : b.left) REQUIRE(v != 0);
        for (int c : b.right) REQUIRE(c != 1);
    }
}

TEST_CASE("catalog indexes agree with the entry list") {
    Rng rng(5);
    for (int round = 0; round < 20; ++round) {
        int n = 2 + static_cast<int>(rng.index(4));
        int m = 1 + static_cast<int>(rng.index(5));
        BipartiteGraph g = random_graph(n, m, std::min(n, 2), rng);
        for (auto mode : {EnumerationMode::Canonical, EnumerationMode::Full}) {
            auto cat = enumerate_bicliques(g, 2, mode);
            REQUIRE(cat.by_left.size() == static_cast<std::size_t>(n));
            REQUIRE(cat.by_right.size() == static_cast<std::size_t>(m));
            std::vector<std::set<int>> left_expect(n), right_expect(m);
            for (std::size_t i = 0; i < cat.entries.size(); ++i) {
                for (int v : cat.entries[i].left) left_expect[v].insert(static_cast<int>(i));
                for (int c : cat.entries[i].right) right_expect[c].insert(static_cast<int>(i));
            }
            for (int v = 0; v < n; ++v)
                REQUIRE(std::set<int>(cat.by_left[v].begin(), cat.by_left[v].end()) ==
                        left_expect[v]);
            for (int c = 0; c < m; ++c)
                REQUIRE(std::set<int>(cat.by_right[c].begin(), cat.by_right[c].end()) ==
                        right_expect[c]);
        }
    }
}

TEST_CASE("encode_cover on K2,3 canonical has the expected shape") {
    BipartiteGraph k23 = graph_from_neighborhoods(2, {{0, 1}, {0, 1}, {0, 1}});
    auto cat = enumerate_bicliques(k23, 2, EnumerationMode::Canonical);
    auto enc = encode_cover(k23, cat);
    REQUIRE(enc.uncoverable_rights.empty());
    REQUIRE(enc.cnf.n_vars == 7);
    // each left vertex touches 4 entries: C(4,2) = 6 at-most-one pairs each,
    // plus one at-least-one clause per right vertex
    REQUIRE(enc.cnf.clauses.size() == 15);
    int binary_neg = 0, positive = 0;
    for (const auto& cl : enc.cnf.clauses) {
        bool all_neg = true, all_pos = true;
        for (int lit : cl) (lit < 0 ? all_pos : all_neg) = false;
        if (cl.size() == 2 && all_neg) ++binary_neg;
        if (all_pos) ++positive;
    }
    REQUIRE(binary_neg == 12);
    REQUIRE(positive == 3);
}

TEST_CASE("encode_cover flags rights no bounded biclique can reach") {
    BipartiteGraph g = graph_from_neighborhoods(1, {{0}, {}});
    auto cat = enumerate_bicliques(g, 2, EnumerationMode::Full);
    auto enc = encode_cover(g, cat);
    REQUIRE(enc.uncoverable_rights == std::vector<int>{1});
    bool empty_clause = false;
    for (const auto& cl : enc.cnf.clauses) empty_clause |= cl.empty();
    REQUIRE(empty_clause);
    REQUIRE(!oracle::brute_force_sat(enc.cnf).has_value());
}

TEST_CASE("decode_model recovers the chosen bicliques") {
    BipartiteGraph k23 = graph_from_neighborhoods(2, {{0, 1}, {0, 1}, {0, 1}});
    auto cat = enumerate_bicliques(k23, 2, EnumerationMode::Canonical);
    auto enc = encode_cover(k23, cat);
    auto model = oracle::brute_force_sat(enc.cnf);
    REQUIRE(model.has_value());
    BicliqueCover cover = decode_model(cat, *model);
    REQUIRE(validate_cover(k23, cover, 2).ok());
    Assignment wrong(3, false);
    REQUIRE_THROWS_AS(decode_model(cat, wrong), std::invalid_argument);
}

TEST_CASE("encoding satisfiability matches the exact cover oracle exhaustively") {
    for (int n = 1; n <= 3; ++n) {
        for (int m = 1; m <= 3; ++m) {
            unsigned total = 1u << (n * m);
            for (unsigned mask = 0; mask < total; ++mask) {
                BipartiteGraph g = nth_graph(n, m, mask);
                bool exact = oracle::exact_cover_exists(g, 2);
                for (auto mode : {EnumerationMode::Canonical, EnumerationMode::Full}) {
                    auto cat = enumerate_bicliques(g, 2, mode);
                    auto enc = encode_cover(g, cat);
                    bool sat = oracle::brute_force_sat(enc.cnf).has_value();
                    REQUIRE(sat == exact);
                }
            }
        }
    }
}

TEST_CASE("canonical and full encodings stay equisatisfiable on random graphs") {
    Rng rng(11);
    for (int round = 0; round < 150; ++round) {
        int n = 1 + static_cast<int>(rng.index(6));
        int m = 1 + static_cast<int>(rng.index(6));
        int k = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(n)));
        BipartiteGraph g = random_graph(n, m, k, rng);
        int t = 2 + static_cast<int>(rng.index(2));
        auto canon = encode_cover(g, enumerate_bicliques(g, t, EnumerationMode::Canonical));
        auto full = encode_cover(g, enumerate_bicliques(g, t, EnumerationMode::Full));
        bool canon_sat = oracle::brute_force_sat(canon.cnf).has_value();
        bool full_sat = oracle::brute_force_sat(full.cnf).has_value();
        REQUIRE(canon_sat == full_sat);
        // a satisfying model always decodes to a valid bounded cover
        if (canon_sat) {
            auto model = oracle::brute_force_sat(canon.cnf);
            auto cover = decode_model(enumerate_bicliques(g, t, EnumerationMode::Canonical),
                                      *model);
            REQUIRE(validate_cover(g, cover, t).ok());
        }
    }
}

TEST_CASE("models of the full encoding decode to valid covers") {
    Rng rng(23);
    for (int round = 0; round < 60; ++round) {
        int n = 1 + static_cast<int>(rng.index(5));
        int m = 1 + static_cast<int>(rng.index(5));
        BipartiteGraph g = random_graph(n, m, std::min(n, 3), rng);
        auto cat = enumerate_bicliques(g, 2, EnumerationMode::Full);
        auto enc = encode_cover(g, cat);
        auto model = oracle::brute_force_sat(enc.cnf);
        if (!model) continue;
        auto cover = decode_model(cat, *model);
        REQUIRE(validate_cover(g, cover, 2).ok());
    }
}
