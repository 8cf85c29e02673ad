#include <catch_amalgamated.hpp>

#include <map>
#include <set>

#include "bcsat/biclique.hpp"
#include "bcsat/bipartite_graph.hpp"
#include "bcsat/cnf.hpp"
#include "bcsat/cover.hpp"
#include "bcsat/rng.hpp"

using namespace bcsat;

TEST_CASE("is_bounded needs fewer rights than left-side assignments") {
    REQUIRE(is_bounded(1, 0));
    REQUIRE(is_bounded(1, 1));
    REQUIRE(!is_bounded(1, 2));
    REQUIRE(is_bounded(2, 3));
    REQUIRE(!is_bounded(2, 4));
    REQUIRE(!is_bounded(0, 1));
    REQUIRE(is_bounded(0, 0));
    // no realizable right side reaches 2^64
    REQUIRE(is_bounded(64, ~std::size_t{0} >> 1));
    REQUIRE(is_bounded(70, 1000000));
}

TEST_CASE("validate_cover accepts the K2,3 pair cover") {
    BipartiteGraph k23 = graph_from_neighborhoods(2, {{0, 1}, {0, 1}, {0, 1}});
    BicliqueCover cover{{{0, 1}, {0, 1, 2}}};
    REQUIRE(validate_cover(k23, cover).ok());
    REQUIRE(validate_cover(k23, cover, 2).ok());
}

TEST_CASE("validate_cover reports each defect kind") {
    BipartiteGraph g = graph_from_neighborhoods(3, {{0, 1}, {0, 1}, {0, 1}, {2}});
    auto kinds = [&](const BicliqueCover& cover, std::optional<int> t = std::nullopt) {
        std::set<CoverDefect> out;
        for (const auto& issue : validate_cover(g, cover, t).issues) out.insert(issue.kind);
        return out;
    };
    // complete and fine
    REQUIRE(kinds({{{0, 1}, {0, 1, 2}}, {{2}, {3}}}).empty());
    // missing edge: left 2 is not adjacent to right 0
    REQUIRE(kinds({{{2}, {0}}, {{0, 1}, {1, 2}}, {{2}, {3}}}).count(CoverDefect::NotComplete));
    // unbounded: K2,4 needs 4 < 2^2
    BipartiteGraph k24 = graph_from_neighborhoods(2, {{0, 1}, {0, 1}, {0, 1}, {0, 1}});
    auto unbounded = validate_cover(k24, {{{0, 1}, {0, 1, 2, 3}}});
    REQUIRE(unbounded.issues.size() == 1);
    REQUIRE(unbounded.issues[0].kind == CoverDefect::NotBounded);
    // left overlap between bicliques
    REQUIRE(kinds({{{0, 1}, {0, 1, 2}}, {{1, 2}, {3}}}).count(CoverDefect::LeftOverlap));
    // uncovered right vertex
    REQUIRE(kinds({{{0, 1}, {0, 1, 2}}}).count(CoverDefect::RightUncovered));
    // size bound
    REQUIRE(kinds({{{0, 1}, {0, 1, 2}}, {{2}, {3}}}, 1).count(CoverDefect::LeftTooLarge));
    // malformed: unsorted left side
    BicliqueCover unsorted{{{1, 0}, {0}}, {{2}, {3}}};
    REQUIRE(kinds(unsorted).count(CoverDefect::Malformed));
    // dead vertex
    g.kill_left(2);
    REQUIRE(kinds({{{0, 1}, {0, 1, 2}}, {{2}, {3}}}).count(CoverDefect::DeadVertex));
    g = graph_from_neighborhoods(3, {{0, 1}, {0, 1}, {0, 1}, {2}});
    // validation report is machine readable
    auto bad = validate_cover(g, {{{0, 1}, {0, 1}}});
    REQUIRE(!bad.ok());
    REQUIRE(!static_cast<bool>(bad));
    bool found = false;
    for (const auto& issue : bad.issues)
        if (issue.kind == CoverDefect::RightUncovered && issue.vertex == 2) found = true;
    REQUIRE(found);
}

TEST_CASE("validate_cover only requires covering alive rights") {
    BipartiteGraph g = graph_from_neighborhoods(2, {{0, 1}, {0, 1}, {0, 1}, {0, 1}});
    g.kill_right(3);
    BicliqueCover cover{{{0, 1}, {0, 1, 2}}};
    REQUIRE(validate_cover(g, cover).ok());
}

TEST_CASE("unit propagation fails when a right vertex runs out of neighbours") {
    // one variable appearing in two unit clauses
    BipartiteGraph g = graph_from_neighborhoods(1, {{0}, {0}});
    BicliqueCover cover;
    REQUIRE(!unit_g_propagation(g, cover));
    // the first degree-1 vertex was extracted before the failure surfaced
    REQUIRE(cover.size() == 1);
    REQUIRE(cover[0] == Biclique{{0}, {0}});
}

TEST_CASE("unit propagation cascades in FIFO order") {
    // r0:{a}  r1:{a,b}  r2:{b,c}
    BipartiteGraph g = graph_from_neighborhoods(3, {{0}, {0, 1}, {1, 2}});
    BicliqueCover cover;
    REQUIRE(unit_g_propagation(g, cover));
    REQUIRE(cover == BicliqueCover{{{0}, {0}}, {{1}, {1}}, {{2}, {2}}});
    REQUIRE(g.alive_right_count() == 0);
    REQUIRE(g.alive_left_count() == 0);
}

TEST_CASE("unit propagation leaves graphs without degree-1 rights alone") {
    BipartiteGraph g = graph_from_neighborhoods(2, {{0, 1}, {0, 1}, {0, 1}});
    BipartiteGraph before = g;
    BicliqueCover cover;
    REQUIRE(unit_g_propagation(g, cover));
    REQUIRE(cover.empty());
    REQUIRE(g == before);
    // empty graph: nothing to do, trivially fine
    BipartiteGraph empty(4, 0);
    REQUIRE(unit_g_propagation(empty, cover));
    REQUIRE(cover.empty());
}

TEST_CASE("generate_seeds lists left pairs with common neighbours") {
    BipartiteGraph k23 = graph_from_neighborhoods(2, {{0, 1}, {0, 1}, {0, 1}});
    auto seeds = generate_seeds(k23);
    REQUIRE(seeds.size() == 1);
    REQUIRE(seeds[0] == Seed{{0, 1}, {0, 1, 2}});
    // no seeds when no pair shares a right vertex
    BipartiteGraph disjoint = graph_from_neighborhoods(2, {{0}, {1}});
    REQUIRE(generate_seeds(disjoint).empty());
}

TEST_CASE("generate_seeds matches a direct pairwise recount on random graphs") {
    Rng rng(17);
    for (int round = 0; round < 50; ++round) {
        int n = 2 + static_cast<int>(rng.index(8));
        int m = 1 + static_cast<int>(rng.index(10));
        int k = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(std::min(n, 4))));
        BipartiteGraph g = random_graph(n, m, k, rng);
        if (rng.next_bool() && n > 2) g.kill_left(static_cast<int>(rng.index(n)));
        auto seeds = generate_seeds(g);
        std::size_t expected = 0;
        for (int u = 0; u < n; ++u) {
            if (!g.left_alive(u)) continue;
            for (int w = u + 1; w < n; ++w) {
                if (!g.left_alive(w)) continue;
                std::vector<int> pair{u, w};
                auto common = common_neighborhood(g, pair);
                if (common.empty()) continue;
                ++expected;
                bool found = false;
                for (const auto& s : seeds)
                    if (s.left[0] == u && s.left[1] == w && s.right == common) found = true;
                REQUIRE(found);
            }
        }
        REQUIRE(seeds.size() == expected);
    }
}

TEST_CASE("choose_seed follows the strategy and breaks ties uniformly") {
    std::vector<Seed> seeds{
        Seed{{0, 1}, {0}},
        Seed{{0, 2}, {0, 1}},
        Seed{{1, 2}, {0, 1, 2}},
    };
    Rng rng(3);
    REQUIRE(choose_seed(seeds, Strategy::Min, rng).right.size() == 1);
    REQUIRE(choose_seed(seeds, Strategy::Max, rng).right.size() == 3);
    std::map<int, int> rand_freq;
    for (int i = 0; i < 3000; ++i)
        ++rand_freq[choose_seed(seeds, Strategy::Rand, rng).left[0] * 10 +
                    choose_seed(seeds, Strategy::Rand, rng).left[1]];
    for (auto& [key, count] : rand_freq) REQUIRE(count > 3000 / 9 - 150);
    // tie between two minimal seeds gets broken randomly
    std::vector<Seed> tie{Seed{{0, 1}, {0}}, Seed{{2, 3}, {1}}, Seed{{4, 5}, {0, 1}}};
    std::map<int, int> tie_freq;
    for (int i = 0; i < 2000; ++i) ++tie_freq[choose_seed(tie, Strategy::Min, rng).left[0]];
    REQUIRE(tie_freq.size() == 2);
    REQUIRE(tie_freq[0] > 800);
    REQUIRE(tie_freq[2] > 800);
    std::vector<Seed> none;
    REQUIRE_THROWS_AS(choose_seed(none, Strategy::Min, rng), std::invalid_argument);
}

TEST_CASE("expand_seed keeps the largest surviving right side") {
    // K2,4 plus left 2 adjacent to rights 0,1,2 and left 3 adjacent to right 0
    BipartiteGraph g =
        graph_from_neighborhoods(4, {{0, 1, 2, 3}, {0, 1, 2}, {0, 1, 2}, {0, 1}});
    Biclique b{{0, 1}, {0, 1, 2, 3}};
    Rng rng(9);
    REQUIRE(expand_seed(g, b, rng));
    REQUIRE(b == Biclique{{0, 1, 2}, {0, 1, 2}});
    // now bounded: 3 < 2^3
    REQUIRE(is_bounded(b));
    REQUIRE_THROWS_AS(expand_seed(g, b, rng), std::invalid_argument);
}

TEST_CASE("expand_seed halts when every candidate empties the right side") {
    BipartiteGraph g = graph_from_neighborhoods(3, {{0, 1}, {0, 1}, {0, 1}, {0, 1}, {2}});
    Biclique b{{0, 1}, {0, 1, 2, 3}};
    Rng rng(2);
    Biclique before = b;
    REQUIRE(!expand_seed(g, b, rng));
    REQUIRE(b == before);
}

TEST_CASE("expand_seed breaks ties uniformly") {
    // lefts 2 and 3 both keep rights {0,1} from the seed
    BipartiteGraph g = graph_from_neighborhoods(4, {{0, 1, 2, 3}, {0, 1, 2, 3}, {0, 1}, {0, 1}});
    Rng rng(21);
    std::map<int, int> freq;
    for (int i = 0; i < 2000; ++i) {
        Biclique b{{0, 1}, {0, 1, 2, 3}};
        REQUIRE(expand_seed(g, b, rng));
        ++freq[b.left[2]];
    }
    REQUIRE(freq.size() == 2);
    REQUIRE(freq[2] > 800);
    REQUIRE(freq[3] > 800);
}

TEST_CASE("restrict_seed trims to exactly 2^left - 1 rights, uniformly") {
    Rng rng(13);
    std::map<int, int> dropped;
    for (int i = 0; i < 5000; ++i) {
        Biclique b{{0, 1}, {0, 1, 2, 3}};
        Biclique r = restrict_seed(b, rng);
        REQUIRE(r.left == b.left);
        REQUIRE(r.right.size() == 3);
        std::set<int> kept(r.right.begin(), r.right.end());
        REQUIRE(kept.size() == 3);
        for (int c = 0; c < 4; ++c)
            if (!kept.count(c)) ++dropped[c];
    }
    for (auto& [c, count] : dropped) REQUIRE(count > 5000 / 4 - 200);
    Biclique bounded{{0, 1}, {0}};
    REQUIRE_THROWS_AS(restrict_seed(bounded, rng), std::invalid_argument);
}

TEST_CASE("remove_biclique kills exactly the named vertices") {
    BipartiteGraph g = graph_from_neighborhoods(3, {{0, 1, 2}, {0, 1}, {2}});
    remove_biclique(g, Biclique{{0, 1}, {0, 1}});
    REQUIRE(!g.left_alive(0));
    REQUIRE(!g.left_alive(1));
    REQUIRE(g.left_alive(2));
    REQUIRE(!g.right_alive(0));
    REQUIRE(!g.right_alive(1));
    REQUIRE(g.right_alive(2));
    REQUIRE(g.right_degree(2) == 1);
    REQUIRE_THROWS_AS(remove_biclique(g, Biclique{{0}, {}}), std::invalid_argument);
}

TEST_CASE("remove_invalid_seeds drops overlapping, dead and emptied seeds") {
    BipartiteGraph g = graph_from_neighborhoods(5, {{0, 1, 2}, {0, 1, 2, 3}, {2, 3, 4}});
    std::vector<Seed> seeds = generate_seeds(g);
    Biclique removed{{0, 1}, {0}};
    remove_biclique(g, removed);
    auto kept = remove_invalid_seeds(seeds, g, removed);
    // survivors may not mention lefts 0/1 (removed) and drop right 0
    for (const auto& s : kept) {
        for (int v : s.left) {
            REQUIRE(v >= 2);
            REQUIRE(g.left_alive(v));
        }
        for (int c : s.right) REQUIRE(g.right_alive(c));
        REQUIRE(!s.right.empty());
    }
    // the {2,3} and {2,4} and {3,4} pairs survive
    REQUIRE(kept.size() == 3);
    // seed rights were re-filtered against the graph
    for (const auto& s : kept)
        if (s.left[0] == 2 && s.left[1] == 3)
            REQUIRE(s.right == std::vector<int>{1, 2});
}

TEST_CASE("test_matched extends the cover with K1,1 pieces on success") {
    BipartiteGraph g = graph_from_neighborhoods(2, {{0}, {1}});
    BicliqueCover cover;
    REQUIRE(test_matched(g, cover));
    REQUIRE(cover == BicliqueCover{{{0}, {0}}, {{1}, {1}}});
    // failure leaves the cover untouched
    BipartiteGraph bad = graph_from_neighborhoods(1, {{0}, {0}});
    BicliqueCover untouched;
    REQUIRE(!test_matched(bad, untouched));
    REQUIRE(untouched.empty());
}

TEST_CASE("find_cover on K2,3 returns the single pair biclique") {
    BipartiteGraph k23 = graph_from_neighborhoods(2, {{0, 1}, {0, 1}, {0, 1}});
    for (Strategy s : {Strategy::Min, Strategy::Rand, Strategy::Max}) {
        Rng rng(1);
        auto cover = find_cover(k23, 2, s, rng);
        REQUIRE(cover.has_value());
        REQUIRE(*cover == BicliqueCover{{{0, 1}, {0, 1, 2}}});
    }
    // input untouched
    REQUIRE(k23.alive_left_count() == 2);
}

TEST_CASE("find_cover fails where no cover can exist") {
    // K1,2: two clauses, one variable
    BipartiteGraph g = graph_from_neighborhoods(1, {{0}, {0}});
    Rng rng(1);
    REQUIRE(!find_cover(g, 2, Strategy::Rand, rng).has_value());
    // K2,4 complete: pair biclique may keep only 3 rights, no disjoint help
    BipartiteGraph k24 = graph_from_neighborhoods(2, {{0, 1}, {0, 1}, {0, 1}, {0, 1}});
    REQUIRE(!find_cover(k24, 2, Strategy::Rand, rng).has_value());
    REQUIRE_THROWS_AS(find_cover(g, 1, Strategy::Rand, rng), std::invalid_argument);
}

TEST_CASE("find_cover succeeds on matched graphs via the final matched test") {
    // a 3-cycle-ish structure with no valid seeds after propagation is matched
    BipartiteGraph g = graph_from_neighborhoods(3, {{0, 1}, {1, 2}});
    Rng rng(5);
    auto cover = find_cover(g, 2, Strategy::Rand, rng);
    REQUIRE(cover.has_value());
    REQUIRE(validate_cover(g, *cover, 2).ok());
}

TEST_CASE("find_cover output always validates against the original graph") {
    Rng rng(37);
    int successes = 0;
    for (int round = 0; round < 300; ++round) {
        int n = 2 + static_cast<int>(rng.index(15));
        int m = 1 + static_cast<int>(rng.index(20));
        int k = std::min(n, 2 + static_cast<int>(rng.index(3)));
        BipartiteGraph g = random_graph(n, m, k, rng);
        BipartiteGraph original = g;
        std::optional<int> t;
        if (rng.next_bool()) t = 2 + static_cast<int>(rng.index(2));
        Strategy strat = static_cast<Strategy>(rng.index(3));
        Rng heur = rng.derive(round);
        auto cover = find_cover(g, t, strat, heur);
        REQUIRE(g == original);
        if (!cover) continue;
        ++successes;
        REQUIRE(validate_cover(g, *cover, t).ok());
    }
    REQUIRE(successes > 50);
}

TEST_CASE("find_cover respects the size bound") {
    Rng rng(41);
    for (int round = 0; round < 100; ++round) {
        BipartiteGraph g = random_graph(12, 14, 3, rng);
        Rng heur = rng.derive(round);
        auto cover = find_cover(g, 2, Strategy::Max, heur);
        if (!cover) continue;
        for (const auto& b : *cover) REQUIRE(b.left.size() <= 2);
    }
}

TEST_CASE("find_cover is reproducible from the seed") {
    Rng graph_rng(53);
    BipartiteGraph g = random_graph(30, 33, 4, graph_rng);
    Rng a(7), b(7);
    auto c1 = find_cover(g, 2, Strategy::Rand, a);
    auto c2 = find_cover(g, 2, Strategy::Rand, b);
    REQUIRE(c1.has_value() == c2.has_value());
    if (c1) REQUIRE(*c1 == *c2);
}

TEST_CASE("assignment_from_cover picks a free pattern per biclique") {
    // phi = (a | b) & (a | ~b) & (~a | b), covered by the single pair biclique
    CnfFormula f;
    f.n_vars = 2;
    f.add_clause({1, 2});
    f.add_clause({1, -2});
    f.add_clause({-1, 2});
    BicliqueCover cover{{{0, 1}, {0, 1, 2}}};
    Assignment a = assignment_from_cover(f, cover);
    REQUIRE(a == Assignment{true, true});
    REQUIRE(satisfies(f, a));
}

TEST_CASE("assignment_from_cover sets uncovered variables to false") {
    CnfFormula f;
    f.n_vars = 3;
    f.add_clause({1});
    BicliqueCover cover{{{0}, {0}}};
    Assignment a = assignment_from_cover(f, cover);
    REQUIRE(a == Assignment{true, false, false});
}

TEST_CASE("assignment_from_cover rejects invalid covers") {
    CnfFormula f;
    f.n_vars = 2;
    f.add_clause({1, 2});
    f.add_clause({1, -2});
    REQUIRE_THROWS_AS(assignment_from_cover(f, BicliqueCover{}), std::invalid_argument);
    BicliqueCover overlap{{{0}, {0}}, {{0, 1}, {1}}};
    REQUIRE_THROWS_AS(assignment_from_cover(f, overlap), std::invalid_argument);
}

TEST_CASE("covers from find_cover satisfy every polarity variant of the formula") {
    Rng rng(61);
    int checked = 0;
    for (int round = 0; round < 400 && checked < 120; ++round) {
        int n = 3 + static_cast<int>(rng.index(12));
        int m = 2 + static_cast<int>(rng.index(15));
        int k = std::min(n, 2 + static_cast<int>(rng.index(3)));
        BipartiteGraph g = random_graph(n, m, k, rng);
        Rng heur = rng.derive(1000 + round);
        auto cover = find_cover(g, 2, Strategy::Rand, heur);
        if (!cover) continue;
        ++checked;
        CnfFormula f = random_formula(g, rng);
        REQUIRE(satisfies(f, assignment_from_cover(f, *cover)));
        for (int variant = 0; variant < 10; ++variant) {
            CnfFormula v = random_polarity_variant(f, rng);
            REQUIRE(satisfies(v, assignment_from_cover(v, *cover)));
        }
    }
    REQUIRE(checked >= 100);
}

TEST_CASE("cover writer emits one b-line per biclique") {
    BicliqueCover cover{{{0, 1}, {0, 1, 2}}, {{2}, {3}}};
    std::ostringstream out;
    write_cover(out, cover);
    REQUIRE(out.str() == "b 1 2 | 1 2 3\nb 3 | 4\n");
}
