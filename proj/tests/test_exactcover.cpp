#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "reconfig/exactcover.hpp"
#include "reconfig/statespace.hpp"

#include "generators.hpp"
#include "oracles.hpp"

using namespace reconfig;

namespace {

// U = {0,1}, S = {{0},{1},{0,1}}
ExactCoverInstance tiny_instance() {
    ExactCoverInstance inst;
    inst.universe = {"u0", "u1"};
    inst.family = {{0}, {1}, {0, 1}};
    inst.start_cover = {2};
    inst.goal_cover = {0, 1};
    return inst;
}

}  // namespace

TEST_CASE("is_exact_cover") {
    auto inst = tiny_instance();
    REQUIRE(is_exact_cover(inst, {0, 1}));
    REQUIRE(is_exact_cover(inst, {2}));
    REQUIRE_FALSE(is_exact_cover(inst, {0, 2}));  // element 0 covered twice
    REQUIRE_FALSE(is_exact_cover(inst, {0}));     // element 1 uncovered
    REQUIRE_THROWS_AS(is_exact_cover(inst, {7}), Error);
}

TEST_CASE("split_merge_neighbors on the tiny instance") {
    auto inst = tiny_instance();
    CoverMoves moves(inst);
    SECTION("the only legal split") {
        auto nbrs = split_merge_neighbors(moves, {2});
        REQUIRE(nbrs == std::vector<Cover>{{0, 1}});
    }
    SECTION("the only legal merge") {
        auto nbrs = split_merge_neighbors(moves, {0, 1});
        REQUIRE(nbrs == std::vector<Cover>{{2}});
    }
    SECTION("non-covers are rejected") {
        REQUIRE_THROWS_AS(split_merge_neighbors(moves, {0}), Error);
    }
}

TEST_CASE("manyway_neighbors") {
    SECTION("three-way partition with no two-way splits") {
        ExactCoverInstance inst;
        inst.universe = {"u0", "u1", "u2"};
        inst.family = {{0}, {1}, {2}, {0, 1, 2}};
        inst.start_cover = {3};
        inst.goal_cover = {0, 1, 2};
        CoverMoves moves(inst);
        REQUIRE(split_merge_neighbors(moves, {3}).empty());
        REQUIRE(manyway_neighbors(moves, {3}) == std::vector<Cover>{{0, 1, 2}});
        REQUIRE(manyway_neighbors(moves, {0, 1, 2}) == std::vector<Cover>{{3}});
    }
    SECTION("split/merge neighbors are always many-way neighbors") {
        std::mt19937 rng(41);
        for (int trial = 0; trial < 30; ++trial) {
            auto inst = gen::random_exactcover(rng);
            CoverMoves moves(inst);
            auto sm = split_merge_neighbors(moves, inst.start_cover);
            auto mw = manyway_neighbors(moves, inst.start_cover);
            for (const auto& c : sm)
                REQUIRE(std::find(mw.begin(), mw.end(), c) != mw.end());
        }
    }
}

TEST_CASE("neighbor generators agree with the definition-level oracle") {
    std::mt19937 rng(43);
    for (int trial = 0; trial < 25; ++trial) {
        auto inst = gen::random_exactcover(rng);
        if (inst.family.size() > 14) continue;  // oracle enumerates all subfamilies
        CoverMoves moves(inst);
        for (bool manyway : {false, true}) {
            auto space = oracle::cover_space(inst, manyway);
            for (std::size_t i = 0; i < space.configs.size(); ++i) {
                auto nbrs = manyway ? manyway_neighbors(moves, space.configs[i])
                                    : split_merge_neighbors(moves, space.configs[i]);
                REQUIRE(nbrs.size() == space.adj[i].size());
                for (const auto& n : nbrs) {
                    REQUIRE(space.contains(n));
                    REQUIRE(is_exact_cover(inst, n));
                }
            }
        }
    }
}

TEST_CASE("move reversibility for both relations") {
    std::mt19937 rng(47);
    for (int trial = 0; trial < 20; ++trial) {
        auto inst = gen::random_exactcover(rng);
        CoverMoves moves(inst);
        for (bool manyway : {false, true}) {
            auto gen_nbrs = [&](const Cover& c) {
                return manyway ? manyway_neighbors(moves, c) : split_merge_neighbors(moves, c);
            };
            for (const auto& n : gen_nbrs(inst.start_cover)) {
                auto back = gen_nbrs(n);
                REQUIRE(std::find(back.begin(), back.end(), inst.start_cover) != back.end());
            }
        }
    }
}

TEST_CASE("color_hypergraph") {
    SECTION("a single 3-element set needs 3 colors") {
        ExactCoverInstance inst;
        inst.universe = {"a", "b", "c"};
        inst.family = {{0, 1, 2}};
        auto coloring = color_hypergraph(inst);
        REQUIRE(coloring.count == 3);
        REQUIRE(coloring_valid(inst, coloring));
    }
    SECTION("validity on random instances, checked by pairwise scan") {
        std::mt19937 rng(53);
        for (int trial = 0; trial < 25; ++trial) {
            auto inst = gen::random_exactcover(rng);
            auto coloring = color_hypergraph(inst);
            REQUIRE(coloring_valid(inst, coloring));
            for (const auto& s : inst.family)
                for (std::size_t i = 0; i < s.size(); ++i)
                    for (std::size_t j = i + 1; j < s.size(); ++j)
                        REQUIRE(coloring.color[static_cast<std::size_t>(s[i])] !=
                                coloring.color[static_cast<std::size_t>(s[j])]);
        }
    }
    SECTION("slide-set instances from 3-regular graphs stay within 23 colors") {
        for (const auto& graph : {gen::k4(), gen::k33(), gen::prism(), gen::cube()}) {
            auto inst = gen::token_instance(graph, 1);
            auto r = reduce_tokens_to_exactcover(inst);
            auto coloring = color_hypergraph(r.instance);
            REQUIRE(coloring_valid(r.instance, coloring));
            REQUIRE(coloring.count <= 23);
            // vertex elements use at most 22 colors, tokens one more
            int max_vertex_color = -1;
            for (int v = 0; v < r.vertex_count; ++v)
                max_vertex_color =
                    std::max(max_vertex_color, coloring.color[static_cast<std::size_t>(v)]);
            REQUIRE(max_vertex_color + 1 <= 22);
        }
    }
}

TEST_CASE("reduce_tokens_to_exactcover") {
    SECTION("universe size is |V| + |T|") {
        auto inst = gen::token_instance(gen::k4(), 1);
        auto r = reduce_tokens_to_exactcover(inst);
        REQUIRE(r.instance.universe.size() == 5);
        REQUIRE(r.vertex_count == 4);
        REQUIRE(r.token_count == 1);
    }
    SECTION("K4 slide sets cover the whole vertex set") {
        auto inst = gen::token_instance(gen::k4(), 1);
        auto r = reduce_tokens_to_exactcover(inst);
        // the big set S_ij + {t} is V + {t} for every edge: deduplicated once
        std::vector<int> big{0, 1, 2, 3, 4};
        REQUIRE(r.family_index.count(big) == 1);
    }
    SECTION("the family holds S_ij + {t_k} for every edge and token") {
        auto graph = gen::prism();
        auto inst = gen::token_instance(graph, 2);
        auto r = reduce_tokens_to_exactcover(inst);
        for (auto [vi, vj] : graph.edges()) {
            std::vector<int> s{vi, vj};
            for (int w : graph.neighbors_of(vi)) s.push_back(w);
            for (int w : graph.neighbors_of(vj)) s.push_back(w);
            std::sort(s.begin(), s.end());
            s.erase(std::unique(s.begin(), s.end()), s.end());
            for (int k = 0; k < r.token_count; ++k) {
                std::vector<int> big = s;
                big.push_back(r.vertex_count + k);
                REQUIRE(r.family_index.count(big) == 1);
            }
        }
    }
    SECTION("non-3-regular graphs are rejected") {
        TokenInstance inst;
        inst.graph = gen::path3();
        inst.tokens = {"t1"};
        inst.p1 = {0};
        inst.p2 = {2};
        REQUIRE_THROWS_AS(reduce_tokens_to_exactcover(inst), Error);
    }
    SECTION("dependent placements are rejected") {
        TokenInstance inst;
        inst.graph = gen::k4();
        inst.tokens = {"t1", "t2"};
        inst.p1 = {0, 1};  // adjacent in K4
        inst.p2 = {0, 1};
        REQUIRE_THROWS_AS(reduce_tokens_to_exactcover(inst), Error);
    }
}

TEST_CASE("f_red and its inverse") {
    SECTION("tokens map to pair sets, free vertices to singletons") {
        auto inst = gen::token_instance(gen::k4(), 1);
        auto r = reduce_tokens_to_exactcover(inst);
        Cover c = f_red(r, inst, inst.p1);
        REQUIRE(is_exact_cover(r.instance, c));
        int vertex_with_token = inst.p1[0];
        bool pair_found = false;
        int singleton_count = 0;
        for (int s : c) {
            const auto& elems = r.instance.family[static_cast<std::size_t>(s)];
            if (elems.size() == 2) {
                REQUIRE(elems[0] == vertex_with_token);
                REQUIRE(elems[1] == r.vertex_count);  // the single token element
                pair_found = true;
            } else {
                REQUIRE(elems.size() == 1);
                ++singleton_count;
            }
        }
        REQUIRE(pair_found);
        REQUIRE(singleton_count == 3);
    }
    SECTION("round trip over all prism placements") {
        auto graph = gen::prism();
        for (int tokens = 1; tokens <= 2; ++tokens) {
            auto inst = gen::token_instance(graph, tokens);
            auto r = reduce_tokens_to_exactcover(inst);
            for (const auto& p : gen::independent_placements(inst))
                REQUIRE(f_red_inverse(r, inst, f_red(r, inst, p)) == p);
        }
    }
    SECTION("start and goal covers are the placement images") {
        auto inst = gen::token_instance(gen::k33(), 2);
        auto r = reduce_tokens_to_exactcover(inst);
        REQUIRE(r.instance.start_cover == f_red(r, inst, inst.p1));
        REQUIRE(r.instance.goal_cover == f_red(r, inst, inst.p2));
    }
    SECTION("covers that are not maximally split are rejected by the inverse") {
        auto inst = gen::token_instance(gen::k4(), 1);
        auto r = reduce_tokens_to_exactcover(inst);
        // build a cover with a two-vertex set: merge two singletons
        CoverMoves moves(r.instance);
        for (const auto& n : split_merge_neighbors(moves, r.instance.start_cover)) {
            bool maximally_split = true;
            for (int s : n) {
                int vertices = 0;
                for (int e : r.instance.family[static_cast<std::size_t>(s)])
                    if (e < r.vertex_count) ++vertices;
                if (vertices != 1) maximally_split = false;
            }
            if (!maximally_split) {
                REQUIRE_THROWS_AS(f_red_inverse(r, inst, n), Error);
                return;
            }
        }
        FAIL("no merged cover found");
    }
}

TEST_CASE("Lemma-2 style equivalence on K4, split/merge and many-way") {
    auto inst = gen::token_instance(gen::k4(), 1);
    auto r = reduce_tokens_to_exactcover(inst);
    CoverMoves moves(r.instance);
    auto placements = gen::independent_placements(inst);
    auto token_space = oracle::placement_space(inst);
    for (auto kind : {CoverMoveKind::SplitMerge, CoverMoveKind::ManyWay}) {
        ExactCoverModel model{&moves, kind};
        for (const auto& p1 : placements) {
            for (const auto& p2 : placements) {
                bool expect = token_space.reachable(p1, p2);
                auto result = reachable(model, f_red(r, inst, p1), f_red(r, inst, p2));
                REQUIRE(result.reachable == expect);
            }
        }
    }
}
