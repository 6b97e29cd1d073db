#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "reconfig/hypercube.hpp"
#include "reconfig/statespace.hpp"

#include "generators.hpp"
#include "oracles.hpp"

using namespace reconfig;

namespace {

PolytopeInstance band_instance() {
    // n=3, d=1, columns (1,1,1), row bounds [2,3]
    PolytopeInstance p;
    p.n = 3;
    p.d = 1;
    p.columns = {{1}, {1}, {1}};
    p.lower = {2};
    p.upper = {3};
    p.start = {1, 1, 0};
    p.goal = {0, 1, 1};
    return p;
}

}  // namespace

TEST_CASE("is_inside") {
    SECTION("the all-zero vertex with zero lower bounds") {
        PolytopeInstance p;
        p.n = 2;
        p.d = 1;
        p.columns = {{3}, {4}};
        p.lower = {0};
        p.upper = {5};
        REQUIRE(is_inside(p, {0, 0}));
        REQUIRE(is_inside(p, {1, 0}));
        REQUIRE_FALSE(is_inside(p, {1, 1}));
    }
    SECTION("dimension mismatch is an error") {
        auto p = band_instance();
        REQUIRE_THROWS_AS(is_inside(p, {1, 1}), Error);
    }
}

TEST_CASE("cube_neighbors") {
    SECTION("an unconstrained polytope admits all n flips") {
        PolytopeInstance p;
        p.n = 4;
        p.d = 1;
        p.columns = {{1}, {1}, {1}, {1}};
        p.lower = {0};
        p.upper = {4};
        REQUIRE(cube_neighbors(p, {0, 1, 0, 1}).size() == 4);
    }
    SECTION("band instance at (1,1,0): only the third bit may flip") {
        auto p = band_instance();
        auto nbrs = cube_neighbors(p, {1, 1, 0});
        REQUIRE(nbrs == std::vector<CubeVertex>{{1, 1, 1}});
    }
    SECTION("the literal bounds [2,3] with columns (1,1,2) pin (1,1,0) completely") {
        PolytopeInstance p;
        p.n = 3;
        p.d = 1;
        p.columns = {{1}, {1}, {2}};
        p.lower = {2};
        p.upper = {3};
        REQUIRE(cube_neighbors(p, {1, 1, 0}).empty());
    }
    SECTION("outside start is an error") {
        auto p = band_instance();
        REQUIRE_THROWS_AS(cube_neighbors(p, {0, 0, 0}), Error);
    }
    SECTION("agreement with the enumeration oracle on random instances") {
        std::mt19937 rng(83);
        for (int trial = 0; trial < 25; ++trial) {
            PolytopeInstance p;
            p.n = 2 + static_cast<int>(rng() % 5);
            p.d = 1 + static_cast<int>(rng() % 3);
            for (int i = 0; i < p.n; ++i) {
                std::vector<std::int64_t> col;
                for (int r = 0; r < p.d; ++r) col.push_back(rng() % 4);
                p.columns.push_back(col);
            }
            for (int r = 0; r < p.d; ++r) {
                std::int64_t attainable = 0;
                for (const auto& col : p.columns) attainable += col[static_cast<std::size_t>(r)];
                std::int64_t lo = static_cast<std::int64_t>(rng() % 3);
                p.lower.push_back(std::min(lo, attainable));
                p.upper.push_back(std::min<std::int64_t>(lo + 1 + rng() % 4, attainable));
                if (p.upper.back() < p.lower.back()) p.upper.back() = p.lower.back();
            }
            auto space = oracle::vertex_space(p);
            for (std::size_t i = 0; i < space.configs.size(); ++i) {
                auto nbrs = cube_neighbors(p, space.configs[i]);
                REQUIRE(nbrs.size() == space.adj[i].size());
                for (const auto& n : nbrs) REQUIRE(space.contains(n));
            }
        }
    }
}

TEST_CASE("f_uni places three values in the color's dimensions") {
    SECTION("|U|=3, a2 of color 1") {
        auto v = f_uni(2, 1, 3, 2);
        DimensionLayout layout{2};
        REQUIRE(v.size() == 7);
        REQUIRE(v[static_cast<std::size_t>(layout.pos_value(0))] == 2);
        REQUIRE(v[static_cast<std::size_t>(layout.neg_value(0))] == 2);  // 3 + 1 - 2
        REQUIRE(v[static_cast<std::size_t>(layout.count(0))] == 1);
        for (int r = 3; r < 7; ++r) REQUIRE(v[static_cast<std::size_t>(r)] == 0);
    }
    SECTION("|U|=3, a1 of color 2") {
        auto v = f_uni(1, 2, 3, 2);
        DimensionLayout layout{2};
        REQUIRE(v[static_cast<std::size_t>(layout.pos_value(1))] == 1);
        REQUIRE(v[static_cast<std::size_t>(layout.neg_value(1))] == 3);
        REQUIRE(v[static_cast<std::size_t>(layout.count(1))] == 1);
    }
    SECTION("color-class sums hit the row minimums") {
        // three elements of one color: sum of pos values = 1+2+3, neg = 3+2+1
        std::int64_t pos = 0, neg = 0;
        for (int i = 1; i <= 3; ++i) {
            auto v = f_uni(i, 1, 3, 1);
            pos += v[0];
            neg += v[1];
        }
        REQUIRE(pos == 6);
        REQUIRE(neg == 6);
    }
    SECTION("range checks") {
        REQUIRE_THROWS_AS(f_uni(0, 1, 3, 1), Error);
        REQUIRE_THROWS_AS(f_uni(4, 1, 3, 1), Error);
        REQUIRE_THROWS_AS(f_uni(1, 2, 3, 1), Error);
    }
}

TEST_CASE("reduce_manyway_to_hypercube") {
    ExactCoverInstance inst;
    inst.universe = {"a", "b", "c"};
    inst.family = {{0}, {1}, {2}, {0, 1, 2}, {1, 2}};
    inst.start_cover = {3};
    inst.goal_cover = {0, 1, 2};
    auto coloring = color_hypergraph(inst);
    auto r = reduce_manyway_to_hypercube(inst, coloring);

    SECTION("dimension count is 3c + 1 and columns double the family") {
        REQUIRE(r.instance.d == 3 * coloring.count + 1);
        REQUIRE(r.instance.n == 2 * static_cast<int>(inst.family.size()));
    }
    SECTION("key tuples copy value rows, zero count rows, key row 1") {
        for (int s = 0; s < r.family_size; ++s) {
            const auto& set_col = r.instance.columns[static_cast<std::size_t>(s)];
            const auto& key_col = r.instance.columns[static_cast<std::size_t>(r.family_size + s)];
            for (int j = 0; j < coloring.count; ++j) {
                REQUIRE(key_col[static_cast<std::size_t>(r.layout.pos_value(j))] ==
                        set_col[static_cast<std::size_t>(r.layout.pos_value(j))]);
                REQUIRE(key_col[static_cast<std::size_t>(r.layout.neg_value(j))] ==
                        set_col[static_cast<std::size_t>(r.layout.neg_value(j))]);
                REQUIRE(key_col[static_cast<std::size_t>(r.layout.count(j))] == 0);
            }
            REQUIRE(key_col[static_cast<std::size_t>(r.layout.key())] == 1);
            REQUIRE(set_col[static_cast<std::size_t>(r.layout.key())] == 0);
        }
    }
    SECTION("bounds: tight value minimums, class-size count maximums, key row 1") {
        REQUIRE(r.instance.upper[static_cast<std::size_t>(r.layout.key())] == 1);
        std::vector<std::int64_t> class_size(static_cast<std::size_t>(coloring.count), 0);
        std::vector<std::int64_t> pos_min(static_cast<std::size_t>(coloring.count), 0);
        for (int e = 0; e < 3; ++e) {
            int j = coloring.color[static_cast<std::size_t>(e)];
            ++class_size[static_cast<std::size_t>(j)];
            pos_min[static_cast<std::size_t>(j)] += e + 1;
        }
        for (int j = 0; j < coloring.count; ++j) {
            REQUIRE(r.instance.lower[static_cast<std::size_t>(r.layout.pos_value(j))] ==
                    pos_min[static_cast<std::size_t>(j)]);
            REQUIRE(r.instance.upper[static_cast<std::size_t>(r.layout.count(j))] ==
                    class_size[static_cast<std::size_t>(j)]);
            REQUIRE(r.instance.lower[static_cast<std::size_t>(r.layout.count(j))] == 0);
        }
    }
    SECTION("f_fig is a bijection between covers and key-less vertices") {
        auto v = r.f_fig(inst.start_cover);
        REQUIRE(r.f_fig_inverse(v) == inst.start_cover);
        REQUIRE(is_inside(r.instance, v));
        auto w = r.f_fig(inst.goal_cover);
        REQUIRE(r.f_fig_inverse(w) == inst.goal_cover);
    }
    SECTION("start selects exactly the tight cover and both keys are rejected") {
        CubeVertex two_keys = r.f_fig(inst.start_cover);
        two_keys[static_cast<std::size_t>(r.family_size)] = 1;
        two_keys[static_cast<std::size_t>(r.family_size + 1)] = 1;
        REQUIRE_FALSE(is_inside(r.instance, two_keys));
    }
    SECTION("a tight cover reconfigures only by adding a key tuple") {
        for (const auto& n : cube_neighbors(r.instance, r.instance.start)) {
            int changed = -1;
            for (int i = 0; i < r.instance.n; ++i)
                if (n[static_cast<std::size_t>(i)] != r.instance.start[static_cast<std::size_t>(i)])
                    changed = i;
            REQUIRE(changed >= r.family_size);  // a key tuple index
        }
    }
}

TEST_CASE("reachability equivalence holds when every color class is a singleton") {
    // With one element per color the count rows cap per-element coverage, so
    // every key-block edit is forced to respect set identity and the cube
    // relation mirrors partitions and unions exactly.
    std::mt19937 rng(89);
    int exercised = 0;
    for (int trial = 0; trial < 12; ++trial) {
        auto inst = gen::random_exactcover(rng, 4);
        if (inst.family.size() > 8) continue;
        Coloring discrete;
        discrete.count = static_cast<int>(inst.universe.size());
        for (int e = 0; e < discrete.count; ++e) discrete.color.push_back(e);
        auto r = reduce_manyway_to_hypercube(inst, discrete);
        auto cover_space = oracle::cover_space(inst, true);
        HypercubeModel model{&r.instance};
        for (const auto& c1 : cover_space.configs) {
            for (const auto& c2 : cover_space.configs) {
                bool expect = cover_space.reachable(c1, c2);
                auto result = reachable(model, r.f_fig(c1), r.f_fig(c2));
                REQUIRE(result.reachable == expect);
                ++exercised;
            }
        }
        // one-key invariant and cover tightness over the explored component
        auto comp = explore_component(model, r.f_fig(inst.start_cover));
        for (const auto& v : comp.configs) {
            REQUIRE(r.selected_keys(v) <= 1);
            if (r.selected_keys(v) == 0)
                REQUIRE(is_exact_cover(inst, r.f_fig_inverse(v)));
        }
    }
    REQUIRE(exercised > 0);
}

TEST_CASE("multi-element color classes admit cube transitions with no cover counterpart") {
    // Coverage can migrate across a shared color class inside one key block:
    // adding an over-covering set banks value-row slack (count rows see only
    // the class total), after which a set outside the key's scope becomes
    // removable. The walk below bridges two covers that partitions and
    // unions cannot connect; the divergence is detected, not hidden.
    ExactCoverInstance inst;
    inst.universe = {"u0", "u1", "u2", "u3"};
    inst.family = {{0, 1, 2}, {3}, {0, 1}, {2, 3}, {2}, {0, 3}, {1}};
    inst.start_cover = {0, 1};
    inst.goal_cover = {4, 5, 6};
    Coloring coloring{{0, 1, 2, 1}, 3};  // u1 and u3 share a color
    REQUIRE(coloring_valid(inst, coloring));
    auto cover_space = oracle::cover_space(inst, true);
    REQUIRE_FALSE(cover_space.reachable(inst.start_cover, inst.goal_cover));

    auto r = reduce_manyway_to_hypercube(inst, coloring);
    HypercubeModel model{&r.instance};
    auto result = reachable(model, r.instance.start, r.instance.goal);
    REQUIRE(result.reachable);  // the known leak of the shared-class encoding

    // with singleton classes the same pair is correctly unreachable
    Coloring discrete{{0, 1, 2, 3}, 4};
    auto r2 = reduce_manyway_to_hypercube(inst, discrete);
    HypercubeModel model2{&r2.instance};
    REQUIRE_FALSE(reachable(model2, r2.instance.start, r2.instance.goal).reachable);
}

TEST_CASE("certificates decompose into key-escorted blocks with subset discipline") {
    ExactCoverInstance inst;
    inst.universe = {"a", "b", "c"};
    inst.family = {{0}, {1}, {2}, {0, 1, 2}};
    inst.start_cover = {3};
    inst.goal_cover = {0, 1, 2};
    auto coloring = color_hypergraph(inst);
    auto r = reduce_manyway_to_hypercube(inst, coloring);
    HypercubeModel model{&r.instance};
    auto result = reachable(model, r.instance.start, r.instance.goal);
    REQUIRE(result.reachable);
    const auto& path = *result.certificate;
    int active_key = -1;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        int changed = -1;
        for (int b = 0; b < r.instance.n; ++b)
            if (path[i][static_cast<std::size_t>(b)] != path[i + 1][static_cast<std::size_t>(b)])
                changed = b;
        bool added = path[i + 1][static_cast<std::size_t>(changed)] == 1;
        if (changed >= r.family_size) {
            active_key = added ? changed - r.family_size : -1;
        } else {
            REQUIRE(active_key >= 0);  // set tuples only move under a key
            if (!added) {
                // removed set must be a subset of the active key's set
                const auto& removed = inst.family[static_cast<std::size_t>(changed)];
                const auto& keyset = inst.family[static_cast<std::size_t>(active_key)];
                for (int e : removed)
                    REQUIRE(std::find(keyset.begin(), keyset.end(), e) != keyset.end());
            }
        }
    }
}

TEST_CASE("duplicate set tuples fail fast") {
    ExactCoverInstance inst;
    inst.universe = {"a", "b"};
    inst.family = {{0}, {1}, {0, 1}};
    inst.start_cover = {2};
    inst.goal_cover = {0, 1};
    // an adversarial coloring cannot exist here (the pair set forces two
    // colors), so exercise the guard through a direct duplicate family
    ExactCoverInstance dup;
    dup.universe = {"a", "b", "c", "d"};
    dup.family = {{0, 1}, {2, 3}, {0, 1, 2, 3}};
    dup.start_cover = {2};
    dup.goal_cover = {0, 1};
    // colors: a,c -> 0; b,d -> 1 makes {0,1} and {2,3} equal tuples? no:
    // indices differ. Tuple equality needs equal index multisets per color,
    // which valid colorings rule out; assert the reduction accepts and the
    // tuples are distinct instead.
    auto coloring = color_hypergraph(dup);
    auto r = reduce_manyway_to_hypercube(dup, coloring);
    for (int s = 0; s < r.family_size; ++s)
        for (int t = s + 1; t < r.family_size; ++t)
            REQUIRE(r.instance.columns[static_cast<std::size_t>(s)] !=
                    r.instance.columns[static_cast<std::size_t>(t)]);
}

TEST_CASE("inequality export doubles the rows") {
    auto p = band_instance();
    auto sys = to_inequalities(p);
    REQUIRE(sys.rows.size() == 2);
    REQUIRE(sys.b.size() == 2);
    REQUIRE(sys.rows[0] == std::vector<std::int64_t>{1, 1, 1});
    REQUIRE(sys.b[0] == 3);
    REQUIRE(sys.rows[1] == std::vector<std::int64_t>{-1, -1, -1});
    REQUIRE(sys.b[1] == -2);
}
