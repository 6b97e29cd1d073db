#ifndef RECONFIG_HYPERCUBE_HPP
#define RECONFIG_HYPERCUBE_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "reconfig/core.hpp"
#include "reconfig/exactcover.hpp"

namespace reconfig {

// Constrained hypercube paths: 0/1 vertices subject to two-sided row bounds
// on integer column sums, moves flip one coordinate. Bounds are stored
// natively as lower <= A*x <= upper; rows with no real upper bound carry the
// attainable maximum so all arithmetic stays finite.

using CubeVertex = std::vector<std::uint8_t>;

struct PolytopeInstance {
    int n = 0;  // items / hypercube dimension
    int d = 0;  // constraint rows
    std::vector<std::vector<std::int64_t>> columns;  // n columns of d non-negative entries
    std::vector<std::int64_t> lower, upper;          // per row
    CubeVertex start, goal;
};

inline void validate_polytope_instance(const PolytopeInstance& p) {
    if (static_cast<int>(p.columns.size()) != p.n)
        fail(Errc::invalid_input, "column count does not match n");
    for (const auto& col : p.columns) {
        if (static_cast<int>(col.size()) != p.d)
            fail(Errc::invalid_input, "column height does not match d");
        for (auto v : col)
            if (v < 0) fail(Errc::invalid_input, "column entries must be non-negative");
    }
    if (static_cast<int>(p.lower.size()) != p.d || static_cast<int>(p.upper.size()) != p.d)
        fail(Errc::invalid_input, "bound rows do not match d");
    for (int r = 0; r < p.d; ++r)
        if (p.lower[static_cast<std::size_t>(r)] > p.upper[static_cast<std::size_t>(r)])
            fail(Errc::invalid_input, "row lower bound exceeds upper bound");
}

inline std::vector<std::int64_t> row_sums(const PolytopeInstance& p, const CubeVertex& v) {
    if (static_cast<int>(v.size()) != p.n)
        fail(Errc::dimension_mismatch, "vertex length " + std::to_string(v.size()) +
                                           ", instance has n = " + std::to_string(p.n));
    std::vector<std::int64_t> sums(static_cast<std::size_t>(p.d), 0);
    for (int i = 0; i < p.n; ++i)
        if (v[static_cast<std::size_t>(i)])
            for (int r = 0; r < p.d; ++r)
                sums[static_cast<std::size_t>(r)] +=
                    p.columns[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)];
    return sums;
}

inline bool is_inside(const PolytopeInstance& p, const CubeVertex& v) {
    auto sums = row_sums(p, v);
    for (int r = 0; r < p.d; ++r)
        if (sums[static_cast<std::size_t>(r)] < p.lower[static_cast<std::size_t>(r)] ||
            sums[static_cast<std::size_t>(r)] > p.upper[static_cast<std::size_t>(r)])
            return false;
    return true;
}

// Single-bit flips staying inside the polytope. Entries are non-negative,
// so adding an item can only violate upper bounds and removing one only
// lower bounds.
inline std::vector<CubeVertex> cube_neighbors(const PolytopeInstance& p, const CubeVertex& v) {
    auto sums = row_sums(p, v);
    for (int r = 0; r < p.d; ++r)
        if (sums[static_cast<std::size_t>(r)] < p.lower[static_cast<std::size_t>(r)] ||
            sums[static_cast<std::size_t>(r)] > p.upper[static_cast<std::size_t>(r)])
            fail(Errc::outside_start, "vertex lies outside the polytope");
    std::vector<CubeVertex> out;
    for (int i = 0; i < p.n; ++i) {
        const auto& col = p.columns[static_cast<std::size_t>(i)];
        bool adding = !v[static_cast<std::size_t>(i)];
        bool ok = true;
        for (int r = 0; r < p.d && ok; ++r) {
            std::int64_t s = sums[static_cast<std::size_t>(r)];
            std::int64_t e = col[static_cast<std::size_t>(r)];
            if (adding ? s + e > p.upper[static_cast<std::size_t>(r)]
                       : s - e < p.lower[static_cast<std::size_t>(r)])
                ok = false;
        }
        if (ok) {
            CubeVertex n = v;
            n[static_cast<std::size_t>(i)] ^= 1;
            out.push_back(std::move(n));
        }
    }
    return out;
}

struct HypercubeModel {
    using Config = CubeVertex;

    const PolytopeInstance* instance = nullptr;

    bool feasible(const Config& c) const { return is_inside(*instance, c); }
    std::vector<Config> neighbors(const Config& c) const { return cube_neighbors(*instance, c); }
    std::string encode(const Config& c) const { return encode_bits(c); }
};

// Doubled inequality form A*x <= b (upper rows, then negated lower rows),
// for interoperability with solvers that take one-sided constraints.
struct InequalitySystem {
    std::vector<std::vector<std::int64_t>> rows;  // 2d rows of n coefficients
    std::vector<std::int64_t> b;
};

inline InequalitySystem to_inequalities(const PolytopeInstance& p) {
    validate_polytope_instance(p);
    InequalitySystem sys;
    for (int r = 0; r < p.d; ++r) {
        std::vector<std::int64_t> row(static_cast<std::size_t>(p.n));
        for (int i = 0; i < p.n; ++i)
            row[static_cast<std::size_t>(i)] =
                p.columns[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)];
        sys.rows.push_back(row);
        sys.b.push_back(p.upper[static_cast<std::size_t>(r)]);
        for (auto& c : row) c = -c;
        sys.rows.push_back(std::move(row));
        sys.b.push_back(-p.lower[static_cast<std::size_t>(r)]);
    }
    return sys;
}

// --- the many-way exact cover reduction ---------------------------------------

// Dimension layout for c colors: per color j (0-based) a positive value
// row, a negative value row and a count row, then the key row; d = 3c + 1.
struct DimensionLayout {
    int colors = 0;

    int d() const { return 3 * colors + 1; }
    int pos_value(int j) const { return 3 * j; }
    int neg_value(int j) const { return 3 * j + 1; }
    int count(int j) const { return 3 * j + 2; }
    int key() const { return 3 * colors; }
};

// The tuple of the color-j element with 1-based universe index i: value i in
// the color's positive row, |U|+1-i in its negative row, 1 in its count row.
inline std::vector<std::int64_t> f_uni(int index, int color, std::size_t universe_size,
                                       int color_count) {
    if (index < 1 || index > static_cast<int>(universe_size))
        fail(Errc::index_out_of_range, "element index " + std::to_string(index));
    if (color < 1 || color > color_count)
        fail(Errc::index_out_of_range, "color " + std::to_string(color));
    DimensionLayout layout{color_count};
    std::vector<std::int64_t> v(static_cast<std::size_t>(layout.d()), 0);
    v[static_cast<std::size_t>(layout.pos_value(color - 1))] = index;
    v[static_cast<std::size_t>(layout.neg_value(color - 1))] =
        static_cast<std::int64_t>(universe_size) + 1 - index;
    v[static_cast<std::size_t>(layout.count(color - 1))] = 1;
    return v;
}

struct CoverToHypercubeReduction {
    PolytopeInstance instance;
    DimensionLayout layout;
    int family_size = 0;  // set tuples are columns [0, family_size), keys follow

    // Characteristic vector of a cover's set tuples (no key selected).
    CubeVertex f_fig(const Cover& c) const {
        CubeVertex v(static_cast<std::size_t>(instance.n), 0);
        for (int s : c) {
            if (s < 0 || s >= family_size)
                fail(Errc::unknown_set_reference, "cover references family index " + std::to_string(s));
            v[static_cast<std::size_t>(s)] = 1;
        }
        return v;
    }

    // Inverse of f_fig on key-tuple-less vertices.
    Cover f_fig_inverse(const CubeVertex& v) const {
        if (static_cast<int>(v.size()) != instance.n)
            fail(Errc::dimension_mismatch, "vertex length does not match the instance");
        Cover c;
        for (int i = 0; i < instance.n; ++i) {
            if (!v[static_cast<std::size_t>(i)]) continue;
            if (i >= family_size)
                fail(Errc::invalid_input, "vertex selects a key tuple");
            c.push_back(i);
        }
        return c;
    }

    int selected_keys(const CubeVertex& v) const {
        int k = 0;
        for (int i = family_size; i < instance.n; ++i) k += v[static_cast<std::size_t>(i)] ? 1 : 0;
        return k;
    }
};

// Builds the many-way-to-hypercube instance: one set tuple per family set,
// one key tuple per family set (same value rows, zero count rows, 1 in the
// key row); value rows are bounded below by the tight cover sums with the
// attainable maximum above, count rows by the color class sizes, the key
// row by 1.
inline CoverToHypercubeReduction reduce_manyway_to_hypercube(const ExactCoverInstance& inst,
                                                             const Coloring& coloring) {
    validate_exactcover_instance(inst);
    if (inst.family.empty()) fail(Errc::invalid_input, "family is empty");
    if (!coloring_valid(inst, coloring))
        fail(Errc::invalid_coloring, "coloring assigns a shared color within a family set");
    if (!is_exact_cover(inst, inst.start_cover) || !is_exact_cover(inst, inst.goal_cover))
        fail(Errc::not_exact_cover, "instance covers are not exact");

    CoverToHypercubeReduction r;
    r.layout = DimensionLayout{coloring.count};
    r.family_size = static_cast<int>(inst.family.size());

    const std::size_t u = inst.universe.size();
    auto set_tuple = [&](const std::vector<int>& s) {
        std::vector<std::int64_t> t(static_cast<std::size_t>(r.layout.d()), 0);
        for (int e : s) {
            auto v = f_uni(e + 1, coloring.color[static_cast<std::size_t>(e)] + 1, u,
                           coloring.count);
            for (std::size_t i = 0; i < t.size(); ++i) t[i] += v[i];
        }
        return t;
    };

    PolytopeInstance& p = r.instance;
    p.d = r.layout.d();
    p.n = 2 * r.family_size;
    std::map<std::vector<std::int64_t>, int> tuple_index;
    for (int s = 0; s < r.family_size; ++s) {
        auto t = set_tuple(inst.family[static_cast<std::size_t>(s)]);
        auto [it, fresh] = tuple_index.emplace(t, s);
        if (!fresh)
            fail(Errc::invalid_input, "family sets " + std::to_string(it->second) + " and " +
                                          std::to_string(s) + " produce equal set tuples");
        p.columns.push_back(std::move(t));
    }
    for (int s = 0; s < r.family_size; ++s) {
        auto key = p.columns[static_cast<std::size_t>(s)];
        for (int j = 0; j < r.layout.colors; ++j) key[static_cast<std::size_t>(r.layout.count(j))] = 0;
        key[static_cast<std::size_t>(r.layout.key())] = 1;
        p.columns.push_back(std::move(key));
    }

    p.lower.assign(static_cast<std::size_t>(p.d), 0);
    p.upper.assign(static_cast<std::size_t>(p.d), 0);
    std::vector<std::int64_t> class_size(static_cast<std::size_t>(coloring.count), 0);
    for (int e = 0; e < static_cast<int>(u); ++e) {
        int j = coloring.color[static_cast<std::size_t>(e)];
        p.lower[static_cast<std::size_t>(r.layout.pos_value(j))] += e + 1;
        p.lower[static_cast<std::size_t>(r.layout.neg_value(j))] +=
            static_cast<std::int64_t>(u) - e;  // |U| + 1 - (e + 1)
        ++class_size[static_cast<std::size_t>(j)];
    }
    // value rows: minimum from the tight cover sums, maximum attainable
    for (int j = 0; j < r.layout.colors; ++j) {
        p.upper[static_cast<std::size_t>(r.layout.count(j))] = class_size[static_cast<std::size_t>(j)];
    }
    for (int row = 0; row < p.d; ++row) {
        bool value_row = row != r.layout.key() && (row % 3 == 0 || row % 3 == 1);
        if (!value_row) continue;
        std::int64_t attainable = 0;
        for (const auto& col : p.columns) attainable += col[static_cast<std::size_t>(row)];
        p.upper[static_cast<std::size_t>(row)] = attainable;
    }
    p.upper[static_cast<std::size_t>(r.layout.key())] = 1;

    p.start = r.f_fig(inst.start_cover);
    p.goal = r.f_fig(inst.goal_cover);
    if (!is_inside(p, p.start) || !is_inside(p, p.goal))
        fail(Errc::invalid_input, "cover image lies outside the polytope");
    return r;
}

}  // namespace reconfig

#endif
