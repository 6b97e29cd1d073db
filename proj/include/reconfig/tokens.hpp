#ifndef RECONFIG_TOKENS_HPP
#define RECONFIG_TOKENS_HPP

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "reconfig/core.hpp"

namespace reconfig {

// Labeled sliding tokens on a simple undirected graph: placements are
// injective token->vertex maps whose image is an independent set; a move
// slides one token along an edge, preserving independence.

class TokenGraph {
  public:
    TokenGraph() = default;

    TokenGraph(std::vector<std::string> vertices, std::vector<std::pair<int, int>> edges)
        : vertices_(std::move(vertices)), adj_(vertices_.size()) {
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            for (std::size_t j = i + 1; j < vertices_.size(); ++j)
                if (vertices_[i] == vertices_[j])
                    fail(Errc::invalid_input, "duplicate vertex '" + vertices_[i] + "'");
        for (auto [u, v] : edges) {
            if (u < 0 || v < 0 || u >= static_cast<int>(vertices_.size()) ||
                v >= static_cast<int>(vertices_.size()))
                fail(Errc::invalid_input, "edge endpoint out of range");
            if (u == v) fail(Errc::invalid_input, "self-loops are not allowed");
            if (u > v) std::swap(u, v);
            edges_.emplace_back(u, v);
        }
        std::sort(edges_.begin(), edges_.end());
        if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
            fail(Errc::invalid_input, "duplicate edge");
        for (auto [u, v] : edges_) {
            adj_[static_cast<std::size_t>(u)].push_back(v);
            adj_[static_cast<std::size_t>(v)].push_back(u);
        }
        for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());
    }

    std::size_t vertex_count() const { return vertices_.size(); }
    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& neighbors_of(int v) const {
        return adj_[static_cast<std::size_t>(v)];
    }

    bool adjacent(int u, int v) const {
        const auto& nbrs = neighbors_of(u);
        return std::binary_search(nbrs.begin(), nbrs.end(), v);
    }

    int vertex_index(const std::string& name) const {
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            if (vertices_[i] == name) return static_cast<int>(i);
        fail(Errc::invalid_input, "unknown vertex '" + name + "'");
    }

    bool is_regular(int degree) const {
        for (const auto& nbrs : adj_)
            if (static_cast<int>(nbrs.size()) != degree) return false;
        return true;
    }

  private:
    std::vector<std::string> vertices_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_;
};

// placement[k] = vertex index holding token k (token order = label order).
using Placement = std::vector<int>;

struct TokenInstance {
    TokenGraph graph;
    std::vector<std::string> tokens;
    Placement p1, p2;
};

inline void require_placement_shape(const TokenInstance& inst, const Placement& p) {
    if (p.size() != inst.tokens.size())
        fail(Errc::invalid_input, "placement covers " + std::to_string(p.size()) + " of " +
                                      std::to_string(inst.tokens.size()) + " tokens");
    for (int v : p)
        if (v < 0 || v >= static_cast<int>(inst.graph.vertex_count()))
            fail(Errc::invalid_input, "placement vertex out of range");
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (p[i] == p[j])
                fail(Errc::non_injective_placement,
                     "tokens '" + inst.tokens[i] + "' and '" + inst.tokens[j] +
                         "' share a vertex");
}

inline bool is_independent_placement(const TokenInstance& inst, const Placement& p) {
    require_placement_shape(inst, p);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (inst.graph.adjacent(p[i], p[j])) return false;
    return true;
}

// All (token, target vertex) pairs whose slide keeps the placement an
// independent set: the target is a free neighbor of the token's vertex
// with no other occupied vertex in its neighborhood.
inline std::vector<std::pair<int, int>> legal_slides(const TokenInstance& inst,
                                                     const Placement& p) {
    if (!is_independent_placement(inst, p))
        fail(Errc::dependent_placement, "placement is not an independent set");
    std::vector<std::pair<int, int>> out;
    for (std::size_t k = 0; k < p.size(); ++k) {
        for (int target : inst.graph.neighbors_of(p[k])) {
            bool ok = true;
            for (std::size_t j = 0; j < p.size() && ok; ++j) {
                if (j == k) continue;
                if (p[j] == target || inst.graph.adjacent(p[j], target)) ok = false;
            }
            if (ok) out.emplace_back(static_cast<int>(k), target);
        }
    }
    return out;
}

struct TokensModel {
    using Config = Placement;

    const TokenInstance* instance = nullptr;

    bool feasible(const Config& c) const { return is_independent_placement(*instance, c); }

    std::vector<Config> neighbors(const Config& c) const {
        std::vector<Config> out;
        for (auto [token, target] : legal_slides(*instance, c)) {
            Config n = c;
            n[static_cast<std::size_t>(token)] = target;
            out.push_back(std::move(n));
        }
        return out;
    }

    std::string encode(const Config& c) const {
        std::string out;
        for (int v : c) append_field(out, std::to_string(v));
        return out;
    }
};

}  // namespace reconfig

#endif
