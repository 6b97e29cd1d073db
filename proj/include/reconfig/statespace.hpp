#ifndef RECONFIG_STATESPACE_HPP
#define RECONFIG_STATESPACE_HPP

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "reconfig/core.hpp"

namespace reconfig {

// A problem binding: feasibility predicate, neighbor generator and a
// canonical byte encoding. All six problem models implement this shape.
// The neighbor relation must be symmetric and closed under feasibility.
template <typename M>
concept ProblemModel = requires(const M& m, const typename M::Config& c) {
    typename M::Config;
    { m.feasible(c) } -> std::convertible_to<bool>;
    { m.neighbors(c) } -> std::convertible_to<std::vector<typename M::Config>>;
    { m.encode(c) } -> std::convertible_to<std::string>;
};

struct SearchLimits {
    std::uint64_t max_states = 10'000'000;
    std::uint64_t max_moves = 1'000'000;
};

template <typename Config>
struct ReachabilityResult {
    bool reachable = false;
    // Present iff reachable: starts at the start configuration, ends at the
    // goal, consecutive entries are neighbors, shortest in move count with
    // lexicographic tie-breaking on canonical encodings.
    std::optional<std::vector<Config>> certificate;
    std::uint64_t states_explored = 0;
    bool capped = false;  // a capped search never returns; kept for reporting
};

template <typename Config>
struct Component {
    std::vector<Config> configs;      // discovery order (BFS, lex within level)
    std::vector<std::string> encodings;
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // index pairs, each once
    std::uint64_t states_explored = 0;
};

namespace detail {

// Level-synchronous BFS with deterministic expansion: each level is sorted
// by canonical encoding before expansion and neighbor lists are visited in
// encoding order, so parents (hence certificates) are reproducible.
template <ProblemModel M>
struct BfsState {
    using Config = typename M::Config;

    const M& model;
    std::unordered_map<std::string, std::size_t> seen;
    std::vector<Config> nodes;
    std::vector<std::string> encs;
    std::vector<std::size_t> parent;

    explicit BfsState(const M& m) : model(m) {}

    std::size_t add(Config c, const std::string& enc, std::size_t par) {
        std::size_t idx = nodes.size();
        seen.emplace(enc, idx);
        nodes.push_back(std::move(c));
        encs.push_back(enc);
        parent.push_back(par);
        return idx;
    }

    void sort_level(std::vector<std::size_t>& level) const {
        std::sort(level.begin(), level.end(),
                  [this](std::size_t a, std::size_t b) { return encs[a] < encs[b]; });
    }

    // Sorted, de-duplicated (encoding, config) list of feasible neighbors.
    std::vector<std::pair<std::string, Config>> sorted_neighbors(const Config& c) const {
        std::vector<std::pair<std::string, Config>> out;
        for (auto& n : model.neighbors(c)) {
            out.emplace_back(model.encode(n), std::move(n));
        }
        std::sort(out.begin(), out.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        out.erase(std::unique(out.begin(), out.end(),
                              [](const auto& a, const auto& b) { return a.first == b.first; }),
                  out.end());
        return out;
    }
};

}  // namespace detail

// Breadth-first reachability from start to goal. Throws InfeasibleEndpoint
// if either endpoint fails the feasibility predicate and ResourceCapExceeded
// if the limits are hit before the search resolves; "unreachable" is only
// ever reported after exhausting the start's component.
template <ProblemModel M>
ReachabilityResult<typename M::Config> reachable(const M& model,
                                                 const typename M::Config& start,
                                                 const typename M::Config& goal,
                                                 SearchLimits limits = {}) {
    using Config = typename M::Config;
    if (limits.max_states == 0 || limits.max_moves == 0)
        fail(Errc::invalid_input, "search limits must be strictly positive");
    if (!model.feasible(start)) fail(Errc::infeasible_endpoint, "start configuration is infeasible");
    if (!model.feasible(goal)) fail(Errc::infeasible_endpoint, "goal configuration is infeasible");

    const std::string goal_enc = model.encode(goal);
    detail::BfsState<M> bfs(model);

    const std::string start_enc = model.encode(start);
    bfs.add(start, start_enc, 0);
    if (start_enc == goal_enc) {
        return {true, std::vector<Config>{start}, 1, false};
    }

    std::vector<std::size_t> level{0};
    std::uint64_t depth = 0;
    std::optional<std::size_t> goal_idx;

    while (!level.empty() && !goal_idx) {
        if (depth == limits.max_moves)
            fail(Errc::resource_cap,
                 "move limit " + std::to_string(limits.max_moves) + " reached with frontier open");
        bfs.sort_level(level);
        std::vector<std::size_t> next;
        for (std::size_t u : level) {
            for (auto& [enc, cfg] : bfs.sorted_neighbors(bfs.nodes[u])) {
                if (bfs.seen.count(enc)) continue;
                if (bfs.nodes.size() >= limits.max_states)
                    fail(Errc::resource_cap,
                         "state limit " + std::to_string(limits.max_states) + " reached");
                std::size_t idx = bfs.add(std::move(cfg), enc, u);
                if (enc == goal_enc) {
                    goal_idx = idx;
                    break;
                }
                next.push_back(idx);
            }
            if (goal_idx) break;
        }
        level = std::move(next);
        ++depth;
    }

    ReachabilityResult<Config> result;
    result.states_explored = bfs.nodes.size();
    if (!goal_idx) return result;

    std::vector<Config> path;
    for (std::size_t at = *goal_idx;; at = bfs.parent[at]) {
        path.push_back(bfs.nodes[at]);
        if (at == 0) break;
    }
    std::reverse(path.begin(), path.end());
    result.reachable = true;
    result.certificate = std::move(path);
    return result;
}

// Exhaustive exploration of the start's connected component, with all edges
// among its configurations (each undirected edge listed once).
template <ProblemModel M>
Component<typename M::Config> explore_component(const M& model,
                                                const typename M::Config& start,
                                                SearchLimits limits = {}) {
    if (limits.max_states == 0 || limits.max_moves == 0)
        fail(Errc::invalid_input, "search limits must be strictly positive");
    if (!model.feasible(start)) fail(Errc::infeasible_endpoint, "start configuration is infeasible");

    detail::BfsState<M> bfs(model);
    bfs.add(start, model.encode(start), 0);

    std::vector<std::size_t> level{0};
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::uint64_t depth = 0;

    while (!level.empty()) {
        if (depth == limits.max_moves)
            fail(Errc::resource_cap,
                 "move limit " + std::to_string(limits.max_moves) + " reached with frontier open");
        bfs.sort_level(level);
        std::vector<std::size_t> next;
        for (std::size_t u : level) {
            for (auto& [enc, cfg] : bfs.sorted_neighbors(bfs.nodes[u])) {
                auto it = bfs.seen.find(enc);
                std::size_t v;
                if (it == bfs.seen.end()) {
                    if (bfs.nodes.size() >= limits.max_states)
                        fail(Errc::resource_cap,
                             "state limit " + std::to_string(limits.max_states) + " reached");
                    v = bfs.add(std::move(cfg), enc, u);
                    next.push_back(v);
                } else {
                    v = it->second;
                }
                if (u < v) edges.emplace_back(u, v);
                else if (v < u) edges.emplace_back(v, u);
                // u == v cannot happen: moves change the configuration
            }
        }
        level = std::move(next);
        ++depth;
    }

    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    Component<typename M::Config> comp;
    comp.states_explored = bfs.nodes.size();
    comp.configs = std::move(bfs.nodes);
    comp.encodings = std::move(bfs.encs);
    comp.edges = std::move(edges);
    return comp;
}

// Replays a certificate: every entry must be feasible and each consecutive
// pair must be one legal move apart. Malformed input yields false with a
// diagnostic rather than an exception.
template <ProblemModel M>
bool check_certificate(const M& model, const std::vector<typename M::Config>& certificate,
                       std::string* diagnostic = nullptr) {
    auto report = [&](const std::string& msg) {
        if (diagnostic) *diagnostic = msg;
        return false;
    };
    if (certificate.empty()) return report("certificate is empty");
    for (std::size_t i = 0; i < certificate.size(); ++i) {
        try {
            if (!model.feasible(certificate[i]))
                return report("entry " + std::to_string(i) + " is infeasible");
        } catch (const Error& e) {
            return report("entry " + std::to_string(i) + " is malformed: " + e.what());
        }
    }
    for (std::size_t i = 0; i + 1 < certificate.size(); ++i) {
        const std::string next_enc = model.encode(certificate[i + 1]);
        bool adjacent = false;
        for (const auto& n : model.neighbors(certificate[i])) {
            if (model.encode(n) == next_enc) {
                adjacent = true;
                break;
            }
        }
        if (!adjacent)
            return report("entries " + std::to_string(i) + " and " + std::to_string(i + 1) +
                          " are not one move apart");
    }
    if (diagnostic) diagnostic->clear();
    return true;
}

}  // namespace reconfig

#endif
