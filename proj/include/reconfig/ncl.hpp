#ifndef RECONFIG_NCL_HPP
#define RECONFIG_NCL_HPP

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "reconfig/core.hpp"

namespace reconfig {

// Nondeterministic constraint logic: edge-weighted graphs whose nodes all
// have weight 2, with red edges (weight 1) and blue edges (weight 2). An
// orientation is legal when every node's incoming weight is at least 2.

enum class NodeKind { And, Or };
enum class EdgeColor { Red, Blue };

inline int edge_weight(EdgeColor c) { return c == EdgeColor::Red ? 1 : 2; }

struct NclNode {
    std::string id;
    NodeKind kind;
};

struct NclEdge {
    std::string id;
    std::string u, v;  // normalized so u <= v
    EdgeColor color;
};

// Orientation of every edge, aligned with ConstraintGraph::edges() order.
// toward_u[i] is true when edge i points at its lexicographically smaller
// endpoint; this is also the global polarity convention of the NAE-SAT
// compiler (edge variable true <=> edge points at the smaller endpoint).
struct Orientation {
    std::vector<std::uint8_t> toward_u;

    auto operator<=>(const Orientation&) const = default;
};

class ConstraintGraph {
  public:
    ConstraintGraph() = default;

    // Sorts nodes and edges by id and normalizes edge endpoints (u <= v).
    // Duplicate ids are rejected outright; all other shape violations
    // (degrees, colors, self-loops, dangling endpoints) are left for
    // validate_constraint_graph to report.
    ConstraintGraph(std::vector<NclNode> nodes, std::vector<NclEdge> edges)
        : nodes_(std::move(nodes)), edges_(std::move(edges)) {
        std::sort(nodes_.begin(), nodes_.end(),
                  [](const NclNode& a, const NclNode& b) { return a.id < b.id; });
        std::sort(edges_.begin(), edges_.end(),
                  [](const NclEdge& a, const NclEdge& b) { return a.id < b.id; });
        for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
            if (nodes_[i].id == nodes_[i + 1].id)
                fail(Errc::invalid_input, "duplicate node id '" + nodes_[i].id + "'");
        for (std::size_t i = 0; i + 1 < edges_.size(); ++i)
            if (edges_[i].id == edges_[i + 1].id)
                fail(Errc::invalid_input, "duplicate edge id '" + edges_[i].id + "'");
        for (auto& e : edges_) {
            if (e.v < e.u) std::swap(e.u, e.v);
        }
        for (std::size_t i = 0; i < nodes_.size(); ++i) node_index_[nodes_[i].id] = i;
        for (std::size_t i = 0; i < edges_.size(); ++i) edge_index_[edges_[i].id] = i;
    }

    const std::vector<NclNode>& nodes() const { return nodes_; }
    const std::vector<NclEdge>& edges() const { return edges_; }

    bool has_node(const std::string& id) const { return node_index_.count(id) != 0; }

    std::size_t node_index(const std::string& id) const {
        auto it = node_index_.find(id);
        if (it == node_index_.end()) fail(Errc::invalid_input, "unknown node id '" + id + "'");
        return it->second;
    }

    std::size_t edge_index(const std::string& id) const {
        auto it = edge_index_.find(id);
        if (it == edge_index_.end()) fail(Errc::invalid_input, "unknown edge id '" + id + "'");
        return it->second;
    }

    // Incident edge indices of a node, in edge-id order (parallel edges kept).
    std::vector<std::size_t> incident_edges(const std::string& node_id) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < edges_.size(); ++i)
            if (edges_[i].u == node_id || edges_[i].v == node_id) out.push_back(i);
        return out;
    }

  private:
    std::vector<NclNode> nodes_;
    std::vector<NclEdge> edges_;
    std::map<std::string, std::size_t> node_index_;
    std::map<std::string, std::size_t> edge_index_;
};

struct ValidationIssue {
    std::string subject;  // node or edge id
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
};

// Checks the degree/color discipline: AND nodes carry exactly one blue and
// two red edges, OR nodes exactly three blue edges; self-loops and dangling
// endpoints are rejected. Reports every violation rather than stopping at
// the first.
inline ValidationReport validate_constraint_graph(const ConstraintGraph& g) {
    ValidationReport report;
    for (const auto& e : g.edges()) {
        if (e.u == e.v)
            report.issues.push_back({e.id, "self-loop at node '" + e.u + "'"});
        if (!g.has_node(e.u))
            report.issues.push_back({e.id, "endpoint '" + e.u + "' is not a node"});
        if (!g.has_node(e.v))
            report.issues.push_back({e.id, "endpoint '" + e.v + "' is not a node"});
    }
    for (const auto& n : g.nodes()) {
        int blue = 0, red = 0;
        for (std::size_t ei : g.incident_edges(n.id)) {
            const auto& e = g.edges()[ei];
            int mult = (e.u == n.id) + (e.v == n.id);  // loops count twice
            (e.color == EdgeColor::Blue ? blue : red) += mult;
        }
        if (n.kind == NodeKind::And && (blue != 1 || red != 2))
            report.issues.push_back({n.id, "AND node needs 1 blue + 2 red edges, has " +
                                               std::to_string(blue) + " blue + " +
                                               std::to_string(red) + " red"});
        if (n.kind == NodeKind::Or && (blue != 3 || red != 0))
            report.issues.push_back({n.id, "OR node needs exactly 3 blue edges, has " +
                                               std::to_string(blue) + " blue + " +
                                               std::to_string(red) + " red"});
    }
    return report;
}

namespace detail {

inline void require_matching_orientation(const ConstraintGraph& g, const Orientation& o) {
    if (o.toward_u.size() != g.edges().size())
        fail(Errc::edge_set_mismatch,
             "orientation covers " + std::to_string(o.toward_u.size()) + " edges, graph has " +
                 std::to_string(g.edges().size()));
}

inline std::vector<int> incoming_weights(const ConstraintGraph& g, const Orientation& o) {
    std::vector<int> in(g.nodes().size(), 0);
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
        const auto& e = g.edges()[i];
        const std::string& target = o.toward_u[i] ? e.u : e.v;
        in[g.node_index(target)] += edge_weight(e.color);
    }
    return in;
}

}  // namespace detail

inline bool is_legal_orientation(const ConstraintGraph& g, const Orientation& o) {
    detail::require_matching_orientation(g, o);
    for (int w : detail::incoming_weights(g, o))
        if (w < 2) return false;
    return true;
}

// Edge indices whose single reversal keeps the orientation legal. Legality
// is local: a flip can only change the incoming weight of its endpoints.
inline std::vector<std::size_t> legal_flips(const ConstraintGraph& g, const Orientation& o) {
    detail::require_matching_orientation(g, o);
    std::vector<int> in = detail::incoming_weights(g, o);
    for (int w : in)
        if (w < 2) fail(Errc::illegal_start, "orientation is not legal");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
        const auto& e = g.edges()[i];
        int w = edge_weight(e.color);
        std::size_t from = g.node_index(o.toward_u[i] ? e.u : e.v);
        std::size_t to = g.node_index(o.toward_u[i] ? e.v : e.u);
        if (in[from] - w >= 2 && in[to] + w >= 2) out.push_back(i);
    }
    return out;
}

inline Orientation flipped(Orientation o, std::size_t edge) {
    o.toward_u[edge] = !o.toward_u[edge];
    return o;
}

// Problem binding for the C2C move relation (single edge flips between
// legal orientations).
struct NclModel {
    using Config = Orientation;

    const ConstraintGraph* graph = nullptr;

    bool feasible(const Config& c) const { return is_legal_orientation(*graph, c); }

    std::vector<Config> neighbors(const Config& c) const {
        std::vector<Config> out;
        for (std::size_t e : legal_flips(*graph, c)) out.push_back(flipped(c, e));
        return out;
    }

    std::string encode(const Config& c) const { return encode_bits(c.toward_u); }
};

}  // namespace reconfig

#endif
