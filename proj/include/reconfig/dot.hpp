#ifndef RECONFIG_DOT_HPP
#define RECONFIG_DOT_HPP

#include <ostream>
#include <string>
#include <vector>

#include "reconfig/statespace.hpp"

namespace reconfig {

// DOT rendering of a configuration component: nodes are configurations
// labeled by (truncated) canonical encodings with the full encoding in a
// tooltip, undirected edges rendered once with no arrowheads.

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

inline std::string dot_label(const std::string& enc, std::size_t max_len = 16) {
    if (enc.size() <= max_len) return enc;
    return enc.substr(0, max_len) + "...";
}

template <typename Config>
void write_component_dot(std::ostream& os, const Component<Config>& comp,
                         const std::string& graph_name = "configurations") {
    os << "digraph \"" << dot_escape(graph_name) << "\" {\n";
    os << "  node [shape=box];\n";
    os << "  edge [dir=none];\n";
    for (std::size_t i = 0; i < comp.encodings.size(); ++i) {
        os << "  n" << i << " [label=\"" << dot_escape(dot_label(comp.encodings[i]))
           << "\" tooltip=\"" << dot_escape(comp.encodings[i]) << "\"];\n";
    }
    for (auto [u, v] : comp.edges) os << "  n" << u << " -> n" << v << ";\n";
    os << "}\n";
}

}  // namespace reconfig

#endif
