#ifndef RECONFIG_JSON_IO_HPP
#define RECONFIG_JSON_IO_HPP

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "reconfig/core.hpp"
#include "reconfig/exactcover.hpp"
#include "reconfig/hypercube.hpp"
#include "reconfig/naesat.hpp"
#include "reconfig/ncl.hpp"
#include "reconfig/statespace.hpp"
#include "reconfig/subsetsum.hpp"
#include "reconfig/tokens.hpp"

namespace reconfig {

using nlohmann::json;

// Instance envelopes: {"format_version", "problem", "data", "start", "goal"}.
// Orientations are edge-id -> endpoint-id maps, assignments variable -> bool
// maps, placements token -> vertex maps, covers and selections sorted index
// arrays, subset-sum values decimal strings, hypercube vertices 0/1 strings.

inline constexpr int kFormatVersion = 1;

struct NclPack {
    ConstraintGraph graph;
    Orientation start, goal;
};

struct FormulaPack {
    Formula formula;
    Assignment start, goal;
};

struct TokensPack {
    TokenInstance instance;  // p1/p2 mirror the envelope's start/goal
};

struct ExactCoverPack {
    ExactCoverInstance instance;
    CoverMoveKind moves = CoverMoveKind::SplitMerge;
};

struct SubsetSumPack {
    SubsetSumInstance instance;
    int k = 3;
};

struct HypercubePack {
    PolytopeInstance instance;
};

using InstancePayload =
    std::variant<NclPack, FormulaPack, TokensPack, ExactCoverPack, SubsetSumPack, HypercubePack>;

struct Envelope {
    std::string problem;
    InstancePayload payload;
};

namespace jsondetail {

inline const json& field(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) fail(Errc::parse_error, std::string("missing field '") + name + "'");
    return *it;
}

inline std::string str(const json& j, const char* what) {
    if (!j.is_string()) fail(Errc::parse_error, std::string(what) + " must be a string");
    return j.get<std::string>();
}

inline std::vector<std::string> str_array(const json& j, const char* what) {
    if (!j.is_array()) fail(Errc::parse_error, std::string(what) + " must be an array");
    std::vector<std::string> out;
    for (const auto& e : j) out.push_back(str(e, what));
    return out;
}

inline std::vector<int> int_array(const json& j, const char* what) {
    if (!j.is_array()) fail(Errc::parse_error, std::string(what) + " must be an array");
    std::vector<int> out;
    for (const auto& e : j) {
        if (!e.is_number_integer()) fail(Errc::parse_error, std::string(what) + " must hold integers");
        out.push_back(e.get<int>());
    }
    return out;
}

inline BigInt bigint(const json& j, const char* what) {
    std::string s = str(j, what);
    if (s.empty() || (s.size() > 1 && s[0] == '0'))
        fail(Errc::parse_error, std::string(what) + " is not a canonical decimal string");
    for (char c : s)
        if (c < '0' || c > '9')
            fail(Errc::parse_error, std::string(what) + " is not a non-negative decimal string");
    return BigInt(s);
}

}  // namespace jsondetail

// --- per-model configuration codecs ------------------------------------------

inline json orientation_to_json(const ConstraintGraph& g, const Orientation& o) {
    detail::require_matching_orientation(g, o);
    json out = json::object();
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
        const auto& e = g.edges()[i];
        out[e.id] = o.toward_u[i] ? e.u : e.v;
    }
    return out;
}

inline Orientation orientation_from_json(const ConstraintGraph& g, const json& j) {
    if (!j.is_object()) fail(Errc::parse_error, "orientation must be an edge->endpoint object");
    if (j.size() != g.edges().size())
        fail(Errc::parse_error, "orientation must name every edge exactly once");
    Orientation o;
    o.toward_u.resize(g.edges().size());
    for (const auto& [edge_id, target] : j.items()) {
        std::size_t i = g.edge_index(edge_id);
        std::string t = jsondetail::str(target, "orientation target");
        const auto& e = g.edges()[i];
        if (t != e.u && t != e.v)
            fail(Errc::parse_error, "edge '" + edge_id + "' cannot point at '" + t + "'");
        o.toward_u[i] = t == e.u;
    }
    return o;
}

inline json assignment_to_json(const Formula& f, const Assignment& a) {
    require_total(f, a);
    json out = json::object();
    for (std::size_t i = 0; i < f.variables().size(); ++i)
        out[f.variables()[i]] = static_cast<bool>(a[i]);
    return out;
}

inline Assignment assignment_from_json(const Formula& f, const json& j) {
    if (!j.is_object()) fail(Errc::parse_error, "assignment must be a variable->bool object");
    if (j.size() != f.variables().size())
        fail(Errc::parse_error, "assignment must value every variable exactly once");
    Assignment a(f.variables().size(), 0);
    for (const auto& [name, value] : j.items()) {
        if (!value.is_boolean()) fail(Errc::parse_error, "assignment values must be booleans");
        a[static_cast<std::size_t>(f.var_index(name))] = value.get<bool>() ? 1 : 0;
    }
    return a;
}

inline json placement_to_json(const TokenInstance& inst, const Placement& p) {
    require_placement_shape(inst, p);
    json out = json::object();
    for (std::size_t k = 0; k < p.size(); ++k)
        out[inst.tokens[k]] = inst.graph.vertices()[static_cast<std::size_t>(p[k])];
    return out;
}

inline Placement placement_from_json(const TokenInstance& inst, const json& j) {
    if (!j.is_object()) fail(Errc::parse_error, "placement must be a token->vertex object");
    if (j.size() != inst.tokens.size())
        fail(Errc::parse_error, "placement must place every token exactly once");
    Placement p(inst.tokens.size(), -1);
    for (const auto& [token, vertex] : j.items()) {
        auto it = std::find(inst.tokens.begin(), inst.tokens.end(), token);
        if (it == inst.tokens.end()) fail(Errc::parse_error, "unknown token '" + token + "'");
        p[static_cast<std::size_t>(it - inst.tokens.begin())] =
            inst.graph.vertex_index(jsondetail::str(vertex, "placement vertex"));
    }
    return p;
}

inline json index_set_to_json(const std::vector<int>& s) { return json(s); }

inline std::vector<int> index_set_from_json(const json& j) {
    auto s = jsondetail::int_array(j, "index set");
    if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end())
        fail(Errc::parse_error, "index set must be sorted without repeats");
    return s;
}

inline json vertex_to_json(const CubeVertex& v) { return json(encode_bits(v)); }

inline CubeVertex vertex_from_json(const PolytopeInstance& p, const json& j) {
    std::string s = jsondetail::str(j, "vertex");
    if (static_cast<int>(s.size()) != p.n)
        fail(Errc::parse_error, "vertex string must have length n");
    CubeVertex v;
    for (char c : s) {
        if (c != '0' && c != '1') fail(Errc::parse_error, "vertex string must be 0/1");
        v.push_back(c == '1');
    }
    return v;
}

// --- envelope serialization ---------------------------------------------------

inline json serialize_envelope(const Envelope& env);

namespace jsondetail {

inline json ncl_data(const ConstraintGraph& g) {
    json nodes = json::array(), edges = json::array();
    for (const auto& n : g.nodes())
        nodes.push_back({{"id", n.id}, {"kind", n.kind == NodeKind::And ? "AND" : "OR"}});
    for (const auto& e : g.edges())
        edges.push_back({{"id", e.id},
                         {"u", e.u},
                         {"v", e.v},
                         {"color", e.color == EdgeColor::Blue ? "blue" : "red"}});
    return {{"nodes", nodes}, {"edges", edges}};
}

inline ConstraintGraph ncl_data_parse(const json& data) {
    std::vector<NclNode> nodes;
    for (const auto& n : field(data, "nodes")) {
        std::string kind = str(field(n, "kind"), "node kind");
        if (kind != "AND" && kind != "OR") fail(Errc::parse_error, "node kind must be AND or OR");
        nodes.push_back({str(field(n, "id"), "node id"),
                         kind == "AND" ? NodeKind::And : NodeKind::Or});
    }
    std::vector<NclEdge> edges;
    for (const auto& e : field(data, "edges")) {
        std::string color = str(field(e, "color"), "edge color");
        if (color != "red" && color != "blue") fail(Errc::parse_error, "edge color must be red or blue");
        edges.push_back({str(field(e, "id"), "edge id"), str(field(e, "u"), "edge endpoint"),
                         str(field(e, "v"), "edge endpoint"),
                         color == "blue" ? EdgeColor::Blue : EdgeColor::Red});
    }
    return ConstraintGraph(std::move(nodes), std::move(edges));
}

inline json formula_data(const Formula& f) {
    json clauses = json::array();
    for (const auto& c : f.clauses()) {
        json clause = json::array();
        for (const auto& lit : c)
            clause.push_back((lit.negated ? "~" : "") +
                             f.variables()[static_cast<std::size_t>(lit.var)]);
        clauses.push_back(clause);
    }
    return {{"variables", f.variables()},
            {"clauses", clauses},
            {"semantics", f.semantics() == FormulaSemantics::Nae ? "nae" : "cnf"}};
}

inline Formula formula_data_parse(const json& data) {
    auto variables = str_array(field(data, "variables"), "variables");
    for (const auto& v : variables)
        if (v.empty() || v[0] == '~')
            fail(Errc::parse_error, "variable names must be non-empty and not start with '~'");
    std::string semantics = "nae";
    if (data.contains("semantics")) semantics = str(data["semantics"], "semantics");
    if (semantics != "nae" && semantics != "cnf")
        fail(Errc::parse_error, "semantics must be 'nae' or 'cnf'");
    auto var_index = [&](const std::string& name) {
        for (std::size_t i = 0; i < variables.size(); ++i)
            if (variables[i] == name) return static_cast<int>(i);
        fail(Errc::parse_error, "clause references unknown variable '" + name + "'");
    };
    std::vector<std::vector<Literal>> clauses;
    for (const auto& c : field(data, "clauses")) {
        std::vector<Literal> clause;
        for (const auto& l : c) {
            std::string s = str(l, "literal");
            bool neg = !s.empty() && s[0] == '~';
            clause.push_back({var_index(neg ? s.substr(1) : s), neg});
        }
        clauses.push_back(std::move(clause));
    }
    return Formula(std::move(variables), std::move(clauses),
                   semantics == "nae" ? FormulaSemantics::Nae : FormulaSemantics::Cnf);
}

inline json tokens_data(const TokenInstance& inst) {
    json edges = json::array();
    for (auto [u, v] : inst.graph.edges())
        edges.push_back({inst.graph.vertices()[static_cast<std::size_t>(u)],
                         inst.graph.vertices()[static_cast<std::size_t>(v)]});
    return {{"vertices", inst.graph.vertices()}, {"edges", edges}, {"tokens", inst.tokens}};
}

inline TokenInstance tokens_data_parse(const json& data) {
    TokenInstance inst;
    auto vertices = str_array(field(data, "vertices"), "vertices");
    std::vector<std::pair<int, int>> edges;
    {
        TokenGraph tmp(vertices, {});
        for (const auto& e : field(data, "edges")) {
            auto pair = str_array(e, "edge");
            if (pair.size() != 2) fail(Errc::parse_error, "edges must be vertex pairs");
            edges.emplace_back(tmp.vertex_index(pair[0]), tmp.vertex_index(pair[1]));
        }
    }
    inst.graph = TokenGraph(std::move(vertices), std::move(edges));
    inst.tokens = str_array(field(data, "tokens"), "tokens");
    for (std::size_t i = 0; i < inst.tokens.size(); ++i)
        for (std::size_t j = i + 1; j < inst.tokens.size(); ++j)
            if (inst.tokens[i] == inst.tokens[j])
                fail(Errc::parse_error, "duplicate token label '" + inst.tokens[i] + "'");
    return inst;
}

inline json exactcover_data(const ExactCoverPack& pack) {
    return {{"universe", pack.instance.universe},
            {"family", pack.instance.family},
            {"moves", pack.moves == CoverMoveKind::SplitMerge ? "split-merge" : "many-way"}};
}

inline ExactCoverPack exactcover_data_parse(const json& data) {
    ExactCoverPack pack;
    pack.instance.universe = str_array(field(data, "universe"), "universe");
    for (const auto& s : field(data, "family"))
        pack.instance.family.push_back(int_array(s, "family set"));
    std::string moves = "split-merge";
    if (data.contains("moves")) moves = str(data["moves"], "moves");
    if (moves != "split-merge" && moves != "many-way")
        fail(Errc::parse_error, "moves must be 'split-merge' or 'many-way'");
    pack.moves = moves == "split-merge" ? CoverMoveKind::SplitMerge : CoverMoveKind::ManyWay;
    validate_exactcover_instance(pack.instance);
    return pack;
}

inline json subsetsum_data(const SubsetSumPack& pack) {
    json values = json::array();
    for (const auto& v : pack.instance.values) values.push_back(v.str());
    return {{"values", values}, {"target", pack.instance.target.str()}, {"k", pack.k}};
}

inline SubsetSumPack subsetsum_data_parse(const json& data) {
    SubsetSumPack pack;
    for (const auto& v : field(data, "values")) pack.instance.values.push_back(bigint(v, "value"));
    pack.instance.target = bigint(field(data, "target"), "target");
    if (data.contains("k")) {
        if (!data["k"].is_number_integer() || data["k"].get<int>() < 1)
            fail(Errc::parse_error, "k must be a positive integer");
        pack.k = data["k"].get<int>();
    }
    return pack;
}

inline json hypercube_data(const PolytopeInstance& p) {
    return {{"n", p.n}, {"d", p.d}, {"columns", p.columns}, {"lower", p.lower}, {"upper", p.upper}};
}

inline PolytopeInstance hypercube_data_parse(const json& data) {
    PolytopeInstance p;
    const json& n = field(data, "n");
    const json& d = field(data, "d");
    if (!n.is_number_integer() || !d.is_number_integer())
        fail(Errc::parse_error, "n and d must be integers");
    p.n = n.get<int>();
    p.d = d.get<int>();
    if (p.n < 0 || p.d < 0) fail(Errc::parse_error, "n and d must be non-negative");
    for (const auto& col : field(data, "columns")) {
        std::vector<std::int64_t> c;
        for (const auto& e : col) {
            if (!e.is_number_integer()) fail(Errc::parse_error, "column entries must be integers");
            c.push_back(e.get<std::int64_t>());
        }
        p.columns.push_back(std::move(c));
    }
    for (const auto& e : field(data, "lower")) p.lower.push_back(e.get<std::int64_t>());
    for (const auto& e : field(data, "upper")) p.upper.push_back(e.get<std::int64_t>());
    validate_polytope_instance(p);
    return p;
}

}  // namespace jsondetail

inline json serialize_envelope(const Envelope& env) {
    json j;
    j["format_version"] = kFormatVersion;
    j["problem"] = env.problem;
    std::visit(
        [&](const auto& pack) {
            using T = std::decay_t<decltype(pack)>;
            if constexpr (std::is_same_v<T, NclPack>) {
                j["data"] = jsondetail::ncl_data(pack.graph);
                j["start"] = orientation_to_json(pack.graph, pack.start);
                j["goal"] = orientation_to_json(pack.graph, pack.goal);
            } else if constexpr (std::is_same_v<T, FormulaPack>) {
                j["data"] = jsondetail::formula_data(pack.formula);
                j["start"] = assignment_to_json(pack.formula, pack.start);
                j["goal"] = assignment_to_json(pack.formula, pack.goal);
            } else if constexpr (std::is_same_v<T, TokensPack>) {
                j["data"] = jsondetail::tokens_data(pack.instance);
                j["start"] = placement_to_json(pack.instance, pack.instance.p1);
                j["goal"] = placement_to_json(pack.instance, pack.instance.p2);
            } else if constexpr (std::is_same_v<T, ExactCoverPack>) {
                j["data"] = jsondetail::exactcover_data(pack);
                j["start"] = index_set_to_json(pack.instance.start_cover);
                j["goal"] = index_set_to_json(pack.instance.goal_cover);
            } else if constexpr (std::is_same_v<T, SubsetSumPack>) {
                j["data"] = jsondetail::subsetsum_data(pack);
                j["start"] = index_set_to_json(pack.instance.start_set);
                j["goal"] = index_set_to_json(pack.instance.goal_set);
            } else {
                j["data"] = jsondetail::hypercube_data(pack.instance);
                j["start"] = vertex_to_json(pack.instance.start);
                j["goal"] = vertex_to_json(pack.instance.goal);
            }
        },
        env.payload);
    return j;
}

inline Envelope parse_envelope(const json& j) {
    if (!j.is_object()) fail(Errc::parse_error, "envelope must be a JSON object");
    const json& version = jsondetail::field(j, "format_version");
    if (!version.is_number_integer() || version.get<int>() != kFormatVersion)
        fail(Errc::parse_error, "unsupported format_version");
    Envelope env;
    env.problem = jsondetail::str(jsondetail::field(j, "problem"), "problem");
    const json& data = jsondetail::field(j, "data");
    const json& start = jsondetail::field(j, "start");
    const json& goal = jsondetail::field(j, "goal");

    if (env.problem == "ncl") {
        NclPack pack;
        pack.graph = jsondetail::ncl_data_parse(data);
        pack.start = orientation_from_json(pack.graph, start);
        pack.goal = orientation_from_json(pack.graph, goal);
        env.payload = std::move(pack);
    } else if (env.problem == "naesat") {
        FormulaPack pack;
        pack.formula = jsondetail::formula_data_parse(data);
        pack.start = assignment_from_json(pack.formula, start);
        pack.goal = assignment_from_json(pack.formula, goal);
        env.payload = std::move(pack);
    } else if (env.problem == "tokens") {
        TokensPack pack;
        pack.instance = jsondetail::tokens_data_parse(data);
        pack.instance.p1 = placement_from_json(pack.instance, start);
        pack.instance.p2 = placement_from_json(pack.instance, goal);
        env.payload = std::move(pack);
    } else if (env.problem == "exactcover") {
        ExactCoverPack pack = jsondetail::exactcover_data_parse(data);
        pack.instance.start_cover = index_set_from_json(start);
        pack.instance.goal_cover = index_set_from_json(goal);
        env.payload = std::move(pack);
    } else if (env.problem == "subsetsum") {
        SubsetSumPack pack = jsondetail::subsetsum_data_parse(data);
        pack.instance.start_set = index_set_from_json(start);
        pack.instance.goal_set = index_set_from_json(goal);
        env.payload = std::move(pack);
    } else if (env.problem == "hypercube") {
        HypercubePack pack;
        pack.instance = jsondetail::hypercube_data_parse(data);
        pack.instance.start = vertex_from_json(pack.instance, start);
        pack.instance.goal = vertex_from_json(pack.instance, goal);
        env.payload = std::move(pack);
    } else {
        fail(Errc::parse_error, "unknown problem '" + env.problem + "'");
    }
    return env;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::parse_error, "cannot open '" + path + "'");
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) fail(Errc::parse_error, "'" + path + "' is not valid JSON");
    return j;
}

// Content digest binding certificates to the instance they certify: the
// hash of the canonical (sorted-key, compact) envelope serialization.
inline std::string envelope_digest(const Envelope& env) {
    return fnv1a64_hex(serialize_envelope(env).dump());
}

// Feasibility of the envelope's endpoints, with the per-problem validity
// checks (graph shape, cover exactness, target sums, bounds).
inline void verify_envelope(const Envelope& env) {
    std::visit(
        [&](const auto& pack) {
            using T = std::decay_t<decltype(pack)>;
            if constexpr (std::is_same_v<T, NclPack>) {
                auto report = validate_constraint_graph(pack.graph);
                if (!report.ok())
                    fail(Errc::invalid_input, "constraint graph: " + report.issues.front().subject +
                                                  ": " + report.issues.front().message);
                if (!is_legal_orientation(pack.graph, pack.start))
                    fail(Errc::infeasible_endpoint, "start orientation is not legal");
                if (!is_legal_orientation(pack.graph, pack.goal))
                    fail(Errc::infeasible_endpoint, "goal orientation is not legal");
            } else if constexpr (std::is_same_v<T, FormulaPack>) {
                if (!satisfies(pack.formula, pack.start))
                    fail(Errc::infeasible_endpoint, "start assignment is not satisfying");
                if (!satisfies(pack.formula, pack.goal))
                    fail(Errc::infeasible_endpoint, "goal assignment is not satisfying");
            } else if constexpr (std::is_same_v<T, TokensPack>) {
                if (!is_independent_placement(pack.instance, pack.instance.p1))
                    fail(Errc::infeasible_endpoint, "start placement is not independent");
                if (!is_independent_placement(pack.instance, pack.instance.p2))
                    fail(Errc::infeasible_endpoint, "goal placement is not independent");
            } else if constexpr (std::is_same_v<T, ExactCoverPack>) {
                validate_exactcover_instance(pack.instance);
                if (!is_exact_cover(pack.instance, pack.instance.start_cover))
                    fail(Errc::infeasible_endpoint, "start cover is not exact");
                if (!is_exact_cover(pack.instance, pack.instance.goal_cover))
                    fail(Errc::infeasible_endpoint, "goal cover is not exact");
            } else if constexpr (std::is_same_v<T, SubsetSumPack>) {
                validate_subsetsum_instance(pack.instance);
                if (selection_sum(pack.instance, pack.instance.start_set) != pack.instance.target)
                    fail(Errc::infeasible_endpoint, "start selection misses the target sum");
                if (selection_sum(pack.instance, pack.instance.goal_set) != pack.instance.target)
                    fail(Errc::infeasible_endpoint, "goal selection misses the target sum");
            } else {
                validate_polytope_instance(pack.instance);
                if (!is_inside(pack.instance, pack.instance.start))
                    fail(Errc::infeasible_endpoint, "start vertex lies outside the polytope");
                if (!is_inside(pack.instance, pack.instance.goal))
                    fail(Errc::infeasible_endpoint, "goal vertex lies outside the polytope");
            }
        },
        env.payload);
}

// --- certificates --------------------------------------------------------------

struct CertificateFile {
    std::string instance_digest;
    std::vector<json> configurations;
    std::vector<std::string> moves;  // optional annotations, one per step
};

inline json serialize_certificate(const CertificateFile& cert) {
    json j;
    j["format_version"] = kFormatVersion;
    j["instance_digest"] = cert.instance_digest;
    j["configurations"] = cert.configurations;
    j["moves"] = cert.moves;
    return j;
}

inline CertificateFile parse_certificate(const json& j) {
    if (!j.is_object()) fail(Errc::parse_error, "certificate must be a JSON object");
    const json& version = jsondetail::field(j, "format_version");
    if (!version.is_number_integer() || version.get<int>() != kFormatVersion)
        fail(Errc::parse_error, "unsupported format_version");
    CertificateFile cert;
    cert.instance_digest = jsondetail::str(jsondetail::field(j, "instance_digest"), "digest");
    const json& configs = jsondetail::field(j, "configurations");
    if (!configs.is_array() || configs.empty())
        fail(Errc::parse_error, "configurations must be a non-empty array");
    for (const auto& c : configs) cert.configurations.push_back(c);
    if (j.contains("moves")) cert.moves = jsondetail::str_array(j["moves"], "moves");
    return cert;
}

}  // namespace reconfig

#endif
