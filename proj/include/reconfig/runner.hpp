#ifndef RECONFIG_RUNNER_HPP
#define RECONFIG_RUNNER_HPP

#include <algorithm>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "reconfig/dot.hpp"
#include "reconfig/json_io.hpp"
#include "reconfig/statespace.hpp"

namespace reconfig {

// Envelope-level driving of the search engine: dispatches an envelope to
// its problem binding, runs reachability / component exploration, encodes
// certificates as JSON and replays certificate files.

struct SolveOutcome {
    bool reachable = false;
    std::uint64_t states_explored = 0;
    std::optional<CertificateFile> certificate;
};

namespace rundetail {

// A one-line description of the move between two consecutive configurations.
inline std::string describe_move(const NclPack& pack, const Orientation& a, const Orientation& b) {
    for (std::size_t i = 0; i < a.toward_u.size(); ++i)
        if (a.toward_u[i] != b.toward_u[i]) return "flip " + pack.graph.edges()[i].id;
    return "noop";
}

inline std::string describe_move(const FormulaPack& pack, const Assignment& a,
                                 const Assignment& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return "flip " + pack.formula.variables()[i];
    return "noop";
}

inline std::string describe_move(const TokensPack& pack, const Placement& a, const Placement& b) {
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k] != b[k])
            return "slide " + pack.instance.tokens[k] + " to " +
                   pack.instance.graph.vertices()[static_cast<std::size_t>(b[k])];
    return "noop";
}

inline std::string index_list(const std::vector<int>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s + "}";
}

inline std::string describe_set_move(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> removed, added;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(removed));
    std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(added));
    return "replace " + index_list(removed) + " with " + index_list(added);
}

inline std::string describe_move(const ExactCoverPack&, const Cover& a, const Cover& b) {
    return describe_set_move(a, b);
}

inline std::string describe_move(const SubsetSumPack&, const Selection& a, const Selection& b) {
    return describe_set_move(a, b);
}

inline std::string describe_move(const HypercubePack&, const CubeVertex& a, const CubeVertex& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i])
            return std::string(a[i] ? "remove" : "add") + " item " + std::to_string(i);
    return "noop";
}

template <typename Pack, typename Model, typename ToJson>
SolveOutcome run_solve(const Pack& pack, const Model& model, const typename Model::Config& start,
                       const typename Model::Config& goal, const SearchLimits& limits,
                       const std::string& digest, ToJson to_json) {
    auto result = reachable(model, start, goal, limits);
    SolveOutcome out;
    out.reachable = result.reachable;
    out.states_explored = result.states_explored;
    if (result.reachable) {
        CertificateFile cert;
        cert.instance_digest = digest;
        const auto& path = *result.certificate;
        for (const auto& c : path) cert.configurations.push_back(to_json(c));
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
            cert.moves.push_back(describe_move(pack, path[i], path[i + 1]));
        out.certificate = std::move(cert);
    }
    return out;
}

template <typename Model, typename FromJson>
bool run_check(const Model& model, const CertificateFile& cert, FromJson from_json,
               std::string* diagnostic) {
    std::vector<typename Model::Config> configs;
    for (const auto& j : cert.configurations) {
        try {
            configs.push_back(from_json(j));
        } catch (const Error& e) {
            if (diagnostic) *diagnostic = e.what();
            return false;
        }
    }
    return check_certificate(model, configs, diagnostic);
}

template <typename Model>
std::string run_dot(const Model& model, const typename Model::Config& start,
                    const SearchLimits& limits, const std::string& name) {
    auto comp = explore_component(model, start, limits);
    std::ostringstream os;
    write_component_dot(os, comp, name);
    return os.str();
}

}  // namespace rundetail

inline SolveOutcome solve_envelope(const Envelope& env, const SearchLimits& limits) {
    verify_envelope(env);
    const std::string digest = envelope_digest(env);
    return std::visit(
        [&](const auto& pack) -> SolveOutcome {
            using T = std::decay_t<decltype(pack)>;
            if constexpr (std::is_same_v<T, NclPack>) {
                NclModel model{&pack.graph};
                return rundetail::run_solve(pack, model, pack.start, pack.goal, limits, digest,
                                            [&](const Orientation& o) {
                                                return orientation_to_json(pack.graph, o);
                                            });
            } else if constexpr (std::is_same_v<T, FormulaPack>) {
                FormulaModel model{&pack.formula};
                return rundetail::run_solve(pack, model, pack.start, pack.goal, limits, digest,
                                            [&](const Assignment& a) {
                                                return assignment_to_json(pack.formula, a);
                                            });
            } else if constexpr (std::is_same_v<T, TokensPack>) {
                TokensModel model{&pack.instance};
                return rundetail::run_solve(pack, model, pack.instance.p1, pack.instance.p2,
                                            limits, digest, [&](const Placement& p) {
                                                return placement_to_json(pack.instance, p);
                                            });
            } else if constexpr (std::is_same_v<T, ExactCoverPack>) {
                CoverMoves moves(pack.instance);
                ExactCoverModel model{&moves, pack.moves};
                return rundetail::run_solve(pack, model, pack.instance.start_cover,
                                            pack.instance.goal_cover, limits, digest,
                                            [](const Cover& c) { return index_set_to_json(c); });
            } else if constexpr (std::is_same_v<T, SubsetSumPack>) {
                SubsetSumModel model(pack.instance, pack.k);
                return rundetail::run_solve(pack, model, pack.instance.start_set,
                                            pack.instance.goal_set, limits, digest,
                                            [](const Selection& s) { return index_set_to_json(s); });
            } else {
                HypercubeModel model{&pack.instance};
                return rundetail::run_solve(pack, model, pack.instance.start, pack.instance.goal,
                                            limits, digest,
                                            [](const CubeVertex& v) { return vertex_to_json(v); });
            }
        },
        env.payload);
}

// Digest binding plus full replay of the configuration sequence.
inline bool check_certificate_file(const Envelope& env, const CertificateFile& cert,
                                   std::string* diagnostic = nullptr) {
    if (cert.instance_digest != envelope_digest(env)) {
        if (diagnostic) *diagnostic = "certificate digest does not match the instance";
        return false;
    }
    return std::visit(
        [&](const auto& pack) -> bool {
            using T = std::decay_t<decltype(pack)>;
            if constexpr (std::is_same_v<T, NclPack>) {
                NclModel model{&pack.graph};
                return rundetail::run_check(
                    model, cert, [&](const json& j) { return orientation_from_json(pack.graph, j); },
                    diagnostic);
            } else if constexpr (std::is_same_v<T, FormulaPack>) {
                FormulaModel model{&pack.formula};
                return rundetail::run_check(
                    model, cert,
                    [&](const json& j) { return assignment_from_json(pack.formula, j); },
                    diagnostic);
            } else if constexpr (std::is_same_v<T, TokensPack>) {
                TokensModel model{&pack.instance};
                return rundetail::run_check(
                    model, cert,
                    [&](const json& j) { return placement_from_json(pack.instance, j); },
                    diagnostic);
            } else if constexpr (std::is_same_v<T, ExactCoverPack>) {
                CoverMoves moves(pack.instance);
                ExactCoverModel model{&moves, pack.moves};
                return rundetail::run_check(
                    model, cert, [](const json& j) { return index_set_from_json(j); }, diagnostic);
            } else if constexpr (std::is_same_v<T, SubsetSumPack>) {
                SubsetSumModel model(pack.instance, pack.k);
                return rundetail::run_check(
                    model, cert, [](const json& j) { return index_set_from_json(j); }, diagnostic);
            } else {
                HypercubeModel model{&pack.instance};
                return rundetail::run_check(
                    model, cert, [&](const json& j) { return vertex_from_json(pack.instance, j); },
                    diagnostic);
            }
        },
        env.payload);
}

// DOT text of the start configuration's component, capped at `cap` states
// (ResourceCapExceeded when the component is larger).
inline std::string export_component_dot(const Envelope& env, std::uint64_t cap) {
    verify_envelope(env);
    SearchLimits limits;
    limits.max_states = cap;
    return std::visit(
        [&](const auto& pack) -> std::string {
            using T = std::decay_t<decltype(pack)>;
            if constexpr (std::is_same_v<T, NclPack>) {
                NclModel model{&pack.graph};
                return rundetail::run_dot(model, pack.start, limits, env.problem);
            } else if constexpr (std::is_same_v<T, FormulaPack>) {
                FormulaModel model{&pack.formula};
                return rundetail::run_dot(model, pack.start, limits, env.problem);
            } else if constexpr (std::is_same_v<T, TokensPack>) {
                TokensModel model{&pack.instance};
                return rundetail::run_dot(model, pack.instance.p1, limits, env.problem);
            } else if constexpr (std::is_same_v<T, ExactCoverPack>) {
                CoverMoves moves(pack.instance);
                ExactCoverModel model{&moves, pack.moves};
                return rundetail::run_dot(model, pack.instance.start_cover, limits, env.problem);
            } else if constexpr (std::is_same_v<T, SubsetSumPack>) {
                SubsetSumModel model(pack.instance, pack.k);
                return rundetail::run_dot(model, pack.instance.start_set, limits, env.problem);
            } else {
                HypercubeModel model{&pack.instance};
                return rundetail::run_dot(model, pack.instance.start, limits, env.problem);
            }
        },
        env.payload);
}

// --- reductions between envelopes ---------------------------------------------

struct ReduceOptions {
    bool share_rigid = false;            // ncl -> naesat
    std::optional<unsigned> padding;     // exactcover -> subsetsum: compact padding bits
    std::optional<int> colors;           // exactcover -> hypercube: pad the color count
};

struct ReduceResult {
    Envelope envelope;
    json sidecar;  // mapping data sufficient to project certificates back
};

namespace rundetail {

inline json edge_var_sidecar(const std::map<std::string, EdgeVarInfo>& edge_var,
                             const std::vector<std::string>& variables) {
    json out = json::object();
    for (const auto& [edge_id, info] : edge_var)
        out[edge_id] = {{"variable", variables[static_cast<std::size_t>(info.variable)]},
                        {"polarity", polarity_name(info.polarity)},
                        {"in_node", info.in_node}};
    return out;
}

inline Coloring padded_coloring(const ExactCoverInstance& inst, std::optional<int> colors) {
    Coloring coloring = color_hypergraph(inst);
    if (colors) {
        if (*colors < coloring.count)
            fail(Errc::invalid_input, "requested " + std::to_string(*colors) +
                                          " colors, instance needs " +
                                          std::to_string(coloring.count));
        coloring.count = *colors;
    }
    return coloring;
}

}  // namespace rundetail

// Dispatch for the supported reduction pairs: (ncl, naesat), (ncl, 3sat),
// (tokens, exactcover), (exactcover, subsetsum), (exactcover, hypercube).
// Unsupported pairs raise InvalidInput; the CLI maps that to its own exit
// code for unsupported pairs before input validation runs.
inline ReduceResult reduce_envelope(const Envelope& env, const std::string& from,
                                    const std::string& to, const ReduceOptions& options = {}) {
    if (env.problem != from)
        fail(Errc::illegal_input_configuration,
             "input is a '" + env.problem + "' instance, expected '" + from + "'");
    ReduceResult out;

    if (from == "ncl" && to == "naesat") {
        const auto& pack = std::get<NclPack>(env.payload);
        NaeReductionOptions opts;
        opts.share_rigid = options.share_rigid;
        NaeReduction r = reduce_ncl_to_naesat(pack.graph, pack.start, pack.goal, opts);
        out.envelope.problem = "naesat";
        out.envelope.payload = FormulaPack{r.formula, r.start, r.goal};
        out.sidecar["edge_var"] = rundetail::edge_var_sidecar(r.edge_var, r.formula.variables());
        json aux = json::object();
        for (const auto& gi : r.gadgets) {
            json names = json::array();
            for (int v : gi.aux_vars)
                names.push_back(r.formula.variables()[static_cast<std::size_t>(v)]);
            aux[gi.node_id] = {{"variant", gi.variant.name},
                               {"twin", gi.variant.twin},
                               {"aux", names}};
        }
        out.sidecar["gadgets"] = aux;
        json rigids = json::array();
        for (const auto& rg : r.rigids) {
            json vars = json::array();
            for (int v : rg.variables)
                vars.push_back(r.formula.variables()[static_cast<std::size_t>(v)]);
            rigids.push_back(vars);
        }
        out.sidecar["rigid_terminals"] = rigids;
        return out;
    }
    if (from == "ncl" && to == "3sat") {
        const auto& pack = std::get<NclPack>(env.payload);
        CnfReduction r = reduce_ncl_to_3sat(pack.graph, pack.start, pack.goal);
        out.envelope.problem = "naesat";
        out.envelope.payload = FormulaPack{r.formula, r.start, r.goal};
        out.sidecar["edge_var"] = rundetail::edge_var_sidecar(r.edge_var, r.formula.variables());
        return out;
    }
    if (from == "tokens" && to == "exactcover") {
        const auto& pack = std::get<TokensPack>(env.payload);
        TokensToCoverReduction r = reduce_tokens_to_exactcover(pack.instance);
        out.envelope.problem = "exactcover";
        out.envelope.payload = ExactCoverPack{r.instance, CoverMoveKind::SplitMerge};
        json elements = json::object();
        for (int v = 0; v < r.vertex_count; ++v)
            elements[r.element_names[static_cast<std::size_t>(v)]] = {
                {"kind", "vertex"},
                {"name", pack.instance.graph.vertices()[static_cast<std::size_t>(v)]}};
        for (int t = 0; t < r.token_count; ++t)
            elements[r.element_names[static_cast<std::size_t>(r.vertex_count + t)]] = {
                {"kind", "token"}, {"name", pack.instance.tokens[static_cast<std::size_t>(t)]}};
        out.sidecar["element_map"] = elements;
        return out;
    }
    if (from == "exactcover" && to == "subsetsum") {
        const auto& pack = std::get<ExactCoverPack>(env.payload);
        Coloring coloring = color_hypergraph(pack.instance);
        EncodingParams params =
            options.padding
                ? EncodingParams::compact(pack.instance.universe.size(), coloring.count,
                                          *options.padding)
                : EncodingParams::paper(pack.instance.universe.size(), coloring.count);
        auto r = reduce_exactcover_to_subsetsum(pack.instance, coloring, params);
        out.envelope.problem = "subsetsum";
        out.envelope.payload = SubsetSumPack{r.instance, 3};
        json g = json::array();
        for (const auto& v : r.g) g.push_back(v.str());
        out.sidecar["g"] = g;
        out.sidecar["colors"] = coloring.color;
        out.sidecar["labels"] = r.labels;
        out.sidecar["value_coincidences"] = r.value_coincidences;
        out.sidecar["padding_bits"] = params.padding_bits;
        return out;
    }
    if (from == "exactcover" && to == "hypercube") {
        const auto& pack = std::get<ExactCoverPack>(env.payload);
        Coloring coloring = rundetail::padded_coloring(pack.instance, options.colors);
        auto r = reduce_manyway_to_hypercube(pack.instance, coloring);
        out.envelope.problem = "hypercube";
        out.envelope.payload = HypercubePack{r.instance};
        out.sidecar["f_fig"] = json::object();
        for (int s = 0; s < r.family_size; ++s)
            out.sidecar["f_fig"][std::to_string(s)] = s;  // set tuple columns, keys follow
        out.sidecar["key_offset"] = r.family_size;
        out.sidecar["colors"] = coloring.color;
        out.sidecar["color_count"] = coloring.count;
        return out;
    }
    fail(Errc::invalid_input, "unsupported reduction pair (" + from + ", " + to + ")");
}

// DIMACS-CNF-style export of formula instances; NAE semantics is marked in
// the header comments since plain CNF tools must not treat these clauses as
// ordinary disjunctions.
inline std::string export_dimacs(const FormulaPack& pack) {
    std::ostringstream os;
    os << "c semantics: " << (pack.formula.semantics() == FormulaSemantics::Nae ? "nae" : "cnf")
       << "\n";
    for (std::size_t i = 0; i < pack.formula.variables().size(); ++i)
        os << "c var " << (i + 1) << " " << pack.formula.variables()[i] << "\n";
    os << "p cnf " << pack.formula.variables().size() << " " << pack.formula.clauses().size()
       << "\n";
    for (const auto& clause : pack.formula.clauses()) {
        for (const auto& lit : clause) os << (lit.negated ? "-" : "") << (lit.var + 1) << " ";
        os << "0\n";
    }
    return os.str();
}

}  // namespace reconfig

#endif
