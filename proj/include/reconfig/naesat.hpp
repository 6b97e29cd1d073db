#ifndef RECONFIG_NAESAT_HPP
#define RECONFIG_NAESAT_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "reconfig/core.hpp"
#include "reconfig/ncl.hpp"

namespace reconfig {

// --- formulas ---------------------------------------------------------------
//
// One clause type serves two semantics: NAE (a clause is satisfied when its
// literals are not all equal) and plain CNF (some literal is true). NAE
// instances have exactly three distinct variables per clause; the warmup
// compiler to plain SAT emits two-literal clauses, hence the CNF variant
// allows 1..3 literals.

struct Literal {
    int var = 0;
    bool negated = false;

    bool operator==(const Literal&) const = default;
};

enum class FormulaSemantics { Nae, Cnf };

using Assignment = std::vector<std::uint8_t>;

class Formula {
  public:
    Formula() = default;

    Formula(std::vector<std::string> variables, std::vector<std::vector<Literal>> clauses,
            FormulaSemantics semantics)
        : variables_(std::move(variables)), clauses_(std::move(clauses)), semantics_(semantics) {
        occurrences_.resize(variables_.size());
        for (std::size_t ci = 0; ci < clauses_.size(); ++ci) {
            const auto& c = clauses_[ci];
            if (semantics_ == FormulaSemantics::Nae && c.size() != 3)
                fail(Errc::invalid_input, "NAE clause must have exactly 3 literals");
            if (c.empty() || c.size() > 3)
                fail(Errc::invalid_input, "clause must have 1..3 literals");
            std::set<int> vars;
            for (const auto& lit : c) {
                if (lit.var < 0 || static_cast<std::size_t>(lit.var) >= variables_.size())
                    fail(Errc::invalid_input, "literal references unknown variable");
                if (!vars.insert(lit.var).second)
                    fail(Errc::invalid_input, "clause repeats a variable");
                occurrences_[static_cast<std::size_t>(lit.var)].push_back(ci);
            }
        }
    }

    const std::vector<std::string>& variables() const { return variables_; }
    const std::vector<std::vector<Literal>>& clauses() const { return clauses_; }
    FormulaSemantics semantics() const { return semantics_; }
    const std::vector<std::size_t>& occurrences(int var) const {
        return occurrences_[static_cast<std::size_t>(var)];
    }

    bool monotone() const {
        for (const auto& c : clauses_)
            for (const auto& lit : c)
                if (lit.negated) return false;
        return true;
    }

    int var_index(const std::string& name) const {
        for (std::size_t i = 0; i < variables_.size(); ++i)
            if (variables_[i] == name) return static_cast<int>(i);
        fail(Errc::invalid_input, "unknown variable '" + name + "'");
    }

  private:
    std::vector<std::string> variables_;
    std::vector<std::vector<Literal>> clauses_;
    FormulaSemantics semantics_ = FormulaSemantics::Nae;
    std::vector<std::vector<std::size_t>> occurrences_;
};

inline bool literal_value(const Literal& lit, const Assignment& a) {
    return a[static_cast<std::size_t>(lit.var)] != lit.negated;
}

inline bool clause_satisfied(const Formula& f, const std::vector<Literal>& clause,
                             const Assignment& a) {
    if (f.semantics() == FormulaSemantics::Cnf) {
        for (const auto& lit : clause)
            if (literal_value(lit, a)) return true;
        return false;
    }
    bool first = literal_value(clause[0], a);
    for (std::size_t i = 1; i < clause.size(); ++i)
        if (literal_value(clause[i], a) != first) return true;
    return false;
}

inline void require_total(const Formula& f, const Assignment& a) {
    if (a.size() != f.variables().size())
        fail(Errc::partial_assignment, "assignment covers " + std::to_string(a.size()) +
                                           " of " + std::to_string(f.variables().size()) +
                                           " variables");
}

inline bool satisfies(const Formula& f, const Assignment& a) {
    require_total(f, a);
    for (const auto& c : f.clauses())
        if (!clause_satisfied(f, c, a)) return false;
    return true;
}

inline bool nae_satisfies(const Formula& f, const Assignment& a) {
    if (f.semantics() != FormulaSemantics::Nae)
        fail(Errc::invalid_input, "formula does not have NAE semantics");
    return satisfies(f, a);
}

// Variables whose single flip keeps the assignment satisfying. Only clauses
// containing the flipped variable are re-evaluated.
inline std::vector<int> flip_neighbors(const Formula& f, const Assignment& a) {
    require_total(f, a);
    if (!satisfies(f, a)) fail(Errc::unsatisfied_start, "assignment does not satisfy the formula");
    std::vector<int> out;
    Assignment scratch = a;
    for (int v = 0; v < static_cast<int>(f.variables().size()); ++v) {
        scratch[static_cast<std::size_t>(v)] ^= 1;
        bool ok = true;
        for (std::size_t ci : f.occurrences(v)) {
            if (!clause_satisfied(f, f.clauses()[ci], scratch)) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(v);
        scratch[static_cast<std::size_t>(v)] ^= 1;
    }
    return out;
}

inline Assignment complement(Assignment a) {
    for (auto& b : a) b ^= 1;
    return a;
}

// Problem binding for single-variable-flip reconfiguration (NAE or CNF).
struct FormulaModel {
    using Config = Assignment;

    const Formula* formula = nullptr;

    bool feasible(const Config& c) const { return satisfies(*formula, c); }

    std::vector<Config> neighbors(const Config& c) const {
        std::vector<Config> out;
        for (int v : flip_neighbors(*formula, c)) {
            Config n = c;
            n[static_cast<std::size_t>(v)] ^= 1;
            out.push_back(std::move(n));
        }
        return out;
    }

    std::string encode(const Config& c) const { return encode_bits(c); }
};

// --- gadgets ----------------------------------------------------------------
//
// Node gadgets are described at slot level: three edge slots X, Y, Z plus
// pinned-true terminals, pinned-false terminals and per-gadget auxiliary
// variables. Every emitted clause is monotone; the "globally negated" form
// of a gadget is realized structurally, by swapping the roles of its true
// and false terminals and flipping the polarity signature it serves.

enum class Polarity { InPositive, OutPositive };

inline Polarity flip_polarity(Polarity p) {
    return p == Polarity::InPositive ? Polarity::OutPositive : Polarity::InPositive;
}

inline const char* polarity_name(Polarity p) {
    return p == Polarity::InPositive ? "in-positive" : "out-positive";
}

struct GadgetLit {
    enum class Kind { EdgeX, EdgeY, EdgeZ, TermTrue, TermFalse, Aux };
    Kind kind = Kind::EdgeX;
    int index = 0;  // which terminal / aux variable

    bool operator==(const GadgetLit&) const = default;
    bool operator<(const GadgetLit& o) const {
        return kind != o.kind ? kind < o.kind : index < o.index;
    }
};

struct GadgetVariant {
    std::string name;  // eq2..eq7, after the defining clause sets
    bool twin = false;
    NodeKind node = NodeKind::And;
    std::array<Polarity, 3> polarity{};  // signature served, over slots X,Y,Z
    std::vector<std::array<GadgetLit, 3>> clauses;
    int aux_count = 0;
    int true_terminals = 0;
    int false_terminals = 0;
};

namespace gadget {

using K = GadgetLit::Kind;

inline GadgetLit X() { return {K::EdgeX, 0}; }
inline GadgetLit Y() { return {K::EdgeY, 0}; }
inline GadgetLit Z() { return {K::EdgeZ, 0}; }
inline GadgetLit T(int i) { return {K::TermTrue, i}; }
inline GadgetLit F(int i) { return {K::TermFalse, i}; }
inline GadgetLit A(int i) { return {K::Aux, i}; }

constexpr Polarity In = Polarity::InPositive;
constexpr Polarity Out = Polarity::OutPositive;

// The six base gadgets. Each serves the written polarity signature with its
// true terminals assigned 1 and false terminals 0.
inline std::vector<GadgetVariant> base_variants() {
    std::vector<GadgetVariant> v;
    v.push_back({"eq2", false, NodeKind::And, {In, In, In},
                 {{{Y(), X(), F(0)}}, {{Z(), X(), F(1)}}},
                 0, 0, 2});
    v.push_back({"eq3", false, NodeKind::And, {In, Out, In},
                 {{{Y(), T(0), A(0)}}, {{Z(), F(0), X()}}, {{A(0), F(1), X()}}},
                 1, 1, 2});
    v.push_back({"eq4", false, NodeKind::And, {In, Out, Out},
                 {{{Y(), T(0), A(0)}},
                  {{Z(), T(1), A(1)}},
                  {{A(0), F(0), X()}},
                  {{A(1), F(1), X()}}},
                 2, 2, 2});
    v.push_back({"eq5", false, NodeKind::Or, {In, Out, Out},
                 {{{Y(), T(0), A(0)}}, {{Z(), T(1), A(1)}}, {{A(0), A(1), X()}}},
                 2, 2, 0});
    v.push_back({"eq6", false, NodeKind::Or, {In, In, In},
                 {{{X(), F(0), A(2)}},
                  {{Y(), F(1), A(1)}},
                  {{Z(), F(2), A(0)}},
                  {{A(0), A(1), A(2)}}},
                 3, 0, 3});
    v.push_back({"eq7", false, NodeKind::Or, {In, In, Out},
                 {{{Z(), T(0), A(0)}}, {{Y(), A(0), X()}}},
                 1, 1, 0});
    return v;
}

// The globally negated form: a NAE clause keeps its meaning when every
// literal is complemented, so swapping true/false terminal roles and
// flipping the edge-variable polarities yields a monotone gadget serving
// the mirrored signature.
inline GadgetVariant make_twin(GadgetVariant v) {
    v.twin = true;
    for (auto& p : v.polarity) p = flip_polarity(p);
    for (auto& clause : v.clauses) {
        for (auto& lit : clause) {
            if (lit.kind == K::TermTrue) lit.kind = K::TermFalse;
            else if (lit.kind == K::TermFalse) lit.kind = K::TermTrue;
        }
    }
    std::swap(v.true_terminals, v.false_terminals);
    return v;
}

// Swap the Y and Z slots (the AND gadget's two red edges are symmetric).
inline GadgetVariant swap_yz(GadgetVariant v) {
    std::swap(v.polarity[1], v.polarity[2]);
    for (auto& clause : v.clauses)
        for (auto& lit : clause) {
            if (lit.kind == K::EdgeY) lit.kind = K::EdgeZ;
            else if (lit.kind == K::EdgeZ) lit.kind = K::EdgeY;
        }
    return v;
}

// Apply a role permutation for the fully symmetric OR gadget: role_slot[r]
// names the slot that plays role r of the base gadget.
inline GadgetVariant permute_or(GadgetVariant v, const std::array<int, 3>& role_slot) {
    std::array<Polarity, 3> pol{};
    for (int r = 0; r < 3; ++r) pol[static_cast<std::size_t>(role_slot[static_cast<std::size_t>(r)])] =
        v.polarity[static_cast<std::size_t>(r)];
    v.polarity = pol;
    auto map_kind = [&](K k) {
        int role = k == K::EdgeX ? 0 : k == K::EdgeY ? 1 : 2;
        int slot = role_slot[static_cast<std::size_t>(role)];
        return slot == 0 ? K::EdgeX : slot == 1 ? K::EdgeY : K::EdgeZ;
    };
    for (auto& clause : v.clauses)
        for (auto& lit : clause)
            if (lit.kind == K::EdgeX || lit.kind == K::EdgeY || lit.kind == K::EdgeZ)
                lit.kind = map_kind(lit.kind);
    return v;
}

}  // namespace gadget

// All twelve audited gadget forms: the six base variants plus their
// terminal-swapped twins.
inline std::vector<GadgetVariant> audit_variants() {
    std::vector<GadgetVariant> out = gadget::base_variants();
    std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out.push_back(gadget::make_twin(out[i]));
    return out;
}

// Select the gadget emitted for an AND node whose slots X (blue), Y, Z (red)
// have the given variable polarities. Every combination has a monotone
// variant; when the blue slot is out-positive the twin of the mirrored
// selection is used.
inline GadgetVariant compile_and_gadget(const std::array<Polarity, 3>& sig) {
    using namespace gadget;
    bool twin = sig[0] == Out;
    std::array<Polarity, 3> inner = twin
        ? std::array<Polarity, 3>{In, flip_polarity(sig[1]), flip_polarity(sig[2])}
        : sig;
    auto base = base_variants();
    GadgetVariant v;
    if (inner[1] == In && inner[2] == In) v = base[0];          // eq2
    else if (inner[1] == Out && inner[2] == In) v = base[1];    // eq3
    else if (inner[1] == In && inner[2] == Out) v = swap_yz(base[1]);
    else v = base[2];                                           // eq4
    if (twin) v = make_twin(v);
    return v;
}

// Select the gadget for an OR node (all three blue slots are symmetric):
// the slot count of in-positive variables picks the equation, a role
// permutation moves the caller's slots into the base gadget's roles.
inline GadgetVariant compile_or_gadget(const std::array<Polarity, 3>& sig) {
    using namespace gadget;
    auto base = base_variants();
    std::vector<int> ins, outs;
    for (int i = 0; i < 3; ++i) (sig[static_cast<std::size_t>(i)] == In ? ins : outs).push_back(i);
    switch (ins.size()) {
        case 3: return base[4];                                    // eq6
        case 0: return make_twin(base[4]);
        case 1: return permute_or(base[3], {ins[0], outs[0], outs[1]});   // eq5
        default: return permute_or(base[5], {ins[0], ins[1], outs[0]});   // eq7
    }
}

inline GadgetVariant select_gadget(NodeKind kind, const std::array<Polarity, 3>& sig) {
    return kind == NodeKind::And ? compile_and_gadget(sig) : compile_or_gadget(sig);
}

// --- rigid gadget -----------------------------------------------------------

// Four monotone clauses over four fresh variables whose canonical assignment
// (t, z true; x, y false) has no flip neighbors, pinning terminal values.
struct RigidGadget {
    std::array<std::string, 4> variable_names;      // t, x, y, z
    std::vector<std::array<int, 3>> clauses;        // local indices
    std::array<std::uint8_t, 4> canonical{1, 0, 0, 1};
};

inline RigidGadget compile_rigid_gadget(const std::string& prefix) {
    RigidGadget g;
    g.variable_names = {prefix + ".t", prefix + ".x", prefix + ".y", prefix + ".z"};
    // (t|x|z) (t|y|z) (t|x|y) (x|y|z) with t=0, x=1, y=2, z=3
    g.clauses = {{0, 1, 3}, {0, 2, 3}, {0, 1, 2}, {1, 2, 3}};
    return g;
}

// --- gadget evaluation ------------------------------------------------------

namespace gadget {

inline bool lit_value(const GadgetLit& lit, const std::array<std::uint8_t, 3>& edges,
                      const std::vector<std::uint8_t>& aux) {
    switch (lit.kind) {
        case K::EdgeX: return edges[0];
        case K::EdgeY: return edges[1];
        case K::EdgeZ: return edges[2];
        case K::TermTrue: return true;
        case K::TermFalse: return false;
        case K::Aux: return aux[static_cast<std::size_t>(lit.index)];
    }
    return false;
}

inline bool variant_satisfied(const GadgetVariant& v, const std::array<std::uint8_t, 3>& edges,
                              const std::vector<std::uint8_t>& aux) {
    for (const auto& clause : v.clauses) {
        bool first = lit_value(clause[0], edges, aux);
        bool mixed = lit_value(clause[1], edges, aux) != first ||
                     lit_value(clause[2], edges, aux) != first;
        if (!mixed) return false;
    }
    return true;
}

// In/out orientation triple -> edge variable values under the signature.
inline std::array<std::uint8_t, 3> orientation_vars(const std::array<Polarity, 3>& sig,
                                                    const std::array<std::uint8_t, 3>& incoming) {
    std::array<std::uint8_t, 3> vars{};
    for (std::size_t i = 0; i < 3; ++i)
        vars[i] = (sig[i] == Polarity::InPositive) == static_cast<bool>(incoming[i]);
    return vars;
}

inline bool node_orientation_legal(NodeKind kind, const std::array<std::uint8_t, 3>& incoming) {
    if (kind == NodeKind::And) return incoming[0] || (incoming[1] && incoming[2]);
    return incoming[0] || incoming[1] || incoming[2];
}

// Deterministic aux choice: false unless forced, i.e. the satisfying aux
// vector with the fewest trues, ties broken lexicographically (slot 0 most
// significant).
inline std::optional<std::vector<std::uint8_t>> canonical_aux(
    const GadgetVariant& v, const std::array<std::uint8_t, 3>& edges) {
    int k = v.aux_count;
    std::vector<unsigned> order(static_cast<std::size_t>(1) << k);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [](unsigned a, unsigned b) {
        int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    for (unsigned m : order) {
        std::vector<std::uint8_t> aux(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) aux[static_cast<std::size_t>(i)] = (m >> (k - 1 - i)) & 1u;
        if (variant_satisfied(v, edges, aux)) return aux;
    }
    return std::nullopt;
}

}  // namespace gadget

// --- gadget audit -----------------------------------------------------------

struct GadgetAuditEntry {
    std::string variant;
    bool twin = false;
    std::array<Polarity, 3> polarity{};
    int clause_count = 0;
    int aux_count = 0;
    bool projection_ok = false;
    bool lifts_ok = false;
    bool forest_ok = false;
    std::string witness;  // first failure, if any

    bool ok() const { return projection_ok && lifts_ok && forest_ok; }
};

struct GadgetAuditReport {
    std::vector<GadgetAuditEntry> entries;
    bool rigid_isolated = false;
    std::string rigid_witness;

    bool ok() const {
        if (!rigid_isolated) return false;
        for (const auto& e : entries)
            if (!e.ok()) return false;
        return true;
    }
};

namespace detail {

inline std::string edge_bits_string(const std::array<std::uint8_t, 3>& e) {
    std::string s = "(x=";
    s += e[0] ? '1' : '0';
    s += ",y=";
    s += e[1] ? '1' : '0';
    s += ",z=";
    s += e[2] ? '1' : '0';
    s += ')';
    return s;
}

// (a) The projection of the gadget's satisfying assignments (terminals
// pinned) onto the edge variables must equal the encoded legal orientation
// set of the node.
inline bool audit_projection(const GadgetVariant& v, std::string& witness) {
    for (unsigned eo = 0; eo < 8; ++eo) {
        std::array<std::uint8_t, 3> incoming = {static_cast<std::uint8_t>((eo >> 2) & 1),
                                                static_cast<std::uint8_t>((eo >> 1) & 1),
                                                static_cast<std::uint8_t>(eo & 1)};
        auto edges = gadget::orientation_vars(v.polarity, incoming);
        bool satisfiable = gadget::canonical_aux(v, edges).has_value();
        bool legal = gadget::node_orientation_legal(v.node, incoming);
        if (satisfiable != legal) {
            witness = "edge values " + edge_bits_string(edges) + " are " +
                      (satisfiable ? "satisfiable" : "unsatisfiable") + " but orientation is " +
                      (legal ? "legal" : "illegal");
            return false;
        }
    }
    return true;
}

// (b) Every legal single-edge orientation flip at the node lifts to a flip
// path inside the gadget: only the flipped edge variable and the gadget's
// aux variables move, every intermediate assignment satisfies the gadget.
inline bool audit_lifts(const GadgetVariant& v, std::string& witness) {
    int k = v.aux_count;
    auto pack = [&](std::uint8_t ebit, const std::vector<std::uint8_t>& aux) {
        unsigned s = ebit;
        for (int i = 0; i < k; ++i) s = (s << 1) | aux[static_cast<std::size_t>(i)];
        return s;
    };
    for (unsigned eo = 0; eo < 8; ++eo) {
        std::array<std::uint8_t, 3> in_from = {static_cast<std::uint8_t>((eo >> 2) & 1),
                                               static_cast<std::uint8_t>((eo >> 1) & 1),
                                               static_cast<std::uint8_t>(eo & 1)};
        if (!gadget::node_orientation_legal(v.node, in_from)) continue;
        for (std::size_t slot = 0; slot < 3; ++slot) {
            auto in_to = in_from;
            in_to[slot] ^= 1;
            if (!gadget::node_orientation_legal(v.node, in_to)) continue;

            auto e_from = gadget::orientation_vars(v.polarity, in_from);
            auto e_to = gadget::orientation_vars(v.polarity, in_to);
            auto aux_from = gadget::canonical_aux(v, e_from);
            auto aux_to = gadget::canonical_aux(v, e_to);
            if (!aux_from || !aux_to) {
                witness = "no satisfying aux extension at " + edge_bits_string(e_from);
                return false;
            }

            // BFS over (flipped edge bit, aux bits); other edges frozen.
            unsigned start = pack(e_from[slot], *aux_from);
            unsigned goal = pack(e_to[slot], *aux_to);
            std::vector<char> seen(static_cast<std::size_t>(1) << (k + 1), 0);
            std::vector<unsigned> frontier{start};
            seen[start] = 1;
            bool found = start == goal;
            while (!frontier.empty() && !found) {
                std::vector<unsigned> next;
                for (unsigned s : frontier) {
                    for (int b = 0; b <= k; ++b) {
                        unsigned t = s ^ (1u << b);
                        if (seen[t]) continue;
                        auto edges = e_from;
                        edges[slot] = (t >> k) & 1u;
                        std::vector<std::uint8_t> aux(static_cast<std::size_t>(k));
                        for (int i = 0; i < k; ++i)
                            aux[static_cast<std::size_t>(i)] = (t >> (k - 1 - i)) & 1u;
                        if (!gadget::variant_satisfied(v, edges, aux)) continue;
                        seen[t] = 1;
                        if (t == goal) {
                            found = true;
                            break;
                        }
                        next.push_back(t);
                    }
                    if (found) break;
                }
                frontier = std::move(next);
            }
            if (!found) {
                witness = "flip of slot " + std::to_string(slot) + " from " +
                          edge_bits_string(e_from) + " does not lift";
                return false;
            }
        }
    }
    return true;
}

// (c) The variable-clause incidence graph of the gadget must be acyclic.
inline bool audit_forest(const GadgetVariant& v, std::string& witness) {
    std::map<GadgetLit, int> var_id;
    int next = static_cast<int>(v.clauses.size());  // clause vertices first
    std::vector<int> parent;
    for (std::size_t i = 0; i < v.clauses.size(); ++i) parent.push_back(static_cast<int>(i));
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (std::size_t ci = 0; ci < v.clauses.size(); ++ci) {
        for (const auto& lit : v.clauses[ci]) {
            auto it = var_id.find(lit);
            if (it == var_id.end()) {
                it = var_id.emplace(lit, next++).first;
                parent.push_back(it->second);
            }
            int a = find(static_cast<int>(ci)), b = find(it->second);
            if (a == b) {
                witness = "incidence cycle through clause " + std::to_string(ci);
                return false;
            }
            parent[static_cast<std::size_t>(a)] = b;
        }
    }
    return true;
}

}  // namespace detail

// Mechanizes the by-inspection claims about the node gadgets, over a variant
// table (the stock table by default; tests inject mutated tables): the
// projection of each gadget's satisfying assignments onto its edge variables
// equals the node's legal orientation set, every legal orientation flip
// lifts to a flip path within the gadget, and the gadget's variable-clause
// incidence graph is a forest.
inline GadgetAuditReport gadget_audit(const std::vector<GadgetVariant>& variants = audit_variants()) {
    GadgetAuditReport report;

    // Rigid gadget isolation: of the 16 assignments, the canonical one
    // satisfies all four clauses and has no flip neighbors.
    RigidGadget rigid = compile_rigid_gadget("rig");
    auto rigid_sat = [&](unsigned m) {
        for (const auto& c : rigid.clauses) {
            bool a = (m >> c[0]) & 1u, b = (m >> c[1]) & 1u, d = (m >> c[2]) & 1u;
            if (a == b && b == d) return false;
        }
        return true;
    };
    unsigned canonical = 0;
    for (int i = 0; i < 4; ++i)
        if (rigid.canonical[static_cast<std::size_t>(i)]) canonical |= 1u << i;
    report.rigid_isolated = true;
    if (!rigid_sat(canonical)) {
        report.rigid_isolated = false;
        report.rigid_witness = "canonical assignment does not satisfy the rigid clauses";
    }
    for (int b = 0; b < 4 && report.rigid_isolated; ++b) {
        if (rigid_sat(canonical ^ (1u << b))) {
            report.rigid_isolated = false;
            report.rigid_witness =
                "flipping rigid variable " + rigid.variable_names[static_cast<std::size_t>(b)] +
                " stays satisfying";
        }
    }

    for (const auto& v : variants) {
        GadgetAuditEntry entry;
        entry.variant = v.name;
        entry.twin = v.twin;
        entry.polarity = v.polarity;
        entry.clause_count = static_cast<int>(v.clauses.size());
        entry.aux_count = v.aux_count;
        std::string witness;
        entry.projection_ok = detail::audit_projection(v, witness);
        if (!entry.projection_ok && entry.witness.empty()) entry.witness = witness;
        entry.lifts_ok = detail::audit_lifts(v, witness);
        if (!entry.lifts_ok && entry.witness.empty()) entry.witness = witness;
        entry.forest_ok = detail::audit_forest(v, witness);
        if (!entry.forest_ok && entry.witness.empty()) entry.witness = witness;
        report.entries.push_back(std::move(entry));
    }
    return report;
}

// --- reduction from NCL -----------------------------------------------------

struct NaeReductionOptions {
    // Reuse one global supply of rigid gadgets for all node gadgets instead
    // of allocating fresh ones per node. Shrinks formulas for test searches;
    // terminals stay distinct within each gadget either way.
    bool share_rigid = false;
};

struct EdgeVarInfo {
    int variable = 0;
    Polarity polarity = Polarity::InPositive;
    std::string in_node;  // endpoint at which a true variable means "incoming"
};

struct RigidGadgetInfo {
    std::array<int, 4> variables{};  // t, x, y, z
    std::vector<std::size_t> clause_indices;
};

struct NodeGadgetInfo {
    std::string node_id;
    GadgetVariant variant;
    std::array<std::size_t, 3> edge_indices{};  // graph edge index per slot X,Y,Z
    std::array<int, 3> edge_vars{};
    std::vector<int> aux_vars;
    std::vector<int> true_terms, false_terms;
    std::vector<std::size_t> clause_indices;
};

struct NaeReduction {
    ConstraintGraph graph;
    Formula formula;
    Assignment start, goal;
    std::vector<int> edge_vars;                 // formula variable per graph edge index
    std::map<std::string, EdgeVarInfo> edge_var;  // keyed by edge id
    std::vector<RigidGadgetInfo> rigids;
    std::vector<NodeGadgetInfo> gadgets;
};

namespace detail {

struct ReductionBuilder {
    std::vector<std::string> names;
    std::vector<std::vector<Literal>> clauses;
    std::vector<RigidGadgetInfo> rigids;
    std::vector<int> shared_trues, shared_falses;
    bool share = false;

    int add_var(const std::string& name) {
        names.push_back(name);
        return static_cast<int>(names.size()) - 1;
    }

    RigidGadgetInfo& add_rigid() {
        RigidGadget spec = compile_rigid_gadget("rig" + std::to_string(rigids.size()));
        RigidGadgetInfo info;
        for (int i = 0; i < 4; ++i)
            info.variables[static_cast<std::size_t>(i)] =
                add_var(spec.variable_names[static_cast<std::size_t>(i)]);
        for (const auto& c : spec.clauses) {
            info.clause_indices.push_back(clauses.size());
            clauses.push_back({Literal{info.variables[static_cast<std::size_t>(c[0])]},
                               Literal{info.variables[static_cast<std::size_t>(c[1])]},
                               Literal{info.variables[static_cast<std::size_t>(c[2])]}});
        }
        rigids.push_back(info);
        return rigids.back();
    }

    // Distinct pinned-true / pinned-false variables for one node gadget.
    // Rigid gadgets supply two of each; more are created on demand. In
    // shared mode every gadget draws the same leading terminals.
    std::pair<std::vector<int>, std::vector<int>> take_terminals(int t_need, int f_need) {
        std::vector<int> trues, falses;
        if (share) {
            trues = shared_trues;
            falses = shared_falses;
        }
        while (static_cast<int>(trues.size()) < t_need ||
               static_cast<int>(falses.size()) < f_need) {
            const auto& r = add_rigid();
            trues.push_back(r.variables[0]);   // t
            trues.push_back(r.variables[3]);   // z
            falses.push_back(r.variables[1]);  // x
            falses.push_back(r.variables[2]);  // y
        }
        if (share) {
            shared_trues = trues;
            shared_falses = falses;
        }
        trues.resize(static_cast<std::size_t>(t_need));
        falses.resize(static_cast<std::size_t>(f_need));
        return {trues, falses};
    }
};

inline void require_reducible(const ConstraintGraph& g, const Orientation& c1,
                              const Orientation& c2) {
    auto report = validate_constraint_graph(g);
    if (!report.ok())
        fail(Errc::illegal_input_configuration,
             "constraint graph is invalid: " + report.issues.front().subject + ": " +
                 report.issues.front().message);
    if (!is_legal_orientation(g, c1))
        fail(Errc::illegal_input_configuration, "start orientation is not legal");
    if (!is_legal_orientation(g, c2))
        fail(Errc::illegal_input_configuration, "goal orientation is not legal");
}

// Slots of a node: X = the blue edge of an AND node, then reds in id order;
// OR nodes take their three blues in id order.
inline std::array<std::size_t, 3> node_slots(const ConstraintGraph& g, const NclNode& n) {
    std::vector<std::size_t> blues, reds;
    for (std::size_t ei : g.incident_edges(n.id))
        (g.edges()[ei].color == EdgeColor::Blue ? blues : reds).push_back(ei);
    if (n.kind == NodeKind::And) return {blues[0], reds[0], reds[1]};
    return {blues[0], blues[1], blues[2]};
}

}  // namespace detail

// The deterministic satisfying assignment extending an orientation: edge
// variables read off the orientation, rigid variables at their canonical
// values, aux variables false unless forced.
inline Assignment canonical_extension(const NaeReduction& r, const Orientation& o);

// Compiles a constraint graph and two legal orientations into a monotone
// NAE 3-SAT reconfiguration instance. One variable per edge (true when the
// edge points at its lexicographically smaller endpoint), one gadget per
// node, rigid gadgets pinning the terminal values, aux variables false
// unless forced.
inline NaeReduction reduce_ncl_to_naesat(const ConstraintGraph& g, const Orientation& c1,
                                         const Orientation& c2,
                                         const NaeReductionOptions& options = {}) {
    detail::require_reducible(g, c1, c2);

    detail::ReductionBuilder b;
    b.share = options.share_rigid;

    NaeReduction r;
    r.graph = g;
    r.edge_vars.reserve(g.edges().size());
    for (const auto& e : g.edges()) {
        int var = b.add_var("e:" + e.id);
        r.edge_vars.push_back(var);
        r.edge_var[e.id] = {var, Polarity::InPositive, e.u};
    }

    for (const auto& n : g.nodes()) {
        NodeGadgetInfo info;
        info.node_id = n.id;
        info.edge_indices = detail::node_slots(g, n);
        std::array<Polarity, 3> sig{};
        for (std::size_t s = 0; s < 3; ++s) {
            const auto& e = g.edges()[info.edge_indices[s]];
            sig[s] = e.u == n.id ? Polarity::InPositive : Polarity::OutPositive;
            info.edge_vars[s] = r.edge_vars[info.edge_indices[s]];
        }
        info.variant = select_gadget(n.kind, sig);

        auto [trues, falses] =
            b.take_terminals(info.variant.true_terminals, info.variant.false_terminals);
        info.true_terms = trues;
        info.false_terms = falses;
        for (int i = 0; i < info.variant.aux_count; ++i)
            info.aux_vars.push_back(b.add_var("aux:" + n.id + ":" + std::to_string(i)));

        for (const auto& clause : info.variant.clauses) {
            std::vector<Literal> lits;
            for (const auto& lit : clause) {
                switch (lit.kind) {
                    case GadgetLit::Kind::EdgeX: lits.push_back({info.edge_vars[0]}); break;
                    case GadgetLit::Kind::EdgeY: lits.push_back({info.edge_vars[1]}); break;
                    case GadgetLit::Kind::EdgeZ: lits.push_back({info.edge_vars[2]}); break;
                    case GadgetLit::Kind::TermTrue:
                        lits.push_back({info.true_terms[static_cast<std::size_t>(lit.index)]});
                        break;
                    case GadgetLit::Kind::TermFalse:
                        lits.push_back({info.false_terms[static_cast<std::size_t>(lit.index)]});
                        break;
                    case GadgetLit::Kind::Aux:
                        lits.push_back({info.aux_vars[static_cast<std::size_t>(lit.index)]});
                        break;
                }
            }
            info.clause_indices.push_back(b.clauses.size());
            b.clauses.push_back(std::move(lits));
        }
        r.gadgets.push_back(std::move(info));
    }

    r.rigids = b.rigids;
    r.formula = Formula(b.names, b.clauses, FormulaSemantics::Nae);
    r.start = canonical_extension(r, c1);
    r.goal = canonical_extension(r, c2);
    if (!satisfies(r.formula, r.start) || !satisfies(r.formula, r.goal))
        fail(Errc::illegal_input_configuration, "constructed endpoint assignment is unsatisfying");
    return r;
}

inline Assignment canonical_extension(const NaeReduction& r, const Orientation& o) {
    if (o.toward_u.size() != r.edge_vars.size())
        fail(Errc::edge_set_mismatch, "orientation does not match the reduced graph");
    Assignment a(r.formula.variables().size(), 0);
    for (std::size_t i = 0; i < r.edge_vars.size(); ++i)
        a[static_cast<std::size_t>(r.edge_vars[i])] = o.toward_u[i];
    for (const auto& rigid : r.rigids) {
        a[static_cast<std::size_t>(rigid.variables[0])] = 1;  // t
        a[static_cast<std::size_t>(rigid.variables[3])] = 1;  // z
    }
    for (const auto& gi : r.gadgets) {
        std::array<std::uint8_t, 3> edges{};
        for (std::size_t s = 0; s < 3; ++s) edges[s] = a[static_cast<std::size_t>(gi.edge_vars[s])];
        auto aux = gadget::canonical_aux(gi.variant, edges);
        if (!aux)
            fail(Errc::illegal_input_configuration,
                 "no satisfying aux extension at node '" + gi.node_id + "'");
        for (std::size_t i = 0; i < aux->size(); ++i)
            a[static_cast<std::size_t>(gi.aux_vars[i])] = (*aux)[i];
    }
    return a;
}

// Reads the orientation off a satisfying assignment's edge variables.
inline Orientation project_assignment(const NaeReduction& r, const Assignment& a) {
    if (!satisfies(r.formula, a))
        fail(Errc::unsatisfied_assignment, "assignment does not satisfy the reduced formula");
    Orientation o;
    o.toward_u.reserve(r.edge_vars.size());
    for (int var : r.edge_vars) o.toward_u.push_back(a[static_cast<std::size_t>(var)]);
    return o;
}

// Lifts one legal edge flip to a flip sequence on the formula whose net
// effect changes only the edge variable and aux variables of the gadgets at
// the edge's endpoints, staying satisfying at every step. Returned as the
// list of flipped variable indices, starting from the canonical extension
// of `o` and ending at the canonical extension of the flipped orientation.
inline std::vector<int> lift_flip(const NaeReduction& r, const Orientation& o,
                                  const std::string& edge_id) {
    std::size_t edge = r.graph.edge_index(edge_id);
    auto flips = legal_flips(r.graph, o);
    if (std::find(flips.begin(), flips.end(), edge) == flips.end())
        fail(Errc::illegal_flip, "edge '" + edge_id + "' is not a legal flip");

    Orientation o2 = flipped(o, edge);
    Assignment start = canonical_extension(r, o);
    Assignment goal = canonical_extension(r, o2);

    // Variables allowed to move: the edge variable plus the aux variables of
    // the (at most two) gadgets containing it.
    std::vector<int> tracked{r.edge_vars[edge]};
    for (const auto& gi : r.gadgets)
        if (gi.edge_indices[0] == edge || gi.edge_indices[1] == edge || gi.edge_indices[2] == edge)
            for (int v : gi.aux_vars) tracked.push_back(v);

    auto pack = [&](const Assignment& a) {
        unsigned s = 0;
        for (int v : tracked) s = (s << 1) | a[static_cast<std::size_t>(v)];
        return s;
    };
    unsigned start_key = pack(start), goal_key = pack(goal);

    std::map<unsigned, std::pair<unsigned, int>> pred;  // state -> (previous, flipped var)
    pred[start_key] = {start_key, -1};
    std::vector<unsigned> frontier{start_key};
    Assignment work = start;
    bool found = start_key == goal_key;
    while (!frontier.empty() && !found) {
        std::vector<unsigned> next;
        for (unsigned s : frontier) {
            for (std::size_t ti = 0; ti < tracked.size(); ++ti) {
                unsigned t = s ^ (1u << (tracked.size() - 1 - ti));
                if (pred.count(t)) continue;
                for (std::size_t i = 0; i < tracked.size(); ++i)
                    work[static_cast<std::size_t>(tracked[i])] = (t >> (tracked.size() - 1 - i)) & 1u;
                if (!satisfies(r.formula, work)) continue;
                pred[t] = {s, tracked[ti]};
                if (t == goal_key) {
                    found = true;
                    break;
                }
                next.push_back(t);
            }
            if (found) break;
        }
        frontier = std::move(next);
    }
    if (!found) fail(Errc::illegal_flip, "no intertwined flip sequence exists (gadget defect)");

    std::vector<int> sequence;
    for (unsigned at = goal_key; at != start_key;) {
        auto [prev, var] = pred[at];
        sequence.push_back(var);
        at = prev;
    }
    std::reverse(sequence.begin(), sequence.end());
    return sequence;
}

// --- warmup reduction to plain 3-SAT ----------------------------------------

struct CnfReduction {
    ConstraintGraph graph;
    Formula formula;  // CNF semantics; AND nodes emit two binary clauses
    Assignment start, goal;
    std::vector<int> edge_vars;
    std::map<std::string, EdgeVarInfo> edge_var;
};

// The known direct encoding: per AND node the clauses (x_in | y_in) and
// (x_in | z_in), per OR node the single clause (x_in | y_in | z_in), with
// literals negated wherever the edge variable is out-positive at the node.
inline CnfReduction reduce_ncl_to_3sat(const ConstraintGraph& g, const Orientation& c1,
                                       const Orientation& c2) {
    detail::require_reducible(g, c1, c2);

    CnfReduction r;
    r.graph = g;
    std::vector<std::string> names;
    for (const auto& e : g.edges()) {
        r.edge_vars.push_back(static_cast<int>(names.size()));
        r.edge_var[e.id] = {r.edge_vars.back(), Polarity::InPositive, e.u};
        names.push_back("e:" + e.id);
    }

    std::vector<std::vector<Literal>> clauses;
    for (const auto& n : g.nodes()) {
        auto slots = detail::node_slots(g, n);
        auto lit_in = [&](std::size_t slot) {
            const auto& e = g.edges()[slots[slot]];
            return Literal{r.edge_vars[slots[slot]], e.u != n.id};
        };
        if (n.kind == NodeKind::And) {
            clauses.push_back({lit_in(0), lit_in(1)});
            clauses.push_back({lit_in(0), lit_in(2)});
        } else {
            clauses.push_back({lit_in(0), lit_in(1), lit_in(2)});
        }
    }
    r.formula = Formula(names, clauses, FormulaSemantics::Cnf);

    auto to_assignment = [&](const Orientation& o) {
        Assignment a(names.size(), 0);
        for (std::size_t i = 0; i < g.edges().size(); ++i) a[i] = o.toward_u[i];
        return a;
    };
    r.start = to_assignment(c1);
    r.goal = to_assignment(c2);
    return r;
}

}  // namespace reconfig

#endif
