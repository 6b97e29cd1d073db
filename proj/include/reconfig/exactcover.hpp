#ifndef RECONFIG_EXACTCOVER_HPP
#define RECONFIG_EXACTCOVER_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reconfig/core.hpp"
#include "reconfig/tokens.hpp"

namespace reconfig {

// Exact-cover reconfiguration: covers are subfamilies hitting every universe
// element exactly once; the 2-way relation replaces one set by a disjoint
// pair with the same union (split) or the reverse (merge); the many-way
// relation allows whole partitions and unions.

namespace detail {

// Element sets as bit masks over the universe (arbitrary universe size).
struct Bits {
    std::vector<std::uint64_t> words;

    explicit Bits(std::size_t universe = 0) : words((universe + 63) / 64, 0) {}

    void set(int i) { words[static_cast<std::size_t>(i) / 64] |= 1ull << (i % 64); }
    bool test(int i) const { return (words[static_cast<std::size_t>(i) / 64] >> (i % 64)) & 1u; }

    bool operator==(const Bits&) const = default;
    bool operator<(const Bits& o) const { return words < o.words; }

    bool disjoint(const Bits& o) const {
        for (std::size_t w = 0; w < words.size(); ++w)
            if (words[w] & o.words[w]) return false;
        return true;
    }

    bool subset_of(const Bits& o) const {
        for (std::size_t w = 0; w < words.size(); ++w)
            if (words[w] & ~o.words[w]) return false;
        return true;
    }

    Bits united(const Bits& o) const {
        Bits r = *this;
        for (std::size_t w = 0; w < words.size(); ++w) r.words[w] |= o.words[w];
        return r;
    }

    bool any() const {
        for (auto w : words)
            if (w) return true;
        return false;
    }
};

}  // namespace detail

// Cover = sorted list of family indices.
using Cover = std::vector<int>;

struct ExactCoverInstance {
    std::vector<std::string> universe;       // element names
    std::vector<std::vector<int>> family;    // sorted element-index sets, distinct, non-empty
    Cover start_cover, goal_cover;
};

inline void validate_exactcover_instance(const ExactCoverInstance& inst) {
    std::vector<std::vector<int>> seen;
    for (const auto& s : inst.family) {
        if (s.empty()) fail(Errc::invalid_input, "family sets must be non-empty");
        if (!std::is_sorted(s.begin(), s.end()) ||
            std::adjacent_find(s.begin(), s.end()) != s.end())
            fail(Errc::invalid_input, "family sets must be sorted without repeats");
        for (int e : s)
            if (e < 0 || e >= static_cast<int>(inst.universe.size()))
                fail(Errc::invalid_input, "family set references unknown element");
    }
    seen = inst.family;
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        fail(Errc::invalid_input, "family sets must be distinct");
}

inline void require_known_sets(const ExactCoverInstance& inst, const Cover& c) {
    for (int s : c)
        if (s < 0 || s >= static_cast<int>(inst.family.size()))
            fail(Errc::unknown_set_reference, "cover references family index " + std::to_string(s));
}

inline bool is_exact_cover(const ExactCoverInstance& inst, const Cover& c) {
    require_known_sets(inst, c);
    std::vector<int> count(inst.universe.size(), 0);
    for (int s : c)
        for (int e : inst.family[static_cast<std::size_t>(s)])
            ++count[static_cast<std::size_t>(e)];
    for (int k : count)
        if (k != 1) return false;
    // duplicate family indices in c would double-cover and fail above
    return true;
}

// Precomputed move structure shared by the 2-way and many-way neighbor
// generators; building it is quadratic (or worse) in the family, so models
// construct it once per instance.
class CoverMoves {
  public:
    explicit CoverMoves(const ExactCoverInstance& inst) : inst_(&inst) {
        validate_exactcover_instance(inst);
        masks_.reserve(inst.family.size());
        for (const auto& s : inst.family) {
            detail::Bits b(inst.universe.size());
            for (int e : s) b.set(e);
            mask_index_.emplace(b, static_cast<int>(masks_.size()));
            masks_.push_back(std::move(b));
        }
        splits_.resize(inst.family.size());
        for (int i = 0; i < static_cast<int>(inst.family.size()); ++i) {
            for (int j = i + 1; j < static_cast<int>(inst.family.size()); ++j) {
                if (!masks_[static_cast<std::size_t>(i)].disjoint(
                        masks_[static_cast<std::size_t>(j)]))
                    continue;
                auto u = masks_[static_cast<std::size_t>(i)].united(
                    masks_[static_cast<std::size_t>(j)]);
                auto it = mask_index_.find(u);
                if (it != mask_index_.end())
                    splits_[static_cast<std::size_t>(it->second)].emplace_back(i, j);
            }
        }
        partitions_.resize(inst.family.size());
        for (int s = 0; s < static_cast<int>(inst.family.size()); ++s) {
            std::vector<int> candidates;
            for (int t = 0; t < static_cast<int>(inst.family.size()); ++t)
                if (t != s && masks_[static_cast<std::size_t>(t)].subset_of(
                                  masks_[static_cast<std::size_t>(s)]))
                    candidates.push_back(t);
            std::vector<int> parts;
            enumerate_partitions(masks_[static_cast<std::size_t>(s)],
                                 detail::Bits(inst.universe.size()), candidates, parts,
                                 partitions_[static_cast<std::size_t>(s)]);
        }
    }

    const ExactCoverInstance& instance() const { return *inst_; }
    const detail::Bits& mask(int s) const { return masks_[static_cast<std::size_t>(s)]; }
    const std::vector<std::pair<int, int>>& splits_of(int s) const {
        return splits_[static_cast<std::size_t>(s)];
    }
    const std::vector<std::vector<int>>& partitions_of(int s) const {
        return partitions_[static_cast<std::size_t>(s)];
    }

    std::optional<int> index_of_mask(const detail::Bits& b) const {
        auto it = mask_index_.find(b);
        if (it == mask_index_.end()) return std::nullopt;
        return it->second;
    }

  private:
    // All ways to partition `target` into >= 2 distinct family sets. Every
    // chosen part must contain the lowest still-uncovered element, which
    // fixes a canonical part order and rules out permuted duplicates.
    void enumerate_partitions(const detail::Bits& target, detail::Bits covered,
                              const std::vector<int>& candidates, std::vector<int>& parts,
                              std::vector<std::vector<int>>& out) const {
        if (covered == target) {
            if (parts.size() >= 2) {
                std::vector<int> sorted = parts;
                std::sort(sorted.begin(), sorted.end());
                out.push_back(std::move(sorted));
            }
            return;
        }
        int lowest = -1;
        for (int e = 0; e < static_cast<int>(inst_->universe.size()); ++e) {
            if (target.test(e) && !covered.test(e)) {
                lowest = e;
                break;
            }
        }
        for (int t : candidates) {
            const auto& m = masks_[static_cast<std::size_t>(t)];
            if (!m.test(lowest)) continue;
            bool clash = false;
            for (std::size_t w = 0; w < m.words.size() && !clash; ++w)
                if (m.words[w] & covered.words[w]) clash = true;
            if (clash) continue;
            parts.push_back(t);
            enumerate_partitions(target, covered.united(m), candidates, parts, out);
            parts.pop_back();
        }
    }

    const ExactCoverInstance* inst_;
    std::vector<detail::Bits> masks_;
    std::map<detail::Bits, int> mask_index_;
    std::vector<std::vector<std::pair<int, int>>> splits_;   // per set: disjoint pairs uniting to it
    std::vector<std::vector<std::vector<int>>> partitions_;  // per set: >=2-part partitions
};

namespace detail {

inline Cover replace_sets(const Cover& c, const std::vector<int>& remove,
                          const std::vector<int>& add) {
    Cover out;
    out.reserve(c.size() + add.size() - remove.size());
    for (int s : c)
        if (std::find(remove.begin(), remove.end(), s) == remove.end()) out.push_back(s);
    out.insert(out.end(), add.begin(), add.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

// One split (set -> disjoint pair) or one merge (disjoint pair -> set).
inline std::vector<Cover> split_merge_neighbors(const CoverMoves& moves, const Cover& c) {
    const auto& inst = moves.instance();
    if (!is_exact_cover(inst, c)) fail(Errc::not_exact_cover, "configuration is not an exact cover");
    std::vector<Cover> out;
    for (int s : c)
        for (auto [i, j] : moves.splits_of(s)) out.push_back(detail::replace_sets(c, {s}, {i, j}));
    for (std::size_t a = 0; a < c.size(); ++a) {
        for (std::size_t b = a + 1; b < c.size(); ++b) {
            const auto& ma = moves.mask(c[a]);
            const auto& mb = moves.mask(c[b]);
            if (!ma.disjoint(mb)) continue;  // cannot happen in an exact cover
            auto u = moves.index_of_mask(ma.united(mb));
            if (u) out.push_back(detail::replace_sets(c, {c[a], c[b]}, {*u}));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// One partition (set -> >=2 disjoint family sets) or one union (inverse).
inline std::vector<Cover> manyway_neighbors(const CoverMoves& moves, const Cover& c) {
    const auto& inst = moves.instance();
    if (!is_exact_cover(inst, c)) fail(Errc::not_exact_cover, "configuration is not an exact cover");
    std::vector<Cover> out;
    for (int s : c)
        for (const auto& parts : moves.partitions_of(s))
            out.push_back(detail::replace_sets(c, {s}, parts));
    // unions: a family set S not in the cover absorbs the cover members it
    // exactly decomposes into
    std::vector<char> in_cover(inst.family.size(), 0);
    for (int s : c) in_cover[static_cast<std::size_t>(s)] = 1;
    for (int s = 0; s < static_cast<int>(inst.family.size()); ++s) {
        if (in_cover[static_cast<std::size_t>(s)]) continue;
        const auto& target = moves.mask(s);
        detail::Bits covered(inst.universe.size());
        std::vector<int> absorbed;
        for (int m : c) {
            if (moves.mask(m).subset_of(target)) {
                covered = covered.united(moves.mask(m));
                absorbed.push_back(m);
            }
        }
        if (covered == target && absorbed.size() >= 2)
            out.push_back(detail::replace_sets(c, absorbed, {s}));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

enum class CoverMoveKind { SplitMerge, ManyWay };

struct ExactCoverModel {
    using Config = Cover;

    const CoverMoves* moves = nullptr;
    CoverMoveKind kind = CoverMoveKind::SplitMerge;

    bool feasible(const Config& c) const { return is_exact_cover(moves->instance(), c); }

    std::vector<Config> neighbors(const Config& c) const {
        return kind == CoverMoveKind::SplitMerge ? split_merge_neighbors(*moves, c)
                                                 : manyway_neighbors(*moves, c);
    }

    std::string encode(const Config& c) const { return encode_index_set(c); }
};

// --- hypergraph coloring ------------------------------------------------------

struct Coloring {
    std::vector<int> color;  // per universe element, 0-based
    int count = 0;
};

inline bool coloring_valid(const ExactCoverInstance& inst, const Coloring& coloring) {
    if (coloring.color.size() != inst.universe.size()) return false;
    for (int c : coloring.color)
        if (c < 0 || c >= coloring.count) return false;
    for (const auto& s : inst.family)
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = i + 1; j < s.size(); ++j)
                if (coloring.color[static_cast<std::size_t>(s[i])] ==
                    coloring.color[static_cast<std::size_t>(s[j])])
                    return false;
    return true;
}

// Greedy coloring of the element-conflict graph (elements conflict when
// they share a family set), in universe order. Instances produced from
// 3-regular token graphs list vertices before tokens, so vertex elements
// get at most 22 colors (conflict degree <= 21) and all token elements
// share one further color.
inline Coloring color_hypergraph(const ExactCoverInstance& inst) {
    validate_exactcover_instance(inst);
    std::size_t n = inst.universe.size();
    std::vector<std::vector<char>> conflict(n, std::vector<char>(n, 0));
    for (const auto& s : inst.family)
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = i + 1; j < s.size(); ++j) {
                conflict[static_cast<std::size_t>(s[i])][static_cast<std::size_t>(s[j])] = 1;
                conflict[static_cast<std::size_t>(s[j])][static_cast<std::size_t>(s[i])] = 1;
            }
    Coloring out;
    out.color.assign(n, -1);
    for (std::size_t e = 0; e < n; ++e) {
        std::vector<char> used(n + 1, 0);
        for (std::size_t f = 0; f < n; ++f)
            if (conflict[e][f] && out.color[f] >= 0) used[static_cast<std::size_t>(out.color[f])] = 1;
        int c = 0;
        while (used[static_cast<std::size_t>(c)]) ++c;
        out.color[e] = c;
        out.count = std::max(out.count, c + 1);
    }
    return out;
}

// --- reduction from labeled sliding tokens (slide sets) ----------------------

struct TokensToCoverReduction {
    ExactCoverInstance instance;
    std::vector<std::string> element_names;   // = instance.universe
    int vertex_count = 0;                     // elements [0, vertex_count) are vertices
    int token_count = 0;                      // then token elements
    std::map<std::vector<int>, int> family_index;  // element set -> family position
};

namespace detail {

inline std::vector<int> slide_set(const TokenGraph& g, int vi, int vj) {
    std::vector<int> s{vi, vj};
    for (int w : g.neighbors_of(vi)) s.push_back(w);
    for (int w : g.neighbors_of(vj)) s.push_back(w);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

inline void add_set(std::vector<std::vector<int>>& family,
                    std::map<std::vector<int>, int>& index, std::vector<int> s) {
    if (index.emplace(s, static_cast<int>(family.size())).second) family.push_back(std::move(s));
}

// All non-empty subsets of `base`, enumerated without recursion.
inline void add_all_subsets(std::vector<std::vector<int>>& family,
                            std::map<std::vector<int>, int>& index,
                            const std::vector<int>& base) {
    for (std::uint64_t m = 1; m < (1ull << base.size()); ++m) {
        std::vector<int> s;
        for (std::size_t b = 0; b < base.size(); ++b)
            if ((m >> b) & 1u) s.push_back(base[b]);
        add_set(family, index, std::move(s));
    }
}

}  // namespace detail

inline Cover f_red(const TokensToCoverReduction& r, const TokenInstance& tok, const Placement& p);

// Builds the exact-cover instance of the slide-set construction: universe =
// vertices plus tokens; for every adjacent pair (v_i, v_j) and token t_k the
// family holds all non-empty subsets of S_ij - {v_i} and S_ij - {v_j}, the
// pairs {v_i, t_k} and {v_j, t_k}, and S_ij + {t_k}; start and goal covers
// are the images of the two placements.
inline TokensToCoverReduction reduce_tokens_to_exactcover(const TokenInstance& tok) {
    if (!tok.graph.is_regular(3))
        fail(Errc::not_three_regular, "source graph must be 3-regular");
    if (!is_independent_placement(tok, tok.p1))
        fail(Errc::dependent_placement, "start placement is not independent");
    if (!is_independent_placement(tok, tok.p2))
        fail(Errc::dependent_placement, "goal placement is not independent");

    TokensToCoverReduction r;
    r.vertex_count = static_cast<int>(tok.graph.vertex_count());
    r.token_count = static_cast<int>(tok.tokens.size());
    for (const auto& v : tok.graph.vertices()) r.element_names.push_back("v:" + v);
    for (const auto& t : tok.tokens) r.element_names.push_back("t:" + t);

    std::vector<std::vector<int>> family;
    for (auto [vi, vj] : tok.graph.edges()) {
        auto s = detail::slide_set(tok.graph, vi, vj);
        for (int removed : {vi, vj}) {
            std::vector<int> base;
            for (int e : s)
                if (e != removed) base.push_back(e);
            detail::add_all_subsets(family, r.family_index, base);
        }
        for (int k = 0; k < r.token_count; ++k) {
            int tk = r.vertex_count + k;
            detail::add_set(family, r.family_index, {vi, tk});
            detail::add_set(family, r.family_index, {vj, tk});
            std::vector<int> big = s;
            big.push_back(tk);
            detail::add_set(family, r.family_index, std::move(big));
        }
    }

    r.instance.universe = r.element_names;
    r.instance.family = std::move(family);
    r.instance.start_cover = f_red(r, tok, tok.p1);
    r.instance.goal_cover = f_red(r, tok, tok.p2);
    return r;
}

// Token arrangement -> maximally split cover: each token-less vertex becomes
// the singleton {v_i}, each token t_k on v_i becomes the pair {v_i, t_k}.
inline Cover f_red(const TokensToCoverReduction& r, const TokenInstance& tok,
                   const Placement& p) {
    if (!is_independent_placement(tok, p))
        fail(Errc::dependent_placement, "placement is not independent");
    Cover c;
    std::vector<int> token_at(tok.graph.vertex_count(), -1);
    for (std::size_t k = 0; k < p.size(); ++k) token_at[static_cast<std::size_t>(p[k])] =
        static_cast<int>(k);
    for (int v = 0; v < static_cast<int>(tok.graph.vertex_count()); ++v) {
        std::vector<int> s;
        if (token_at[static_cast<std::size_t>(v)] >= 0) {
            s = {v, r.vertex_count + token_at[static_cast<std::size_t>(v)]};
            std::sort(s.begin(), s.end());
        } else {
            s = {v};
        }
        auto it = r.family_index.find(s);
        if (it == r.family_index.end())
            fail(Errc::invalid_input, "image set missing from the produced family");
        c.push_back(it->second);
    }
    std::sort(c.begin(), c.end());
    return c;
}

// Maximally split cover -> token arrangement (inverse of f_red). Every cover
// set must hold exactly one vertex element and at most one token element.
inline Placement f_red_inverse(const TokensToCoverReduction& r, const TokenInstance& tok,
                               const Cover& c) {
    require_known_sets(r.instance, c);
    if (!is_exact_cover(r.instance, c))
        fail(Errc::not_exact_cover, "configuration is not an exact cover");
    Placement p(tok.tokens.size(), -1);
    for (int s : c) {
        const auto& elems = r.instance.family[static_cast<std::size_t>(s)];
        int vertex = -1, token = -1, vertices = 0, tokens = 0;
        for (int e : elems) {
            if (e < r.vertex_count) {
                vertex = e;
                ++vertices;
            } else {
                token = e - r.vertex_count;
                ++tokens;
            }
        }
        if (vertices != 1 || tokens > 1)
            fail(Errc::not_maximally_split,
                 "cover set with " + std::to_string(vertices) + " vertices and " +
                     std::to_string(tokens) + " tokens");
        if (token >= 0) p[static_cast<std::size_t>(token)] = vertex;
    }
    for (int v : p)
        if (v < 0) fail(Errc::not_maximally_split, "a token is not placed by the cover");
    return p;
}

}  // namespace reconfig

#endif
