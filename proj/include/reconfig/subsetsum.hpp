#ifndef RECONFIG_SUBSETSUM_HPP
#define RECONFIG_SUBSETSUM_HPP

#include <algorithm>
#include <functional>
#include <iterator>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "reconfig/core.hpp"
#include "reconfig/exactcover.hpp"

namespace reconfig {

// k-move subset-sum reconfiguration: configurations are index sets with the
// target sum, one move replaces a subset by another with symmetric
// difference at most k and the same sum. Values are arbitrary-precision;
// the color-separated encoding of the exact-cover reduction reaches
// thousands of bits.

using BigInt = boost::multiprecision::cpp_int;

// Index sets, sorted. Values are non-negative and may repeat; identity is
// by index.
using Selection = std::vector<int>;

struct SubsetSumInstance {
    std::vector<BigInt> values;
    BigInt target;
    Selection start_set, goal_set;
};

inline void validate_subsetsum_instance(const SubsetSumInstance& inst) {
    for (const auto& v : inst.values)
        if (v < 0) fail(Errc::invalid_input, "values must be non-negative");
}

inline BigInt selection_sum(const SubsetSumInstance& inst, const Selection& a) {
    BigInt s = 0;
    for (int i : a) {
        if (i < 0 || i >= static_cast<int>(inst.values.size()))
            fail(Errc::index_out_of_range, "selection index " + std::to_string(i));
        s += inst.values[static_cast<std::size_t>(i)];
    }
    return s;
}

namespace detail {

inline void require_sorted_selection(const Selection& a) {
    if (!std::is_sorted(a.begin(), a.end()) || std::adjacent_find(a.begin(), a.end()) != a.end())
        fail(Errc::invalid_input, "selection must be sorted without repeats");
}

// Enumerates additions completing a k-move: subsets of the complement with
// at most `slots` members summing to `needed`. Values are non-negative, so
// branches overshooting the target are cut.
inline void complete_additions(const SubsetSumInstance& inst, const std::vector<char>& in_set,
                               const BigInt& needed, int slots, int from, std::vector<int>& picked,
                               std::vector<std::vector<int>>& out) {
    if (needed == 0) {
        if (!picked.empty()) out.push_back(picked);
        if (slots == 0) return;
    }
    if (slots == 0) return;
    for (int j = from; j < static_cast<int>(inst.values.size()); ++j) {
        if (in_set[static_cast<std::size_t>(j)]) continue;
        const BigInt& v = inst.values[static_cast<std::size_t>(j)];
        if (v > needed) continue;
        picked.push_back(j);
        complete_additions(inst, in_set, needed - v, slots - 1, j + 1, picked, out);
        picked.pop_back();
    }
}

}  // namespace detail

// All index sets with the target sum whose symmetric difference from `a` is
// at most k (and at least 1). Removal subsets are enumerated directly;
// additions are filled in by bounded search.
inline std::vector<Selection> k_move_neighbors(const SubsetSumInstance& inst, const Selection& a,
                                               int k) {
    validate_subsetsum_instance(inst);
    detail::require_sorted_selection(a);
    if (k < 1) fail(Errc::invalid_input, "k must be positive");
    if (selection_sum(inst, a) != inst.target)
        fail(Errc::wrong_start_sum, "selection does not sum to the target");

    std::vector<char> in_set(inst.values.size(), 0);
    for (int i : a) in_set[static_cast<std::size_t>(i)] = 1;

    std::vector<Selection> out;
    // choose r indices to remove (r <= k), then fill additions
    std::vector<int> removal;
    auto emit = [&](const std::vector<int>& removed, const std::vector<int>& added) {
        Selection b;
        b.reserve(a.size() - removed.size() + added.size());
        for (int i : a)
            if (std::find(removed.begin(), removed.end(), i) == removed.end()) b.push_back(i);
        b.insert(b.end(), added.begin(), added.end());
        std::sort(b.begin(), b.end());
        out.push_back(std::move(b));
    };
    std::vector<std::vector<int>> additions;
    std::vector<int> picked;
    auto expand = [&](const std::vector<int>& removed) {
        BigInt removed_sum = 0;
        for (int i : removed) removed_sum += inst.values[static_cast<std::size_t>(i)];
        additions.clear();
        picked.clear();
        detail::complete_additions(inst, in_set, removed_sum,
                                   k - static_cast<int>(removed.size()), 0, picked, additions);
        for (const auto& added : additions)
            if (!removed.empty() || !added.empty()) emit(removed, added);
        // pure removals of zero-sum subsets
        if (!removed.empty() && removed_sum == 0) emit(removed, {});
    };
    std::function<void(std::size_t)> choose = [&](std::size_t from) {
        expand(removal);
        if (static_cast<int>(removal.size()) == k) return;
        for (std::size_t i = from; i < a.size(); ++i) {
            removal.push_back(a[i]);
            choose(i + 1);
            removal.pop_back();
        }
    };
    choose(0);

    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    out.erase(std::remove(out.begin(), out.end(), a), out.end());
    return out;
}

// --- the color-separated integer encoding ------------------------------------

struct EncodingParams {
    std::size_t universe_size = 0;
    int color_count = 0;
    unsigned padding_bits = 0;  // zeros appended per color level

    // Paper mode: 100 * ceil(log2(|U|)) zeros per color level.
    static EncodingParams paper(std::size_t universe_size, int color_count) {
        unsigned lg = 0;
        while ((1ull << lg) < universe_size) ++lg;
        return {universe_size, color_count, 100u * lg};
    }

    // Compact mode: caller-chosen padding, to be vetted by verify_injectivity.
    static EncodingParams compact(std::size_t universe_size, int color_count,
                                  unsigned padding_bits) {
        return {universe_size, color_count, padding_bits};
    }
};

// f(a_i) for the color-j element with 1-based universe index i: the binary
// encoding of i followed by j * padding zeros.
inline BigInt encode_element(int index, int color, const EncodingParams& params) {
    if (index < 1 || index > static_cast<int>(params.universe_size))
        fail(Errc::index_out_of_range, "element index " + std::to_string(index));
    if (color < 1 || color > params.color_count)
        fail(Errc::index_out_of_range, "color " + std::to_string(color));
    return BigInt(index) << (static_cast<unsigned>(color) * params.padding_bits);
}

// g(S) over 0-based element indices and 0-based colors.
inline BigInt set_value(const std::vector<int>& element_set, const Coloring& coloring,
                        const EncodingParams& params) {
    BigInt g = 0;
    for (int e : element_set)
        g += encode_element(e + 1, coloring.color[static_cast<std::size_t>(e)] + 1, params);
    return g;
}

struct InjectivityResult {
    bool injective = true;
    std::pair<int, int> witness{-1, -1};  // colliding family indices
};

// Brute-force check that g is one-to-one over the family.
inline InjectivityResult verify_injectivity(const std::vector<BigInt>& g_values) {
    std::map<BigInt, int> seen;
    for (int i = 0; i < static_cast<int>(g_values.size()); ++i) {
        auto [it, fresh] = seen.emplace(g_values[static_cast<std::size_t>(i)], i);
        if (!fresh) return {false, {it->second, i}};
    }
    return {};
}

inline InjectivityResult verify_injectivity(const std::vector<std::vector<int>>& family,
                                            const Coloring& coloring,
                                            const EncodingParams& params) {
    std::vector<BigInt> g;
    g.reserve(family.size());
    for (const auto& s : family) g.push_back(set_value(s, coloring, params));
    return verify_injectivity(g);
}

// 1-based encoding label per universe element (a permutation of 1..|U|).
// The element labeling is a free parameter of the encoding; the reduction
// exploits it to rule out arithmetic coincidences between family values.
using EncodingLabels = std::vector<int>;

inline EncodingLabels identity_labels(std::size_t universe_size) {
    EncodingLabels labels(universe_size);
    for (std::size_t e = 0; e < universe_size; ++e) labels[e] = static_cast<int>(e) + 1;
    return labels;
}

inline BigInt set_value(const std::vector<int>& element_set, const Coloring& coloring,
                        const EncodingParams& params, const EncodingLabels& labels) {
    BigInt g = 0;
    for (int e : element_set)
        g += encode_element(labels[static_cast<std::size_t>(e)],
                            coloring.color[static_cast<std::size_t>(e)] + 1, params);
    return g;
}

// A value-coincidence triple is a family triple with g(X) = g(Y) + g(Z)
// where X is not the disjoint union of Y and Z: such a triple would let a
// sum-preserving 3-move diverge from any set split or merge. Counted by
// brute force over family pairs.
inline int count_value_coincidences(const std::vector<std::vector<int>>& family,
                                    const std::vector<BigInt>& g) {
    std::map<BigInt, std::vector<int>> by_value;
    for (int i = 0; i < static_cast<int>(g.size()); ++i)
        by_value[g[static_cast<std::size_t>(i)]].push_back(i);
    int bad = 0;
    for (int y = 0; y < static_cast<int>(g.size()); ++y) {
        for (int z = y + 1; z < static_cast<int>(g.size()); ++z) {
            auto it = by_value.find(g[static_cast<std::size_t>(y)] + g[static_cast<std::size_t>(z)]);
            if (it == by_value.end()) continue;
            for (int x : it->second) {
                std::vector<int> united;
                std::set_union(family[static_cast<std::size_t>(y)].begin(),
                               family[static_cast<std::size_t>(y)].end(),
                               family[static_cast<std::size_t>(z)].begin(),
                               family[static_cast<std::size_t>(z)].end(),
                               std::back_inserter(united));
                bool disjoint = united.size() == family[static_cast<std::size_t>(y)].size() +
                                                     family[static_cast<std::size_t>(z)].size();
                if (!disjoint || united != family[static_cast<std::size_t>(x)]) ++bad;
            }
        }
    }
    return bad;
}

// Picks a labeling without value coincidences when one exists: identity
// first, exhaustive search on small universes, seeded shuffles otherwise.
// Returns the best labeling found together with its coincidence count.
inline std::pair<EncodingLabels, int> choose_encoding_labels(const ExactCoverInstance& inst,
                                                             const Coloring& coloring,
                                                             const EncodingParams& params) {
    auto score = [&](const EncodingLabels& labels) {
        std::vector<BigInt> g;
        g.reserve(inst.family.size());
        for (const auto& s : inst.family) g.push_back(set_value(s, coloring, params, labels));
        return count_value_coincidences(inst.family, g);
    };
    EncodingLabels best = identity_labels(inst.universe.size());
    int best_score = score(best);
    if (best_score == 0) return {best, 0};

    if (inst.universe.size() <= 7) {
        EncodingLabels perm = identity_labels(inst.universe.size());
        std::sort(perm.begin(), perm.end());
        do {
            int s = score(perm);
            if (s < best_score) {
                best = perm;
                best_score = s;
                if (s == 0) break;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return {best, best_score};
    }

    std::mt19937 rng(0);
    EncodingLabels perm = best;
    for (int attempt = 0; attempt < 2000 && best_score > 0; ++attempt) {
        std::shuffle(perm.begin(), perm.end(), rng);
        int s = score(perm);
        if (s < best_score) {
            best = perm;
            best_score = s;
        }
    }
    return {best, best_score};
}

struct CoverToSubsetSumReduction {
    SubsetSumInstance instance;
    EncodingParams params;
    EncodingLabels labels;          // element labeling used by the encoding
    int value_coincidences = 0;     // 0 means every 3-move is a set split/merge
    std::vector<BigInt> g;          // per family index; instance.values in the same order
};

// One value g(S) per family set, target = sum of f over the universe; the
// start and goal selections reuse the cover's family indices. Injectivity
// of g is verified by brute force (a valid coloring plus enough padding
// guarantees it; compact padding must earn it here). The element labeling
// is chosen to eliminate value coincidences whenever possible, so that
// sum-preserving 3-moves correspond exactly to set splits and merges.
inline CoverToSubsetSumReduction reduce_exactcover_to_subsetsum(
    const ExactCoverInstance& inst, const Coloring& coloring, const EncodingParams& params,
    const EncodingLabels& forced_labels = {}) {
    validate_exactcover_instance(inst);
    if (inst.family.empty()) fail(Errc::invalid_input, "family is empty");
    if (!coloring_valid(inst, coloring))
        fail(Errc::invalid_coloring, "coloring assigns a shared color within a family set");
    if (!is_exact_cover(inst, inst.start_cover) || !is_exact_cover(inst, inst.goal_cover))
        fail(Errc::not_exact_cover, "instance covers are not exact");

    CoverToSubsetSumReduction r;
    r.params = params;
    if (forced_labels.empty()) {
        auto [labels, coincidences] = choose_encoding_labels(inst, coloring, params);
        r.labels = std::move(labels);
        r.value_coincidences = coincidences;
    } else {
        if (forced_labels.size() != inst.universe.size())
            fail(Errc::invalid_input, "labeling does not cover the universe");
        EncodingLabels sorted = forced_labels;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != identity_labels(inst.universe.size()))
            fail(Errc::invalid_input, "labeling must be a permutation of 1..|U|");
        r.labels = forced_labels;
    }
    for (const auto& s : inst.family) r.g.push_back(set_value(s, coloring, params, r.labels));
    if (!forced_labels.empty())
        r.value_coincidences = count_value_coincidences(inst.family, r.g);
    auto injective = verify_injectivity(r.g);
    if (!injective.injective)
        fail(Errc::invalid_input,
             "set-to-value map is not injective: family sets " +
                 std::to_string(injective.witness.first) + " and " +
                 std::to_string(injective.witness.second) + " collide (padding too small)");

    r.instance.values = r.g;
    r.instance.target = 0;
    for (int e = 0; e < static_cast<int>(inst.universe.size()); ++e)
        r.instance.target += encode_element(r.labels[static_cast<std::size_t>(e)],
                                            coloring.color[static_cast<std::size_t>(e)] + 1, params);
    r.instance.start_set = inst.start_cover;
    r.instance.goal_set = inst.goal_cover;
    return r;
}

// Total unary length of the output (all values plus the target), reported
// as a decimal string; paper-mode instances overflow any fixed width.
inline BigInt unary_size_metric(const SubsetSumInstance& inst) {
    BigInt total = inst.target;
    for (const auto& v : inst.values) total += v;
    return total;
}

// --- problem binding ----------------------------------------------------------

// Neighbor generation for the 3-move relation precomputes, once per
// instance, the split pairs of every value, the merge partners of every
// pair, equal-value swaps and zero-valued indices; per-state work is then
// proportional to the output.
class SubsetSumModel {
  public:
    using Config = Selection;

    explicit SubsetSumModel(const SubsetSumInstance& inst, int k = 3) : inst_(&inst), k_(k) {
        validate_subsetsum_instance(inst);
        if (k_ == 3) {
            std::map<BigInt, std::vector<int>> by_value;
            for (int i = 0; i < static_cast<int>(inst.values.size()); ++i)
                by_value[inst.values[static_cast<std::size_t>(i)]].push_back(i);
            for (int i = 0; i < static_cast<int>(inst.values.size()); ++i) {
                const auto& vi = inst.values[static_cast<std::size_t>(i)];
                if (vi == 0) zeros_.push_back(i);
                auto it = by_value.find(vi);
                for (int j : it->second)
                    if (j != i) equal_[i].push_back(j);
            }
            splits_.resize(inst.values.size());
            for (int i = 0; i < static_cast<int>(inst.values.size()); ++i) {
                for (int j = i + 1; j < static_cast<int>(inst.values.size()); ++j) {
                    BigInt sum = inst.values[static_cast<std::size_t>(i)] +
                                 inst.values[static_cast<std::size_t>(j)];
                    auto it = by_value.find(sum);
                    if (it == by_value.end()) continue;
                    for (int m : it->second)
                        if (m != i && m != j) {
                            splits_[static_cast<std::size_t>(m)].emplace_back(i, j);
                            merges_[{i, j}].push_back(m);
                        }
                }
            }
        }
    }

    const SubsetSumInstance& instance() const { return *inst_; }

    bool feasible(const Config& c) const {
        detail::require_sorted_selection(c);
        return selection_sum(*inst_, c) == inst_->target;
    }

    std::vector<Config> neighbors(const Config& c) const {
        if (k_ != 3) return k_move_neighbors(*inst_, c, k_);
        return fast_3move_neighbors(c);
    }

    std::string encode(const Config& c) const { return encode_index_set(c); }

  private:
    std::vector<Config> fast_3move_neighbors(const Config& c) const {
        if (selection_sum(*inst_, c) != inst_->target)
            fail(Errc::wrong_start_sum, "selection does not sum to the target");
        std::vector<char> in_set(inst_->values.size(), 0);
        for (int i : c) in_set[static_cast<std::size_t>(i)] = 1;
        std::vector<Config> out;
        auto emit = [&](const std::vector<int>& removed, const std::vector<int>& added) {
            Config b;
            for (int i : c)
                if (std::find(removed.begin(), removed.end(), i) == removed.end()) b.push_back(i);
            b.insert(b.end(), added.begin(), added.end());
            std::sort(b.begin(), b.end());
            out.push_back(std::move(b));
        };
        // splits: remove m, add a pair (i, j) with v_i + v_j = v_m
        for (int m : c)
            for (auto [i, j] : splits_[static_cast<std::size_t>(m)])
                if (!in_set[static_cast<std::size_t>(i)] && !in_set[static_cast<std::size_t>(j)])
                    emit({m}, {i, j});
        // merges: remove a pair, add m with the pair's sum
        for (std::size_t ai = 0; ai < c.size(); ++ai)
            for (std::size_t bi = ai + 1; bi < c.size(); ++bi) {
                auto it = merges_.find({c[ai], c[bi]});
                if (it == merges_.end()) continue;
                for (int m : it->second)
                    if (!in_set[static_cast<std::size_t>(m)]) emit({c[ai], c[bi]}, {m});
            }
        // equal-value swaps (|D| = 2)
        for (int i : c)
            for (int j : equal_at(i))
                if (!in_set[static_cast<std::size_t>(j)]) emit({i}, {j});
        // zero-valued wiggles (|D| <= 3)
        zero_moves(c, in_set, emit);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        out.erase(std::remove(out.begin(), out.end(), c), out.end());
        return out;
    }

    const std::vector<int>& equal_at(int i) const {
        static const std::vector<int> none;
        auto it = equal_.find(i);
        return it == equal_.end() ? none : it->second;
    }

    template <typename Emit>
    void zero_moves(const Config& c, const std::vector<char>& in_set, Emit emit) const {
        std::vector<int> zin, zout;
        for (int z : zeros_) (in_set[static_cast<std::size_t>(z)] ? zin : zout).push_back(z);
        auto combos = [&](const std::vector<int>& pool, int take,
                          std::vector<std::vector<int>>& sink) {
            std::vector<int> cur;
            std::function<void(std::size_t)> rec = [&](std::size_t from) {
                if (static_cast<int>(cur.size()) == take) {
                    sink.push_back(cur);
                    return;
                }
                for (std::size_t i = from; i < pool.size(); ++i) {
                    cur.push_back(pool[i]);
                    rec(i + 1);
                    cur.pop_back();
                }
            };
            rec(0);
        };
        for (int r = 0; r <= 3; ++r) {
            for (int p = 0; p + r <= 3; ++p) {
                if (r + p == 0) continue;
                std::vector<std::vector<int>> rem, add;
                combos(zin, r, rem);
                combos(zout, p, add);
                for (const auto& rv : rem)
                    for (const auto& av : add)
                        if (!(rv.empty() && av.empty())) emit(rv, av);
            }
        }
    }

    const SubsetSumInstance* inst_;
    int k_;
    std::vector<std::vector<std::pair<int, int>>> splits_;  // per index: pairs summing to it
    std::map<std::pair<int, int>, std::vector<int>> merges_;  // per pair: merge targets
    std::map<int, std::vector<int>> equal_;                 // per index: other equal-valued indices
    std::vector<int> zeros_;
};

}  // namespace reconfig

#endif
