#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dmvr/rng.hpp"
#include "dmvr/value_set.hpp"

namespace dmvr {

/// Union/intersection consolidation of two value sets. The first argument
/// is the initiating node's set; on a size tie the initiator takes the
/// union. Returns (initiator's new set, responder's new set).
inline std::pair<ValueSet, ValueSet> consolidate(ValueSet vi, ValueSet vj) {
    if (vi.size() <= vj.size()) return {vi.unite(vj), vi.intersect(vj)};
    return {vi.intersect(vj), vi.unite(vj)};
}

/// Per-node memory: level k holds the latest witnessed value set of size k.
class MemoryBank {
public:
    MemoryBank() = default;
    explicit MemoryBank(int k) : k_(k) {}

    int k() const { return k_; }

    /// 1-based level access; unset levels are empty.
    ValueSet level(int lv) const { return levels_[lv - 1]; }
    void set_level(int lv, ValueSet v) { levels_[lv - 1] = v; }

    /// Stores v at level |v|; empty sets leave the bank untouched.
    void record(ValueSet v) {
        if (!v.empty()) levels_[v.size() - 1] = v;
    }

    bool operator==(const MemoryBank&) const = default;

private:
    std::array<ValueSet, kMaxChoices> levels_{};
    int k_ = 0;
};

/// Memory update following a consolidation; vi2/vj2 must be the
/// consolidate outputs of the same interaction.
inline void disseminate(MemoryBank& bank_i, MemoryBank& bank_j, ValueSet vi2, ValueSet vj2) {
    bank_i.record(vi2);
    bank_j.record(vj2);
}

/// An ordered list of choices, most votes first.
struct Ranking {
    std::array<std::uint8_t, kMaxChoices> order{};
    int k = 0;

    bool operator==(const Ranking&) const = default;
    std::string to_string() const;
};

/// Readout of a memory bank: the level differences of a nested chain.
/// Returns nullopt (undecided) while the bank is not a full chain with
/// singleton differences.
std::optional<Ranking> readout_ranking(const MemoryBank& bank);

/// Compact majority-voting node state: the current leader plus the rest of
/// the value set. The implied value set {leader} + rest is never empty.
struct VotingState {
    std::uint8_t leader = 0;
    ValueSet rest;

    ValueSet value_set() const { return rest.with(leader); }

    static VotingState initial(ValueSet vote) {
        VotingState s;
        s.leader = static_cast<std::uint8_t>(vote.lowest());
        s.rest = vote.without(s.leader);
        return s;
    }

    bool operator==(const VotingState&) const = default;
};

/// One compact-voting interaction: consolidation with the empty
/// intersection replaced by the full set, then leader repair on any node
/// whose leader fell out of its value set. Consumes one bounded-uniform
/// draw exactly when a repair fires (at most one node per step can need it).
void voting_step(VotingState& a, VotingState& b, int k, RandomStream& rng);

/// voting_step plus the accelerated dissemination rule: when both
/// post-interaction value sets have size > 1, a fair coin decides which
/// node adopts the other's pre-interaction leader. Consumes one extra draw
/// exactly when that guard holds.
void enhanced_step(VotingState& a, VotingState& b, int k, RandomStream& rng);

inline int readout_majority(const VotingState& s) { return s.leader; }

/// Compact ranking node state: a permutation of the choices plus a pointer;
/// the pointer prefix plays the role of the value set and every prefix
/// length doubles as that level's memory.
struct RankingState {
    std::array<std::uint8_t, kMaxChoices> order{};
    std::uint8_t pointer = 1;  // 1..k

    ValueSet prefix_set(int len) const {
        ValueSet v;
        for (int i = 0; i < len; ++i) v = v.with(order[i]);
        return v;
    }

    ValueSet value_set() const { return prefix_set(pointer); }

    /// Vote members lead the tuple (ascending), remaining choices follow
    /// (ascending); pointer covers the vote.
    static RankingState initial(ValueSet vote, int k);

    bool operator==(const RankingState&) const = default;
};

/// One compact-ranking interaction. Both tuples are reordered into the
/// blocks [intersection | union-minus-intersection | rest], each block
/// preserving the node's own prior entry order. The node with the smaller
/// pointer (the first argument on ties) takes the union size; the other
/// takes the intersection size, with an empty intersection encoded as
/// pointer k.
void ranking_step(RankingState& a, RankingState& b, int k);

Ranking readout_ranking_compact(const RankingState& s, int k);

/// Initial vote tallies: per-node vote sets, per-choice counts and
/// fractions. Multi-vote sets are allowed; a choice's count is the number
/// of nodes whose vote set contains it.
struct VoteProfile {
    int n = 0;
    int k = 0;
    std::vector<ValueSet> votes;
    std::array<int, kMaxChoices> counts{};

    double fraction(int choice) const { return static_cast<double>(counts[choice]) / n; }

    /// counts[0] > counts[1] > ... > counts[k-1]
    bool strictly_ordered() const;
    bool has_ties() const;

    int majority_choice() const;

    /// Ranking by descending count; ties broken by choice index (only
    /// meaningful when strictly_ordered()).
    Ranking ranking_by_counts() const;
};

VoteProfile init_profile(std::span<const ValueSet> votes, int k);

}  // namespace dmvr
