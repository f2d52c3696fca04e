#include "dmvr/protocol.hpp"

#include <algorithm>
#include <stdexcept>

namespace dmvr {

std::string Ranking::to_string() const {
    std::string out;
    for (int i = 0; i < k; ++i) {
        if (i) out += '>';
        out += 'c';
        out += std::to_string(order[i] + 1);
    }
    return out;
}

std::optional<Ranking> readout_ranking(const MemoryBank& bank) {
    Ranking r;
    r.k = bank.k();
    ValueSet prev;
    for (int lv = 1; lv <= bank.k(); ++lv) {
        const ValueSet m = bank.level(lv);
        if (m.size() != lv) return std::nullopt;
        const ValueSet diff = m.minus(prev);
        if (diff.size() != 1) return std::nullopt;
        r.order[lv - 1] = static_cast<std::uint8_t>(diff.lowest());
        prev = m;
    }
    return r;
}

namespace {

// Re-encode a node around its (possibly repaired) value set.
void reencode(VotingState& s, ValueSet v, RandomStream& rng) {
    if (!v.contains(s.leader))
        s.leader = static_cast<std::uint8_t>(
            v.nth_member(static_cast<int>(rng.below(static_cast<std::uint32_t>(v.size())))));
    s.rest = v.without(s.leader);
}

void adopt_leader(VotingState& s, int leader) {
    const ValueSet v = s.value_set();
    // A leader outside the value set is not representable as (leader, rest);
    // the copy is dropped. Unreachable for k <= 3.
    if (!v.contains(leader)) return;
    s.leader = static_cast<std::uint8_t>(leader);
    s.rest = v.without(leader);
}

}  // namespace

void voting_step(VotingState& a, VotingState& b, int k, RandomStream& rng) {
    const ValueSet full = ValueSet::full(k);
    auto [va, vb] = consolidate(a.value_set(), b.value_set());
    if (va.empty()) va = full;
    if (vb.empty()) vb = full;
    reencode(a, va, rng);
    reencode(b, vb, rng);
}

void enhanced_step(VotingState& a, VotingState& b, int k, RandomStream& rng) {
    const int pre_a = a.leader;
    const int pre_b = b.leader;
    voting_step(a, b, k, rng);
    if (a.value_set().size() > 1 && b.value_set().size() > 1) {
        if (rng.coin())
            adopt_leader(a, pre_b);
        else
            adopt_leader(b, pre_a);
    }
}

RankingState RankingState::initial(ValueSet vote, int k) {
    RankingState s;
    int pos = 0;
    for (int c = 0; c < k; ++c)
        if (vote.contains(c)) s.order[pos++] = static_cast<std::uint8_t>(c);
    s.pointer = static_cast<std::uint8_t>(pos);
    for (int c = 0; c < k; ++c)
        if (!vote.contains(c)) s.order[pos++] = static_cast<std::uint8_t>(c);
    return s;
}

namespace {

void reorder_blocks(RankingState& s, ValueSet a1, ValueSet a2, int k) {
    std::array<std::uint8_t, kMaxChoices> out{};  // entries past k stay zero
    int pos = 0;
    for (int i = 0; i < k; ++i)
        if (a1.contains(s.order[i])) out[pos++] = s.order[i];
    for (int i = 0; i < k; ++i)
        if (a2.contains(s.order[i]) && !a1.contains(s.order[i])) out[pos++] = s.order[i];
    for (int i = 0; i < k; ++i)
        if (!a2.contains(s.order[i])) out[pos++] = s.order[i];
    s.order = out;
}

}  // namespace

void ranking_step(RankingState& a, RankingState& b, int k) {
    const ValueSet pa = a.prefix_set(a.pointer);
    const ValueSet pb = b.prefix_set(b.pointer);
    const ValueSet a1 = pa.intersect(pb);
    const ValueSet a2 = pa.unite(pb);
    const bool a_takes_union = a.pointer <= b.pointer;
    reorder_blocks(a, a1, a2, k);
    reorder_blocks(b, a1, a2, k);
    const auto p_lo = static_cast<std::uint8_t>(a1.empty() ? k : a1.size());
    const auto p_hi = static_cast<std::uint8_t>(a2.size());
    if (a_takes_union) {
        a.pointer = p_hi;
        b.pointer = p_lo;
    } else {
        a.pointer = p_lo;
        b.pointer = p_hi;
    }
}

Ranking readout_ranking_compact(const RankingState& s, int k) {
    Ranking r;
    r.k = k;
    r.order = s.order;
    return r;
}

bool VoteProfile::strictly_ordered() const {
    for (int c = 0; c + 1 < k; ++c)
        if (counts[c] <= counts[c + 1]) return false;
    return true;
}

bool VoteProfile::has_ties() const {
    for (int c = 0; c < k; ++c)
        for (int d = c + 1; d < k; ++d)
            if (counts[c] == counts[d]) return true;
    return false;
}

int VoteProfile::majority_choice() const {
    int best = 0;
    for (int c = 1; c < k; ++c)
        if (counts[c] > counts[best]) best = c;
    return best;
}

Ranking VoteProfile::ranking_by_counts() const {
    Ranking r;
    r.k = k;
    for (int c = 0; c < k; ++c) r.order[c] = static_cast<std::uint8_t>(c);
    std::stable_sort(r.order.begin(), r.order.begin() + k,
                     [&](std::uint8_t x, std::uint8_t y) { return counts[x] > counts[y]; });
    return r;
}

VoteProfile init_profile(std::span<const ValueSet> votes, int k) {
    if (k < 1 || k > kMaxChoices)
        throw std::invalid_argument("choice count must be in 1..16");
    VoteProfile p;
    p.n = static_cast<int>(votes.size());
    p.k = k;
    p.votes.assign(votes.begin(), votes.end());
    const ValueSet full = ValueSet::full(k);
    for (std::size_t i = 0; i < votes.size(); ++i) {
        if (votes[i].empty())
            throw std::invalid_argument("node " + std::to_string(i) + " has an empty vote set");
        if (!votes[i].subset_of(full))
            throw std::invalid_argument("node " + std::to_string(i) +
                                        " votes outside the choice set");
        for (int c = 0; c < k; ++c)
            if (votes[i].contains(c)) ++p.counts[c];
    }
    return p;
}

}  // namespace dmvr
