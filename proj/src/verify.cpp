#include "dmvr/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace dmvr {
namespace verify {

namespace {

// ---------- voting step with explicit nondeterministic branching ----------

using VotingPair = std::pair<VotingState, VotingState>;

void append_reencodings(ValueSet va, ValueSet vb, int la, int lb,
                        std::vector<VotingPair>& out) {
    // Leader repair branches over every member of the repaired set. At most
    // one side can need repair (the union holder keeps its leader).
    std::vector<VotingState> as, bs;
    auto options = [](ValueSet v, int leader, std::vector<VotingState>& dst) {
        if (v.contains(leader)) {
            dst.push_back({static_cast<std::uint8_t>(leader), v.without(leader)});
            return;
        }
        for (int m = 0; m < v.size(); ++m) {
            const int c = v.nth_member(m);
            dst.push_back({static_cast<std::uint8_t>(c), v.without(c)});
        }
    };
    options(va, la, as);
    options(vb, lb, bs);
    for (const auto& sa : as)
        for (const auto& sb : bs) out.push_back({sa, sb});
}

std::vector<VotingPair> voting_outcomes(const VotingState& a, const VotingState& b, int k) {
    const ValueSet full = ValueSet::full(k);
    auto [va, vb] = consolidate(a.value_set(), b.value_set());
    if (va.empty()) va = full;
    if (vb.empty()) vb = full;
    std::vector<VotingPair> out;
    append_reencodings(va, vb, a.leader, b.leader, out);
    return out;
}

void adopt(VotingState& s, int leader) {
    const ValueSet v = s.value_set();
    if (!v.contains(leader)) return;
    s.leader = static_cast<std::uint8_t>(leader);
    s.rest = v.without(leader);
}

std::vector<VotingPair> enhanced_outcomes(const VotingState& a, const VotingState& b, int k) {
    std::vector<VotingPair> base = voting_outcomes(a, b, k);
    std::vector<VotingPair> out;
    for (const auto& [sa, sb] : base) {
        if (sa.value_set().size() > 1 && sb.value_set().size() > 1) {
            VotingPair u1{sa, sb};
            adopt(u1.first, b.leader);
            VotingPair u0{sa, sb};
            adopt(u0.second, a.leader);
            out.push_back(u1);
            out.push_back(u0);
        } else {
            out.push_back({sa, sb});
        }
    }
    return out;
}

// ---------- state enumeration ----------

std::uint32_t voting_key(const VotingState& s) {
    return (static_cast<std::uint32_t>(s.leader) << 16) | s.rest.bits();
}

std::uint64_t ranking_key(const RankingState& s, int k) {
    std::uint64_t key = s.pointer;
    for (int i = 0; i < k; ++i) key = (key << 4) | s.order[i];
    return key;
}

std::string voting_state_str(const VotingState& s) {
    return "(" + ValueSet::single(s.leader).to_string() + "," + s.rest.to_string() + ")";
}

std::string ranking_state_str(const RankingState& s, int k) {
    std::string out = "([";
    for (int i = 0; i < k; ++i) {
        if (i) out += ',';
        out += 'c';
        out += std::to_string(s.order[i] + 1);
    }
    out += "],p=" + std::to_string(s.pointer) + ")";
    return out;
}

}  // namespace

StateCensus enumerate_states_voting(int k) {
    if (k < 1 || k > kMaxChoices)
        throw std::invalid_argument("voting state enumeration supports k in 1..16");
    StateCensus census;
    std::vector<VotingState> all;
    for (int leader = 0; leader < k; ++leader) {
        const std::uint16_t others = ValueSet::full(k).without(leader).bits();
        // enumerate subsets of the other k-1 choices
        std::uint16_t sub = 0;
        while (true) {
            all.push_back({static_cast<std::uint8_t>(leader), ValueSet::from_bits(sub)});
            if (sub == others) break;
            sub = (sub - others) & others;
        }
    }
    census.syntactic = all.size();
    if (k <= 4)
        for (const auto& s : all) census.listing.push_back(voting_state_str(s));

    if (k <= 8) {
        std::unordered_map<std::uint32_t, std::size_t> seen;
        std::vector<VotingState> states;
        auto insert = [&](const VotingState& s) {
            if (seen.emplace(voting_key(s), states.size()).second) states.push_back(s);
        };
        for (int c = 0; c < k; ++c) insert(VotingState::initial(ValueSet::single(c)));
        for (std::size_t i = 0; i < states.size(); ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                for (auto [x, y] : {std::pair{i, j}, std::pair{j, i}}) {
                    const VotingState sa = states[x];
                    const VotingState sb = states[y];
                    for (const auto& [na, nb] : voting_outcomes(sa, sb, k)) {
                        insert(na);
                        insert(nb);
                    }
                }
            }
        }
        census.reachable = states.size();
    }
    return census;
}

StateCensus enumerate_states_ranking(int k) {
    if (k < 1 || k > 8)
        throw std::invalid_argument("ranking state enumeration supports k in 1..8");
    StateCensus census;
    std::vector<std::uint8_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t count = 0;
    do {
        for (int p = 1; p <= k; ++p) {
            ++count;
            if (k <= 3) {
                RankingState s;
                std::copy(perm.begin(), perm.end(), s.order.begin());
                s.pointer = static_cast<std::uint8_t>(p);
                census.listing.push_back(ranking_state_str(s, k));
            }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    census.syntactic = count;

    if (k <= 6) {
        std::unordered_map<std::uint64_t, std::size_t> seen;
        std::vector<RankingState> states;
        auto insert = [&](const RankingState& s) {
            if (seen.emplace(ranking_key(s, k), states.size()).second) states.push_back(s);
        };
        for (int c = 0; c < k; ++c) insert(RankingState::initial(ValueSet::single(c), k));
        for (std::size_t i = 0; i < states.size(); ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                for (auto [x, y] : {std::pair{i, j}, std::pair{j, i}}) {
                    RankingState sa = states[x];
                    RankingState sb = states[y];
                    ranking_step(sa, sb, k);
                    insert(sa);
                    insert(sb);
                }
            }
        }
        census.reachable = states.size();
    }
    return census;
}

// ---------- model checking ----------

namespace {

struct ConfigSpace {
    int n = 0;
    int k = 0;
    Variant variant = Variant::CompactVoting;
    int majority = 0;
    Ranking truth;

    // Dense state tables per variant.
    std::vector<VotingState> vstates;
    std::vector<RankingState> rstates;
    std::unordered_map<std::uint64_t, int> state_id;

    bool voting() const { return is_voting(variant); }
    std::size_t state_count() const { return voting() ? vstates.size() : rstates.size(); }

    int id_of_voting(const VotingState& s) const { return state_id.at(voting_key(s)); }
    int id_of_ranking(const RankingState& s) const { return state_id.at(ranking_key(s, k)); }

    bool state_correct(int id) const {
        if (voting()) return vstates[id].leader == majority;
        for (int c = 0; c < k; ++c)
            if (rstates[id].order[c] != truth.order[c]) return false;
        return true;
    }

    std::string state_str(int id) const {
        return voting() ? voting_state_str(vstates[id]) : ranking_state_str(rstates[id], k);
    }
};

// Configurations are occupancy vectors over the dense state table, packed
// into 64 bits (counts fit in 3 bits at n <= 6; at most 18 states at k <= 3).
std::uint64_t pack_config(std::span<const std::uint8_t> occ) {
    std::uint64_t key = 0;
    for (std::size_t i = occ.size(); i-- > 0;) key = (key << 3) | occ[i];
    return key;
}

}  // namespace

ModelCheckResult model_check(int n, int k, std::span<const int> votes, Variant variant) {
    if (n < 2 || n > 6 || k < 1 || k > 3)
        throw std::invalid_argument("model check is limited to n <= 6, k <= 3");
    if (variant == Variant::ExplicitRanking)
        throw std::invalid_argument("model check covers the compact representations");
    if (static_cast<int>(votes.size()) != n)
        throw std::invalid_argument("need one vote per node");

    std::vector<ValueSet> vote_sets;
    for (int v : votes) {
        if (v < 0 || v >= k) throw std::invalid_argument("vote outside the choice set");
        vote_sets.push_back(ValueSet::single(v));
    }
    const VoteProfile profile = init_profile(vote_sets, k);

    ModelCheckResult result;
    const bool ranking = is_ranking(variant);
    if (ranking ? !profile.strictly_ordered() : [&] {
            const int maj = profile.majority_choice();
            for (int c = 0; c < k; ++c)
                if (c != maj && profile.counts[c] == profile.counts[maj]) return true;
            return false;
        }()) {
        result.verdict = ModelCheckResult::Verdict::TieUndefined;
        result.detail = "tied vote counts: correctness is not claimable";
        return result;
    }

    ConfigSpace cs;
    cs.n = n;
    cs.k = k;
    cs.variant = variant;
    cs.majority = profile.majority_choice();
    cs.truth = profile.ranking_by_counts();
    if (cs.voting()) {
        for (int leader = 0; leader < k; ++leader) {
            const std::uint16_t others = ValueSet::full(k).without(leader).bits();
            std::uint16_t sub = 0;
            while (true) {
                VotingState s{static_cast<std::uint8_t>(leader), ValueSet::from_bits(sub)};
                cs.state_id.emplace(voting_key(s), static_cast<int>(cs.vstates.size()));
                cs.vstates.push_back(s);
                if (sub == others) break;
                sub = (sub - others) & others;
            }
        }
    } else {
        std::vector<std::uint8_t> perm(k);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            for (int p = 1; p <= k; ++p) {
                RankingState s;
                std::copy(perm.begin(), perm.end(), s.order.begin());
                s.pointer = static_cast<std::uint8_t>(p);
                cs.state_id.emplace(ranking_key(s, k), static_cast<int>(cs.rstates.size()));
                cs.rstates.push_back(s);
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    const std::size_t S = cs.state_count();

    std::vector<std::uint8_t> occ(S, 0);
    for (ValueSet v : vote_sets) {
        const int id = cs.voting() ? cs.id_of_voting(VotingState::initial(v))
                                   : cs.id_of_ranking(RankingState::initial(v, k));
        ++occ[id];
    }

    std::unordered_map<std::uint64_t, int> config_index;
    std::vector<std::vector<int>> succ;
    std::vector<std::uint64_t> configs;
    std::vector<int> parent;

    auto intern = [&](std::uint64_t key) {
        const auto [it, fresh] = config_index.emplace(key, static_cast<int>(configs.size()));
        if (fresh) {
            configs.push_back(key);
            succ.emplace_back();
            parent.push_back(-1);
        }
        return std::pair{it->second, fresh};
    };

    const std::uint64_t root = pack_config(occ);
    intern(root);

    std::vector<std::uint8_t> cur(S), next(S);
    auto unpack = [&](std::uint64_t key, std::vector<std::uint8_t>& dst) {
        for (std::size_t i = 0; i < S; ++i) {
            dst[i] = key & 7u;
            key >>= 3;
        }
    };

    for (int idx = 0; idx < static_cast<int>(configs.size()); ++idx) {
        unpack(configs[idx], cur);
        for (std::size_t i = 0; i < S; ++i) {
            if (!cur[i]) continue;
            for (std::size_t j = 0; j < S; ++j) {
                if (!cur[j] || (i == j && cur[i] < 2)) continue;
                std::vector<std::pair<int, int>> outcomes;
                if (cs.voting()) {
                    const auto outs = variant == Variant::EnhancedVoting
                                          ? enhanced_outcomes(cs.vstates[i], cs.vstates[j], k)
                                          : voting_outcomes(cs.vstates[i], cs.vstates[j], k);
                    for (const auto& [sa, sb] : outs)
                        outcomes.emplace_back(cs.id_of_voting(sa), cs.id_of_voting(sb));
                } else {
                    RankingState sa = cs.rstates[i];
                    RankingState sb = cs.rstates[j];
                    ranking_step(sa, sb, k);
                    outcomes.emplace_back(cs.id_of_ranking(sa), cs.id_of_ranking(sb));
                }
                for (const auto& [ida, idb] : outcomes) {
                    next = cur;
                    --next[i];
                    --next[j];
                    ++next[ida];
                    ++next[idb];
                    const auto [nidx, fresh] = intern(pack_config(next));
                    succ[idx].push_back(nidx);
                    if (fresh) parent[nidx] = idx;
                }
            }
        }
    }
    result.configurations = configs.size();

    // Iterative Tarjan; bottom components must be all-correct.
    const int N = static_cast<int>(configs.size());
    std::vector<int> index(N, -1), low(N, 0), comp(N, -1);
    std::vector<char> on_stack(N, 0);
    std::vector<int> stack, comp_of_order;
    int next_index = 0, comp_count = 0;
    struct Frame {
        int v;
        std::size_t child;
    };
    std::vector<Frame> call;
    for (int start = 0; start < N; ++start) {
        if (index[start] != -1) continue;
        call.push_back({start, 0});
        while (!call.empty()) {
            auto& [v, child] = call.back();
            if (child == 0) {
                index[v] = low[v] = next_index++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            if (child < succ[v].size()) {
                const int w = succ[v][child++];
                if (index[w] == -1) {
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
            } else {
                if (low[v] == index[v]) {
                    while (true) {
                        const int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        comp[w] = comp_count;
                        if (w == v) break;
                    }
                    ++comp_count;
                }
                const int done = v;
                call.pop_back();
                if (!call.empty()) {
                    const int parent_v = call.back().v;
                    low[parent_v] = std::min(low[parent_v], low[done]);
                }
            }
        }
    }

    std::vector<char> bottom(comp_count, 1);
    for (int v = 0; v < N; ++v)
        for (int w : succ[v])
            if (comp[v] != comp[w]) bottom[comp[v]] = 0;

    for (int v = 0; v < N; ++v) {
        if (!bottom[comp[v]]) continue;
        unpack(configs[v], cur);
        bool ok = true;
        for (std::size_t i = 0; i < S && ok; ++i)
            if (cur[i] && !cs.state_correct(static_cast<int>(i))) ok = false;
        if (ok) continue;
        result.verdict = ModelCheckResult::Verdict::Fail;
        int depth = 0;
        for (int p = v; p != -1; p = parent[p]) ++depth;
        std::string desc;
        for (std::size_t i = 0; i < S; ++i) {
            if (!cur[i]) continue;
            if (!desc.empty()) desc += ' ';
            desc += cs.state_str(static_cast<int>(i)) + "x" + std::to_string(cur[i]);
        }
        result.detail = "absorbing class contains an incorrect configuration [" + desc +
                        "] reachable in " + std::to_string(depth - 1) + " steps";
        return result;
    }
    result.detail = "all absorbing classes read out correctly";
    return result;
}

// ---------- trace audit ----------

AuditReport audit_trace(const Trajectory& traj) {
    AuditReport report;
    auto fail = [&](std::size_t idx, const std::string& what) {
        report.pass = false;
        report.event_index = idx;
        report.failure = what + " at event " + std::to_string(idx);
        return report;
    };
    if (traj.initial_votes.empty())
        return fail(0, "trajectory carries no event log");

    const int n = traj.n;
    const int k = traj.k;
    const bool replaces = traj.variant != Variant::ExplicitRanking;
    const ValueSet full = ValueSet::full(k);

    std::vector<ValueSet> vals = traj.initial_votes;

    const std::size_t pair_count = static_cast<std::size_t>(k) * (k - 1) / 2;
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) pairs.emplace_back(a, b);

    constexpr std::ptrdiff_t kNever = -1;
    std::ptrdiff_t global_entry = kNever;
    std::vector<std::ptrdiff_t> pair_entry(pair_count, kNever);
    std::vector<ValueSet> proj(n);

    auto scan_memberships = [&](std::ptrdiff_t event_idx) {
        if (global_entry == kNever) {
            if (is_in_convergence_set(vals)) global_entry = event_idx;
        } else if (!is_in_convergence_set(vals)) {
            fail(static_cast<std::size_t>(event_idx), "convergence-set permanence violated");
            return false;
        }
        for (std::size_t pi = 0; pi < pair_count; ++pi) {
            const ValueSet mask =
                ValueSet::single(pairs[pi].first).with(pairs[pi].second);
            for (int i = 0; i < n; ++i) proj[i] = vals[i].intersect(mask);
            if (pair_entry[pi] == kNever) {
                if (is_in_convergence_set(proj)) pair_entry[pi] = event_idx;
            } else if (!is_in_convergence_set(proj)) {
                fail(static_cast<std::size_t>(event_idx),
                     "projected convergence-set permanence violated");
                return false;
            }
        }
        return true;
    };

    if (!scan_memberships(-1)) return report;  // -1 marks the initial state

    double prev_t = 0;
    for (std::size_t idx = 0; idx < traj.events.size(); ++idx) {
        const LogEvent& e = traj.events[idx];
        if (e.t < prev_t) return fail(idx, "event times regress");
        prev_t = e.t;
        if (e.a < 0 || e.a >= n || e.b < 0 || e.b >= n || e.a == e.b)
            return fail(idx, "malformed event endpoints");

        const ValueSet pa = vals[e.a];
        const ValueSet pb = vals[e.b];
        auto [ra, rb] = consolidate(pa, pb);
        const bool replaced_a = replaces && ra.empty();
        const bool replaced_b = replaces && rb.empty();

        // Per-choice size preservation; a replacement event adds one
        // membership of every choice on the replaced side.
        for (int c = 0; c < k; ++c) {
            const int pre = pa.contains(c) + pb.contains(c);
            int post = e.va_post.contains(c) + e.vb_post.contains(c);
            if (replaced_a && e.va_post == full) --post;
            if (replaced_b && e.vb_post == full) --post;
            if (pre != post) return fail(idx, "size preservation violated");
        }

        // Lyapunov: strictly decreases exactly when neither input contains
        // the other; unchanged otherwise.
        const bool nested = pa.subset_of(pb) || pb.subset_of(pa);
        const std::int64_t before = static_cast<std::int64_t>(pa.size()) * pa.size() +
                                    static_cast<std::int64_t>(pb.size()) * pb.size();
        const std::int64_t after =
            static_cast<std::int64_t>(e.va_post.size()) * e.va_post.size() +
            static_cast<std::int64_t>(e.vb_post.size()) * e.vb_post.size();
        if (nested && after != before)
            return fail(idx, "Lyapunov changed on a nested interaction");
        if (!nested && after <= before)
            return fail(idx, "Lyapunov did not decrease on a non-nested interaction");

        // The logged outputs must be the consolidation outputs.
        const ValueSet expect_a = replaced_a ? full : ra;
        const ValueSet expect_b = replaced_b ? full : rb;
        if (e.va_post != expect_a || e.vb_post != expect_b)
            return fail(idx, "logged outputs disagree with the transition rule");

        vals[e.a] = e.va_post;
        vals[e.b] = e.vb_post;

        if (!scan_memberships(static_cast<std::ptrdiff_t>(idx))) return report;
    }

    if (!traj.lyapunov_samples.empty()) {
        if (traj.lyapunov_samples.size() != traj.events.size())
            return fail(0, "Lyapunov sample count disagrees with the event log");
        for (std::size_t i = 1; i < traj.lyapunov_samples.size(); ++i)
            if (traj.lyapunov_samples[i] > traj.lyapunov_samples[i - 1])
                return fail(i, "recorded Lyapunov samples increase");
    }

    if (global_entry != kNever) {
        std::ptrdiff_t latest = kNever;
        for (std::size_t pi = 0; pi < pair_count; ++pi) {
            if (pair_entry[pi] == kNever)
                return fail(traj.events.size(),
                            "projected system never converged despite global convergence");
            latest = std::max(latest, pair_entry[pi]);
        }
        if (latest != global_entry)
            return fail(static_cast<std::size_t>(std::max(latest, global_entry)),
                        "projection identity violated (global entry is not the latest "
                        "pairwise entry)");
    }
    return report;
}

// ---------- representation equivalence ----------

namespace {

// Literal (leader, value-set) node evolved with the compact-voting rules;
// the oracle twin of the (leader, rest) encoding.
struct MirrorVotingNode {
    int leader;
    ValueSet value;
};

void mirror_voting_step(MirrorVotingNode& a, MirrorVotingNode& b, int k, RandomStream& rng) {
    const ValueSet full = ValueSet::full(k);
    auto [va, vb] = consolidate(a.value, b.value);
    if (va.empty()) va = full;
    if (vb.empty()) vb = full;
    a.value = va;
    b.value = vb;
    for (auto* node : {&a, &b})
        if (!node->value.contains(node->leader))
            node->leader = node->value.nth_member(
                static_cast<int>(rng.below(static_cast<std::uint32_t>(node->value.size()))));
}

std::vector<ValueSet> shuffled_votes(int n, int k, std::span<const int> counts,
                                     RandomStream& rng) {
    std::vector<ValueSet> votes;
    for (int c = 0; c < k; ++c)
        for (int i = 0; i < counts[c]; ++i) votes.push_back(ValueSet::single(c));
    if (static_cast<int>(votes.size()) != n)
        throw std::invalid_argument("counts must sum to n");
    for (std::size_t i = votes.size(); i > 1; --i) {
        const auto j = rng.below(static_cast<std::uint32_t>(i));
        std::swap(votes[i - 1], votes[j]);
    }
    return votes;
}

}  // namespace

EquivalenceResult equivalence_check(int n, int k, std::span<const int> counts,
                                    EquivalencePair pair, int trials,
                                    std::uint64_t base_seed) {
    EquivalenceResult result;
    auto fail = [&](int trial, std::uint64_t events, const std::string& what) {
        result.pass = false;
        result.detail = "trial " + std::to_string(trial) + ", event " +
                        std::to_string(events) + ": " + what;
        return result;
    };

    const ValueSet full = ValueSet::full(k);
    const std::uint64_t budget = 400ull * n * k + 2000;

    for (int trial = 0; trial < trials; ++trial) {
        const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(trial);
        RandomStream sched(seed ^ 0x9E3779B97F4A7C15ull);
        RandomStream rng_a(seed);
        RandomStream rng_b(seed);
        const auto votes = shuffled_votes(n, k, counts, sched);

        if (pair == EquivalencePair::Voting) {
            std::vector<MirrorVotingNode> mirror;
            std::vector<VotingState> compact;
            for (ValueSet v : votes) {
                const auto init = VotingState::initial(v);
                mirror.push_back({init.leader, v});
                compact.push_back(init);
            }
            for (std::uint64_t ev = 0; ev < budget; ++ev) {
                const int a = static_cast<int>(sched.below(static_cast<std::uint32_t>(n)));
                int b = static_cast<int>(sched.below(static_cast<std::uint32_t>(n - 1)));
                if (b >= a) ++b;
                mirror_voting_step(mirror[a], mirror[b], k, rng_a);
                voting_step(compact[a], compact[b], k, rng_b);
                for (int node : {a, b}) {
                    if (compact[node].value_set() != mirror[node].value ||
                        compact[node].leader != mirror[node].leader)
                        return fail(trial, ev, "voting states diverged at node " +
                                                   std::to_string(node));
                }
            }
            for (int i = 0; i < n; ++i)
                if (readout_majority(compact[i]) != mirror[i].leader)
                    return fail(trial, budget, "final voting readouts differ");
        } else {
            std::vector<ValueSet> vals = votes;
            std::vector<MemoryBank> banks(n, MemoryBank(k));
            std::vector<RankingState> compact;
            for (ValueSet v : votes) compact.push_back(RankingState::initial(v, k));

            for (std::uint64_t ev = 0; ev < budget; ++ev) {
                const int a = static_cast<int>(sched.below(static_cast<std::uint32_t>(n)));
                int b = static_cast<int>(sched.below(static_cast<std::uint32_t>(n - 1)));
                if (b >= a) ++b;
                auto [va, vb] = consolidate(vals[a], vals[b]);
                vals[a] = va;
                vals[b] = vb;
                disseminate(banks[a], banks[b], va, vb);
                ranking_step(compact[a], compact[b], k);
                for (int node : {a, b}) {
                    // The empty set and the full set are one encoded state.
                    const ValueSet expect = vals[node].empty() ? full : vals[node];
                    if (compact[node].value_set() != expect)
                        return fail(trial, ev, "value sets diverged at node " +
                                                   std::to_string(node));
                }
                // The memory level just written must equal the same-length
                // tuple prefix on the compact side.
                for (auto [node, written] : {std::pair{a, va}, std::pair{b, vb}}) {
                    if (written.empty()) continue;
                    const int lv = written.size();
                    if (banks[node].level(lv) != compact[node].prefix_set(lv))
                        return fail(trial, ev, "written memory level " + std::to_string(lv) +
                                                   " diverged at node " + std::to_string(node));
                }
            }
            for (int i = 0; i < n; ++i) {
                const auto bank_readout = readout_ranking(banks[i]);
                if (!bank_readout.has_value())
                    return fail(trial, budget, "bank readout still undecided at node " +
                                                   std::to_string(i) +
                                                   " (raise the event budget)");
                if (!(*bank_readout == readout_ranking_compact(compact[i], k)))
                    return fail(trial, budget, "final rankings differ at node " +
                                                   std::to_string(i));
            }
        }
    }
    return result;
}

}  // namespace verify
}  // namespace dmvr
