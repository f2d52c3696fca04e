#include "dmvr/sim.hpp"

#include <cstdio>
#include <stdexcept>

namespace dmvr {

bool is_in_convergence_set(std::span<const ValueSet> values) {
    std::array<ValueSet, kMaxChoices + 1> rep{};
    std::array<bool, kMaxChoices + 1> present{};
    for (ValueSet v : values) {
        if (v.empty()) continue;
        const int s = v.size();
        if (present[s] && rep[s] != v) return false;
        rep[s] = v;
        present[s] = true;
    }
    ValueSet prev;
    bool have = false;
    for (int s = 1; s <= kMaxChoices; ++s) {
        if (!present[s]) continue;
        if (have && !prev.subset_of(rep[s])) return false;
        prev = rep[s];
        have = true;
    }
    return true;
}

std::int64_t lyapunov(std::span<const ValueSet> values, int k) {
    std::int64_t sumsq = 0;
    for (ValueSet v : values) sumsq += static_cast<std::int64_t>(v.size()) * v.size();
    return static_cast<std::int64_t>(values.size()) * k * k - sumsq;
}

void require_binary_observers(int k) {
    if (k != 2)
        throw std::invalid_argument("binary phase observers require exactly two choices");
}

namespace {

enum class ModelKind { Voting, CompactRanking, ExplicitRanking };

struct VotingModel {
    static constexpr ModelKind kind = ModelKind::Voting;
    int k;
    bool enhanced;
    std::vector<VotingState> st;

    void init(const VoteProfile& p) {
        st.reserve(p.n);
        for (ValueSet v : p.votes) st.push_back(VotingState::initial(v));
    }
    void step(int a, int b, RandomStream& rng) {
        if (enhanced)
            enhanced_step(st[a], st[b], k, rng);
        else
            voting_step(st[a], st[b], k, rng);
    }
    ValueSet value(int i) const { return st[i].value_set(); }
};

struct CompactRankingModel {
    static constexpr ModelKind kind = ModelKind::CompactRanking;
    int k;
    std::vector<RankingState> st;

    void init(const VoteProfile& p) {
        st.reserve(p.n);
        for (ValueSet v : p.votes) st.push_back(RankingState::initial(v, k));
    }
    void step(int a, int b, RandomStream&) { ranking_step(st[a], st[b], k); }
    ValueSet value(int i) const { return st[i].value_set(); }
};

struct ExplicitRankingModel {
    static constexpr ModelKind kind = ModelKind::ExplicitRanking;
    int k;
    std::vector<ValueSet> vals;
    std::vector<MemoryBank> banks;

    void init(const VoteProfile& p) {
        vals = p.votes;
        banks.assign(p.n, MemoryBank(k));
    }
    void step(int a, int b, RandomStream&) {
        auto [va, vb] = consolidate(vals[a], vals[b]);
        vals[a] = va;
        vals[b] = vb;
        disseminate(banks[a], banks[b], va, vb);
    }
    ValueSet value(int i) const { return vals[i]; }
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class Model>
Trajectory run_core(const Scenario& sc, const Graph& g, Model model) {
    RandomStream rng(sc.seed);
    const VoteProfile p = sc.make_profile(rng);  // shuffle draws come first
    const int n = g.n;
    const int k = sc.k;

    Trajectory out;
    out.n = n;
    out.k = k;
    out.variant = sc.variant;
    out.vote_counts = p.counts;
    out.tie = p.has_ties();

    const bool log = sc.record_log;
    const bool lyap = sc.record_lyapunov || log;
    if (log) out.initial_votes = p.votes;

    model.init(p);

    // Value-set occupancy: per-mask counts plus per-size distinct counts.
    // gate_bad counts sizes holding two or more distinct nonempty sets; the
    // convergence set additionally requires the per-size representatives to
    // be nested, which is rechecked in full only until first entry.
    std::vector<int> mask_count(std::size_t(1) << k, 0);
    std::array<int, kMaxChoices + 1> distinct{};
    int gate_bad = 0;
    auto add_mask = [&](ValueSet v) {
        if (v.empty()) return;
        if (mask_count[v.bits()]++ == 0 && ++distinct[v.size()] == 2) ++gate_bad;
    };
    auto remove_mask = [&](ValueSet v) {
        if (v.empty()) return;
        if (--mask_count[v.bits()] == 0 && distinct[v.size()]-- == 2) --gate_bad;
    };

    std::vector<ValueSet> scratch(n);
    auto in_x0_full = [&]() {
        for (int i = 0; i < n; ++i) scratch[i] = model.value(i);
        return is_in_convergence_set(scratch);
    };

    // Ground truth; undefined under the relevant kind of tie.
    const int majority = p.majority_choice();
    const Ranking truth = p.ranking_by_counts();
    bool truth_ok;
    if constexpr (Model::kind == ModelKind::Voting) {
        truth_ok = true;
        for (int c = 0; c < k; ++c)
            if (c != majority && p.counts[c] == p.counts[majority]) truth_ok = false;
    } else {
        truth_ok = p.strictly_ordered();
    }

    auto node_correct = [&](int i) -> bool {
        if (!truth_ok) return false;
        if constexpr (Model::kind == ModelKind::Voting) {
            return model.st[i].leader == majority;
        } else if constexpr (Model::kind == ModelKind::CompactRanking) {
            for (int c = 0; c < k; ++c)
                if (model.st[i].order[c] != truth.order[c]) return false;
            return true;
        } else {
            const auto r = readout_ranking(model.banks[i]);
            return r.has_value() && *r == truth;
        }
    };

    // Binary phase observers (two choices only).
    const bool binary = (k == 2);
    const int minority = binary ? 1 - majority : -1;
    const ValueSet minority_single = binary ? ValueSet::single(minority) : ValueSet();
    int minority_count = 0;
    auto m1_majority = [&](int i) -> bool {
        if constexpr (Model::kind == ModelKind::Voting) {
            return model.st[i].leader == majority;
        } else if constexpr (Model::kind == ModelKind::CompactRanking) {
            return model.st[i].order[0] == majority;
        } else {
            return model.banks[i].level(1) == ValueSet::single(majority);
        }
    };
    std::vector<char> m1_flag(binary ? n : 0, 0);
    int m1_count = 0;

    // Leader occupancy (voting convergence detector).
    std::array<int, kMaxChoices> leader_cnt{};
    int leader_distinct = 0;

    // Explicit-ranking memory saturation; the per-size representatives are
    // frozen at the instant the run enters the convergence set (the value
    // multiset no longer changes after that).
    std::array<ValueSet, kMaxChoices + 1> x0rep{};
    std::array<bool, kMaxChoices + 1> x0need{};
    std::vector<char> sat(Model::kind == ModelKind::ExplicitRanking ? n : 0, 0);
    int sat_count = 0;
    auto node_saturated = [&](int i) -> bool {
        if constexpr (Model::kind == ModelKind::ExplicitRanking) {
            for (int s = 1; s <= k; ++s)
                if (x0need[s] && model.banks[i].level(s) != x0rep[s]) return false;
            return true;
        } else {
            (void)i;
            return true;
        }
    };

    std::int64_t sumsq = 0;
    for (int i = 0; i < n; ++i) {
        const ValueSet v = model.value(i);
        add_mask(v);
        sumsq += static_cast<std::int64_t>(v.size()) * v.size();
        if (binary && v == minority_single) ++minority_count;
        if constexpr (Model::kind == ModelKind::Voting) {
            if (leader_cnt[model.st[i].leader]++ == 0) ++leader_distinct;
        }
    }

    std::vector<char> correct(n, 0);
    int correct_count = 0;
    for (int i = 0; i < n; ++i) {
        correct[i] = node_correct(i) ? 1 : 0;
        correct_count += correct[i];
        if (binary) {
            m1_flag[i] = m1_majority(i) ? 1 : 0;
            m1_count += m1_flag[i];
        }
    }

    bool x0 = false;
    double t = 0;
    double t_allm1 = kNaN;
    double correct_since = kNaN;

    auto on_x0_entry = [&]() {
        x0 = true;
        out.tau_x = t;
        if constexpr (Model::kind == ModelKind::ExplicitRanking) {
            for (int s = 1; s <= k; ++s) x0need[s] = distinct[s] > 0;
            for (int i = 0; i < n; ++i) {
                const ValueSet v = model.value(i);
                if (!v.empty()) x0rep[v.size()] = v;
            }
            sat_count = 0;
            for (int i = 0; i < n; ++i) {
                sat[i] = node_saturated(i) ? 1 : 0;
                sat_count += sat[i];
            }
        }
    };

    if (gate_bad == 0 && in_x0_full()) on_x0_entry();
    if (binary && minority_count == 0) out.tau1 = 0;
    if (binary && m1_count == n) t_allm1 = 0;
    if (truth_ok && correct_count == n) correct_since = 0;

    auto absorbed = [&]() -> bool {
        if constexpr (Model::kind == ModelKind::Voting) {
            return x0 && leader_distinct == 1;
        } else if constexpr (Model::kind == ModelKind::CompactRanking) {
            return truth_ok && correct_count == n;
        } else {
            return x0 && sat_count == n;
        }
    };

    while (true) {
        if (absorbed()) {
            out.converged = true;
            break;
        }
        const double dt = rng.exponential(n);
        if (t + dt > sc.cutoff) {
            t = sc.cutoff;
            break;
        }
        t += dt;
        const int a = static_cast<int>(rng.below(static_cast<std::uint32_t>(n)));
        const int b = sample_neighbor(g, a, rng);

        const ValueSet va0 = model.value(a);
        const ValueSet vb0 = model.value(b);
        int la0 = 0, lb0 = 0;
        if constexpr (Model::kind == ModelKind::Voting) {
            la0 = model.st[a].leader;
            lb0 = model.st[b].leader;
        }

        model.step(a, b, rng);
        ++out.interactions;

        const ValueSet va1 = model.value(a);
        const ValueSet vb1 = model.value(b);

        remove_mask(va0);
        remove_mask(vb0);
        add_mask(va1);
        add_mask(vb1);
        sumsq += static_cast<std::int64_t>(va1.size()) * va1.size() +
                 static_cast<std::int64_t>(vb1.size()) * vb1.size() -
                 static_cast<std::int64_t>(va0.size()) * va0.size() -
                 static_cast<std::int64_t>(vb0.size()) * vb0.size();

        if (lyap)
            out.lyapunov_samples.push_back(static_cast<std::int64_t>(n) * k * k - sumsq);
        if (log) out.events.push_back({t, a, b, va1, vb1});

        if (!x0) {
            if (gate_bad == 0 && in_x0_full()) on_x0_entry();
        } else if (gate_bad != 0) {
            throw std::logic_error("convergence-set permanence violated");
        }

        if (binary) {
            minority_count += (va1 == minority_single) - (va0 == minority_single) +
                              (vb1 == minority_single) - (vb0 == minority_single);
            if (std::isnan(out.tau1) && minority_count == 0) out.tau1 = t;
            for (int node : {a, b}) {
                const char now = m1_majority(node) ? 1 : 0;
                m1_count += now - m1_flag[node];
                m1_flag[node] = now;
            }
            if (std::isnan(t_allm1) && m1_count == n) t_allm1 = t;
        }

        if constexpr (Model::kind == ModelKind::Voting) {
            const int la1 = model.st[a].leader;
            const int lb1 = model.st[b].leader;
            if (la1 != la0) {
                if (--leader_cnt[la0] == 0) --leader_distinct;
                if (leader_cnt[la1]++ == 0) ++leader_distinct;
            }
            if (lb1 != lb0) {
                if (--leader_cnt[lb0] == 0) --leader_distinct;
                if (leader_cnt[lb1]++ == 0) ++leader_distinct;
            }
        }

        if constexpr (Model::kind == ModelKind::ExplicitRanking) {
            if (x0) {
                for (int node : {a, b}) {
                    const char now = node_saturated(node) ? 1 : 0;
                    sat_count += now - sat[node];
                    sat[node] = now;
                }
            }
        }

        for (int node : {a, b}) {
            const char now = node_correct(node) ? 1 : 0;
            correct_count += now - correct[node];
            correct[node] = now;
        }
        if (correct_count == n) {
            if (std::isnan(correct_since)) correct_since = t;
        } else {
            correct_since = kNaN;
        }
    }

    out.t_end = t;
    out.all_readouts_correct = truth_ok && correct_count == n;
    if (out.all_readouts_correct) out.tau_prime = correct_since;
    if (binary && !std::isnan(out.tau1) && !std::isnan(t_allm1))
        out.tau2 = t_allm1 - out.tau1;

    if constexpr (Model::kind == ModelKind::Voting) {
        out.final_leader = model.st[0].leader;
    } else if constexpr (Model::kind == ModelKind::CompactRanking) {
        out.final_ranking = readout_ranking_compact(model.st[0], k);
        out.final_ranking_decided = true;
    } else {
        const auto r = readout_ranking(model.banks[0]);
        out.final_ranking_decided = r.has_value();
        if (r) out.final_ranking = *r;
    }
    return out;
}

std::string fmt_double(double x) {
    if (std::isnan(x)) return "";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return buf;
}

}  // namespace

Trajectory run(const Scenario& sc) {
    sc.validate();
    const Graph g = sc.topology.build();
    {
        RandomStream probe(sc.seed);
        if (sc.make_profile(probe).n != g.n)
            throw std::invalid_argument("vote count does not match node count");
    }

    switch (sc.variant) {
        case Variant::CompactVoting:
            return run_core(sc, g, VotingModel{sc.k, false, {}});
        case Variant::EnhancedVoting:
            return run_core(sc, g, VotingModel{sc.k, true, {}});
        case Variant::CompactRanking:
            return run_core(sc, g, CompactRankingModel{sc.k, {}});
        case Variant::ExplicitRanking:
            return run_core(sc, g, ExplicitRankingModel{sc.k, {}, {}});
    }
    throw std::invalid_argument("bad variant");
}

std::string trajectory_csv_header() {
    return "seed,n,k,topology,variant,counts,tau1,tau2,tau_x,tau_prime,interactions,converged";
}

std::string trajectory_csv_row(const Scenario& sc, const Trajectory& t) {
    std::string counts;
    for (int c = 0; c < t.k; ++c) {
        if (c) counts += '|';
        counts += std::to_string(t.vote_counts[c]);
    }
    std::string row = std::to_string(sc.seed) + ',' + std::to_string(t.n) + ',' +
                      std::to_string(t.k) + ',' + sc.topology.name() + ',' +
                      variant_name(t.variant) + ',' + counts + ',';
    row += fmt_double(t.tau1) + ',' + fmt_double(t.tau2) + ',' + fmt_double(t.tau_x) + ',' +
           fmt_double(t.tau_prime) + ',' + std::to_string(t.interactions) + ',' +
           (t.converged ? "1" : "0");
    return row;
}

}  // namespace dmvr
