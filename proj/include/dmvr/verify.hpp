#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dmvr/protocol.hpp"
#include "dmvr/scenario.hpp"
#include "dmvr/sim.hpp"

namespace dmvr {
namespace verify {

/// State counts for one compact representation: all syntactically valid
/// states, plus the closure of the single-vote initial states under the
/// pairwise step (an upper envelope of per-node reachability).
struct StateCensus {
    std::uint64_t syntactic = 0;
    std::optional<std::uint64_t> reachable;  // absent above the closure cap
    std::vector<std::string> listing;        // populated for small k only
};

/// Voting states (leader, rest): k <= 16; closure computed for k <= 8.
StateCensus enumerate_states_voting(int k);

/// Ranking states (permutation, pointer): k <= 8; closure for k <= 6.
StateCensus enumerate_states_ranking(int k);

struct ModelCheckResult {
    enum class Verdict { Pass, Fail, TieUndefined };
    Verdict verdict = Verdict::Pass;
    std::string detail;
    std::size_t configurations = 0;

    bool passed() const { return verdict == Verdict::Pass; }
};

/// Exhaustive check that the protocol decides correctly from the given
/// single-choice votes on the complete graph: breadth-first search over all
/// reachable state multisets (random draws explored as nondeterministic
/// branches), then verdict Pass iff every bottom strongly-connected
/// component consists solely of configurations whose every node reads out
/// the correct result. Scale: n <= 6, k <= 3, compact variants only.
ModelCheckResult model_check(int n, int k, std::span<const int> votes, Variant variant);

struct AuditReport {
    bool pass = true;
    std::string failure;
    std::size_t event_index = 0;
};

/// Replays a logged trajectory and asserts, per event: per-choice size
/// preservation (with the empty-intersection replacement accounted for),
/// the Lyapunov decrease condition (strict exactly when neither value set
/// contains the other), consistency of the logged transition with the
/// consolidation rule, convergence-set permanence, and the projection
/// identity (the global convergence-set entry time equals the latest
/// pairwise-projected entry time).
AuditReport audit_trace(const Trajectory& traj);

enum class EquivalencePair {
    Voting,   // (leader, value-set) rules vs compact (leader, rest) encoding
    Ranking,  // value sets + memory banks vs permutation + pointer encoding
};

struct EquivalenceResult {
    bool pass = true;
    std::string detail;  // first divergence: trial, event, node, nature
};

/// Drives both representations of a pair through identical interaction
/// sequences with identical random draws on the complete graph. Checks,
/// per event: the implied value sets match (the explicit empty set and the
/// full set are the same encoded state); the memory level just written on
/// the explicit side equals the corresponding tuple prefix (ranking pair);
/// the full node states match (voting pair, a bijective re-encoding). At
/// the end both sides must be converged with identical readouts per node.
/// Readouts are not compared at intermediate steps: the tuple encoding
/// refreshes stale memory levels that the bank form keeps, so transiently
/// decided bank readouts can differ from the tuple order before the run
/// stabilizes (see the regression test exercising that transient).
EquivalenceResult equivalence_check(int n, int k, std::span<const int> counts,
                                    EquivalencePair pair, int trials,
                                    std::uint64_t base_seed = 1);

}  // namespace verify
}  // namespace dmvr
