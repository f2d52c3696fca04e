#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dmvr/graph.hpp"
#include "dmvr/protocol.hpp"

namespace dmvr {

enum class Variant {
    ExplicitRanking,  // value sets + memory banks, plain consolidation
    CompactVoting,    // (leader, rest) states
    CompactRanking,   // permutation + pointer states
    EnhancedVoting,   // compact voting with the leader-copy rule
};

inline bool is_voting(Variant v) {
    return v == Variant::CompactVoting || v == Variant::EnhancedVoting;
}
inline bool is_ranking(Variant v) { return !is_voting(v); }

const char* variant_name(Variant v);
Variant parse_variant(const std::string& name);  // throws on unknown name

struct TopologySpec {
    enum class Kind { Complete, Ring, Torus, EdgeListFile };

    Kind kind = Kind::Complete;
    int n = 0;           // Complete / Ring
    int rows = 0, cols = 0;  // Torus
    std::string path;    // EdgeListFile

    static TopologySpec complete(int n) { return {Kind::Complete, n, 0, 0, {}}; }
    static TopologySpec ring(int n) { return {Kind::Ring, n, 0, 0, {}}; }
    static TopologySpec torus(int rows, int cols) {
        return {Kind::Torus, rows * cols, rows, cols, {}};
    }
    static TopologySpec edge_list_file(std::string path) {
        return {Kind::EdgeListFile, 0, 0, 0, std::move(path)};
    }

    Graph build() const;
    std::string name() const;  // "complete", "ring", "torus-RxC", file stem
};

/// A fully seeded, reproducible run description. Votes are either explicit
/// per-node sets or generated from per-choice counts: counts[c] nodes vote
/// for choice c, with node placement shuffled by the run's random stream.
struct Scenario {
    TopologySpec topology;
    int k = 2;
    std::vector<int> vote_counts;   // generator form; ignored if votes set
    std::vector<ValueSet> votes;    // explicit form
    Variant variant = Variant::CompactVoting;
    std::uint64_t seed = 1;
    double cutoff = 1e4;            // time units
    bool record_log = false;
    bool record_lyapunov = false;

    /// Throws std::invalid_argument on structural problems. Tied vote
    /// counts are legal (correctness is simply not claimable); ties are
    /// reported through VoteProfile, not here.
    void validate() const;

    /// Materializes per-node votes (consuming shuffle draws when in
    /// generator form) and tallies the profile.
    VoteProfile make_profile(RandomStream& rng) const;
};

}  // namespace dmvr
