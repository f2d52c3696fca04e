#include "dmvr/scenario.hpp"

#include <numeric>
#include <stdexcept>

namespace dmvr {

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::ExplicitRanking: return "explicit-ranking";
        case Variant::CompactVoting: return "compact-voting";
        case Variant::CompactRanking: return "compact-ranking";
        case Variant::EnhancedVoting: return "enhanced-voting";
    }
    return "?";
}

Variant parse_variant(const std::string& name) {
    if (name == "explicit-ranking") return Variant::ExplicitRanking;
    if (name == "compact-voting") return Variant::CompactVoting;
    if (name == "compact-ranking") return Variant::CompactRanking;
    if (name == "enhanced-voting") return Variant::EnhancedVoting;
    throw std::invalid_argument("unknown variant: " + name);
}

Graph TopologySpec::build() const {
    switch (kind) {
        case Kind::Complete: return build_complete(n);
        case Kind::Ring: return build_ring(n);
        case Kind::Torus: return build_torus(rows, cols);
        case Kind::EdgeListFile: return load_edge_list_file(path);
    }
    throw std::invalid_argument("bad topology kind");
}

std::string TopologySpec::name() const {
    switch (kind) {
        case Kind::Complete: return "complete";
        case Kind::Ring: return "ring";
        case Kind::Torus:
            return "torus-" + std::to_string(rows) + "x" + std::to_string(cols);
        case Kind::EdgeListFile: return "edgelist";
    }
    return "?";
}

void Scenario::validate() const {
    if (k < 1 || k > kMaxChoices)
        throw std::invalid_argument("scenario k must be in 1..16");
    if (votes.empty()) {
        if (static_cast<int>(vote_counts.size()) != k)
            throw std::invalid_argument("vote_counts must have one entry per choice");
        for (int c : vote_counts)
            if (c < 0) throw std::invalid_argument("negative vote count");
        const int total = std::accumulate(vote_counts.begin(), vote_counts.end(), 0);
        if (total < 2) throw std::invalid_argument("need at least two voting nodes");
        if (topology.kind != TopologySpec::Kind::EdgeListFile) {
            const Graph g = topology.build();
            if (g.n != total)
                throw std::invalid_argument("vote counts sum to " + std::to_string(total) +
                                            " but topology has " + std::to_string(g.n) +
                                            " nodes");
        }
    }
    if (cutoff <= 0) throw std::invalid_argument("cutoff must be positive");
}

VoteProfile Scenario::make_profile(RandomStream& rng) const {
    if (!votes.empty()) return init_profile(votes, k);
    std::vector<ValueSet> v;
    for (int c = 0; c < k; ++c)
        for (int i = 0; i < vote_counts[c]; ++i) v.push_back(ValueSet::single(c));
    // Fisher-Yates with the run stream; std::shuffle is not portable.
    for (std::size_t i = v.size(); i > 1; --i) {
        const auto j = rng.below(static_cast<std::uint32_t>(i));
        std::swap(v[i - 1], v[j]);
    }
    return init_profile(v, k);
}

}  // namespace dmvr
