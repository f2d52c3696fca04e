#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "dmvr/protocol.hpp"
#include "dmvr/scenario.hpp"

namespace dmvr {

/// True iff the value sets form an inclusion chain ordered by size:
/// |v_i| <= |v_j| implies v_i is a subset of v_j. Checked as: nonempty sets
/// of each size are unique and the per-size representatives are nested.
bool is_in_convergence_set(std::span<const ValueSet> values);

/// n*K^2 - sum of squared value-set sizes.
std::int64_t lyapunov(std::span<const ValueSet> values, int k);

struct LogEvent {
    double t = 0;
    std::int32_t a = 0, b = 0;   // initiator, responder
    ValueSet va_post, vb_post;   // value sets after the interaction
};

struct Trajectory {
    // Run identity (copied from the scenario/profile for self-contained use).
    int n = 0;
    int k = 0;
    Variant variant = Variant::CompactVoting;
    std::array<int, kMaxChoices> vote_counts{};

    static constexpr double undefined = std::numeric_limits<double>::quiet_NaN();
    double tau1 = undefined;       // binary: extinction of the minority singleton
    double tau2 = undefined;       // binary: level-1 memory dissemination span
    double tau_x = undefined;      // first entry into the convergence set
    double tau_prime = undefined;  // readouts all correct and stable
    double t_end = 0;
    std::uint64_t interactions = 0;
    bool converged = false;  // absorbing configuration reached before cutoff
    bool tie = false;        // profile had tied counts
    bool all_readouts_correct = false;

    int final_leader = -1;                // voting variants: node 0's readout
    Ranking final_ranking;                // ranking variants: node 0's readout
    bool final_ranking_decided = false;

    std::vector<std::int64_t> lyapunov_samples;  // per event, when requested
    std::vector<LogEvent> events;                // when record_log
    std::vector<ValueSet> initial_votes;         // when record_log

    double total_time() const { return tau_prime; }
};

/// Executes the scenario: exponential global inter-event times at rate n,
/// uniform ticking node, uniform neighbor, variant step. Stops at the first
/// absorbing configuration (converged) or at the cutoff (converged=false).
Trajectory run(const Scenario& sc);

/// Binary phase observers exist only for two choices.
/// Throws std::invalid_argument otherwise (observer configuration error).
void require_binary_observers(int k);

std::string trajectory_csv_header();
std::string trajectory_csv_row(const Scenario& sc, const Trajectory& t);

}  // namespace dmvr
