#pragma once

#include <span>
#include <utility>
#include <vector>

namespace dmvr {
namespace analysis {

/// Exact mean of the binary first phase (minority-singleton extinction) on
/// the complete graph: the sojourn-time sum with r = round(n*rho) minority
/// and s = n - r majority votes. rho is the minority fraction, 0 < rho < 1/2.
double expected_tau1(int n, double rho);

/// The log-form approximation of expected_tau1.
double expected_tau1_log(int n, double rho);

double var_tau1(int n, double rho);

/// Upper bound on the binary second phase (majority dissemination into
/// level-1 memories): the exact harmonic form H_r / (2(1-2rho)).
double expected_tau2_bound(int n, double rho);

/// The log-form of the second-phase bound: log(2 n rho) / (2(1-2rho)).
double expected_tau2_bound_log(int n, double rho);

/// Closed-form bound on the binary total time (sum of the two log forms).
double total_bound_binary(int n, double rho);

/// Mean and variance of the pairwise projected first-phase time for the
/// choice pair with fractions rho_k, rho_l: the binary formulas with
/// r = n*min(rho_k, rho_l) and s = n*max(rho_k, rho_l).
std::pair<double, double> pairwise_moments(int n, double rho_k, double rho_l);

/// Upper bound on the expectation of the max of R >= 2 (dependent) random
/// variables from their means and variances:
/// mean(mu) + sqrt(((R-1)/R) * sum[sigma^2 + (mu_r - mean(mu))^2]).
double order_stat_bound(std::span<const double> means, std::span<const double> variances);

/// Upper bound on the mean time to reach the convergence set: the order
/// statistics bound over all pairwise projected times. rho must be strictly
/// descending; a single pair (two choices) returns its mean directly.
double tau_x_bound(int n, std::span<const double> rho);

/// Upper bound on the mean memory-dissemination completion time: per-level
/// means log(n)/(2(rho_j - rho_{j+1})) and variances 1/(4(rho_j - rho_{j+1})^2)
/// through the order statistics bound (direct mean for two choices).
double tau_prime_bound(int n, std::span<const double> rho);

/// Bundled binary-case numbers for a given minority fraction.
struct BinaryTiming {
    int n = 0;
    double rho = 0;  // minority fraction
    int r = 0, s = 0;
    double tau1_mean = 0, tau1_mean_log = 0, tau1_var = 0;
    double tau2_bound = 0, tau2_bound_log = 0;
    double total_bound = 0;
};
BinaryTiming binary_timing(int n, double rho);

/// Bundled multi-choice numbers for a strictly descending fraction vector.
struct MultiTiming {
    int n = 0;
    std::vector<double> rho;
    std::vector<std::pair<int, int>> pairs;              // choice index pairs
    std::vector<std::pair<double, double>> pair_moments;  // (mean, variance)
    std::vector<double> level_means, level_vars;          // levels 1..K-1
    double tau_x = 0, tau_prime = 0;                      // the two bounds
};
MultiTiming multi_timing(int n, std::span<const double> rho);

}  // namespace analysis
}  // namespace dmvr
