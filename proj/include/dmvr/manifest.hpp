#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "dmvr/scenario.hpp"
#include "dmvr/sim.hpp"

namespace dmvr {

/// One sweep point: integral per-choice vote counts plus the sweep
/// parameter it came from (rho_1, delta, ...). Fractions given in a
/// manifest are rounded to nearest integral counts; the adjusted counts are
/// what runs and what lands in the CSV.
struct SweepPoint {
    std::vector<int> counts;
    double param = 0;
};

struct Manifest {
    std::string id;
    TopologySpec topology;
    int k = 2;
    std::vector<SweepPoint> points;
    std::vector<Variant> variants;
    int replications = 1000;
    std::uint64_t base_seed = 1;
    double cutoff = 1e4;
    std::string output_path;
    bool allow_ties = false;  // tie studies must be explicitly flagged

    void validate() const;
};

/// Nearest-integral counts for fractions over n nodes; any rounding drift
/// is absorbed by the largest count.
std::vector<int> counts_from_rho(int n, const std::vector<double>& rho);

/// The built-in experiment presets: fig3, fig4, fig5a, fig5b, fig6, fig7.
Manifest builtin_manifest(const std::string& name);
std::vector<std::string> builtin_manifest_names();

Manifest load_manifest(const std::string& path);

struct Stat {
    double mean = std::numeric_limits<double>::quiet_NaN();
    double sd = std::numeric_limits<double>::quiet_NaN();
    double se = std::numeric_limits<double>::quiet_NaN();
    int count = 0;
};

struct PointResult {
    int point_index = 0;
    SweepPoint point;
    Variant variant = Variant::CompactVoting;
    int reps = 0;
    double converged_frac = 0;
    double correct_frac = 0;
    Stat tau1, tau2, tau_x, tau_prime, interactions;

    // Analytic overlays; NaN where not applicable.
    static constexpr double na = std::numeric_limits<double>::quiet_NaN();
    double bound_tau1 = na, bound_tau1_log = na, var_tau1 = na;
    double bound_tau2 = na, bound_tau2_log = na, bound_total = na;
    double bound_tau_x = na, bound_tau_prime = na;
};

struct SweepResult {
    std::vector<PointResult> points;
    std::string csv;
};

/// Executes replications seeded base_seed + (point*V + variant)*reps + rep,
/// aggregates per (point, variant), and renders the CSV (rows ordered by
/// point then variant, never by completion order). threads <= 0 uses the
/// hardware concurrency.
SweepResult run_manifest(const Manifest& m, int threads = 0);

/// Writes result.csv to the manifest's output path (or the override).
void write_sweep_csv(const SweepResult& result, const std::string& path);

}  // namespace dmvr
