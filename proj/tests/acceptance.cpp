// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// Run all criteria with no arguments, or one with --criterion N.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "dmvr/analysis.hpp"
#include "dmvr/manifest.hpp"
#include "dmvr/scenario.hpp"
#include "dmvr/sim.hpp"
#include "dmvr/verify.hpp"

using namespace dmvr;

namespace {

void detail(const char* fmt, ...) {
    std::va_list args;
    va_start(args, fmt);
    std::printf("         ");
    std::vprintf(fmt, args);
    std::printf("\n");
    va_end(args);
}

bool expect(bool ok, const std::string& what) {
    if (!ok) detail("FAILED: %s", what.c_str());
    return ok;
}

Manifest make_manifest(std::string id, TopologySpec topo, int k,
                       std::vector<std::vector<int>> count_sets, std::vector<Variant> variants,
                       int reps, std::uint64_t base_seed, double cutoff = 1e4) {
    Manifest m;
    m.id = std::move(id);
    m.topology = topo;
    m.k = k;
    for (std::size_t i = 0; i < count_sets.size(); ++i)
        m.points.push_back({count_sets[i], static_cast<double>(i)});
    m.variants = std::move(variants);
    m.replications = reps;
    m.base_seed = base_seed;
    m.cutoff = cutoff;
    return m;
}

// ---- criterion 1: correctness in every converged run ---------------------

bool criterion1() {
    struct Config {
        TopologySpec topo;
        int n;
        std::vector<int> counts;
    };
    std::vector<Config> configs;
    for (int n : {20, 100}) {
        const std::vector<std::vector<int>> counts_by_k =
            n == 20 ? std::vector<std::vector<int>>{{13, 7}, {10, 6, 4}, {8, 5, 4, 3}}
                    : std::vector<std::vector<int>>{{65, 35}, {50, 30, 20}, {40, 30, 20, 10}};
        const TopologySpec torus =
            n == 20 ? TopologySpec::torus(4, 5) : TopologySpec::torus(10, 10);
        for (const auto& topo : {TopologySpec::complete(n), TopologySpec::ring(n), torus})
            for (const auto& counts : counts_by_k) configs.push_back({topo, n, counts});
    }

    bool ok = true;
    std::uint64_t seed_block = 0;
    for (const Config& cfg : configs) {
        const int k = static_cast<int>(cfg.counts.size());
        const Manifest m = make_manifest("correctness", cfg.topo, k, {cfg.counts},
                                         {Variant::CompactVoting, Variant::CompactRanking},
                                         1000, 1 + 2000 * seed_block++, 1e5);
        const SweepResult r = run_manifest(m);
        for (const PointResult& pr : r.points) {
            const std::string tag = cfg.topo.name() + " n=" + std::to_string(cfg.n) +
                                    " k=" + std::to_string(k) + " " + variant_name(pr.variant);
            ok &= expect(pr.converged_frac == 1.0,
                         tag + ": converged fraction " + std::to_string(pr.converged_frac));
            ok &= expect(pr.correct_frac == 1.0,
                         tag + ": correct fraction " + std::to_string(pr.correct_frac));
        }
    }
    detail("%zu configurations x 2 variants x 1000 seeded runs, all converged and correct",
           configs.size());
    return ok;
}

// ---- criterion 2: exhaustive model checking ------------------------------

bool criterion2() {
    // Every strictly ordered count vector with n <= 5 nodes and k <= 3
    // (trailing zero-count choices keep the ordering strict).
    std::vector<std::vector<int>> profiles;
    for (int n = 2; n <= 5; ++n)
        for (int a = n; a >= 1; --a) {
            const int b2 = n - a;
            if (a > b2 && b2 >= 0) profiles.push_back({a, b2});
            for (int b = n - a; b >= 0; --b) {
                const int c = n - a - b;
                if (c >= 0 && a > b && b > c) profiles.push_back({a, b, c});
            }
        }

    bool ok = true;
    int checked = 0;
    std::size_t total_configs = 0;
    for (const auto& counts : profiles) {
        std::vector<int> votes;
        for (int c = 0; c < static_cast<int>(counts.size()); ++c)
            for (int i = 0; i < counts[c]; ++i) votes.push_back(c);
        for (Variant v :
             {Variant::CompactVoting, Variant::CompactRanking, Variant::EnhancedVoting}) {
            const auto r = verify::model_check(static_cast<int>(votes.size()),
                                               static_cast<int>(counts.size()), votes, v);
            std::string tag = "counts ";
            for (int c : counts) tag += std::to_string(c) + " ";
            tag += "variant ";
            tag += variant_name(v);
            ok &= expect(r.verdict == verify::ModelCheckResult::Verdict::Pass,
                         tag + ": " + r.detail);
            ++checked;
            total_configs += r.configurations;
        }
    }
    detail("%d model checks over %zu profiles (%zu configurations explored)", checked,
           profiles.size(), total_configs);
    return ok;
}

// ---- criteria 3 and 4: binary phase times against the formulas -----------

bool criterion3() {
    const SweepResult r = run_manifest(builtin_manifest("fig3"));
    bool ok = true;
    for (const PointResult& pr : r.points) {
        ok &= expect(pr.converged_frac == 1.0, "unconverged runs in the sweep");
        const double exact = pr.bound_tau1;
        const double tol = std::max(0.05 * exact, 3 * pr.tau1.se);
        const double dev = std::abs(pr.tau1.mean - exact);
        detail("rho1=%.2f: mean tau1=%.4f exact=%.4f |dev|=%.4f tol=%.4f", pr.point.param,
               pr.tau1.mean, exact, dev, tol);
        ok &= expect(dev <= tol, "tau1 deviates beyond max(5%, 3 SE) at rho1=" +
                                     std::to_string(pr.point.param));
    }
    return ok;
}

bool criterion4() {
    const SweepResult r = run_manifest(builtin_manifest("fig3"));
    bool ok = true;
    int positive_gap = 0;
    for (const PointResult& pr : r.points) {
        ok &= expect(pr.converged_frac == 1.0, "unconverged runs in the sweep");
        const double bound = pr.bound_tau2;
        detail("rho1=%.2f: mean tau2=%.4f bound=%.4f se=%.4f", pr.point.param, pr.tau2.mean,
               bound, pr.tau2.se);
        ok &= expect(pr.tau2.mean <= bound + 3 * pr.tau2.se,
                     "tau2 exceeds its bound at rho1=" + std::to_string(pr.point.param));
        if (bound - pr.tau2.mean > 0) ++positive_gap;
    }
    detail("positive gap at %d of %zu points", positive_gap, r.points.size());
    ok &= expect(positive_gap * 2 > static_cast<int>(r.points.size()),
                 "bound gap not positive at a majority of points");
    return ok;
}

// ---- criterion 5: ranking-time bounds -------------------------------------

bool criterion5() {
    const SweepResult r = run_manifest(builtin_manifest("fig7"));
    bool ok = true;
    for (const PointResult& pr : r.points) {
        ok &= expect(pr.converged_frac == 1.0, "unconverged runs in the sweep");
        const std::string counts = std::to_string(pr.point.counts[0]) + "/" +
                                   std::to_string(pr.point.counts[1]) + "/" +
                                   std::to_string(pr.point.counts[2]);
        detail("counts %s: mean tau_x=%.3f bound=%.3f | mean tau'=%.3f bound=%.3f "
               "(dissemination span tau'-tau_x=%.3f)",
               counts.c_str(), pr.tau_x.mean, pr.bound_tau_x, pr.tau_prime.mean,
               pr.bound_tau_prime, pr.tau_prime.mean - pr.tau_x.mean);
        ok &= expect(pr.tau_x.mean <= pr.bound_tau_x,
                     "mean tau_x exceeds its bound at counts " + counts);
        ok &= expect(pr.tau_prime.mean <= pr.bound_tau_prime,
                     "mean tau' exceeds its bound at counts " + counts);
    }
    return ok;
}

// ---- criterion 6: the enhanced rule is strictly faster --------------------

bool criterion6() {
    bool ok = true;
    std::uint64_t seed = 60001;
    const int rho1_pct[] = {52, 55, 60};
    for (const auto& topo :
         {TopologySpec::complete(100), TopologySpec::ring(100), TopologySpec::torus(10, 10)}) {
        const Manifest m = make_manifest(
            "speedup", topo, 2, {{52, 48}, {55, 45}, {60, 40}},
            {Variant::CompactVoting, Variant::EnhancedVoting}, 1000, seed, 1e5);
        seed += 10000;
        const SweepResult r = run_manifest(m);
        for (std::size_t p = 0; p + 1 < r.points.size(); p += 2) {
            const PointResult& plain = r.points[p];
            const PointResult& enh = r.points[p + 1];
            ok &= expect(plain.converged_frac == 1.0 && enh.converged_frac == 1.0,
                         "unconverged runs in the sweep");
            const double gap = plain.tau_prime.mean - enh.tau_prime.mean;
            const double se = std::sqrt(plain.tau_prime.se * plain.tau_prime.se +
                                        enh.tau_prime.se * enh.tau_prime.se);
            detail("%s rho1=0.%d: plain=%.2f enhanced=%.2f gap=%.2f (%.1f sigma)",
                   topo.name().c_str(), rho1_pct[p / 2], plain.tau_prime.mean,
                   enh.tau_prime.mean, gap, gap / se);
            ok &= expect(gap > 3 * se, topo.name() + ": enhanced not faster at 3 sigma");
        }
    }
    return ok;
}

// ---- criterion 7: ternary sweep is monotone in the winning margin ---------

bool criterion7() {
    Manifest m = builtin_manifest("fig6");
    std::vector<SweepPoint> grid;  // delta in {0.005, 0.015, 0.025, 0.041}
    for (const auto& p : m.points)
        if (p.param == 0.005 || p.param == 0.015 || p.param == 0.025 || p.param == 0.041)
            grid.push_back(p);
    m.points = grid;

    const SweepResult r = run_manifest(m);
    bool ok = expect(r.points.size() == 4, "expected four sweep points");
    for (const PointResult& pr : r.points) {
        ok &= expect(pr.converged_frac == 1.0, "unconverged runs in the sweep");
        detail("delta=%.3f counts=%d/%d/%d: mean time=%.2f", pr.point.param,
               pr.point.counts[0], pr.point.counts[1], pr.point.counts[2], pr.tau_prime.mean);
    }
    for (std::size_t i = 0; i + 1 < r.points.size(); ++i)
        ok &= expect(
            r.points[i].tau_prime.mean > r.points[i + 1].tau_prime.mean,
            "mean time not decreasing from delta=" + std::to_string(r.points[i].point.param));
    return ok;
}

// ---- criterion 8: state counts ---------------------------------------------

bool criterion8() {
    bool ok = true;
    const auto v3 = verify::enumerate_states_voting(3);
    ok &= expect(v3.syntactic == 12, "ternary voting syntactic count");
    ok &= expect(v3.reachable && *v3.reachable == 12, "ternary voting reachable count");
    const auto v4 = verify::enumerate_states_voting(4);
    ok &= expect(v4.syntactic == 32, "quaternary voting syntactic count");
    ok &= expect(v4.reachable && *v4.reachable <= 32, "quaternary voting reachable count");

    std::uint64_t factorial = 1;
    for (int k = 1; k <= 6; ++k) {
        factorial *= static_cast<std::uint64_t>(k);
        const auto rk = verify::enumerate_states_ranking(k);
        ok &= expect(rk.syntactic == k * factorial,
                     "ranking syntactic count at k=" + std::to_string(k));
        ok &= expect(rk.reachable && *rk.reachable <= rk.syntactic,
                     "ranking reachable count at k=" + std::to_string(k));
        detail("k=%d: ranking states %llu (reachable %llu), voting states %llu", k,
               static_cast<unsigned long long>(rk.syntactic),
               static_cast<unsigned long long>(*rk.reachable),
               static_cast<unsigned long long>(verify::enumerate_states_voting(k).syntactic));
    }
    return ok;
}

// ---- criterion 9: invariant audit over logged runs -------------------------

bool criterion9() {
    bool ok = true;
    int audited = 0;
    std::uint64_t seed = 90001;
    const std::vector<std::vector<int>> counts_base = {
        {}, {}, {6, 4}, {5, 3, 2}, {4, 3, 2, 1}};
    for (int n : {10, 50, 100}) {
        for (int k : {2, 3, 4}) {
            std::vector<int> counts = counts_base[k];
            for (int& c : counts) c *= n / 10;
            std::vector<TopologySpec> topologies = {TopologySpec::complete(n)};
            if (n >= 10) topologies.push_back(TopologySpec::ring(n));
            if (n == 50)
                topologies.push_back(TopologySpec::torus(5, 10));
            else if (n == 100)
                topologies.push_back(TopologySpec::torus(10, 10));
            const int seeds_per_combo = n == 10 ? 2 : 1;  // no 10-node torus exists
            for (const auto& topo : topologies) {
                for (Variant v : {Variant::CompactVoting, Variant::EnhancedVoting,
                                  Variant::CompactRanking, Variant::ExplicitRanking}) {
                    for (int s = 0; s < seeds_per_combo; ++s) {
                        Scenario sc;
                        sc.topology = topo;
                        sc.k = k;
                        sc.vote_counts = counts;
                        sc.variant = v;
                        sc.seed = seed++;
                        sc.record_log = true;
                        sc.cutoff = 1e5;
                        const Trajectory t = run(sc);
                        const auto audit = verify::audit_trace(t);
                        ++audited;
                        ok &= expect(t.converged,
                                     std::string("unconverged logged run on ") + topo.name());
                        ok &= expect(audit.pass, topo.name() + " n=" + std::to_string(n) +
                                                     " k=" + std::to_string(k) + " " +
                                                     variant_name(v) + ": " + audit.failure);
                    }
                }
            }
        }
    }
    detail("%d logged runs audited (size preservation, Lyapunov condition, permanence, "
           "projection identity)",
           audited);
    return ok && expect(audited >= 100, "need at least 100 audited runs");
}

// ---- criterion 10: representation equivalence ------------------------------

bool criterion10() {
    bool ok = true;
    for (int k : {2, 3}) {
        const std::vector<int> counts =
            k == 2 ? std::vector<int>{6, 4} : std::vector<int>{5, 3, 2};
        for (const auto pair :
             {verify::EquivalencePair::Voting, verify::EquivalencePair::Ranking}) {
            const auto r = verify::equivalence_check(10, k, counts, pair, 200, 1);
            const char* name = pair == verify::EquivalencePair::Voting ? "voting" : "ranking";
            detail("k=%d %s pair: %s", k, name,
                   r.pass ? "200 trials agree" : r.detail.c_str());
            ok &= expect(r.pass, std::string(name) + " pair diverged at k=" +
                                     std::to_string(k) + ": " + r.detail);
        }
    }
    return ok;
}

// ---- criterion 11: byte-identical repetition -------------------------------

bool criterion11() {
    bool ok = true;
    for (const char* name : {"fig3", "fig7"}) {
        Manifest m = builtin_manifest(name);
        m.replications = 40;
        const SweepResult a = run_manifest(m);
        const SweepResult b = run_manifest(m);
        ok &= expect(a.csv == b.csv,
                     std::string(name) + ": repeated execution changed the CSV");
        detail("%s at 40 replications: %zu identical CSV bytes", name, a.csv.size());
    }
    return ok;
}

struct Criterion {
    int id;
    const char* description;
    bool (*fn)();
};

const Criterion kCriteria[] = {
    {1, "correctness: 100% convergence and correct readouts across topologies", criterion1},
    {2, "exhaustive model check of every small strict-ordering profile", criterion2},
    {3, "binary first-phase mean matches the exact formula", criterion3},
    {4, "binary second-phase mean respects its bound", criterion4},
    {5, "ranking times against the order-statistics bounds", criterion5},
    {6, "enhanced rule strictly faster at 3 sigma", criterion6},
    {7, "ternary mean time monotone in the vote margin", criterion7},
    {8, "state counts: 12 / 32 / k*k!", criterion8},
    {9, "invariant audit of 100+ logged runs", criterion9},
    {10, "representation equivalence over 200 seeds", criterion10},
    {11, "byte-identical manifest repetition", criterion11},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i)
        if (!std::strcmp(argv[i], "--criterion") && i + 1 < argc) only = std::atoi(argv[i + 1]);

    int failures = 0;
    for (const Criterion& c : kCriteria) {
        if (only && c.id != only) continue;
        const auto start = std::chrono::steady_clock::now();
        const bool ok = c.fn();
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %d: %s (%.1fs)\n", ok ? "PASS" : "FAIL", c.id,
                    c.description, secs);
        if (!ok) ++failures;
    }
    return failures;
}
