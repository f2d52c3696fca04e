#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dmvr/analysis.hpp"
#include "dmvr/manifest.hpp"
#include "dmvr/scenario.hpp"
#include "dmvr/sim.hpp"
#include "dmvr/verify.hpp"

namespace {

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

struct TopologyArgs {
    std::string kind = "complete";
    int n = 100;
    int rows = 0, cols = 0;
    std::string file;

    dmvr::TopologySpec spec() const {
        if (kind == "complete") return dmvr::TopologySpec::complete(n);
        if (kind == "ring") return dmvr::TopologySpec::ring(n);
        if (kind == "torus") {
            if (rows > 0 && cols > 0) return dmvr::TopologySpec::torus(rows, cols);
            // Square-ish factorization when only n is given; n=100 -> 10x10.
            int r = 1;
            for (int d = 1; d * d <= n; ++d)
                if (n % d == 0) r = d;
            return dmvr::TopologySpec::torus(r, n / r);
        }
        if (kind == "edgelist") return dmvr::TopologySpec::edge_list_file(file);
        throw CLI::ValidationError("--topology must be complete|ring|torus|edgelist");
    }

    void add_options(CLI::App* cmd) {
        cmd->add_option("--topology", kind, "complete|ring|torus|edgelist")
            ->default_val("complete");
        cmd->add_option("--n", n, "node count (complete/ring/torus)");
        cmd->add_option("--rows", rows, "torus rows");
        cmd->add_option("--cols", cols, "torus cols");
        cmd->add_option("--graph-file", file, "edge-list file (edgelist topology)");
    }
};

int cmd_simulate(const TopologyArgs& topo, int k, const std::string& counts_str,
                 const std::string& rho_str, const std::string& variant_str,
                 std::uint64_t seed, double cutoff, bool log) {
    dmvr::Scenario sc;
    sc.topology = topo.spec();
    sc.k = k;
    const int n = sc.topology.build().n;
    if (!counts_str.empty())
        sc.vote_counts = parse_int_list(counts_str);
    else if (!rho_str.empty())
        sc.vote_counts = dmvr::counts_from_rho(n, parse_double_list(rho_str));
    else
        throw CLI::ValidationError("provide --counts or --rho");
    sc.variant = dmvr::parse_variant(variant_str);
    sc.seed = seed;
    sc.cutoff = cutoff;
    sc.record_log = log;

    {
        dmvr::RandomStream probe(sc.seed);
        if (sc.make_profile(probe).has_ties())
            std::cerr << "warning: tied vote counts; correctness is not claimable\n";
    }

    const dmvr::Trajectory t = dmvr::run(sc);
    std::cout << dmvr::trajectory_csv_header() << "\n"
              << dmvr::trajectory_csv_row(sc, t) << "\n";
    return 0;
}

int cmd_bounds(int n, const std::string& rho_str, bool csv) {
    const std::vector<double> rho = parse_double_list(rho_str);
    if (rho.size() < 2) throw CLI::ValidationError("--rho needs at least two fractions");

    auto row = [&](const std::string& name, double value) {
        if (csv)
            std::printf("%s,%.15g\n", name.c_str(), value);
        else
            std::printf("%-18s %.6f\n", name.c_str(), value);
    };
    if (csv) std::printf("quantity,value\n");
    if (rho.size() == 2) {
        const auto t = dmvr::analysis::binary_timing(n, rho[1]);
        row("tau1_mean", t.tau1_mean);
        row("tau1_mean_log", t.tau1_mean_log);
        row("tau1_var", t.tau1_var);
        row("tau2_bound", t.tau2_bound);
        row("tau2_bound_log", t.tau2_bound_log);
        row("total_bound", t.total_bound);
    }
    const auto mt = dmvr::analysis::multi_timing(n, rho);
    for (std::size_t i = 0; i < mt.pairs.size(); ++i) {
        const auto [a, b] = mt.pairs[i];
        const std::string tag = std::to_string(a + 1) + "_" + std::to_string(b + 1);
        row("pair_mean_" + tag, mt.pair_moments[i].first);
        row("pair_var_" + tag, mt.pair_moments[i].second);
    }
    for (std::size_t j = 0; j < mt.level_means.size(); ++j) {
        row("level_mean_" + std::to_string(j + 1), mt.level_means[j]);
        row("level_var_" + std::to_string(j + 1), mt.level_vars[j]);
    }
    row("tau_x_bound", mt.tau_x);
    row("tau_prime_bound", mt.tau_prime);
    return 0;
}

int cmd_sweep(const std::string& manifest_path, const std::string& builtin,
              const std::string& output, int reps, int threads) {
    dmvr::Manifest m;
    if (!builtin.empty())
        m = dmvr::builtin_manifest(builtin);
    else if (!manifest_path.empty())
        m = dmvr::load_manifest(manifest_path);
    else
        throw CLI::ValidationError("provide --manifest or --builtin");
    if (reps > 0) m.replications = reps;
    if (!output.empty()) m.output_path = output;

    const dmvr::SweepResult result = dmvr::run_manifest(m, threads);
    dmvr::write_sweep_csv(result, m.output_path);
    std::cout << "wrote " << m.output_path << " (" << result.points.size() << " rows)\n";
    return 0;
}

int cmd_verify(const std::string& check, int n, int k, const std::string& counts_str,
               const std::string& variant_str, int trials, std::uint64_t seed,
               const std::string& report_path) {
    std::ostringstream report;
    bool ok = true;

    if (check == "states") {
        const auto voting = dmvr::verify::enumerate_states_voting(k);
        report << "voting states k=" << k << ": syntactic " << voting.syntactic;
        if (voting.reachable) report << ", reachable " << *voting.reachable;
        report << "\n";
        if (k <= 8) {
            const auto ranking = dmvr::verify::enumerate_states_ranking(k);
            report << "ranking states k=" << k << ": syntactic " << ranking.syntactic;
            if (ranking.reachable) report << ", reachable " << *ranking.reachable;
            report << "\n";
        }
    } else if (check == "model") {
        const std::vector<int> counts = parse_int_list(counts_str);
        std::vector<int> votes;
        for (int c = 0; c < static_cast<int>(counts.size()); ++c)
            for (int i = 0; i < counts[c]; ++i) votes.push_back(c);
        const auto r =
            dmvr::verify::model_check(n, k, votes, dmvr::parse_variant(variant_str));
        ok = r.verdict != dmvr::verify::ModelCheckResult::Verdict::Fail;
        report << "model check (" << r.configurations << " configurations): "
               << (r.verdict == dmvr::verify::ModelCheckResult::Verdict::Pass ? "PASS"
                   : r.verdict == dmvr::verify::ModelCheckResult::Verdict::TieUndefined
                       ? "TIE-UNDEFINED"
                       : "FAIL")
               << " - " << r.detail << "\n";
    } else if (check == "audit") {
        dmvr::Scenario sc;
        sc.topology = dmvr::TopologySpec::complete(n);
        sc.k = k;
        sc.vote_counts = parse_int_list(counts_str);
        sc.variant = dmvr::parse_variant(variant_str);
        sc.record_log = true;
        for (int t = 0; t < trials; ++t) {
            sc.seed = seed + static_cast<std::uint64_t>(t);
            const auto traj = dmvr::run(sc);
            const auto audit = dmvr::verify::audit_trace(traj);
            if (!audit.pass) {
                ok = false;
                report << "audit seed " << sc.seed << ": FAIL - " << audit.failure << "\n";
            }
        }
        if (ok) report << "audit: PASS (" << trials << " logged runs)\n";
    } else if (check == "equivalence") {
        const std::vector<int> counts = parse_int_list(counts_str);
        for (const auto pair :
             {dmvr::verify::EquivalencePair::Voting, dmvr::verify::EquivalencePair::Ranking}) {
            const auto r = dmvr::verify::equivalence_check(n, k, counts, pair, trials, seed);
            const char* name =
                pair == dmvr::verify::EquivalencePair::Voting ? "voting" : "ranking";
            if (!r.pass) {
                ok = false;
                report << "equivalence (" << name << "): FAIL - " << r.detail << "\n";
            } else {
                report << "equivalence (" << name << "): PASS (" << trials << " trials)\n";
            }
        }
    } else {
        throw CLI::ValidationError("--check must be states|model|audit|equivalence");
    }

    std::cout << report.str();
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        out << report.str();
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DMVR gossip voting/ranking: simulator, bounds, and verification"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "run one seeded scenario");
    TopologyArgs topo;
    topo.add_options(sim);
    int k = 2;
    std::string counts_str, rho_str, variant_str = "compact-voting";
    std::uint64_t seed = 1;
    double cutoff = 1e4;
    bool log = false;
    sim->add_option("--k", k, "number of choices");
    sim->add_option("--counts", counts_str, "per-choice vote counts, e.g. 70,30");
    sim->add_option("--rho", rho_str, "per-choice fractions, e.g. 0.7,0.3");
    sim->add_option("--variant", variant_str,
                    "explicit-ranking|compact-voting|compact-ranking|enhanced-voting");
    sim->add_option("--seed", seed, "random seed");
    sim->add_option("--cutoff", cutoff, "time-unit cutoff");
    sim->add_flag("--log", log, "record the event log");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run a manifest and write CSV");
    std::string manifest_path, builtin, output;
    int reps = 0, threads = 0;
    sweep->add_option("--manifest", manifest_path, "manifest JSON file");
    sweep->add_option("--builtin", builtin, "fig3|fig4|fig5a|fig5b|fig6|fig7");
    sweep->add_option("--output", output, "output CSV path override");
    sweep->add_option("--reps", reps, "replication override");
    sweep->add_option("--threads", threads, "worker threads (0 = auto)");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "closed-form time formulas");
    int bn = 100;
    std::string brho = "0.7,0.3";
    bool bcsv = false;
    bounds->add_option("--n", bn, "node count");
    bounds->add_option("--rho", brho, "descending fractions, e.g. 0.5,0.3,0.2");
    bounds->add_flag("--csv", bcsv, "CSV output");

    // verify
    auto* verify = app.add_subcommand("verify", "oracle suite (nonzero exit on FAIL)");
    std::string check = "states", vcounts = "3,2", vvariant = "compact-voting", vreport;
    int vn = 5, vk = 2, vtrials = 50;
    std::uint64_t vseed = 1;
    verify->add_option("--check", check, "states|model|audit|equivalence");
    verify->add_option("--n", vn, "node count");
    verify->add_option("--k", vk, "number of choices");
    verify->add_option("--counts", vcounts, "per-choice vote counts");
    verify->add_option("--variant", vvariant, "protocol variant (model/audit)");
    verify->add_option("--trials", vtrials, "seeds/trials");
    verify->add_option("--seed", vseed, "base seed");
    verify->add_option("--report", vreport, "also write the report to this file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(topo, k, counts_str, rho_str, variant_str, seed, cutoff, log);
        if (sweep->parsed())
            return cmd_sweep(manifest_path, builtin, output, reps, threads);
        if (bounds->parsed()) return cmd_bounds(bn, brho, bcsv);
        if (verify->parsed())
            return cmd_verify(check, vn, vk, vcounts, vvariant, vtrials, vseed, vreport);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
