#include "dmvr/manifest.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "dmvr/analysis.hpp"

#include <json.hpp>

namespace dmvr {

namespace {

std::string fmt(double x) {
    if (std::isnan(x)) return "";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return buf;
}

std::string counts_str(const std::vector<int>& counts) {
    std::string out;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (i) out += '|';
        out += std::to_string(counts[i]);
    }
    return out;
}

bool strictly_descending(const std::vector<int>& counts) {
    for (std::size_t i = 0; i + 1 < counts.size(); ++i)
        if (counts[i] <= counts[i + 1]) return false;
    return true;
}

Stat make_stat(const std::vector<double>& xs) {
    Stat s;
    s.count = static_cast<int>(xs.size());
    if (xs.empty()) return s;
    double sum = 0;
    for (double x : xs) sum += x;
    s.mean = sum / s.count;
    if (s.count > 1) {
        double ss = 0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.sd = std::sqrt(ss / (s.count - 1));
        s.se = s.sd / std::sqrt(static_cast<double>(s.count));
    }
    return s;
}

}  // namespace

void Manifest::validate() const {
    if (replications < 1) throw std::invalid_argument("replication count must be >= 1");
    if (points.empty()) throw std::invalid_argument("manifest has no sweep points");
    if (variants.empty()) throw std::invalid_argument("manifest names no variants");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (static_cast<int>(points[i].counts.size()) != k)
            throw std::invalid_argument("point " + std::to_string(i) +
                                        " has a count per-choice mismatch");
        if (!allow_ties && !strictly_descending(points[i].counts))
            throw std::invalid_argument(
                "point " + std::to_string(i) + " (counts " + counts_str(points[i].counts) +
                ") is not strictly ordered; flag a tie study explicitly");
    }
}

std::vector<int> counts_from_rho(int n, const std::vector<double>& rho) {
    std::vector<int> counts;
    long long sum = 0;
    for (double r : rho) {
        counts.push_back(static_cast<int>(std::llround(n * r)));
        sum += counts.back();
    }
    if (!counts.empty()) {
        std::size_t largest = 0;
        for (std::size_t i = 1; i < counts.size(); ++i)
            if (counts[i] > counts[largest]) largest = i;
        counts[largest] += static_cast<int>(n - sum);
    }
    return counts;
}

std::vector<std::string> builtin_manifest_names() {
    return {"fig3", "fig4", "fig5a", "fig5b", "fig6", "fig7"};
}

Manifest builtin_manifest(const std::string& name) {
    Manifest m;
    m.id = name;
    m.replications = 1000;
    m.base_seed = 1;
    m.output_path = name + ".csv";

    auto rho1_sweep = [&](int n) {
        for (int pct = 55; pct <= 95; pct += 5) {
            SweepPoint p;
            p.param = pct / 100.0;
            p.counts = {n * pct / 100, n - n * pct / 100};
            m.points.push_back(p);
        }
    };

    if (name == "fig3") {
        m.topology = TopologySpec::complete(100);
        m.k = 2;
        m.variants = {Variant::CompactVoting};
        rho1_sweep(100);
    } else if (name == "fig4") {
        m.topology = TopologySpec::complete(100);
        m.k = 2;
        m.variants = {Variant::CompactVoting, Variant::EnhancedVoting};
        rho1_sweep(100);
    } else if (name == "fig5a") {
        m.topology = TopologySpec::ring(100);
        m.k = 2;
        m.variants = {Variant::CompactVoting, Variant::EnhancedVoting};
        rho1_sweep(100);
    } else if (name == "fig5b") {
        m.topology = TopologySpec::torus(10, 10);
        m.k = 2;
        m.variants = {Variant::CompactVoting, Variant::EnhancedVoting};
        rho1_sweep(100);
    } else if (name == "fig6") {
        m.topology = TopologySpec::complete(198);
        m.k = 3;
        m.variants = {Variant::EnhancedVoting};
        for (double delta : {0.005, 0.01, 0.015, 0.02, 0.025, 0.03, 0.035, 0.041}) {
            SweepPoint p;
            p.param = delta;
            p.counts = counts_from_rho(198, {1.0 / 3 + delta, 1.0 / 3, 1.0 / 3 - delta});
            m.points.push_back(p);
        }
    } else if (name == "fig7") {
        m.topology = TopologySpec::complete(100);
        m.k = 3;
        m.variants = {Variant::CompactRanking};
        for (const auto& counts : std::vector<std::vector<int>>{{40, 33, 27},
                                                                {45, 30, 25},
                                                                {50, 30, 20},
                                                                {55, 28, 17},
                                                                {60, 30, 10},
                                                                {64, 24, 12}}) {
            SweepPoint p;
            p.param = counts[0] / 100.0;
            p.counts = counts;
            m.points.push_back(p);
        }
    } else {
        throw std::invalid_argument("unknown builtin manifest: " + name);
    }
    return m;
}

Manifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open manifest: " + path);
    nlohmann::json j;
    in >> j;

    Manifest m;
    m.id = j.value("id", std::string("manifest"));
    const auto& topo = j.at("topology");
    const std::string kind = topo.at("kind");
    if (kind == "complete")
        m.topology = TopologySpec::complete(topo.at("n"));
    else if (kind == "ring")
        m.topology = TopologySpec::ring(topo.at("n"));
    else if (kind == "torus")
        m.topology = TopologySpec::torus(topo.at("rows"), topo.at("cols"));
    else if (kind == "edgelist")
        m.topology = TopologySpec::edge_list_file(topo.at("path"));
    else
        throw std::invalid_argument("unknown topology kind: " + kind);

    m.k = j.at("k");
    for (const auto& v : j.at("variants")) m.variants.push_back(parse_variant(v));
    m.replications = j.value("replications", 1000);
    m.base_seed = j.value("base_seed", std::uint64_t{1});
    m.cutoff = j.value("cutoff", 1e4);
    m.output_path = j.value("output", m.id + ".csv");
    m.allow_ties = j.value("allow_ties", false);

    const int n = m.topology.build().n;
    for (const auto& pj : j.at("points")) {
        SweepPoint p;
        p.param = pj.value("param", 0.0);
        if (pj.contains("counts")) {
            p.counts = pj.at("counts").get<std::vector<int>>();
        } else if (pj.contains("rho")) {
            p.counts = counts_from_rho(n, pj.at("rho").get<std::vector<double>>());
        } else {
            throw std::invalid_argument("sweep point needs 'counts' or 'rho'");
        }
        m.points.push_back(p);
    }
    m.validate();
    return m;
}

SweepResult run_manifest(const Manifest& m, int threads) {
    m.validate();
    const int n = m.topology.build().n;
    const int V = static_cast<int>(m.variants.size());
    const int P = static_cast<int>(m.points.size());
    const int R = m.replications;

    const std::size_t total = static_cast<std::size_t>(P) * V * R;
    std::vector<Trajectory> runs(total);

    auto seed_of = [&](int pi, int vi, int rep) {
        return m.base_seed +
               (static_cast<std::uint64_t>(pi) * V + vi) * static_cast<std::uint64_t>(R) + rep;
    };
    auto scenario_of = [&](int pi, int vi, int rep) {
        Scenario sc;
        sc.topology = m.topology;
        sc.k = m.k;
        sc.vote_counts = m.points[pi].counts;
        sc.variant = m.variants[vi];
        sc.seed = seed_of(pi, vi, rep);
        sc.cutoff = m.cutoff;
        return sc;
    };
    auto run_task = [&](std::size_t task) {
        const int pi = static_cast<int>(task / (static_cast<std::size_t>(V) * R));
        const int vi = static_cast<int>(task / R % V);
        const int rep = static_cast<int>(task % R);
        try {
            runs[task] = run(scenario_of(pi, vi, rep));
        } catch (const std::exception& e) {
            throw std::runtime_error("sweep point " + std::to_string(pi) + " (counts " +
                                     counts_str(m.points[pi].counts) + "), variant " +
                                     variant_name(m.variants[vi]) + ": " + e.what());
        }
    };

    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 1 || total < 2) {
        for (std::size_t t = 0; t < total; ++t) run_task(t);
    } else {
        std::atomic<std::size_t> cursor{0};
        std::vector<std::thread> pool;
        std::atomic<bool> failed{false};
        std::string error;
        std::mutex err_mutex;
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t t = cursor.fetch_add(1);
                    if (t >= total || failed.load()) return;
                    try {
                        run_task(t);
                    } catch (const std::exception& e) {
                        std::lock_guard<std::mutex> lk(err_mutex);
                        failed.store(true);
                        if (error.empty()) error = e.what();
                        return;
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failed.load()) throw std::runtime_error(error);
    }

    SweepResult result;
    std::string csv;
    csv += "# manifest " + m.id + " topology=" + m.topology.name() + " n=" + std::to_string(n) +
           " k=" + std::to_string(m.k) + " replications=" + std::to_string(R) +
           " base_seed=" + std::to_string(m.base_seed) + " cutoff=" + fmt(m.cutoff) + "\n";
    csv += "# seed scheme: seed = base_seed + (point_index*num_variants + variant_index)"
           "*replications + rep\n";
    csv +=
        "experiment,topology,n,k,variant,param,counts,reps,converged,correct,"
        "mean_tau1,sd_tau1,se_tau1,mean_tau2,sd_tau2,se_tau2,"
        "mean_tau_x,sd_tau_x,se_tau_x,mean_tau_prime,sd_tau_prime,se_tau_prime,"
        "mean_interactions,bound_tau1,bound_tau1_log,var_tau1,bound_tau2,bound_tau2_log,"
        "bound_total,bound_tau_x,bound_tau_prime\n";

    for (int pi = 0; pi < P; ++pi) {
        for (int vi = 0; vi < V; ++vi) {
            PointResult pr;
            pr.point_index = pi;
            pr.point = m.points[pi];
            pr.variant = m.variants[vi];
            pr.reps = R;

            std::vector<double> t1, t2, tx, tp, inter;
            int converged = 0, correct = 0;
            for (int rep = 0; rep < R; ++rep) {
                const Trajectory& tr =
                    runs[(static_cast<std::size_t>(pi) * V + vi) * R + rep];
                converged += tr.converged;
                correct += tr.all_readouts_correct;
                if (!tr.converged) continue;
                if (!std::isnan(tr.tau1)) t1.push_back(tr.tau1);
                if (!std::isnan(tr.tau2)) t2.push_back(tr.tau2);
                if (!std::isnan(tr.tau_x)) tx.push_back(tr.tau_x);
                if (!std::isnan(tr.tau_prime)) tp.push_back(tr.tau_prime);
                inter.push_back(static_cast<double>(tr.interactions));
            }
            pr.converged_frac = static_cast<double>(converged) / R;
            pr.correct_frac = static_cast<double>(correct) / R;
            pr.tau1 = make_stat(t1);
            pr.tau2 = make_stat(t2);
            pr.tau_x = make_stat(tx);
            pr.tau_prime = make_stat(tp);
            pr.interactions = make_stat(inter);

            // Analytic overlays from the adjusted counts.
            std::vector<double> rho;
            for (int c : m.points[pi].counts) rho.push_back(static_cast<double>(c) / n);
            const bool strict = strictly_descending(m.points[pi].counts);
            if (m.k == 2 && strict) {
                const double minority = rho[1];
                pr.bound_tau1 = analysis::expected_tau1(n, minority);
                pr.bound_tau1_log = analysis::expected_tau1_log(n, minority);
                pr.var_tau1 = analysis::var_tau1(n, minority);
                pr.bound_tau2 = analysis::expected_tau2_bound(n, minority);
                pr.bound_tau2_log = analysis::expected_tau2_bound_log(n, minority);
                pr.bound_total = analysis::total_bound_binary(n, minority);
                pr.bound_tau_x = analysis::tau_x_bound(n, rho);
                pr.bound_tau_prime = analysis::tau_prime_bound(n, rho);
            } else if (strict) {
                pr.bound_tau_x = analysis::tau_x_bound(n, rho);
                pr.bound_tau_prime = analysis::tau_prime_bound(n, rho);
            }

            csv += m.id;
            csv += ',' + m.topology.name() + ',' + std::to_string(n) + ',' +
                   std::to_string(m.k) + ',' + variant_name(pr.variant) + ',' +
                   fmt(pr.point.param) + ',' + counts_str(pr.point.counts) + ',' +
                   std::to_string(R) + ',' + fmt(pr.converged_frac) + ',' +
                   fmt(pr.correct_frac) + ',';
            for (const Stat* s : {&pr.tau1, &pr.tau2, &pr.tau_x, &pr.tau_prime})
                csv += fmt(s->mean) + ',' + fmt(s->sd) + ',' + fmt(s->se) + ',';
            csv += fmt(pr.interactions.mean) + ',';
            csv += fmt(pr.bound_tau1) + ',' + fmt(pr.bound_tau1_log) + ',' +
                   fmt(pr.var_tau1) + ',' + fmt(pr.bound_tau2) + ',' +
                   fmt(pr.bound_tau2_log) + ',' + fmt(pr.bound_total) + ',' +
                   fmt(pr.bound_tau_x) + ',' + fmt(pr.bound_tau_prime) + '\n';

            result.points.push_back(std::move(pr));
        }
    }
    result.csv = std::move(csv);
    return result;
}

void write_sweep_csv(const SweepResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write CSV: " + path);
    out << result.csv;
}

}  // namespace dmvr
