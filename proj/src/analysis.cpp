#include "dmvr/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dmvr {
namespace analysis {

namespace {

struct BinaryCounts {
    int r, s;
};

BinaryCounts binary_counts(int n, double rho) {
    if (!(rho > 0.0) || !(rho < 0.5))
        throw std::domain_error("minority fraction must satisfy 0 < rho < 1/2");
    const int r = static_cast<int>(std::llround(n * rho));
    const int s = n - r;
    if (r < 1 || s <= r) throw std::domain_error("need rounded counts with 1 <= r < s");
    return {r, s};
}

double sojourn_mean_sum(int n, int r, int s) {
    double sum = 0;
    for (int i = 0; i < r; ++i)
        sum += n / (2.0 * (r - i) * (s - i));
    return sum;
}

double sojourn_var_sum(int n, int r, int s) {
    double sum = 0;
    for (int i = 0; i < r; ++i) {
        const double d = (r - i) * static_cast<double>(s - i);
        sum += n * static_cast<double>(n) / (4.0 * d * d);
    }
    return sum;
}

double harmonic(int m) {
    double h = 0;
    for (int i = 1; i <= m; ++i) h += 1.0 / i;
    return h;
}

void require_descending(std::span<const double> rho) {
    if (rho.size() < 2) throw std::domain_error("need at least two choice fractions");
    for (std::size_t i = 0; i + 1 < rho.size(); ++i)
        if (!(rho[i] > rho[i + 1]))
            throw std::domain_error("fractions must be strictly descending");
    if (!(rho.back() > 0)) throw std::domain_error("fractions must be positive");
}

}  // namespace

double expected_tau1(int n, double rho) {
    const auto [r, s] = binary_counts(n, rho);
    return sojourn_mean_sum(n, r, s);
}

double expected_tau1_log(int n, double rho) {
    const auto [r, s] = binary_counts(n, rho);
    const double arg = static_cast<double>(r) * (s - r) / s;
    if (!(arg > 0)) throw std::domain_error("log argument must be positive");
    return n / (2.0 * (s - r)) * std::log(arg);
}

double var_tau1(int n, double rho) {
    const auto [r, s] = binary_counts(n, rho);
    return sojourn_var_sum(n, r, s);
}

double expected_tau2_bound(int n, double rho) {
    const auto [r, s] = binary_counts(n, rho);
    (void)s;
    return harmonic(r) / (2.0 * (1.0 - 2.0 * rho));
}

double expected_tau2_bound_log(int n, double rho) {
    binary_counts(n, rho);
    const double arg = 2.0 * n * rho;
    if (!(arg > 0)) throw std::domain_error("log argument must be positive");
    return std::log(arg) / (2.0 * (1.0 - 2.0 * rho));
}

double total_bound_binary(int n, double rho) {
    binary_counts(n, rho);
    const double a1 = n * rho * (1.0 - 2.0 * rho) / (1.0 - rho);
    const double a2 = 2.0 * n * rho;
    if (!(a1 > 0) || !(a2 > 0)) throw std::domain_error("log argument must be positive");
    return (std::log(a1) + std::log(a2)) / (2.0 * (1.0 - 2.0 * rho));
}

std::pair<double, double> pairwise_moments(int n, double rho_k, double rho_l) {
    if (rho_k == rho_l) throw std::domain_error("pairwise fractions must differ");
    const double lo = std::min(rho_k, rho_l);
    const double hi = std::max(rho_k, rho_l);
    const int r = static_cast<int>(std::llround(n * lo));
    const int s = static_cast<int>(std::llround(n * hi));
    if (r < 1 || s <= r) throw std::domain_error("need rounded counts with 1 <= r < s");
    return {sojourn_mean_sum(n, r, s), sojourn_var_sum(n, r, s)};
}

double order_stat_bound(std::span<const double> means, std::span<const double> variances) {
    const std::size_t count = means.size();
    if (count < 2 || variances.size() != count)
        throw std::domain_error("order statistics bound needs R >= 2 variables");
    double mu = 0;
    for (double m : means) mu += m;
    mu /= static_cast<double>(count);
    double sum = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (variances[i] < 0) throw std::domain_error("negative variance");
        sum += variances[i] + (means[i] - mu) * (means[i] - mu);
    }
    const double factor = static_cast<double>(count - 1) / static_cast<double>(count);
    return mu + std::sqrt(factor * sum);
}

double tau_x_bound(int n, std::span<const double> rho) {
    require_descending(rho);
    std::vector<double> means, vars;
    for (std::size_t k = 0; k < rho.size(); ++k) {
        for (std::size_t l = k + 1; l < rho.size(); ++l) {
            const auto [m, v] = pairwise_moments(n, rho[k], rho[l]);
            means.push_back(m);
            vars.push_back(v);
        }
    }
    if (means.size() == 1) return means[0];  // two choices: max of one variable
    return order_stat_bound(means, vars);
}

double tau_prime_bound(int n, std::span<const double> rho) {
    require_descending(rho);
    std::vector<double> means, vars;
    for (std::size_t j = 0; j + 1 < rho.size(); ++j) {
        const double gap = rho[j] - rho[j + 1];
        means.push_back(std::log(n) / (2.0 * gap));
        vars.push_back(1.0 / (4.0 * gap * gap));
    }
    if (means.size() == 1) return means[0];
    return order_stat_bound(means, vars);
}

BinaryTiming binary_timing(int n, double rho) {
    BinaryTiming t;
    t.n = n;
    t.rho = rho;
    const auto [r, s] = binary_counts(n, rho);
    t.r = r;
    t.s = s;
    t.tau1_mean = expected_tau1(n, rho);
    t.tau1_mean_log = expected_tau1_log(n, rho);
    t.tau1_var = var_tau1(n, rho);
    t.tau2_bound = expected_tau2_bound(n, rho);
    t.tau2_bound_log = expected_tau2_bound_log(n, rho);
    t.total_bound = total_bound_binary(n, rho);
    return t;
}

MultiTiming multi_timing(int n, std::span<const double> rho) {
    require_descending(rho);
    MultiTiming t;
    t.n = n;
    t.rho.assign(rho.begin(), rho.end());
    for (std::size_t k = 0; k < rho.size(); ++k) {
        for (std::size_t l = k + 1; l < rho.size(); ++l) {
            t.pairs.emplace_back(static_cast<int>(k), static_cast<int>(l));
            t.pair_moments.push_back(pairwise_moments(n, rho[k], rho[l]));
        }
    }
    for (std::size_t j = 0; j + 1 < rho.size(); ++j) {
        const double gap = rho[j] - rho[j + 1];
        t.level_means.push_back(std::log(n) / (2.0 * gap));
        t.level_vars.push_back(1.0 / (4.0 * gap * gap));
    }
    t.tau_x = tau_x_bound(n, rho);
    t.tau_prime = tau_prime_bound(n, rho);
    return t;
}

}  // namespace analysis
}  // namespace dmvr
