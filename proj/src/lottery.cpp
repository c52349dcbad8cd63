#include "ecoupons/lottery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace ecoupons {

void validate_simplex(std::span<const double> b, const std::string& what) {
    double sum = 0.0;
    for (double v : b) {
        if (!(v >= 0.0)) throw std::invalid_argument(what + ": negative entry");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument(what + ": entries must sum to 1");
}

double permutation_probability(std::span<const std::size_t> perm,
                               std::span<const double> coupons) {
    if (perm.size() != coupons.size())
        throw std::invalid_argument("permutation_probability: size mismatch");
    for (double c : coupons)
        if (!(c > 0.0))
            throw std::invalid_argument("permutation_probability: coupons must be > 0");
    double remaining = std::accumulate(coupons.begin(), coupons.end(), 0.0);
    double prob = 1.0;
    for (std::size_t n = 0; n + 1 < perm.size(); ++n) {
        prob *= coupons[perm[n]] / remaining;
        remaining -= coupons[perm[n]];
    }
    return prob;
}

namespace {

// Round-by-round recursion: in each round one opponent action group (or the
// agent) supplies the winner in proportion to remaining coupons; paths where
// the agent wins stop contributing to the loss mass.
double loss_recurse(double agent, std::vector<int>& counts,
                    std::span<const double> coupons, int rounds_left, double total) {
    if (rounds_left == 0) return 1.0;
    if (total <= 0.0) return 0.0;  // only the agent holds tickets now
    double denom = agent + total;
    double acc = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] == 0 || coupons[k] <= 0.0) continue;
        double p_k = static_cast<double>(counts[k]) * coupons[k] / denom;
        --counts[k];
        acc += p_k * loss_recurse(agent, counts, coupons, rounds_left - 1,
                                  total - coupons[k]);
        ++counts[k];
    }
    return acc;
}

}  // namespace

double loss_probability(double agent_coupons, const OpponentProfile& profile,
                        std::span<const double> coupons, int winners) {
    if (agent_coupons < 0.0)
        throw std::invalid_argument("loss_probability: negative agent coupons");
    if (profile.counts.size() != coupons.size())
        throw std::invalid_argument("loss_probability: profile/coupon size mismatch");
    for (int c : profile.counts)
        if (c < 0) throw std::invalid_argument("loss_probability: negative count");
    for (double c : coupons)
        if (c < 0.0) throw std::invalid_argument("loss_probability: negative coupons");
    if (winners < 1 || winners > profile.total())
        throw std::invalid_argument("loss_probability: winners must satisfy 1 <= K <= M-1");
    if (agent_coupons == 0.0) return 1.0;
    double total = 0.0;
    for (std::size_t k = 0; k < coupons.size(); ++k)
        total += static_cast<double>(profile.counts[k]) * coupons[k];
    std::vector<int> counts = profile.counts;
    return loss_recurse(agent_coupons, counts, coupons, winners, total);
}

double log_profile_probability(const OpponentProfile& profile,
                               std::span<const double> rho) {
    if (profile.counts.size() != rho.size())
        throw std::invalid_argument("log_profile_probability: size mismatch");
    double lw = std::lgamma(static_cast<double>(profile.total()) + 1.0);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        int c = profile.counts[i];
        if (c == 0) continue;
        if (rho[i] <= 0.0) return -std::numeric_limits<double>::infinity();
        lw += static_cast<double>(c) * std::log(rho[i]) -
              std::lgamma(static_cast<double>(c) + 1.0);
    }
    return lw;
}

namespace {

std::uint64_t profile_count(int opponents, std::size_t n_actions) {
    // C(opponents + A - 1, A - 1), saturating
    long double c = 1.0L;
    for (std::size_t i = 1; i < n_actions; ++i)
        c = c * static_cast<long double>(opponents + i) / static_cast<long double>(i);
    if (c > 1e18L) return UINT64_MAX;
    return static_cast<std::uint64_t>(c + 0.5L);
}

template <typename Fn>
void for_each_profile(int opponents, std::size_t n_actions, Fn&& fn) {
    // odometer over compositions of `opponents` into n_actions parts
    OpponentProfile p;
    p.counts.assign(n_actions, 0);
    p.counts[0] = opponents;
    if (n_actions == 1) {
        fn(p);
        return;
    }
    for (;;) {
        fn(p);
        // move one unit right from the rightmost positive non-terminal slot
        std::size_t i = n_actions - 1;
        while (i > 0 && p.counts[i - 1] == 0) --i;
        if (i == 0) break;  // everything in the last slot: done
        --p.counts[i - 1];
        int carry = p.counts[n_actions - 1] + 1;
        p.counts[n_actions - 1] = 0;
        p.counts[i] = carry;
    }
}

}  // namespace

double win_probability_exact(std::size_t action, std::span<const double> rho,
                             std::span<const double> coupons, const LotteryConfig& cfg,
                             std::uint64_t enumeration_cap) {
    cfg.validate();
    validate_simplex(rho, "rho");
    if (rho.size() != coupons.size())
        throw std::invalid_argument("win_probability_exact: rho/coupon size mismatch");
    if (action >= coupons.size())
        throw std::invalid_argument("win_probability_exact: bad action index");
    int opponents = cfg.cluster_size - 1;
    if (profile_count(opponents, rho.size()) > enumeration_cap)
        throw EnumerationCapExceeded(
            "profile enumeration too large; use the K=1 convolution path or monte carlo");
    double agent = coupons[action];
    double loss_mass = 0.0;
    for_each_profile(opponents, rho.size(), [&](const OpponentProfile& p) {
        double lw = log_profile_probability(p, rho);
        if (lw == -std::numeric_limits<double>::infinity()) return;
        loss_mass += std::exp(lw) * loss_probability(agent, p, coupons, cfg.winners);
    });
    return 1.0 - loss_mass;
}

namespace {

// Scale decimal values to an exact integer support, gcd-reduced.  Entries
// with no population mass are excluded so they cannot inflate the support.
std::vector<std::int64_t> integer_coupons(std::span<const double> coupons,
                                          std::span<const double> rho, double* unit) {
    for (int d = 0; d <= 6; ++d) {
        double scale = std::pow(10.0, d);
        bool ok = true;
        for (std::size_t i = 0; i < coupons.size(); ++i) {
            if (rho[i] == 0.0) continue;
            double s = coupons[i] * scale;
            if (std::abs(s - std::round(s)) > 1e-6 * std::max(1.0, scale)) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        std::vector<std::int64_t> ints(coupons.size(), 0);
        std::int64_t g = 0;
        for (std::size_t i = 0; i < coupons.size(); ++i) {
            if (rho[i] == 0.0) continue;
            ints[i] = static_cast<std::int64_t>(std::round(coupons[i] * scale));
            g = std::gcd(g, ints[i]);
        }
        if (g == 0) g = 1;
        for (auto& v : ints) v /= g;
        *unit = static_cast<double>(g) / scale;
        return ints;
    }
    throw std::invalid_argument(
        "coupon values must be decimal rationals (at most 6 decimal places)");
}

}  // namespace

CouponSumDistribution opponent_sum_distribution(std::span<const double> rho,
                                                std::span<const double> coupons,
                                                int cluster_size) {
    validate_simplex(rho, "rho");
    if (rho.size() != coupons.size())
        throw std::invalid_argument("opponent_sum_distribution: size mismatch");
    double unit = 1.0;
    std::vector<std::int64_t> ints = integer_coupons(coupons, rho, &unit);
    int opponents = cluster_size - 1;
    std::int64_t max_c = 0;
    for (std::size_t i = 0; i < ints.size(); ++i)
        if (rho[i] > 0.0) max_c = std::max(max_c, ints[i]);
    std::uint64_t support = static_cast<std::uint64_t>(max_c) * opponents + 1;
    if (support > 200'000'000ULL)
        throw std::invalid_argument(
            "opponent_sum_distribution: integer support too large; use monte carlo");
    std::vector<double> cur(1, 1.0), next;
    cur.reserve(support);
    next.reserve(support);
    for (int m = 0; m < opponents; ++m) {
        next.assign(cur.size() + static_cast<std::size_t>(max_c), 0.0);
        for (std::size_t a = 0; a < ints.size(); ++a) {
            double b = rho[a];
            if (b == 0.0) continue;
            std::size_t off = static_cast<std::size_t>(ints[a]);
            for (std::size_t s = 0; s < cur.size(); ++s) {
                if (cur[s] != 0.0) next[s + off] += b * cur[s];
            }
        }
        cur.swap(next);
    }
    return CouponSumDistribution{std::move(cur), unit};
}

double win_probability_from_sum(std::size_t action, std::span<const double> coupons,
                                const CouponSumDistribution& sum) {
    double r_a = coupons[action];
    if (r_a == 0.0) return 0.0;
    double p = 0.0;
    for (std::size_t s = 0; s < sum.pmf.size(); ++s) {
        if (sum.pmf[s] == 0.0) continue;
        p += sum.pmf[s] * (r_a / (r_a + static_cast<double>(s) * sum.unit));
    }
    return p;
}

double win_probability_k1(std::size_t action, std::span<const double> rho,
                          std::span<const double> coupons, const LotteryConfig& cfg) {
    cfg.validate();
    if (cfg.winners != 1)
        throw std::invalid_argument("win_probability_k1 requires K = 1");
    if (action >= coupons.size())
        throw std::invalid_argument("win_probability_k1: bad action index");
    CouponSumDistribution sum = opponent_sum_distribution(rho, coupons, cfg.cluster_size);
    return win_probability_from_sum(action, coupons, sum);
}

MonteCarloEstimate win_probability_mc(std::size_t action, std::span<const double> rho,
                                      std::span<const double> coupons,
                                      const LotteryConfig& cfg, std::uint64_t samples,
                                      std::uint64_t seed) {
    cfg.validate();
    validate_simplex(rho, "rho");
    if (samples < 1) throw std::invalid_argument("win_probability_mc: samples must be >= 1");
    if (action >= coupons.size())
        throw std::invalid_argument("win_probability_mc: bad action index");
    std::vector<double> cum(rho.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        acc += rho[i];
        cum[i] = acc;
    }
    cum.back() = 1.0;
    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    int opponents = cfg.cluster_size - 1;
    OpponentProfile profile;
    double mean = 0.0, m2 = 0.0;
    for (std::uint64_t n = 0; n < samples; ++n) {
        profile.counts.assign(rho.size(), 0);
        for (int m = 0; m < opponents; ++m) {
            double u = uniform();
            std::size_t k = 0;
            while (k + 1 < cum.size() && u >= cum[k]) ++k;
            ++profile.counts[k];
        }
        double win = 1.0 - loss_probability(coupons[action], profile, coupons, cfg.winners);
        double delta = win - mean;
        mean += delta / static_cast<double>(n + 1);
        m2 += delta * (win - mean);
    }
    MonteCarloEstimate est;
    est.estimate = mean;
    est.std_error = samples > 1
        ? std::sqrt(m2 / (static_cast<double>(samples - 1) * static_cast<double>(samples)))
        : 0.0;
    return est;
}

WinProbabilityBounds win_probability_bounds(std::span<const double> coupons,
                                            const LotteryConfig& cfg) {
    cfg.validate();
    if (coupons.empty()) throw std::invalid_argument("win_probability_bounds: empty coupons");
    double r_hi = *std::max_element(coupons.begin(), coupons.end());
    double r_lo = *std::min_element(coupons.begin(), coupons.end());
    if (!(r_hi > 0.0))
        throw std::invalid_argument("win_probability_bounds: largest coupon must be > 0");
    if (r_lo == 0.0) return {0.0, 1.0};
    double m = static_cast<double>(cfg.cluster_size);
    double k = static_cast<double>(cfg.winners);
    WinProbabilityBounds b;
    b.upper = 1.0 - (m - k) / m * std::pow(r_lo / r_hi, k);
    b.lower = 1.0 - std::pow(1.0 - r_lo / (r_lo + (m - 1.0) * r_hi), k);
    return b;
}

std::vector<double> win_probabilities(std::span<const double> rho,
                                      std::span<const double> coupons,
                                      const LotteryConfig& cfg, WinProbMethod method,
                                      std::uint64_t mc_samples, std::uint64_t seed,
                                      std::uint64_t enumeration_cap) {
    cfg.validate();
    std::vector<double> p(coupons.size());
    if (method == WinProbMethod::kAuto) {
        if (cfg.winners == 1)
            method = WinProbMethod::kK1;
        else if (profile_count(cfg.cluster_size - 1, rho.size()) <= enumeration_cap)
            method = WinProbMethod::kExact;
        else
            method = WinProbMethod::kMonteCarlo;
    }
    switch (method) {
        case WinProbMethod::kK1: {
            CouponSumDistribution sum =
                opponent_sum_distribution(rho, coupons, cfg.cluster_size);
            for (std::size_t a = 0; a < p.size(); ++a)
                p[a] = win_probability_from_sum(a, coupons, sum);
            break;
        }
        case WinProbMethod::kExact:
            for (std::size_t a = 0; a < p.size(); ++a)
                p[a] = win_probability_exact(a, rho, coupons, cfg, enumeration_cap);
            break;
        case WinProbMethod::kMonteCarlo:
            for (std::size_t a = 0; a < p.size(); ++a)
                p[a] = win_probability_mc(a, rho, coupons, cfg, mc_samples, seed + a).estimate;
            break;
        case WinProbMethod::kAuto:
            break;
    }
    return p;
}

}  // namespace ecoupons
