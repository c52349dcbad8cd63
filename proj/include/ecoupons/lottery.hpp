#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ecoupons {

// K-winner sequential draw: a permutation of the cluster is sampled with
// probability proportional to remaining coupon counts, round by round, and
// the first K agents win.  w/l are the surplus moves on win/lose.
struct LotteryConfig {
    int cluster_size = 50;  // M, agents per lottery
    int winners = 1;        // K, prizes per cluster
    double prize = 15.0;    // dollars per win (= w + l)
    double win_gain = 14.7; // w
    double loss = 0.3;      // l

    void validate() const {
        if (cluster_size < 2) throw std::invalid_argument("lottery.cluster_size must be >= 2");
        if (winners < 1 || winners >= cluster_size)
            throw std::invalid_argument("lottery.winners must satisfy 1 <= K < M");
        if (!(win_gain > 0.0)) throw std::invalid_argument("lottery.win_gain must be > 0");
        if (!(loss > 0.0)) throw std::invalid_argument("lottery.loss must be > 0");
        if (std::abs(win_gain + loss - prize) > 1e-9)
            throw std::invalid_argument("lottery.prize must equal win_gain + loss");
    }

    // Convention used throughout: the per-capita share of the prize is what
    // a participant implicitly expects, so losing costs prize/M.
    static LotteryConfig for_prize(double prize, int cluster_size, int winners = 1) {
        LotteryConfig cfg;
        cfg.cluster_size = cluster_size;
        cfg.winners = winners;
        cfg.prize = prize;
        cfg.loss = prize / cluster_size;
        cfg.win_gain = prize - cfg.loss;
        cfg.validate();
        return cfg;
    }
};

// Counts of the M-1 opponents per action.
struct OpponentProfile {
    std::vector<int> counts;
    int total() const {
        int t = 0;
        for (int c : counts) t += c;
        return t;
    }
};

// Action distribution of the anonymous population (probability simplex).
void validate_simplex(std::span<const double> b, const std::string& what);

// Probability of one full ordering of `coupons.size()` agents under the
// sequential proportional draw.  perm[n] is the index drawn in round n.
double permutation_probability(std::span<const std::size_t> perm,
                               std::span<const double> coupons);

// Probability that an agent holding `agent_coupons` fails to win any of the
// K rounds against the given opponent profile.  Exact; zero coupons lose
// with probability 1.
double loss_probability(double agent_coupons, const OpponentProfile& profile,
                        std::span<const double> coupons, int winners);

// log of the multinomial probability of an opponent profile under rho
double log_profile_probability(const OpponentProfile& profile,
                               std::span<const double> rho);

struct EnumerationCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

// Exact win probability by full enumeration of opponent profiles.  Throws
// EnumerationCapExceeded when the profile count is too large; callers then
// choose the K=1 convolution path or Monte Carlo.
double win_probability_exact(std::size_t action, std::span<const double> rho,
                             std::span<const double> coupons, const LotteryConfig& cfg,
                             std::uint64_t enumeration_cap = kDefaultEnumerationCap);

// K=1 fast path: p = E[ r_a / (r_a + S) ] with S the opponents' total
// coupon count, computed by (M-1)-fold convolution over an exact integer
// support (decimal coupon values are scaled to integers).
double win_probability_k1(std::size_t action, std::span<const double> rho,
                          std::span<const double> coupons, const LotteryConfig& cfg);

// Opponent coupon-sum distribution used by the K=1 path; exposed so a
// solver iteration can share it across actions.
struct CouponSumDistribution {
    std::vector<double> pmf;   // index = integer coupon sum (scaled units)
    double unit = 1.0;         // real coupon value per integer unit
};
CouponSumDistribution opponent_sum_distribution(std::span<const double> rho,
                                                std::span<const double> coupons,
                                                int cluster_size);
double win_probability_from_sum(std::size_t action, std::span<const double> coupons,
                                const CouponSumDistribution& sum);

struct MonteCarloEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

// Seeded multinomial sampling of opponent profiles with the exact loss
// probability evaluated per sample; deterministic for a fixed seed.
MonteCarloEstimate win_probability_mc(std::size_t action, std::span<const double> rho,
                                      std::span<const double> coupons,
                                      const LotteryConfig& cfg, std::uint64_t samples,
                                      std::uint64_t seed);

struct WinProbabilityBounds {
    double lower = 0.0;
    double upper = 1.0;
};

// Distribution-free bounds from the extreme coupon counts; trivial (0,1)
// when the smallest coupon count is zero.
WinProbabilityBounds win_probability_bounds(std::span<const double> coupons,
                                            const LotteryConfig& cfg);

enum class WinProbMethod { kAuto, kExact, kK1, kMonteCarlo };

// Win probabilities for every action under one population profile.
std::vector<double> win_probabilities(std::span<const double> rho,
                                      std::span<const double> coupons,
                                      const LotteryConfig& cfg,
                                      WinProbMethod method = WinProbMethod::kAuto,
                                      std::uint64_t mc_samples = 100'000,
                                      std::uint64_t seed = 1,
                                      std::uint64_t enumeration_cap = kDefaultEnumerationCap);

}  // namespace ecoupons
