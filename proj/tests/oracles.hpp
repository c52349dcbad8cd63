// Brute-force reference implementations used only by tests.  These stay
// independent of the library code paths they check: the lottery oracle
// enumerates raw permutations, the DP oracle is a straight finite-horizon
// backup written from scratch.
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "ecoupons/grid.hpp"

namespace oracles {

// Win probability of agent 0 by enumerating every opponent action
// assignment (A^(M-1) tuples weighted by rho) and every ordering of the M
// agents, with ordering probabilities from the sequential proportional
// draw.  Feasible for M <= 5.
inline double win_probability_bruteforce(std::size_t action, const std::vector<double>& rho,
                                         const std::vector<double>& coupons, int cluster,
                                         int winners) {
    int opponents = cluster - 1;
    std::size_t n_actions = rho.size();
    std::vector<std::size_t> assign(opponents, 0);
    double win_total = 0.0;
    for (;;) {
        double weight = 1.0;
        for (int m = 0; m < opponents; ++m) weight *= rho[assign[m]];
        if (weight > 0.0) {
            std::vector<double> agent_coupons(cluster);
            agent_coupons[0] = coupons[action];
            for (int m = 0; m < opponents; ++m) agent_coupons[m + 1] = coupons[assign[m]];
            std::vector<int> perm(cluster);
            std::iota(perm.begin(), perm.end(), 0);
            double win_mass = 0.0;
            do {
                double remaining =
                    std::accumulate(agent_coupons.begin(), agent_coupons.end(), 0.0);
                double prob = 1.0;
                for (int n = 0; n + 1 < cluster; ++n) {
                    if (remaining <= 0.0) {
                        // ordering of zero-coupon stragglers carries no mass
                        prob = 0.0;
                        break;
                    }
                    prob *= agent_coupons[perm[n]] / remaining;
                    remaining -= agent_coupons[perm[n]];
                }
                bool agent_wins = false;
                for (int n = 0; n < winners; ++n)
                    if (perm[n] == 0) agent_wins = true;
                if (agent_wins) win_mass += prob;
            } while (std::next_permutation(perm.begin(), perm.end()));
            win_total += weight * win_mass;
        }
        // odometer over opponent assignments
        int m = 0;
        while (m < opponents) {
            if (++assign[m] < n_actions) break;
            assign[m] = 0;
            ++m;
        }
        if (m == opponents) break;
    }
    return win_total;
}

// Permutation enumeration handles zero-coupon agents only when they cannot
// win; for random instances keep coupons strictly positive.  The sequential
// draw puts zero-coupon agents last in any order, each such tail ordering
// sharing the residual mass; with winners < number of positive-coupon
// agents + 1 the loss attribution is unaffected, which the caller ensures.

struct DpInstance {
    double beta = 0.8;
    std::vector<double> theta;
    std::vector<double> weight_win;   // already-transformed branch weights
    std::vector<double> weight_lose;
    std::vector<double> utility;      // per state
    std::int64_t up = 1, down = 1;    // cells
};

// Horizon-n backup from zero, plain Jacobi, its own clamping.
inline std::vector<double> backward_induction(const DpInstance& inst, std::size_t n_states,
                                              int horizon) {
    std::vector<double> v(n_states, 0.0), next(n_states);
    auto clamp = [&](std::int64_t i) {
        if (i < 0) return std::size_t{0};
        if (i >= static_cast<std::int64_t>(n_states)) return n_states - 1;
        return static_cast<std::size_t>(i);
    };
    for (int t = 0; t < horizon; ++t) {
        for (std::size_t i = 0; i < n_states; ++i) {
            std::size_t iu = clamp(static_cast<std::int64_t>(i) + inst.up);
            std::size_t id = clamp(static_cast<std::int64_t>(i) - inst.down);
            double best = -1e300;
            for (std::size_t a = 0; a < inst.theta.size(); ++a) {
                double q = inst.utility[i] - inst.theta[a] +
                           inst.beta * (inst.weight_win[a] * v[iu] + inst.weight_lose[a] * v[id]);
                best = std::max(best, q);
            }
            next[i] = best;
        }
        v.swap(next);
    }
    return v;
}

inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<double> v(n);
    double sum = 0.0;
    for (auto& x : v) {
        x = u(rng);
        sum += x;
    }
    for (auto& x : v) x /= sum;
    // exact simplex for validators comparing against 1e-12
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) acc += v[i];
    v[n - 1] = 1.0 - acc;
    return v;
}

}  // namespace oracles
