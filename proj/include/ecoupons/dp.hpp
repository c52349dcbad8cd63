#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ecoupons/grid.hpp"
#include "ecoupons/prospect.hpp"

namespace ecoupons {

// How the two branch weights are formed from the win probability.
// kComplement keeps the branch weights a probability pair (the loss branch
// gets 1 - phi(p)); kBothTails distorts each tail separately, so the pair
// can sum away from 1.  Complement is the default: with separate tails the
// sub-certainty of the distortion makes every costly action dominated by
// free-riding once the value level is large, which contradicts the observed
// equilibria this solver is meant to produce.
enum class WeightingMode { kComplement, kBothTails };

// Dynamic program of a single agent facing fixed per-action win odds:
//   V(x) = max_a { u(x) - theta_a + beta*[w_win(a) V(x+w) + w_lose(a) V(x-l)] }
// The win odds are population-dependent but surplus-independent, so the
// probability weights are baked in at construction.
struct DpProblem {
    const SurplusGrid* grid = nullptr;
    double beta = 0.92;
    std::vector<double> theta;        // per-action cost in DP units
    std::vector<double> weight_win;   // phi(p_a)
    std::vector<double> weight_lose;  // phi(1 - p_a)
    std::vector<double> utility;      // u(x) per grid state
    std::int64_t up_cells = 0;        // w in grid cells
    std::int64_t down_cells = 0;      // l in grid cells

    std::size_t n_states() const { return utility.size(); }
    std::size_t n_actions() const { return theta.size(); }
};

DpProblem make_dp_problem(const SurplusGrid& grid, double beta,
                          std::span<const double> theta_dp,
                          std::span<const double> win_prob,
                          const Preferences& prefs, double win_gain, double loss,
                          WeightingMode weighting = WeightingMode::kComplement);

// One Jacobi application of the Bellman operator.
std::vector<double> bellman_apply(const DpProblem& p, std::span<const double> f);

double bellman_residual(const DpProblem& p, std::span<const double> f);

struct ValueIterationResult {
    std::vector<double> values;
    int sweeps = 0;
    std::vector<double> residuals;  // per-sweep sup change, then final Bellman residual
    bool converged = false;
};

// In-place ascending sweeps (fresh loss-branch values within a sweep) with
// the returned fixed point certified against the Jacobi Bellman residual.
ValueIterationResult value_iterate(const DpProblem& p, double tol, int max_sweeps);
ValueIterationResult value_iterate_from(const DpProblem& p, std::vector<double> init,
                                        double tol, int max_sweeps);

// Randomized policy: per state, a probability row over actions.
struct Policy {
    std::size_t n_actions = 0;
    std::vector<double> weights;  // n_states x n_actions, row-major

    std::size_t n_states() const { return n_actions ? weights.size() / n_actions : 0; }
    std::span<const double> row(std::size_t i) const {
        return {weights.data() + i * n_actions, n_actions};
    }
    std::span<double> row(std::size_t i) {
        return {weights.data() + i * n_actions, n_actions};
    }
};

// Uniform randomization over the actions within tie_tol of the best Q value.
Policy best_response(const DpProblem& p, std::span<const double> value, double tie_tol = 1e-9);

std::vector<double> q_values(const DpProblem& p, std::span<const double> value,
                             std::size_t state);

// Per-pair crossing structure of the pairwise preference order along the
// grid.  Diagnostic only; multiple crossings are reported, never fatal.
struct ThresholdReport {
    struct Pair {
        std::size_t costlier = 0;
        std::size_t cheaper = 0;
        std::vector<double> crossings;  // x where the preference flips
        bool single_crossing = true;
    };
    std::vector<Pair> pairs;
    bool all_single = true;
};

ThresholdReport threshold_diagnostic(const DpProblem& p, std::span<const double> value,
                                     double tie_tol = 1e-9);

}  // namespace ecoupons
