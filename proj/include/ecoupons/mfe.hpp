#pragma once

#include <string>
#include <vector>

#include "ecoupons/action_table.hpp"
#include "ecoupons/dp.hpp"
#include "ecoupons/lottery.hpp"
#include "ecoupons/population.hpp"
#include "ecoupons/prospect.hpp"

namespace ecoupons {

struct MfeOptions {
    double damping = 1.0;        // 1 = pure fixed-point iteration
    double tol = 1e-5;           // sup-norm tolerance on the rho update
    int max_iters = 200;
    double value_tol = 1e-8;
    int value_max_sweeps = 5000;
    double stationary_tol = 1e-12;
    int stationary_max_iters = 100'000;
    double tie_tol = 1e-9;
    double cost_scale = 0.75;    // table cost units -> surplus units per period
    WeightingMode weighting = WeightingMode::kComplement;
    WinProbMethod win_prob_method = WinProbMethod::kAuto;
    std::uint64_t mc_samples = 100'000;
    std::uint64_t seed = 1;
    std::uint64_t enumeration_cap = kDefaultEnumerationCap;
};

// One evaluation of the equilibrium map: win odds -> value -> best response
// -> stationary surplus law -> aggregated action distribution.
struct MapImage {
    std::vector<double> win_prob;
    std::vector<double> value;
    Policy sigma;
    std::vector<double> zeta;
    std::vector<double> rho;
    int value_sweeps = 0;
};

MapImage apply_equilibrium_map(std::span<const double> rho, const ActionTable& table,
                               const LotteryConfig& cfg, double beta,
                               const Preferences& prefs, const SurplusGrid& grid,
                               const RegenerationDist& psi, const MfeOptions& opts);

struct MfeResult {
    std::vector<double> rho_star;
    Policy policy_star;
    std::vector<double> zeta_star;
    std::vector<double> value_star;
    std::vector<double> win_prob;
    int iterations = 0;
    std::vector<double> residual_history;
    bool converged = false;
    double damping_used = 1.0;
    std::string note;
};

// Damped iteration rho <- (1-lambda) rho + lambda Phi(rho).  The returned
// triple (policy, zeta, rho) is the exact image of the final iterate, so
// rho_star == aggregate_actions(zeta_star, policy_star) by construction.
// On a residual plateau the damping drops to 0.5 once and the event is
// noted; iteration may still fail to converge (existence does not imply
// iteration convergence), in which case the lowest-residual iterate is
// returned flagged.
MfeResult solve_mfe(const ActionTable& table, const LotteryConfig& cfg, double beta,
                    const Preferences& prefs, const SurplusGrid& grid,
                    const RegenerationDist& psi, std::vector<double> rho0,
                    const MfeOptions& opts);

std::vector<double> uniform_profile(std::size_t n_actions);

// --- deterministic-reward benchmark ---------------------------------------

// Per-action weekly surplus gains for the no-lottery scheme.
std::vector<double> proportional_rewards(const ActionTable& table, double return_fraction,
                                         double cost_scale);
// Equal share of the weekly budget for every action that produces savings.
std::vector<double> flat_rewards(const ActionTable& table, double total_weekly,
                                 int cluster_size);

struct BenchmarkResult {
    std::vector<double> distribution;       // stationary action distribution
    std::vector<double> value;
    std::vector<double> zeta;
    Policy policy;
    std::vector<double> reward_per_action;  // dollars per week
};

// DP with the lottery replaced by a sure weekly gain: no losing branch,
// same regeneration and grid; off-lattice gains use linear interpolation.
BenchmarkResult solve_deterministic_reward(const ActionTable& table,
                                           std::span<const double> reward_per_action,
                                           double beta, const Preferences& prefs,
                                           const SurplusGrid& grid,
                                           const RegenerationDist& psi,
                                           const MfeOptions& opts);

}  // namespace ecoupons
