#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecoupons/action_table.hpp"
#include "ecoupons/mfe.hpp"
#include "ecoupons/scenario_types.hpp"

namespace ecoupons {

// Weekly wholesale-cost saving over the cluster for an action distribution.
double cluster_savings(std::span<const double> rho, const ActionTable& table,
                       int homes = 50, int days = 7);

// E_zeta[V]
double expected_customer_value(std::span<const double> zeta, std::span<const double> value);

// cluster_size * E[V] + profit
double lsw_value(double expected_value, double profit, int cluster_size = 50);

struct SweepPoint {
    double reward = 0.0;  // weekly dollars disbursed over the cluster
    std::string scheme;
    std::vector<double> rho;
    double savings = 0.0;
    double profit = 0.0;
    double expected_value = 0.0;
    double lsw = 0.0;
    bool converged = false;
    std::string error;  // non-empty when the solve failed
};

// Everything a sweep point needs to rebuild its own lattice: the grid step
// changes with the prize because w and l must stay exact cell counts.
struct SweepContext {
    ActionTable table;
    double beta = 0.92;
    ProspectParams prospect;
    double grid_x_min = -60.0;
    double grid_x_max = 160.0;
    double benchmark_grid_step = 0.1;
    RegenerationSpec regen;
    MfeOptions opts;
    int cluster_homes = 50;
    int days_per_week = 7;
    int winners = 1;
};

SweepPoint solve_lottery_point(double reward, const SweepContext& ctx);
SweepPoint solve_benchmark_point(double return_fraction, const SweepContext& ctx);
// Equal weekly share of `total_weekly` to every saving action.
SweepPoint solve_benchmark_flat_point(double total_weekly, const SweepContext& ctx);

// One MFE solve per reward; failures are recorded on the point and the
// sweep continues.  Points come back in input order regardless of threads.
std::vector<SweepPoint> sweep_lottery(std::span<const double> rewards, const SweepContext& ctx,
                                      int threads = 1);
std::vector<SweepPoint> sweep_benchmark(std::span<const double> fractions,
                                        const SweepContext& ctx, int threads = 1);

// First profit zero crossing, linearly interpolated between the bracketing
// sweep points.
std::optional<double> interpolated_break_even(std::span<const SweepPoint> points);

}  // namespace ecoupons
