#include "ecoupons/economics.hpp"

#include <cmath>
#include <future>
#include <semaphore>
#include <stdexcept>

namespace ecoupons {

double cluster_savings(std::span<const double> rho, const ActionTable& table, int homes,
                       int days) {
    if (rho.size() != table.size())
        throw std::invalid_argument("cluster_savings: rho/table size mismatch");
    double per_day_cents = 0.0;
    for (std::size_t a = 0; a < rho.size(); ++a)
        per_day_cents += rho[a] * table[a].savings_cents;
    return static_cast<double>(homes) * static_cast<double>(days) * per_day_cents / 100.0;
}

double expected_customer_value(std::span<const double> zeta, std::span<const double> value) {
    if (zeta.size() != value.size())
        throw std::invalid_argument("expected_customer_value: grid mismatch");
    double e = 0.0;
    for (std::size_t i = 0; i < zeta.size(); ++i) e += zeta[i] * value[i];
    return e;
}

double lsw_value(double expected_value, double profit, int cluster_size) {
    return static_cast<double>(cluster_size) * expected_value + profit;
}

SweepPoint solve_lottery_point(double reward, const SweepContext& ctx) {
    SweepPoint pt;
    pt.reward = reward;
    pt.scheme = "lottery";
    try {
        LotteryConfig cfg = LotteryConfig::for_prize(reward, ctx.cluster_homes, ctx.winners);
        SurplusGrid grid(lattice_step(cfg.win_gain, cfg.loss), ctx.grid_x_min, ctx.grid_x_max);
        RegenerationDist psi = ctx.regen.materialize(grid);
        Preferences prefs = make_preferences(ctx.prospect);
        MfeResult mfe = solve_mfe(ctx.table, cfg, ctx.beta, prefs, grid, psi, {}, ctx.opts);
        pt.rho = mfe.rho_star;
        pt.converged = mfe.converged;
        pt.savings = cluster_savings(mfe.rho_star, ctx.table, ctx.cluster_homes,
                                     ctx.days_per_week);
        double disbursed = cfg.prize * cfg.winners;
        pt.reward = disbursed;
        pt.profit = pt.savings - disbursed;
        pt.expected_value = expected_customer_value(mfe.zeta_star, mfe.value_star);
        pt.lsw = lsw_value(pt.expected_value, pt.profit, ctx.cluster_homes);
    } catch (const std::exception& e) {
        pt.error = e.what();
        pt.converged = false;
    }
    return pt;
}

namespace {

SweepPoint benchmark_point_from_rewards(const std::vector<double>& rewards,
                                        const SweepContext& ctx) {
    SweepPoint pt;
    pt.scheme = "benchmark";
    SurplusGrid grid(ctx.benchmark_grid_step, ctx.grid_x_min, ctx.grid_x_max);
    RegenerationDist psi = ctx.regen.materialize(grid);
    Preferences prefs = make_preferences(ctx.prospect);
    BenchmarkResult res = solve_deterministic_reward(ctx.table, rewards, ctx.beta, prefs,
                                                     grid, psi, ctx.opts);
    pt.rho = res.distribution;
    pt.converged = true;
    pt.savings = cluster_savings(res.distribution, ctx.table, ctx.cluster_homes,
                                 ctx.days_per_week);
    double disbursed = 0.0;
    for (std::size_t a = 0; a < rewards.size(); ++a)
        disbursed += static_cast<double>(ctx.cluster_homes) * res.distribution[a] * rewards[a];
    pt.reward = disbursed;
    pt.profit = pt.savings - disbursed;
    pt.expected_value = expected_customer_value(res.zeta, res.value);
    pt.lsw = lsw_value(pt.expected_value, pt.profit, ctx.cluster_homes);
    return pt;
}

}  // namespace

SweepPoint solve_benchmark_point(double return_fraction, const SweepContext& ctx) {
    try {
        return benchmark_point_from_rewards(
            proportional_rewards(ctx.table, return_fraction, ctx.opts.cost_scale), ctx);
    } catch (const std::exception& e) {
        SweepPoint pt;
        pt.scheme = "benchmark";
        pt.error = e.what();
        return pt;
    }
}

SweepPoint solve_benchmark_flat_point(double total_weekly, const SweepContext& ctx) {
    try {
        return benchmark_point_from_rewards(
            flat_rewards(ctx.table, total_weekly, ctx.cluster_homes), ctx);
    } catch (const std::exception& e) {
        SweepPoint pt;
        pt.scheme = "benchmark";
        pt.error = e.what();
        return pt;
    }
}

namespace {

template <typename Fn>
std::vector<SweepPoint> run_sweep(std::span<const double> inputs, int threads, Fn&& solve) {
    std::vector<SweepPoint> points(inputs.size());
    if (threads <= 1) {
        for (std::size_t i = 0; i < inputs.size(); ++i) points[i] = solve(inputs[i]);
        return points;
    }
    std::counting_semaphore<> slots(threads);
    std::vector<std::future<void>> futures;
    futures.reserve(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        slots.acquire();
        futures.push_back(std::async(std::launch::async, [&, i]() {
            points[i] = solve(inputs[i]);
            slots.release();
        }));
    }
    for (auto& f : futures) f.get();
    return points;
}

}  // namespace

std::vector<SweepPoint> sweep_lottery(std::span<const double> rewards, const SweepContext& ctx,
                                      int threads) {
    return run_sweep(rewards, threads, [&](double r) { return solve_lottery_point(r, ctx); });
}

std::vector<SweepPoint> sweep_benchmark(std::span<const double> fractions,
                                        const SweepContext& ctx, int threads) {
    return run_sweep(fractions, threads,
                     [&](double f) { return solve_benchmark_point(f, ctx); });
}

std::optional<double> interpolated_break_even(std::span<const SweepPoint> points) {
    const SweepPoint* prev = nullptr;
    for (const auto& pt : points) {
        if (!pt.error.empty()) continue;
        if (pt.profit <= 0.0) {
            if (prev == nullptr || prev->profit <= 0.0) return pt.reward;
            double p1 = prev->profit, p2 = pt.profit;
            return prev->reward + (pt.reward - prev->reward) * p1 / (p1 - p2);
        }
        prev = &pt;
    }
    return std::nullopt;
}

}  // namespace ecoupons
