#include "ecoupons/mfe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ecoupons {

namespace {

std::vector<double> theta_dp_units(const ActionTable& table, double cost_scale) {
    std::vector<double> theta(table.size());
    for (std::size_t a = 0; a < table.size(); ++a)
        theta[a] = table[a].cost_cents * cost_scale;
    return theta;
}

double linf_diff(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

std::vector<double> uniform_profile(std::size_t n_actions) {
    return std::vector<double>(n_actions, 1.0 / static_cast<double>(n_actions));
}

MapImage apply_equilibrium_map(std::span<const double> rho, const ActionTable& table,
                               const LotteryConfig& cfg, double beta,
                               const Preferences& prefs, const SurplusGrid& grid,
                               const RegenerationDist& psi, const MfeOptions& opts) {
    MapImage img;
    std::vector<double> coupons = table.coupon_vector();
    img.win_prob = win_probabilities(rho, coupons, cfg, opts.win_prob_method,
                                     opts.mc_samples, opts.seed, opts.enumeration_cap);
    std::vector<double> theta = theta_dp_units(table, opts.cost_scale);
    DpProblem dp = make_dp_problem(grid, beta, theta, img.win_prob, prefs,
                                   cfg.win_gain, cfg.loss, opts.weighting);
    ValueIterationResult vi = value_iterate(dp, opts.value_tol, opts.value_max_sweeps);
    if (!vi.converged)
        throw std::runtime_error("value iteration did not converge within max_sweeps (residual " +
                                 std::to_string(vi.residuals.back()) + ")");
    img.value = std::move(vi.values);
    img.value_sweeps = vi.sweeps;
    img.sigma = best_response(dp, img.value, opts.tie_tol);
    TransitionKernel kernel = transition_kernel(img.win_prob, img.sigma, beta, psi, grid,
                                                cfg.win_gain, cfg.loss);
    StationaryResult st = stationary_power(kernel, opts.stationary_tol,
                                           opts.stationary_max_iters);
    if (!st.converged)
        throw std::runtime_error("stationary distribution power iteration did not converge");
    img.zeta = std::move(st.zeta);
    img.rho = aggregate_actions(img.zeta, img.sigma);
    // squeeze out float drift so repeated map applications stay on the simplex
    double sum = 0.0;
    for (double v : img.rho) sum += v;
    for (double& v : img.rho) v /= sum;
    return img;
}

MfeResult solve_mfe(const ActionTable& table, const LotteryConfig& cfg, double beta,
                    const Preferences& prefs, const SurplusGrid& grid,
                    const RegenerationDist& psi, std::vector<double> rho0,
                    const MfeOptions& opts) {
    cfg.validate();
    table.validate();
    if (rho0.empty()) rho0 = uniform_profile(table.size());
    validate_simplex(rho0, "rho0");
    if (!(opts.damping > 0.0 && opts.damping <= 1.0))
        throw std::invalid_argument("mfe damping must be in (0,1]");

    MfeResult res;
    res.damping_used = opts.damping;
    std::vector<double> rho = std::move(rho0);
    std::vector<double> best_rho = rho;
    double best_residual = std::numeric_limits<double>::infinity();
    double lambda = opts.damping;

    for (int n = 0; n < opts.max_iters; ++n) {
        MapImage img = apply_equilibrium_map(rho, table, cfg, beta, prefs, grid, psi, opts);
        std::vector<double> rho_next(rho.size());
        for (std::size_t a = 0; a < rho.size(); ++a)
            rho_next[a] = (1.0 - lambda) * rho[a] + lambda * img.rho[a];
        double residual = linf_diff(rho_next, rho);
        res.residual_history.push_back(residual);
        ++res.iterations;
        if (residual < best_residual) {
            best_residual = residual;
            best_rho = rho;
        }
        if (residual <= opts.tol) {
            res.rho_star = std::move(img.rho);
            res.policy_star = std::move(img.sigma);
            res.zeta_star = std::move(img.zeta);
            res.value_star = std::move(img.value);
            res.win_prob = std::move(img.win_prob);
            res.converged = true;
            return res;
        }
        rho = std::move(rho_next);
        // plateau detector: ten consecutive non-decreasing residuals
        std::size_t h = res.residual_history.size();
        if (lambda == opts.damping && opts.damping == 1.0 && h >= 10) {
            bool non_decreasing = true;
            for (std::size_t k = h - 9; k < h; ++k)
                if (res.residual_history[k] < res.residual_history[k - 1] * (1.0 - 1e-6)) {
                    non_decreasing = false;
                    break;
                }
            if (non_decreasing) {
                lambda = 0.5;
                res.note = "oscillation detected; damping reduced to 0.5";
            }
        }
    }
    // not converged: report the consistent image of the best iterate
    MapImage img = apply_equilibrium_map(best_rho, table, cfg, beta, prefs, grid, psi, opts);
    res.rho_star = std::move(img.rho);
    res.policy_star = std::move(img.sigma);
    res.zeta_star = std::move(img.zeta);
    res.value_star = std::move(img.value);
    res.win_prob = std::move(img.win_prob);
    res.converged = false;
    res.damping_used = lambda;
    if (res.note.empty()) res.note = "max_iters exhausted";
    return res;
}

std::vector<double> proportional_rewards(const ActionTable& table, double return_fraction,
                                         double cost_scale) {
    if (!(return_fraction >= 0.0 && return_fraction <= 1.0))
        throw std::invalid_argument("return_fraction must be in [0,1]");
    std::vector<double> g(table.size());
    for (std::size_t a = 0; a < table.size(); ++a)
        g[a] = return_fraction * table[a].savings_cents * cost_scale;
    return g;
}

std::vector<double> flat_rewards(const ActionTable& table, double total_weekly,
                                 int cluster_size) {
    if (total_weekly < 0.0) throw std::invalid_argument("flat reward must be >= 0");
    std::vector<double> g(table.size(), 0.0);
    for (std::size_t a = 0; a < table.size(); ++a)
        if (table[a].savings_cents > 0.0)
            g[a] = total_weekly / static_cast<double>(cluster_size);
    return g;
}

namespace {

struct InterpTarget {
    std::size_t lo, hi;
    double w_hi;  // weight on hi
};

InterpTarget interp_target(const SurplusGrid& grid, std::size_t i, double gain) {
    double x = grid.x(i) + gain;
    double step = grid.step();
    double pos = (x - grid.x_min()) / step;
    double n = static_cast<double>(grid.size() - 1);
    if (pos <= 0.0) return {0, 0, 0.0};
    if (pos >= n) return {grid.size() - 1, grid.size() - 1, 0.0};
    std::size_t lo = static_cast<std::size_t>(pos);
    double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= grid.size()) return {grid.size() - 1, grid.size() - 1, 0.0};
    return {lo, lo + 1, frac};
}

}  // namespace

BenchmarkResult solve_deterministic_reward(const ActionTable& table,
                                           std::span<const double> reward_per_action,
                                           double beta, const Preferences& prefs,
                                           const SurplusGrid& grid,
                                           const RegenerationDist& psi,
                                           const MfeOptions& opts) {
    if (reward_per_action.size() != table.size())
        throw std::invalid_argument("solve_deterministic_reward: reward size mismatch");
    std::size_t n = grid.size();
    std::size_t n_a = table.size();
    std::vector<double> theta = theta_dp_units(table, opts.cost_scale);
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = prefs.utility(grid.x(i));
    std::vector<InterpTarget> dest(n * n_a);
    for (std::size_t a = 0; a < n_a; ++a)
        for (std::size_t i = 0; i < n; ++i)
            dest[a * n + i] = interp_target(grid, i, reward_per_action[a]);

    auto action_q = [&](const std::vector<double>& f, std::size_t i, std::size_t a) {
        const InterpTarget& t = dest[a * n + i];
        double cont = (1.0 - t.w_hi) * f[t.lo] + t.w_hi * f[t.hi];
        return u[i] - theta[a] + beta * cont;
    };

    std::vector<double> v(n, 0.0), tv(n);
    bool converged = false;
    for (int sweep = 0; sweep < opts.value_max_sweeps; ++sweep) {
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < n_a; ++a) best = std::max(best, action_q(v, i, a));
            tv[i] = best;
            delta = std::max(delta, std::abs(best - v[i]));
        }
        v.swap(tv);
        if (delta <= opts.value_tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw std::runtime_error("benchmark value iteration did not converge");

    BenchmarkResult res;
    res.value = v;
    res.reward_per_action.assign(reward_per_action.begin(), reward_per_action.end());
    res.policy.n_actions = n_a;
    res.policy.weights.assign(n * n_a, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double best = -std::numeric_limits<double>::infinity();
        std::vector<double> q(n_a);
        for (std::size_t a = 0; a < n_a; ++a) {
            q[a] = action_q(v, i, a);
            best = std::max(best, q[a]);
        }
        int support = 0;
        for (std::size_t a = 0; a < n_a; ++a)
            if (q[a] >= best - opts.tie_tol) ++support;
        auto row = res.policy.row(i);
        for (std::size_t a = 0; a < n_a; ++a)
            if (q[a] >= best - opts.tie_tol) row[a] = 1.0 / support;
    }

    // stationary law of the deterministic-gain chain with regeneration
    std::vector<double> mu = psi.pmf, next(n);
    for (int it = 0; it < opts.stationary_max_iters; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double m = mu[i];
            if (m == 0.0) continue;
            auto row = res.policy.row(i);
            for (std::size_t a = 0; a < n_a; ++a) {
                if (row[a] == 0.0) continue;
                const InterpTarget& t = dest[a * n + i];
                double moved = beta * row[a] * m;
                next[t.lo] += moved * (1.0 - t.w_hi);
                next[t.hi] += moved * t.w_hi;
            }
        }
        for (std::size_t i = 0; i < n; ++i) next[i] += (1.0 - beta) * psi.pmf[i];
        double tv_change = total_variation(next, mu);
        mu.swap(next);
        if (tv_change <= opts.stationary_tol) break;
    }
    res.zeta = std::move(mu);
    res.distribution = aggregate_actions(res.zeta, res.policy);
    double sum = 0.0;
    for (double x : res.distribution) sum += x;
    for (double& x : res.distribution) x /= sum;
    return res;
}

}  // namespace ecoupons
