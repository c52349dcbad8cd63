#include "ecoupons/dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ecoupons {

DpProblem make_dp_problem(const SurplusGrid& grid, double beta,
                          std::span<const double> theta_dp,
                          std::span<const double> win_prob,
                          const Preferences& prefs, double win_gain, double loss,
                          WeightingMode weighting) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("beta must be in (0,1)");
    if (theta_dp.size() != win_prob.size() || theta_dp.empty())
        throw std::invalid_argument("make_dp_problem: theta/win_prob size mismatch");
    DpProblem p;
    p.grid = &grid;
    p.beta = beta;
    p.theta.assign(theta_dp.begin(), theta_dp.end());
    p.up_cells = grid.offset_of(win_gain, "win_gain");
    p.down_cells = grid.offset_of(loss, "loss");
    p.weight_win.resize(win_prob.size());
    p.weight_lose.resize(win_prob.size());
    for (std::size_t a = 0; a < win_prob.size(); ++a) {
        if (!(win_prob[a] >= 0.0 && win_prob[a] <= 1.0))
            throw std::invalid_argument("make_dp_problem: win probability outside [0,1]");
        p.weight_win[a] = prefs.weight(win_prob[a]);
        p.weight_lose[a] = weighting == WeightingMode::kComplement
                               ? 1.0 - p.weight_win[a]
                               : prefs.weight(1.0 - win_prob[a]);
    }
    p.utility.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) p.utility[i] = prefs.utility(grid.x(i));
    return p;
}

namespace {

inline double best_q(const DpProblem& p, std::span<const double> f, std::size_t i,
                     std::size_t up, std::size_t dn) {
    double fu = f[up], fd = f[dn];
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < p.theta.size(); ++a) {
        double q = -p.theta[a] + p.beta * (p.weight_win[a] * fu + p.weight_lose[a] * fd);
        if (q > best) best = q;
    }
    return p.utility[i] + best;
}

}  // namespace

std::vector<double> bellman_apply(const DpProblem& p, std::span<const double> f) {
    if (f.size() != p.n_states()) throw std::invalid_argument("bellman_apply: bad f size");
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        std::size_t up = p.grid->clamp_shift(i, p.up_cells);
        std::size_t dn = p.grid->clamp_shift(i, -p.down_cells);
        out[i] = best_q(p, f, i, up, dn);
    }
    return out;
}

double bellman_residual(const DpProblem& p, std::span<const double> f) {
    std::vector<double> tf = bellman_apply(p, f);
    double r = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) r = std::max(r, std::abs(tf[i] - f[i]));
    return r;
}

ValueIterationResult value_iterate_from(const DpProblem& p, std::vector<double> init,
                                        double tol, int max_sweeps) {
    if (!(tol > 0.0)) throw std::invalid_argument("value_iterate: tol must be > 0");
    if (init.size() != p.n_states())
        throw std::invalid_argument("value_iterate: bad init size");
    ValueIterationResult res;
    res.values = std::move(init);
    std::vector<std::size_t> up(p.n_states()), dn(p.n_states());
    for (std::size_t i = 0; i < p.n_states(); ++i) {
        up[i] = p.grid->clamp_shift(i, p.up_cells);
        dn[i] = p.grid->clamp_shift(i, -p.down_cells);
    }
    // Sweep-change below `threshold` triggers a certification against the
    // true Bellman residual; the in-place sweep change alone is not it.
    double threshold = tol / 4.0;
    auto& f = res.values;
    while (res.sweeps < max_sweeps) {
        double delta = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            double q = best_q(p, f, i, up[i], dn[i]);
            delta = std::max(delta, std::abs(q - f[i]));
            f[i] = q;
        }
        ++res.sweeps;
        res.residuals.push_back(delta);
        if (delta <= threshold) {
            double r = bellman_residual(p, f);
            res.residuals.push_back(r);
            if (r <= tol) {
                res.converged = true;
                return res;
            }
            threshold /= 4.0;
        }
    }
    return res;
}

ValueIterationResult value_iterate(const DpProblem& p, double tol, int max_sweeps) {
    return value_iterate_from(p, std::vector<double>(p.n_states(), 0.0), tol, max_sweeps);
}

std::vector<double> q_values(const DpProblem& p, std::span<const double> value,
                             std::size_t state) {
    std::size_t up = p.grid->clamp_shift(state, p.up_cells);
    std::size_t dn = p.grid->clamp_shift(state, -p.down_cells);
    std::vector<double> q(p.n_actions());
    for (std::size_t a = 0; a < p.n_actions(); ++a)
        q[a] = p.utility[state] - p.theta[a] +
               p.beta * (p.weight_win[a] * value[up] + p.weight_lose[a] * value[dn]);
    return q;
}

Policy best_response(const DpProblem& p, std::span<const double> value, double tie_tol) {
    if (value.size() != p.n_states())
        throw std::invalid_argument("best_response: bad value size");
    Policy pol;
    pol.n_actions = p.n_actions();
    pol.weights.assign(p.n_states() * p.n_actions(), 0.0);
    for (std::size_t i = 0; i < p.n_states(); ++i) {
        std::vector<double> q = q_values(p, value, i);
        double best = *std::max_element(q.begin(), q.end());
        auto row = pol.row(i);
        int support = 0;
        for (std::size_t a = 0; a < q.size(); ++a)
            if (q[a] >= best - tie_tol) ++support;
        for (std::size_t a = 0; a < q.size(); ++a)
            if (q[a] >= best - tie_tol) row[a] = 1.0 / support;
    }
    return pol;
}

ThresholdReport threshold_diagnostic(const DpProblem& p, std::span<const double> value,
                                     double tie_tol) {
    ThresholdReport report;
    std::size_t n = p.n_states();
    std::vector<std::vector<double>> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = q_values(p, value, i);
    for (std::size_t a1 = 0; a1 < p.n_actions(); ++a1) {
        for (std::size_t a2 = 0; a2 < p.n_actions(); ++a2) {
            if (p.theta[a1] <= p.theta[a2]) continue;
            ThresholdReport::Pair pair;
            pair.costlier = a1;
            pair.cheaper = a2;
            int prev = 0;  // -1 cheaper preferred, +1 costlier preferred, 0 tie
            for (std::size_t i = 0; i < n; ++i) {
                double d = q[i][a1] - q[i][a2];
                int sign = (d > tie_tol) ? 1 : (d < -tie_tol ? -1 : 0);
                if (sign != 0) {
                    if (prev != 0 && sign != prev)
                        pair.crossings.push_back(p.grid->x(i));
                    prev = sign;
                }
            }
            pair.single_crossing = pair.crossings.size() <= 1;
            if (!pair.single_crossing) report.all_single = false;
            report.pairs.push_back(std::move(pair));
        }
    }
    return report;
}

}  // namespace ecoupons
