#include "ecoupons/population.hpp"

#include <cmath>
#include <stdexcept>

namespace ecoupons {

std::vector<double> TransitionKernel::apply(std::span<const double> mu) const {
    if (mu.size() != size()) throw std::invalid_argument("kernel.apply: bad size");
    std::vector<double> out(size(), 0.0);
    double mass = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        double m = mu[i];
        if (m == 0.0) continue;
        mass += m;
        out[up[i]] += beta * q_win[i] * m;
        out[down[i]] += beta * (1.0 - q_win[i]) * m;
    }
    double regen = (1.0 - beta) * mass;
    for (std::size_t i = 0; i < size(); ++i) out[i] += regen * psi[i];
    return out;
}

std::vector<double> TransitionKernel::row(std::size_t i) const {
    std::vector<double> r(size(), 0.0);
    r[up[i]] += beta * q_win[i];
    r[down[i]] += beta * (1.0 - q_win[i]);
    for (std::size_t j = 0; j < size(); ++j) r[j] += (1.0 - beta) * psi[j];
    return r;
}

TransitionKernel transition_kernel(std::span<const double> win_prob, const Policy& policy,
                                   double beta, const RegenerationDist& psi,
                                   const SurplusGrid& grid, double win_gain, double loss) {
    if (!(beta >= 0.0 && beta < 1.0))
        throw std::invalid_argument("transition_kernel: beta must be in [0,1)");
    std::size_t n = grid.size();
    if (policy.n_states() != n || psi.pmf.size() != n)
        throw std::invalid_argument("transition_kernel: size mismatch");
    if (policy.n_actions != win_prob.size())
        throw std::invalid_argument("transition_kernel: policy/win_prob action mismatch");
    TransitionKernel k;
    k.beta = beta;
    k.psi = psi.pmf;
    k.q_win.resize(n);
    k.up.resize(n);
    k.down.resize(n);
    std::int64_t up_cells = grid.offset_of(win_gain, "win_gain");
    std::int64_t down_cells = grid.offset_of(loss, "loss");
    for (std::size_t i = 0; i < n; ++i) {
        auto row = policy.row(i);
        double q = 0.0, mass = 0.0;
        for (std::size_t a = 0; a < row.size(); ++a) {
            if (row[a] < 0.0) throw std::invalid_argument("transition_kernel: negative policy mass");
            q += row[a] * win_prob[a];
            mass += row[a];
        }
        if (std::abs(mass - 1.0) > 1e-12)
            throw std::invalid_argument("transition_kernel: policy row must sum to 1");
        k.q_win[i] = q;
        k.up[i] = grid.clamp_shift(i, up_cells);
        k.down[i] = grid.clamp_shift(i, -down_cells);
    }
    return k;
}

double total_variation(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return 0.5 * s;
}

StationaryResult stationary_power(const TransitionKernel& kernel, double tol, int max_iters) {
    StationaryResult res;
    std::vector<double> mu = kernel.psi;
    for (int it = 0; it < max_iters; ++it) {
        std::vector<double> next = kernel.apply(mu);
        res.residual = total_variation(next, mu);
        mu.swap(next);
        ++res.iterations;
        if (res.residual <= tol) {
            res.converged = true;
            break;
        }
    }
    res.zeta = std::move(mu);
    return res;
}

int series_k_max(double beta, double tail_mass) {
    if (!(beta > 0.0 && beta < 1.0)) return 0;
    if (!(tail_mass > 0.0)) throw std::invalid_argument("series_k_max: tail_mass must be > 0");
    return std::max(0, static_cast<int>(std::ceil(std::log(tail_mass) / std::log(beta))) - 1);
}

std::vector<double> stationary_series(std::span<const double> win_prob, const Policy& policy,
                                      double beta, const RegenerationDist& psi,
                                      const SurplusGrid& grid, double win_gain, double loss,
                                      int k_max) {
    std::size_t n = grid.size();
    if (policy.n_states() != n || psi.pmf.size() != n)
        throw std::invalid_argument("stationary_series: size mismatch");
    std::int64_t up_cells = grid.offset_of(win_gain, "win_gain");
    std::int64_t down_cells = grid.offset_of(loss, "loss");
    std::vector<double> q(n);
    std::vector<std::size_t> up(n), down(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = policy.row(i);
        double qi = 0.0;
        for (std::size_t a = 0; a < row.size(); ++a) qi += row[a] * win_prob[a];
        q[i] = qi;
        up[i] = grid.clamp_shift(i, up_cells);
        down[i] = grid.clamp_shift(i, -down_cells);
    }
    if (k_max < 0) throw std::invalid_argument("stationary_series: k_max must be >= 0");
    std::vector<double> acc(n, 0.0);
    std::vector<double> mu = psi.pmf;  // conditional k-step law, beta-free moves
    double weight = 1.0 - beta;
    for (int k = 0;; ++k) {
        for (std::size_t i = 0; i < n; ++i) acc[i] += weight * mu[i];
        if (k == k_max) break;
        std::vector<double> next(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double m = mu[i];
            if (m == 0.0) continue;
            next[up[i]] += q[i] * m;
            next[down[i]] += (1.0 - q[i]) * m;
        }
        mu.swap(next);
        weight *= beta;
    }
    double truncated = 1.0 - std::pow(beta, static_cast<double>(k_max) + 1.0);
    for (double& v : acc) v /= truncated;
    return acc;
}

std::vector<double> aggregate_actions(std::span<const double> zeta, const Policy& policy) {
    if (zeta.size() != policy.n_states())
        throw std::invalid_argument("aggregate_actions: grid mismatch");
    std::vector<double> rho(policy.n_actions, 0.0);
    for (std::size_t i = 0; i < zeta.size(); ++i) {
        if (zeta[i] == 0.0) continue;
        auto row = policy.row(i);
        for (std::size_t a = 0; a < rho.size(); ++a) rho[a] += zeta[i] * row[a];
    }
    return rho;
}

}  // namespace ecoupons
