#pragma once

#include <span>
#include <vector>

#include "ecoupons/dp.hpp"
#include "ecoupons/grid.hpp"

namespace ecoupons {

// Regeneration law: a departing agent is replaced with surplus drawn from
// this pmf on the grid.
struct RegenerationDist {
    std::vector<double> pmf;

    static RegenerationDist point_mass(const SurplusGrid& grid, double x) {
        RegenerationDist d;
        d.pmf.assign(grid.size(), 0.0);
        d.pmf[grid.index_of(x)] = 1.0;
        return d;
    }
};

// Sparse surplus chain: from x, with survival probability beta the agent
// moves up w (win) or down l (lose); otherwise the state regenerates from
// psi.  Rows are materializable for tests.
struct TransitionKernel {
    double beta = 0.92;
    std::vector<double> q_win;          // per-state policy-mixed win probability
    std::vector<std::size_t> up, down;  // clamped destinations
    std::vector<double> psi;

    std::size_t size() const { return q_win.size(); }
    std::vector<double> apply(std::span<const double> mu) const;
    std::vector<double> row(std::size_t i) const;
};

TransitionKernel transition_kernel(std::span<const double> win_prob, const Policy& policy,
                                   double beta, const RegenerationDist& psi,
                                   const SurplusGrid& grid, double win_gain, double loss);

double total_variation(std::span<const double> a, std::span<const double> b);

struct StationaryResult {
    std::vector<double> zeta;
    int iterations = 0;
    double residual = 0.0;  // final TV change
    bool converged = false;
};

// Power iteration from psi; the (1-beta)*psi mixture component makes the
// TV change contract geometrically.
StationaryResult stationary_power(const TransitionKernel& kernel, double tol = 1e-12,
                                  int max_iters = 100'000);

// Smallest k with beta^(k+1) at or below the requested tail mass.
int series_k_max(double beta, double tail_mass = 1e-10);

// Regeneration series: sum_{k<=k_max} (1-beta) beta^k of the k-step
// no-regeneration two-point kernel applied to psi, with the truncated tail
// renormalized exactly.
std::vector<double> stationary_series(std::span<const double> win_prob, const Policy& policy,
                                      double beta, const RegenerationDist& psi,
                                      const SurplusGrid& grid, double win_gain, double loss,
                                      int k_max);

// rho_a = sum_x zeta(x) sigma_a(x)
std::vector<double> aggregate_actions(std::span<const double> zeta, const Policy& policy);

}  // namespace ecoupons
