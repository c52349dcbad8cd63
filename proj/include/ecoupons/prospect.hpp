#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace ecoupons {

// S-shaped value function over surplus: concave for gains, convex for
// losses, steeper for losses (loss aversion), plus the inverse-S
// probability weighting that overweights rare events.
struct ProspectParams {
    double gamma = 0.88;      // risk aversion exponent, in (0,1)
    double loss_aversion = 2.25;  // multiplier on losses, > 1
    double xi = 0.37;         // weighting distortion, in (0,1]; 1 = no distortion

    void validate() const {
        if (!(gamma > 0.0 && gamma < 1.0))
            throw std::invalid_argument("prospect.gamma must be in (0,1)");
        if (!(loss_aversion > 1.0))
            throw std::invalid_argument("prospect.loss_aversion must be > 1");
        if (!(xi > 0.0 && xi <= 1.0))
            throw std::invalid_argument("prospect.xi must be in (0,1]");
    }
};

inline double prospect_utility(double x, const ProspectParams& p) {
    if (!std::isfinite(x))
        throw std::invalid_argument("prospect_utility: non-finite surplus");
    if (x >= 0.0) return std::pow(x, p.gamma);
    return -p.loss_aversion * std::pow(-x, p.gamma);
}

// exp(-(-ln p)^xi); the endpoints are pinned to the continuous limits so
// that a zero win probability weights to exactly 0 and a sure event to 1.
inline double prospect_weight(double p, const ProspectParams& params) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("prospect_weight: probability outside [0,1]");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    return std::exp(-std::pow(-std::log(p), params.xi));
}

// The solver layers accept any (utility, weight) pair satisfying the
// monotonicity contracts; tests inject u==0 or identity weights.
struct Preferences {
    std::function<double(double)> utility;
    std::function<double(double)> weight;
};

inline Preferences make_preferences(const ProspectParams& p) {
    p.validate();
    return Preferences{
        [p](double x) { return prospect_utility(x, p); },
        [p](double q) { return prospect_weight(q, p); },
    };
}

}  // namespace ecoupons
