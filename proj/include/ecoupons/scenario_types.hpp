#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "ecoupons/grid.hpp"
#include "ecoupons/population.hpp"

namespace ecoupons {

// Grid-independent description of the regeneration law, so one scenario can
// materialize it on lattices of different step sizes.
struct RegenerationSpec {
    std::vector<std::pair<double, double>> atoms{{0.0, 1.0}};  // (surplus, mass)

    void validate() const {
        double sum = 0.0;
        for (const auto& [x, p] : atoms) {
            (void)x;
            if (!(p >= 0.0)) throw std::invalid_argument("regeneration: negative mass");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("regeneration: masses must sum to 1");
    }

    RegenerationDist materialize(const SurplusGrid& grid) const {
        validate();
        RegenerationDist d;
        d.pmf.assign(grid.size(), 0.0);
        for (const auto& [x, p] : atoms) d.pmf[grid.index_of(x)] += p;
        return d;
    }
};

}  // namespace ecoupons
