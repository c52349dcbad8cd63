#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ecoupons {

// Truncated surplus lattice x = i*step, i in [i_min, i_max].  Win/loss
// increments must be exact lattice multiples; transitions that would step
// off the lattice clamp to the boundary state.
class SurplusGrid {
public:
    SurplusGrid(double step, double x_min, double x_max) : step_(step) {
        if (!(step > 0.0)) throw std::invalid_argument("grid.step must be > 0");
        if (!(x_min < 0.0 && x_max > 0.0))
            throw std::invalid_argument("grid must satisfy x_min < 0 < x_max");
        // align outward so both bounds land on the lattice
        i_min_ = static_cast<std::int64_t>(std::floor(x_min / step + 1e-9));
        i_max_ = static_cast<std::int64_t>(std::ceil(x_max / step - 1e-9));
    }

    std::size_t size() const { return static_cast<std::size_t>(i_max_ - i_min_ + 1); }
    double step() const { return step_; }
    double x_min() const { return static_cast<double>(i_min_) * step_; }
    double x_max() const { return static_cast<double>(i_max_) * step_; }
    double x(std::size_t idx) const { return static_cast<double>(i_min_ + static_cast<std::int64_t>(idx)) * step_; }
    std::size_t index_of_zero() const { return static_cast<std::size_t>(-i_min_); }

    // number of lattice cells in `amount`; rejects off-lattice quantities
    std::int64_t offset_of(double amount, const std::string& what = "amount") const {
        double k = amount / step_;
        double r = std::round(k);
        if (std::abs(k - r) > 1e-6)
            throw std::invalid_argument(what + " is not a multiple of the grid step");
        return static_cast<std::int64_t>(r);
    }

    std::size_t index_of(double x_value) const {
        std::int64_t i = offset_of(x_value, "grid point");
        if (i < i_min_ || i > i_max_)
            throw std::out_of_range("grid point outside truncation bounds");
        return static_cast<std::size_t>(i - i_min_);
    }

    std::size_t clamp_shift(std::size_t idx, std::int64_t cells) const {
        std::int64_t i = static_cast<std::int64_t>(idx) + cells;
        if (i < 0) return 0;
        std::int64_t n = static_cast<std::int64_t>(size()) - 1;
        return static_cast<std::size_t>(i > n ? n : i);
    }

    std::vector<double> states() const {
        std::vector<double> xs(size());
        for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = x(i);
        return xs;
    }

private:
    double step_;
    std::int64_t i_min_, i_max_;
};

// Greatest common divisor of two positive decimal quantities, used to pick
// the lattice spacing so both the win and loss increments are exact cell
// counts.  Values must be representable with at most 9 decimal digits.
inline double lattice_step(double w, double l) {
    if (!(w > 0.0) || !(l > 0.0))
        throw std::invalid_argument("lattice_step: increments must be positive");
    for (int d = 0; d <= 9; ++d) {
        double scale = std::pow(10.0, d);
        double ws = w * scale, ls = l * scale;
        if (std::abs(ws - std::round(ws)) < 1e-6 * scale &&
            std::abs(ls - std::round(ls)) < 1e-6 * scale &&
            std::round(ws) >= 1.0 && std::round(ls) >= 1.0) {
            std::int64_t a = static_cast<std::int64_t>(std::round(ws));
            std::int64_t b = static_cast<std::int64_t>(std::round(ls));
            while (b != 0) { std::int64_t t = a % b; a = b; b = t; }
            return static_cast<double>(a) / scale;
        }
    }
    throw std::invalid_argument("lattice_step: increments are not decimal rationals");
}

}  // namespace ecoupons
