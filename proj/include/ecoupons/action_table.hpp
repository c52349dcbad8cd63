#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace ecoupons {

// One row of the action economy: an AC setpoint schedule for the six
// afternoon periods, its daily discomfort cost, the utility's daily
// wholesale saving, and the lottery coupons it earns.
struct Action {
    std::string name;
    std::array<double, 6> setpoints_c{};  // per-period thermostat setpoints
    double cost_cents = 0.0;              // discomfort cost, cents/day
    double savings_cents = 0.0;           // LSE saving, cents/day
    double coupons = 0.0;                 // lottery tickets/day
};

class ActionTable {
public:
    ActionTable() = default;
    explicit ActionTable(std::vector<Action> actions) : actions_(std::move(actions)) { validate(); }

    void validate() const {
        if (actions_.empty()) throw std::invalid_argument("actions: table is empty");
        for (const auto& a : actions_) {
            if (a.cost_cents < 0.0) throw std::invalid_argument("actions: negative cost");
            if (a.savings_cents < 0.0) throw std::invalid_argument("actions: negative savings");
            if (a.coupons < 0.0) throw std::invalid_argument("actions: negative coupons");
        }
        // costlier actions must earn at least as many coupons (co-monotone
        // ordering; ties in either column are allowed)
        for (std::size_t i = 0; i < actions_.size(); ++i)
            for (std::size_t j = i + 1; j < actions_.size(); ++j) {
                double dc = actions_[i].cost_cents - actions_[j].cost_cents;
                double dr = actions_[i].coupons - actions_[j].coupons;
                if (dc * dr < 0.0)
                    throw std::invalid_argument(
                        "actions: coupon ordering must follow cost ordering");
            }
    }

    std::size_t size() const { return actions_.size(); }
    const Action& operator[](std::size_t i) const { return actions_[i]; }
    const std::vector<Action>& rows() const { return actions_; }

    std::vector<double> coupon_vector() const {
        std::vector<double> r(actions_.size());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = actions_[i].coupons;
        return r;
    }
    std::vector<double> cost_cents_vector() const {
        std::vector<double> c(actions_.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = actions_[i].cost_cents;
        return c;
    }
    std::vector<double> savings_cents_vector() const {
        std::vector<double> s(actions_.size());
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = actions_[i].savings_cents;
        return s;
    }

private:
    std::vector<Action> actions_;
};

// Default action economy: six setpoint schedules for a mid-size Texas home,
// with measured costs, savings and coupon awards.  Index 0 is the no-change
// baseline.
inline ActionTable default_action_table() {
    return ActionTable({
        {"baseline", {22.5, 22.5, 22.5, 22.5, 22.5, 22.5}, 0.0, 0.0, 37.4},
        {"a1", {21.5, 21.5, 22.25, 23.5, 23.75, 21.25}, 3.68, 27.7, 715.0},
        {"a2", {21.5, 21.5, 22.25, 23.5, 23.25, 22.25}, 3.15, 22.7, 693.0},
        {"a3", {21.5, 21.5, 22.25, 24.0, 23.0, 22.5}, 2.68, 22.0, 577.0},
        {"a4", {22.0, 22.0, 22.25, 23.0, 23.0, 22.5}, 1.34, 19.0, 434.0},
        {"a5", {22.0, 22.0, 22.25, 23.25, 22.5, 22.75}, 0.95, 16.4, 222.0},
    });
}

}  // namespace ecoupons
