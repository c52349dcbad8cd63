#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace ecoupons {

// First-order thermal model of an air-conditioned home with a deadband
// thermostat.  R*C is the leak time constant in hours; eta*P_m/C the
// cooling rate when the compressor runs.
struct ThermalParams {
    double capacitance_kwh_per_c = 10.0;  // C
    double resistance_c_per_kw = 2.0;     // R
    double rated_power_kw = 6.8;          // P_m
    double cop = 2.5;                     // eta
    double setpoint_c = 22.5;             // baseline tau_r
    double deadband_c = 0.3;              // Delta

    void validate() const {
        if (capacitance_kwh_per_c <= 0 || resistance_c_per_kw <= 0 || rated_power_kw <= 0 ||
            cop <= 0 || deadband_c <= 0)
            throw std::invalid_argument("thermal: parameters must be positive");
        if (deadband_c >= 5.0) throw std::invalid_argument("thermal: deadband must be < 5 C");
    }
};

// Uniformly sampled exterior temperature; the default cadence is 15 min.
struct AmbientSeries {
    std::int64_t start_epoch_s = 0;
    double interval_s = 900.0;
    std::vector<double> celsius;

    double duration_s() const { return interval_s * static_cast<double>(celsius.size()); }
    void validate() const {
        if (celsius.empty()) throw std::invalid_argument("ambient: empty series");
        if (interval_s <= 0) throw std::invalid_argument("ambient: non-positive interval");
    }
};

AmbientSeries constant_ambient(double celsius, int days, double interval_s = 900.0);

enum class AmbientInterp { kHold, kLinear };

// The six hourly action periods cover 2-8 PM; period index 0 is 2-3 PM.
inline constexpr int kPeriodStartHour = 14;
inline constexpr int kPeriods = 6;

struct HomeTrace {
    double dt_s = 10.0;
    std::int64_t start_epoch_s = 0;
    std::vector<double> tau;        // interior temperature at each step
    std::vector<std::uint8_t> q;    // compressor state at each step
    int days = 0;
    std::vector<std::array<double, kPeriods>> period_kwh;  // per day
    std::vector<double> daily_kwh;

    double total_kwh() const {
        double t = 0.0;
        for (double d : daily_kwh) t += d;
        return t;
    }
    double mean_daily_kwh() const { return days ? total_kwh() / days : 0.0; }
};

// Forward-Euler integration of the deadband-controlled house.  Setpoints
// override the baseline during the six action periods only.
HomeTrace simulate_home(const ThermalParams& params, const std::array<double, kPeriods>& setpoints,
                        const AmbientSeries& ambient, double dt_s = 10.0,
                        std::optional<double> tau0 = std::nullopt, bool q0 = false,
                        AmbientInterp interp = AmbientInterp::kHold);

struct WindowStats {
    double mean = 0.0;
    double stddev = 0.0;
};
WindowStats interior_stats(const HomeTrace& trace, bool whole_day = false);

// theta_a = |mean diff| + lambda*|stddev diff| - varsigma*(E_0 - E_a), cents/day
double action_cost_cents(const HomeTrace& baseline, const HomeTrace& action,
                         double lambda = 10.0, double varsigma_cents_per_kwh = 10.0,
                         bool whole_day = false);

// Day-ahead prices for the six periods, dollars/MWh; one row per day or a
// single row broadcast over the horizon.
struct PriceSeries {
    std::vector<std::array<double, kPeriods>> daily;

    static PriceSeries constant(const std::array<double, kPeriods>& row, int days = 1) {
        PriceSeries p;
        p.daily.assign(static_cast<std::size_t>(days), row);
        return p;
    }
    const std::array<double, kPeriods>& row(std::size_t day) const {
        return daily.size() == 1 ? daily[0] : daily.at(day);
    }
};

inline std::array<double, kPeriods> default_period_prices() {
    return {47.0, 55.0, 78.0, 99.6, 66.5, 49.5};
}

// Mean difference in wholesale cost (dollars/day) between the usage of two
// traces; linear and antisymmetric in the traces.
double differential_price_usd(const HomeTrace& y, const HomeTrace& z, const PriceSeries& prices);

// Per-period coupon award: rate*usage, with an optional usage threshold
// that switches the rate.
struct CouponRule {
    double rate = 0.0;              // coupons per kWh
    bool has_threshold = false;
    double threshold_kwh = 0.0;
    double rate_above = 0.0;

    double rate_for(double kwh) const {
        return (has_threshold && kwh > threshold_kwh) ? rate_above : rate;
    }
};

struct CouponSchedule {
    std::array<CouponRule, kPeriods> rules;
};

CouponSchedule default_coupon_schedule();

// Coupons per day earned by a trace under the schedule.
double award_coupons(const HomeTrace& trace, const CouponSchedule& schedule);

}  // namespace ecoupons
