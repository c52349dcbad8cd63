#include "ecoupons/thermal.hpp"

#include <algorithm>
#include <cmath>

namespace ecoupons {

AmbientSeries constant_ambient(double celsius, int days, double interval_s) {
    AmbientSeries s;
    s.interval_s = interval_s;
    s.celsius.assign(static_cast<std::size_t>(days * 86400.0 / interval_s), celsius);
    return s;
}

namespace {

double ambient_at(const AmbientSeries& a, double t_s, AmbientInterp interp) {
    double pos = t_s / a.interval_s;
    std::size_t n = a.celsius.size();
    if (interp == AmbientInterp::kHold) {
        std::size_t i = static_cast<std::size_t>(std::max(0.0, pos));
        return a.celsius[std::min(i, n - 1)];
    }
    if (pos <= 0.0) return a.celsius.front();
    if (pos >= static_cast<double>(n - 1)) return a.celsius.back();
    std::size_t i = static_cast<std::size_t>(pos);
    double f = pos - static_cast<double>(i);
    return (1.0 - f) * a.celsius[i] + f * a.celsius[i + 1];
}

inline int period_of_hour(int hour) {
    int j = hour - kPeriodStartHour;
    return (j >= 0 && j < kPeriods) ? j : -1;
}

}  // namespace

HomeTrace simulate_home(const ThermalParams& params, const std::array<double, kPeriods>& setpoints,
                        const AmbientSeries& ambient, double dt_s, std::optional<double> tau0,
                        bool q0, AmbientInterp interp) {
    params.validate();
    ambient.validate();
    if (!(dt_s > 0.0 && dt_s <= 60.0))
        throw std::invalid_argument("simulate_home: dt must be in (0, 60] seconds");
    double horizon_s = ambient.duration_s();
    int days = static_cast<int>(horizon_s / 86400.0 + 0.5);
    if (days < 1 || std::abs(days * 86400.0 - horizon_s) > ambient.interval_s)
        throw std::invalid_argument("simulate_home: ambient series must cover whole days");

    HomeTrace trace;
    trace.dt_s = dt_s;
    trace.start_epoch_s = ambient.start_epoch_s;
    trace.days = days;
    trace.period_kwh.assign(days, {});
    trace.daily_kwh.assign(days, 0.0);
    std::size_t steps = static_cast<std::size_t>(horizon_s / dt_s);
    trace.tau.resize(steps);
    trace.q.resize(steps);

    double rc_hours = params.resistance_c_per_kw * params.capacitance_kwh_per_c;
    double cool_rate = params.cop * params.rated_power_kw / params.capacitance_kwh_per_c;
    double dt_h = dt_s / 3600.0;
    double kwh_per_on_step = params.rated_power_kw * dt_h;

    double tau = tau0.value_or(params.setpoint_c);
    bool on = q0;
    for (std::size_t k = 0; k < steps; ++k) {
        double t_s = static_cast<double>(k) * dt_s;
        std::int64_t wall = ambient.start_epoch_s + static_cast<std::int64_t>(t_s);
        int hour = static_cast<int>((wall % 86400 + 86400) % 86400 / 3600);
        int period = period_of_hour(hour);
        double setpoint = period >= 0 ? setpoints[static_cast<std::size_t>(period)]
                                      : params.setpoint_c;
        if (tau > setpoint + params.deadband_c) on = true;
        else if (tau < setpoint - params.deadband_c) on = false;

        trace.tau[k] = tau;
        trace.q[k] = on ? 1 : 0;
        if (on) {
            int day = static_cast<int>(t_s / 86400.0);
            trace.daily_kwh[day] += kwh_per_on_step;
            if (period >= 0) trace.period_kwh[day][static_cast<std::size_t>(period)] += kwh_per_on_step;
        }

        double ta = ambient_at(ambient, t_s, interp);
        double dtau = -(tau - ta) / rc_hours - (on ? cool_rate : 0.0);
        tau += dt_h * dtau;
    }
    return trace;
}

WindowStats interior_stats(const HomeTrace& trace, bool whole_day) {
    double sum = 0.0, sum2 = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < trace.tau.size(); ++k) {
        if (!whole_day) {
            double t_s = static_cast<double>(k) * trace.dt_s;
            std::int64_t wall = trace.start_epoch_s + static_cast<std::int64_t>(t_s);
            int hour = static_cast<int>((wall % 86400 + 86400) % 86400 / 3600);
            if (period_of_hour(hour) < 0) continue;
        }
        sum += trace.tau[k];
        sum2 += trace.tau[k] * trace.tau[k];
        ++n;
    }
    WindowStats s;
    if (n == 0) return s;
    s.mean = sum / static_cast<double>(n);
    double var = std::max(0.0, sum2 / static_cast<double>(n) - s.mean * s.mean);
    s.stddev = std::sqrt(var);
    return s;
}

double action_cost_cents(const HomeTrace& baseline, const HomeTrace& action, double lambda,
                         double varsigma_cents_per_kwh, bool whole_day) {
    if (baseline.days != action.days)
        throw std::invalid_argument("action_cost: traces cover different horizons");
    WindowStats b = interior_stats(baseline, whole_day);
    WindowStats a = interior_stats(action, whole_day);
    double de = baseline.mean_daily_kwh() - action.mean_daily_kwh();
    return std::abs(b.mean - a.mean) + lambda * std::abs(b.stddev - a.stddev) -
           varsigma_cents_per_kwh * de;
}

double differential_price_usd(const HomeTrace& y, const HomeTrace& z, const PriceSeries& prices) {
    if (y.days != z.days)
        throw std::invalid_argument("differential_price: traces cover different horizons");
    double total = 0.0;
    for (int d = 0; d < y.days; ++d) {
        const auto& pi = prices.row(static_cast<std::size_t>(d));
        for (int j = 0; j < kPeriods; ++j) {
            double dk_mwh = (y.period_kwh[d][j] - z.period_kwh[d][j]) / 1000.0;
            total += dk_mwh * pi[j];
        }
    }
    return total / static_cast<double>(y.days);
}

CouponSchedule default_coupon_schedule() {
    CouponSchedule s;
    s.rules[0] = {1.8, true, 2.464, 107.0};
    s.rules[1] = {5.4, false, 0.0, 0.0};
    s.rules[2] = {1.8, false, 0.0, 0.0};
    s.rules[3] = {0.0, false, 0.0, 0.0};
    s.rules[4] = {3.6, false, 0.0, 0.0};
    s.rules[5] = {1.8, true, 2.24, 54.0};
    return s;
}

double award_coupons(const HomeTrace& trace, const CouponSchedule& schedule) {
    double total = 0.0;
    for (int d = 0; d < trace.days; ++d)
        for (int j = 0; j < kPeriods; ++j) {
            double kwh = trace.period_kwh[d][j];
            total += schedule.rules[j].rate_for(kwh) * kwh;
        }
    return trace.days ? total / static_cast<double>(trace.days) : 0.0;
}

}  // namespace ecoupons
