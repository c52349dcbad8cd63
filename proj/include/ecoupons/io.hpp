#pragma once

#include <string>
#include <vector>

#include "ecoupons/dp.hpp"
#include "ecoupons/economics.hpp"
#include "ecoupons/grid.hpp"
#include "ecoupons/mfe.hpp"
#include "ecoupons/thermal.hpp"

namespace ecoupons {

// `timestamp,celsius` with ISO-8601 timestamps on a uniform cadence.
AmbientSeries load_ambient_csv(const std::string& path);

// `date,period_index,usd_per_mwh`, period_index in 1..6, one row per
// (day, period); days ordered by date.
PriceSeries load_price_csv(const std::string& path);

void write_zeta_csv(const std::string& path, const SurplusGrid& grid,
                    std::span<const double> zeta, const std::string& config_hash);

void write_value_policy_csv(const std::string& path, const SurplusGrid& grid,
                            std::span<const double> value, const Policy& policy,
                            const std::string& config_hash);

void write_sweep_csv(const std::string& path, std::span<const SweepPoint> points,
                     std::size_t n_actions, const std::string& config_hash);

void write_trace_csv(const std::string& path, const HomeTrace& trace,
                     const std::string& config_hash);

// MFE result document with pointers to the companion CSVs.
void write_mfe_json(const std::string& path, const MfeResult& result,
                    const std::string& zeta_file, const std::string& value_policy_file,
                    double expected_value, const std::string& config_hash);

std::string format_double(double v);  // shortest round-trip representation

}  // namespace ecoupons
